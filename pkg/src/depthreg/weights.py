"""Regression weights and the weighted local response sample.

Weights ``W_i(x)`` are built from covariate distances ``d(x, X_i)`` either by
the nearest-neighbor rule or by a Nadaraya-Watson kernel. They depend on the
covariates only, so a :class:`NeighborCache` built once can be reused for
any rearrangement of the responses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import DimensionError, EmptyNeighborhoodError, InputError


def default_k(n: int) -> int:
    """Neighborhood size ``floor(log(n)^2) + 1``.

    This is the rate under which the nearest-neighbor weights give consistent
    conditional depth estimates.

    >>> default_k(100)
    22
    """
    if int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    return int(math.floor(math.log(n) ** 2)) + 1


def _distances(distances) -> np.ndarray:
    d = np.asarray(distances, dtype=float)
    if d.ndim != 1 or d.size == 0:
        raise DimensionError("distances must be a non-empty 1-D array")
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise InputError("distances must be finite and nonnegative")
    return d


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative weights over the n observations, summing to one."""

    weights: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.weights > 0)

    def __len__(self):
        return self.weights.size


def knn_bandwidth(distances, k: int) -> float:
    """Smallest radius ``h`` such that at least ``k`` distances are ``<= h``."""
    d = _distances(distances)
    if int(k) != k or not 1 <= k <= d.size:
        raise InputError(f"k must be an integer in [1, {d.size}], got {k!r}")
    return float(np.partition(d, k - 1)[k - 1])


def knn_weights(distances, k: int) -> WeightVector:
    """Equal weights on every observation within the k-th neighbor radius.

    All observations tied at the cutoff radius are included, so the support
    can be larger than ``k``.
    """
    d = _distances(distances)
    h = knn_bandwidth(d, k)
    inside = d <= h
    return WeightVector(inside / np.count_nonzero(inside))


def box_kernel(u):
    u = np.asarray(u, dtype=float)
    return ((u >= 0) & (u <= 1)).astype(float)


def epanechnikov_kernel(u):
    u = np.asarray(u, dtype=float)
    return np.where((u >= 0) & (u <= 1), 0.75 * (1 - u**2), 0.0)


KERNELS = {"box": box_kernel, "epanechnikov": epanechnikov_kernel}

Kernel = Union[str, Callable[[np.ndarray], np.ndarray]]


def _kernel(kernel: Kernel):
    if callable(kernel):
        return kernel
    try:
        return KERNELS[kernel]
    except KeyError:
        raise InputError(f"unknown kernel {kernel!r}; choose from {sorted(KERNELS)}") from None


def kernel_weights(distances, h: float, kernel: Kernel = "box") -> WeightVector:
    """Nadaraya-Watson weights ``K(d_i / h) / sum_j K(d_j / h)``."""
    d = _distances(distances)
    if not h > 0:
        raise InputError(f"bandwidth must be positive, got {h!r}")
    kv = np.asarray(_kernel(kernel)(d / h), dtype=float)
    if np.any(kv < 0):
        raise InputError("kernel returned negative values")
    total = kv.sum()
    if total <= 0:
        raise EmptyNeighborhoodError(
            f"no observation within bandwidth {h:g} (nearest distance {d.min():g}); widen h"
        )
    return WeightVector(kv / total)


@dataclass(frozen=True)
class WeightedLocalSample:
    """Responses with positive weight at one covariate value.

    This is the discrete conditional measure: an atom at ``points[j]`` with
    mass ``weights[j]``. ``indices`` maps atoms back to dataset rows.
    """

    points: np.ndarray
    weights: np.ndarray
    indices: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        w = np.asarray(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise DimensionError(f"points must be an (m, p) array, got {pts.shape}")
        if w.shape != (pts.shape[0],):
            raise DimensionError(f"{w.size} weights for {pts.shape[0]} points")
        if pts.shape[0] == 0:
            raise EmptyNeighborhoodError("local sample is empty")
        if not np.all(np.isfinite(pts)):
            raise InputError("points contain non-finite entries")
        if np.any(w <= 0) or abs(w.sum() - 1) > 1e-9:
            raise InputError("weights must be positive and sum to one")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        if self.indices is None:
            object.__setattr__(self, "indices", np.arange(pts.shape[0]))

    @property
    def p(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def mass(self, mask) -> float:
        """Conditional probability of the atoms selected by ``mask``."""
        return float(self.weights[np.asarray(mask)].sum())

    def mean(self) -> np.ndarray:
        return self.weights @ self.points

    @classmethod
    def uniform(cls, points) -> "WeightedLocalSample":
        points = np.asarray(points, dtype=float)
        m = points.shape[0]
        return cls(points, np.full(m, 1.0 / m))


def local_sample(ys, w: WeightVector | np.ndarray) -> WeightedLocalSample:
    """Restrict the response rows to the positive-weight support of ``w``."""
    weights = w.weights if isinstance(w, WeightVector) else np.asarray(w, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if ys.ndim == 1:
        ys = ys[:, None]
    if ys.shape[0] != weights.size:
        raise DimensionError(f"{ys.shape[0]} response rows but {weights.size} weights")
    idx = np.flatnonzero(weights > 0)
    if idx.size == 0:
        raise EmptyNeighborhoodError("all weights are zero")
    return WeightedLocalSample(ys[idx], weights[idx] / weights[idx].sum(), idx)


@dataclass(frozen=True)
class WeightSpec:
    """How to build weights: nearest neighbors (``k``, None means automatic)
    or a kernel with a fixed bandwidth."""

    k: Optional[int] = None
    bandwidth: Optional[float] = None
    kernel: str = "box"

    def __post_init__(self):
        if self.k is not None and self.bandwidth is not None:
            raise InputError("give either k or bandwidth, not both")
        if self.k is not None and (int(self.k) != self.k or self.k < 1):
            raise InputError(f"k must be a positive integer, got {self.k!r}")
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise InputError(f"bandwidth must be positive, got {self.bandwidth!r}")
        _kernel(self.kernel)

    def weights(self, distances) -> WeightVector:
        if self.bandwidth is not None:
            return kernel_weights(distances, self.bandwidth, self.kernel)
        d = _distances(distances)
        k = self.k if self.k is not None else default_k(d.size)
        return knn_weights(d, min(k, d.size))

    def describe(self, n: int) -> dict:
        if self.bandwidth is not None:
            return {"bandwidth": self.bandwidth, "kernel": self.kernel}
        return {"k": self.k if self.k is not None else default_k(n), "k_rule": "auto" if self.k is None else "fixed"}


class NeighborCache:
    """Weights at every sample covariate point, in compressed-row form.

    Row ``i`` holds the support indices and weights of ``W(X_i)``. Built once
    from the distance matrix and shared read-only afterwards.
    """

    def __init__(self, distance_matrix, spec: WeightSpec | None = None):
        dm = np.asarray(distance_matrix, dtype=float)
        if dm.ndim != 2 or dm.shape[0] != dm.shape[1]:
            raise DimensionError(f"distance matrix must be square, got {dm.shape}")
        spec = spec or WeightSpec()
        self.spec = spec
        n = dm.shape[0]
        indptr = [0]
        indices = []
        weights = []
        for i in range(n):
            try:
                w = spec.weights(dm[i]).weights
            except EmptyNeighborhoodError as exc:
                raise EmptyNeighborhoodError(f"covariate point {i}: {exc}") from None
            idx = np.flatnonzero(w > 0)
            indices.append(idx)
            weights.append(w[idx])
            indptr.append(indptr[-1] + idx.size)
        self.n = n
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.concatenate(indices).astype(np.int64)
        self.weights = np.concatenate(weights)

    def row(self, i: int):
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def weight_vector(self, i: int) -> WeightVector:
        idx, w = self.row(i)
        full = np.zeros(self.n)
        full[idx] = w
        return WeightVector(full)

    def local_sample(self, ys, i: int) -> WeightedLocalSample:
        idx, w = self.row(i)
        ys = np.asarray(ys, dtype=float)
        if ys.ndim == 1:
            ys = ys[:, None]
        return WeightedLocalSample(ys[idx], w, idx)
