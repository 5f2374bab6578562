"""Distances on covariate spaces.

Two metrics ship: the Euclidean metric on vectors and the L2 metric on curves
sampled over a shared grid. Curve integrals use the trapezoid rule on the
stored grid, which is exact for piecewise-linear curves. Any other metric can
be plugged in through a ``metric`` callback taking two covariate rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DimensionError, InputError

Metric = Callable[[np.ndarray, np.ndarray], float]


def _finite_1d(a, name):
    a = np.asarray(a, dtype=float)
    if a.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} contains non-finite entries")
    return a


def check_grid(grid) -> np.ndarray:
    """Validate a curve sampling grid: finite, strictly increasing, >= 2 points."""
    grid = _finite_1d(grid, "grid")
    if grid.size < 2:
        raise DimensionError("a curve grid needs at least 2 points")
    if np.any(np.diff(grid) <= 0):
        raise InputError("grid must be strictly increasing")
    return grid


def trapezoid_weights(grid) -> np.ndarray:
    """Quadrature weights q with ``sum(q * f) == trapezoid integral of f``."""
    grid = check_grid(grid)
    h = np.diff(grid)
    q = np.zeros_like(grid)
    q[:-1] += h / 2
    q[1:] += h / 2
    return q


def euclidean_distance(a, b) -> float:
    """Euclidean distance between two coordinate vectors.

    >>> euclidean_distance([0, 0], [3, 4])
    5.0
    """
    a = _finite_1d(a, "a")
    b = _finite_1d(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.size} vs {b.size}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def l2_curve_distance(f, g, grid) -> float:
    """L2 distance between two curves sampled on ``grid``.

    Computes ``sqrt(int (f - g)^2 dt)`` with the trapezoid rule.
    """
    q = trapezoid_weights(grid)
    f = _finite_1d(f, "f")
    g = _finite_1d(g, "g")
    if f.shape != q.shape or g.shape != q.shape:
        raise DimensionError(
            f"curve lengths {f.size}, {g.size} do not match grid length {q.size}"
        )
    return float(np.sqrt(np.sum(q * (f - g) ** 2)))


def l2_norm(f, grid) -> float:
    """Trapezoid L2 norm of a sampled curve."""
    return l2_curve_distance(f, np.zeros_like(np.asarray(f, dtype=float)), grid)


@dataclass(frozen=True)
class Covariates:
    """A sample of covariate values.

    ``values`` is an ``(n, q)`` array. With ``grid`` set, each row is a curve
    sampled on that grid and distances are L2; otherwise rows are vectors and
    distances are Euclidean. A custom ``metric`` overrides both.
    """

    values: np.ndarray
    grid: Optional[np.ndarray] = None
    metric: Optional[Metric] = field(default=None, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[0] == 0:
            raise DimensionError(f"covariates must be a non-empty 2-D array, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InputError("covariates contain non-finite entries")
        object.__setattr__(self, "values", values)
        if self.grid is not None:
            grid = check_grid(self.grid)
            if grid.size != values.shape[1]:
                raise DimensionError(
                    f"curves have {values.shape[1]} samples but the grid has {grid.size}"
                )
            object.__setattr__(self, "grid", grid)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def is_functional(self) -> bool:
        return self.grid is not None

    def _scaled(self, values):
        # sqrt-weighted coordinates turn the trapezoid L2 metric into a Euclidean one
        if self.grid is None:
            return values
        return values * np.sqrt(trapezoid_weights(self.grid))

    def distances_to(self, x) -> np.ndarray:
        """Distances from the covariate value ``x`` to every sample row."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.values.shape[1],):
            raise DimensionError(
                f"query has length {x.size}, covariates have {self.values.shape[1]} columns"
            )
        if self.metric is not None:
            return np.array([self.metric(x, row) for row in self.values])
        return cdist(self._scaled(x[None, :]), self._scaled(self.values))[0]

    def distance_matrix(self) -> np.ndarray:
        """Symmetric ``(n, n)`` matrix of pairwise distances."""
        if self.metric is not None:
            n = self.n
            d = np.zeros((n, n))
            for i in range(n):
                for j in range(i + 1, n):
                    d[i, j] = d[j, i] = self.metric(self.values[i], self.values[j])
            return d
        z = self._scaled(self.values)
        return cdist(z, z)


def principal_scores(cov: Covariates, ncomp: int = 2):
    """Scores on the leading principal components of the covariate dispersion.

    Curves are weighted by the trapezoid rule, so the components are those of
    the discretized L2 covariance operator. Returns ``(scores, degenerate)``
    where ``scores`` is ``(n, ncomp)``; components beyond the rank of the
    centered data are zero and set ``degenerate``.
    """
    raw = cov._scaled(cov.values)
    z = raw - raw.mean(axis=0)
    scores = np.zeros((cov.n, ncomp))
    if cov.n < 2:
        return scores, True
    _, sv, vt = np.linalg.svd(z, full_matrices=False)
    # relative to the raw magnitude so constant data (centered to rounding noise) has rank 0
    rank = int(np.sum(sv > 1e-10 * max(np.linalg.norm(raw), 1e-300)))
    use = min(rank, ncomp)
    if use:
        comps = vt[:use]
        # sign convention: largest-magnitude loading positive
        flip = np.sign(comps[np.arange(use), np.abs(comps).argmax(axis=1)])
        scores[:, :use] = z @ (comps * flip[:, None]).T
    return scores, rank < ncomp
