"""Sample conditional depth functions.

Each depth is evaluated on a :class:`~depthreg.weights.WeightedLocalSample`,
i.e. the weighted empirical measure of the responses near one covariate
value. Four depths are available:

* halfspace (Tukey): exact for p = 1 and p = 2, direction-sampled for p >= 3;
* spatial: exact closed form;
* projection: exact for p = 1, direction-sampled otherwise;
* simplicial: exact enumeration of all (p+1)-subsets of the support.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DegenerateScaleError, DimensionError, InputError
from .weights import WeightedLocalSample

# cumulative-weight slack when locating a weighted median
MEDIAN_TOL = 1e-12


class DepthKind(str, enum.Enum):
    HALFSPACE = "halfspace"
    SPATIAL = "spatial"
    PROJECTION = "projection"
    SIMPLICIAL = "simplicial"

    @classmethod
    def parse(cls, value) -> "DepthKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InputError(
                f"unknown depth {value!r}; choose from {[k.value for k in cls]}"
            ) from None


@dataclass(frozen=True)
class DepthConfig:
    """Approximation settings shared by all depth evaluations.

    ``direction_count`` random unit directions (seeded by ``rng_seed``) are
    scanned for halfspace and projection depth in p >= 3; for projection
    depth in p = 2 it is the size of the uniform angular grid.
    ``coincidence_tolerance`` decides when two points coincide and how much
    slack barycentric membership tests get.
    """

    direction_count: int = 512
    rng_seed: int = 0
    coincidence_tolerance: float = 1e-12

    def __post_init__(self):
        if int(self.direction_count) != self.direction_count or self.direction_count < 1:
            raise InputError(f"direction_count must be >= 1, got {self.direction_count!r}")
        if not self.coincidence_tolerance >= 0:
            raise InputError("coincidence_tolerance must be nonnegative")

    def random_directions(self, p: int) -> np.ndarray:
        return _random_directions(self.direction_count, self.rng_seed, p)

    def angular_grid(self) -> np.ndarray:
        t = 2 * np.pi * np.arange(self.direction_count) / self.direction_count
        return np.column_stack([np.cos(t), np.sin(t)])


@lru_cache(maxsize=32)
def _random_directions(count: int, seed: int, p: int) -> np.ndarray:
    g = np.random.default_rng(seed).standard_normal((count, p))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    g = np.vstack([g, np.eye(p)])
    g.setflags(write=False)
    return g


DEFAULT_CONFIG = DepthConfig()


def is_exact(kind, p: int) -> bool:
    """Whether ``kind`` is computed exactly (not direction-sampled) in dimension p."""
    kind = DepthKind.parse(kind)
    if kind is DepthKind.HALFSPACE:
        return p <= 2
    if kind is DepthKind.PROJECTION:
        return p == 1
    return True


def _check_query(y, s: WeightedLocalSample) -> np.ndarray:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.shape != (s.p,):
        raise DimensionError(f"query has dimension {y.size}, sample has p={s.p}")
    if not np.all(np.isfinite(y)):
        raise InputError("query point is not finite")
    return y


def _check_queries(ys, s: WeightedLocalSample) -> np.ndarray:
    q = np.asarray(ys, dtype=float)
    if q.ndim == 1:
        q = q[:, None] if s.p == 1 else q[None, :]
    if q.ndim != 2 or q.shape[1] != s.p:
        raise DimensionError(f"queries must have {s.p} columns, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise InputError("query points are not finite")
    return q


def sample_directions(s: WeightedLocalSample, cfg: DepthConfig) -> np.ndarray:
    """Seeded random directions, the coordinate axes, and all normalized
    pairwise differences of the support points (p >= 3 scan set)."""
    base = cfg.random_directions(s.p)
    i, j = np.triu_indices(s.size, 1)
    diff = s.points[j] - s.points[i]
    norm = np.linalg.norm(diff, axis=1)
    keep = norm > cfg.coincidence_tolerance
    if not np.any(keep):
        return base
    return np.vstack([base, diff[keep] / norm[keep, None]])


# -- halfspace ---------------------------------------------------------------

def halfspace_depths(queries, s: WeightedLocalSample, cfg: DepthConfig = DEFAULT_CONFIG):
    """Halfspace depth of each query row."""
    q = _check_queries(queries, s)
    tol = cfg.coincidence_tolerance
    pts, w = s.points, s.weights
    if s.p == 1:
        v = pts[:, 0]
        upper = ((v[None, :] >= q[:, :1] - tol) * w).sum(axis=1)
        lower = ((v[None, :] <= q[:, :1] + tol) * w).sum(axis=1)
        return np.minimum(np.minimum(upper, lower), 1.0)
    if s.p == 2:
        return _kernels.halfspace2d_many(
            np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]), w,
            np.ascontiguousarray(q[:, 0]), np.ascontiguousarray(q[:, 1]), tol,
        )
    dirs = sample_directions(s, cfg)
    proj = pts @ dirs.T
    out = np.empty(q.shape[0])
    for a, row in enumerate(q @ dirs.T):
        inside = proj >= row - tol
        out[a] = min((w @ inside).min(), 1.0)
    return out


def halfspace_depth(y, s: WeightedLocalSample, cfg: DepthConfig = DEFAULT_CONFIG) -> float:
    """Weighted Tukey depth: the smallest mass of a closed halfspace containing y.

    Atoms coinciding with ``y`` lie in every such halfspace. For p >= 3 the
    infimum is taken over a finite direction set, which can only overestimate.
    """
    y = _check_query(y, s)
    return float(halfspace_depths(y[None, :], s, cfg)[0])


# -- spatial -----------------------------------------------------------------

def spatial_depths(queries, s: WeightedLocalSample, cfg: DepthConfig = DEFAULT_CONFIG):
    q = _check_queries(queries, s)
    out = np.empty(q.shape[0])
    chunk = max(1, 2_000_000 // max(1, s.size * s.p))
    for lo in range(0, q.shape[0], chunk):
        diff = q[lo:lo + chunk, None, :] - s.points[None, :, :]
        norm = np.linalg.norm(diff, axis=2)
        far = norm > cfg.coincidence_tolerance
        unit = np.where(far[..., None], diff / np.where(far, norm, 1.0)[..., None], 0.0)
        avg = np.einsum("qmp,m->qp", unit, s.weights)
        out[lo:lo + chunk] = 1.0 - np.linalg.norm(avg, axis=1)
    return np.clip(out, 0.0, 1.0)


def spatial_depth(y, s: WeightedLocalSample, cfg: DepthConfig = DEFAULT_CONFIG) -> float:
    """``1 - || sum_i W_i (y - Y_i) / ||y - Y_i|| ||``; coincident atoms add nothing."""
    y = _check_query(y, s)
    return float(spatial_depths(y[None, :], s, cfg)[0])


# -- projection --------------------------------------------------------------

def weighted_lower_median(values, weights, axis=0):
    """Smallest value whose cumulative weight reaches one half, along ``axis``."""
    values = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    order = np.argsort(values, axis=0, kind="stable")
    sv = np.take_along_axis(values, order, axis=0)
    w = np.asarray(weights, dtype=float)
    cw = np.cumsum(w[order], axis=0)
    idx = np.argmax(cw >= 0.5 - MEDIAN_TOL, axis=0)
    return np.take_along_axis(sv, idx[None, ...], axis=0)[0]


def projection_directions(s: WeightedLocalSample, cfg: DepthConfig) -> np.ndarray:
    if s.p == 1:
        return np.array([[1.0], [-1.0]])
    if s.p == 2:
        return cfg.angular_grid()
    return sample_directions(s, cfg)


@dataclass(frozen=True)
class ProjectionScale:
    directions: np.ndarray
    medians: np.ndarray
    mads: np.ndarray


def projection_scale(s: WeightedLocalSample, cfg: DepthConfig = DEFAULT_CONFIG) -> ProjectionScale:
    """Weighted median and MAD of the projections along every scanned direction."""
    dirs = projection_directions(s, cfg)
    proj = s.points @ dirs.T
    med = weighted_lower_median(proj, s.weights)
    mad = weighted_lower_median(np.abs(proj - med), s.weights)
    bad = np.flatnonzero(mad <= 0)
    if bad.size:
        u = dirs[bad[0]]
        raise DegenerateScaleError(
            f"zero weighted MAD along direction {np.array2string(u, precision=6)}"
        )
    return ProjectionScale(dirs, med, mad)


def projection_depths(queries, s: WeightedLocalSample, cfg: DepthConfig = DEFAULT_CONFIG,
                      return_direction: bool = False):
    q = _check_queries(queries, s)
    sc = projection_scale(s, cfg)
    out = np.empty(q.shape[0])
    arg = np.empty((q.shape[0], s.p))
    chunk = max(1, 4_000_000 // sc.directions.shape[0])
    for lo in range(0, q.shape[0], chunk):
        ratio = np.abs(q[lo:lo + chunk] @ sc.directions.T - sc.medians) / sc.mads
        best = ratio.argmax(axis=1)
        out[lo:lo + chunk] = 1.0 / (1.0 + ratio[np.arange(best.size), best])
        arg[lo:lo + chunk] = sc.directions[best]
    if return_direction:
        return out, arg
    return out


def projection_depth(y, s: WeightedLocalSample, cfg: DepthConfig = DEFAULT_CONFIG) -> float:
    """``1 / (1 + sup_u |u'y - med(u'Y)| / MAD(u'Y))`` with lower weighted medians."""
    y = _check_query(y, s)
    return float(projection_depths(y[None, :], s, cfg)[0])


# -- simplicial --------------------------------------------------------------

def _affine_basis(points, tol):
    """Orthonormal basis (rows) of the affine span of ``points`` and its rank."""
    base = points[0]
    diff = points[1:] - base
    if diff.size == 0:
        return base, np.zeros((0, points.shape[1]))
    u, sv, vt = np.linalg.svd(diff, full_matrices=False)
    scale = max(1.0, sv[0]) if sv.size else 1.0
    rank = int(np.sum(sv > tol * scale))
    return base, vt[:rank]


def in_convex_hull(points, y, tol: float = 1e-12) -> bool:
    """Closed convex-hull membership for a small point set (any affine rank)."""
    points = np.asarray(points, dtype=float)
    y = np.asarray(y, dtype=float)
    scale = 1.0 + np.abs(points).max()
    base, basis = _affine_basis(points, tol)
    rel = y - base
    coords = basis @ rel
    resid = rel - basis.T @ coords
    if np.linalg.norm(resid) > tol * scale:
        return False
    r = basis.shape[0]
    if r == 0:
        return True
    local = (points - base) @ basis.T
    for combo in itertools.combinations(range(points.shape[0]), r + 1):
        v = local[list(combo)]
        t = (v[1:] - v[0]).T
        if abs(np.linalg.det(t)) <= tol * max(1.0, np.abs(t).max()) ** r:
            continue
        lam = np.linalg.solve(t, coords - v[0])
        if lam.min() >= -tol and lam.sum() <= 1 + tol:
            return True
    return False


@dataclass(frozen=True)
class _SimplexTable:
    combos: np.ndarray
    prod_w: np.ndarray
    total: float
    base: np.ndarray
    inv: np.ndarray
    degenerate: np.ndarray


def _simplex_table(s: WeightedLocalSample, tol: float) -> _SimplexTable:
    p = s.p
    combos = np.array(list(itertools.combinations(range(s.size), p + 1)), dtype=np.int64)
    prod_w = np.prod(s.weights[combos], axis=1)
    v = s.points[combos]
    base = v[:, 0, :]
    t = np.transpose(v[:, 1:, :] - base[:, None, :], (0, 2, 1))
    sv = np.linalg.svd(t, compute_uv=False)
    degenerate = sv[:, -1] <= tol * np.maximum(1.0, sv[:, 0])
    inv = np.zeros_like(t)
    ok = ~degenerate
    if np.any(ok):
        inv[ok] = np.linalg.inv(t[ok])
    return _SimplexTable(combos, prod_w, float(prod_w.sum()), base, inv, degenerate)


def simplicial_depths(queries, s: WeightedLocalSample, cfg: DepthConfig = DEFAULT_CONFIG):
    q = _check_queries(queries, s)
    if s.size <= s.p:
        raise InputError(
            f"simplicial depth needs at least p+1={s.p + 1} support points, got {s.size}"
        )
    tol = cfg.coincidence_tolerance
    tab = _simplex_table(s, tol)
    good = ~tab.degenerate
    deg = np.flatnonzero(tab.degenerate)
    out = np.empty(q.shape[0])
    ng = int(good.sum())
    chunk = max(1, 4_000_000 // max(1, ng * s.p))
    base, inv, pw = tab.base[good], tab.inv[good], tab.prod_w[good]
    for lo in range(0, q.shape[0], chunk):
        rel = q[lo:lo + chunk, None, :] - base[None, :, :]
        lam = np.einsum("cij,qcj->qci", inv, rel)
        inside = (lam.min(axis=2) >= -tol) & (lam.sum(axis=2) <= 1 + tol)
        out[lo:lo + chunk] = inside.astype(float) @ pw
    if deg.size:
        for a, y in enumerate(q):
            for c in deg:
                if in_convex_hull(s.points[tab.combos[c]], y, max(tol, 1e-12)):
                    out[a] += tab.prod_w[c]
    return np.clip(out / tab.total, 0.0, 1.0)


def simplicial_depth(y, s: WeightedLocalSample, cfg: DepthConfig = DEFAULT_CONFIG) -> float:
    """Weighted share of closed (p+1)-point simplices containing ``y``.

    Each simplex is weighted by the product of its vertex weights.
    Rank-deficient simplices count when ``y`` lies in their convex hull.
    """
    y = _check_query(y, s)
    return float(simplicial_depths(y[None, :], s, cfg)[0])


# -- dispatch ----------------------------------------------------------------

_BATCH = {
    DepthKind.HALFSPACE: halfspace_depths,
    DepthKind.SPATIAL: spatial_depths,
    DepthKind.PROJECTION: projection_depths,
    DepthKind.SIMPLICIAL: simplicial_depths,
}


def depths(queries, s: WeightedLocalSample, kind="halfspace",
           cfg: Optional[DepthConfig] = None) -> np.ndarray:
    """Depth of every query row under ``kind``."""
    return _BATCH[DepthKind.parse(kind)](queries, s, cfg or DEFAULT_CONFIG)


def depth(y, s: WeightedLocalSample, kind="halfspace", cfg: Optional[DepthConfig] = None) -> float:
    y = _check_query(y, s)
    return float(depths(y[None, :], s, kind, cfg)[0])


def depth_at_points(s: WeightedLocalSample, kind="halfspace",
                    cfg: Optional[DepthConfig] = None) -> np.ndarray:
    """Depth of every support atom of ``s``."""
    return depths(s.points, s, kind, cfg)


@dataclass(frozen=True)
class DepthEvaluation:
    values: np.ndarray
    kind: DepthKind
    approximate: bool
    # projection depth only: maximizing scanned direction per query
    directions: Optional[np.ndarray] = None


def evaluate(queries, s: WeightedLocalSample, kind="halfspace",
             cfg: Optional[DepthConfig] = None) -> DepthEvaluation:
    """Depth values together with exactness metadata."""
    kind = DepthKind.parse(kind)
    cfg = cfg or DEFAULT_CONFIG
    dirs = None
    if kind is DepthKind.PROJECTION:
        vals, dirs = projection_depths(queries, s, cfg, return_direction=True)
    else:
        vals = depths(queries, s, kind, cfg)
    return DepthEvaluation(vals, kind, not is_exact(kind, s.p), dirs)
