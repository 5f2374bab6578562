"""Central regions, depth medians and depth-trimmed means.

A central region at level ``r`` is the depth upper-level set
``{y : depth(y) >= alpha}`` whose threshold ``alpha`` is the largest achieved
depth value still leaving conditional mass ``>= r`` inside.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.spatial.distance import cdist
from skimage import measure

from . import _kernels
from .depth import DepthConfig, DepthKind, depth_at_points, depths, is_exact
from .errors import DimensionError, InputError, UnsupportedDimensionError
from .weights import WeightedLocalSample

BOX_MARGIN = 0.10


def _check_r(r, allow_one=False):
    ok = 0 < r <= 1 if allow_one else 0 < r < 1
    if not ok:
        raise InputError(f"r must lie in (0, 1{']' if allow_one else ')'}, got {r!r}")


def _threshold(depth_values, weights, r):
    depth_values = np.ascontiguousarray(depth_values, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    if depth_values.shape != weights.shape or depth_values.ndim != 1:
        raise DimensionError("depths and weights must be aligned 1-D arrays")
    return float(_kernels.alpha_value(depth_values, weights, float(r)))


def alpha_r(depth_values, weights, r: float) -> float:
    """Largest achieved depth whose upper-level set carries mass ``>= r``.

    Depth values within 1e-12 of each other form one tie class and are
    treated as equal.

    >>> alpha_r([0.9, 0.6, 0.3], [1/3, 1/3, 1/3], 0.5)
    0.6
    """
    _check_r(r)
    return _threshold(depth_values, weights, r)


@dataclass
class CentralRegion:
    r: float
    alpha: float
    depths: np.ndarray
    member_indices: np.ndarray
    member_mass: float
    depth_kind: DepthKind
    approximate: bool = False
    # dataset row numbers of the members, when the sample carries them
    member_rows: Optional[np.ndarray] = None
    contour: Optional[List[np.ndarray]] = None

    def to_dict(self) -> dict:
        out = {
            "r": self.r,
            "alpha": self.alpha,
            "member_indices": self.member_indices.tolist(),
            "member_mass": self.member_mass,
            "depth_kind": self.depth_kind.value,
            "approximate": self.approximate,
        }
        if self.member_rows is not None:
            out["member_rows"] = self.member_rows.tolist()
        return out


def central_region(s: WeightedLocalSample, kind="halfspace", cfg: DepthConfig | None = None,
                   r: float = 0.5, depth_values=None) -> CentralRegion:
    """Sample 100r% central region; members are the atoms with depth ``>= alpha``."""
    _check_r(r)
    kind = DepthKind.parse(kind)
    dv = depth_at_points(s, kind, cfg) if depth_values is None else np.asarray(depth_values, float)
    alpha = _threshold(dv, s.weights, r)
    members = np.flatnonzero(dv >= alpha)
    return CentralRegion(
        r=r,
        alpha=alpha,
        depths=dv,
        member_indices=members,
        member_mass=float(s.weights[members].sum()),
        depth_kind=kind,
        approximate=not is_exact(kind, s.p),
        member_rows=s.indices[members],
    )


def region_membership(y, s: WeightedLocalSample, kind="halfspace",
                      cfg: DepthConfig | None = None, alpha: float = 0.0) -> bool:
    """Whether ``y`` lies in the trimmed region ``{depth >= alpha}``."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return bool(depths(y[None, :], s, kind, cfg)[0] >= alpha)


# -- grids and contours ------------------------------------------------------

def bounding_box(points, margin: float = BOX_MARGIN) -> np.ndarray:
    """Coordinate box of ``points`` grown by ``margin`` of its extent per side.

    Returns a ``(p, 2)`` array of ``[low, high]`` rows. Flat axes get a unit
    extent so the box never collapses.
    """
    pts = np.asarray(points, dtype=float)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    ext = hi - lo
    ext = np.where(ext > 0, ext, 1.0)
    return np.column_stack([lo - margin * ext, hi + margin * ext])


def depth_field(s: WeightedLocalSample, kind="halfspace", cfg: DepthConfig | None = None,
                bbox=None, resolution: int = 64):
    """Depth on the ``(resolution+1)^2`` node lattice of a 2-D box.

    Returns ``(xs, ys, field)`` with ``field[i, j]`` the depth at ``(xs[j], ys[i])``.
    """
    if s.p != 2:
        raise UnsupportedDimensionError(f"depth fields are 2-D only, sample has p={s.p}")
    box = bounding_box(s.points) if bbox is None else np.asarray(bbox, dtype=float)
    xs = np.linspace(box[0, 0], box[0, 1], resolution + 1)
    ys = np.linspace(box[1, 0], box[1, 1], resolution + 1)
    gx, gy = np.meshgrid(xs, ys)
    vals = depths(np.column_stack([gx.ravel(), gy.ravel()]), s, kind, cfg)
    return xs, ys, vals.reshape(gx.shape)


def contour_level(field, alpha: float) -> float:
    """Isoline level separating nodes with depth ``>= alpha`` from the rest.

    Depth fields are often piecewise constant, so nodes sit exactly at
    ``alpha``; the level is placed halfway to the next lower field value.
    """
    below = field[field < alpha]
    if below.size == 0:
        return alpha
    return 0.5 * (alpha + below.max())


def contour_2d(s: WeightedLocalSample, kind="halfspace", cfg: DepthConfig | None = None,
               alpha: float = 0.0, bbox=None, resolution: int = 64) -> List[np.ndarray]:
    """Marching-squares boundary of ``{depth >= alpha}`` as ``(m, 2)`` polylines.

    Polylines are closed (first vertex repeated) unless they run into the box.
    """
    if s.p != 2:
        raise UnsupportedDimensionError(f"contours are 2-D only, sample has p={s.p}")
    if resolution < 8:
        raise InputError(f"resolution must be >= 8, got {resolution}")
    xs, ys, fld = depth_field(s, kind, cfg, bbox, resolution)
    if not np.any(fld >= alpha):
        return []
    level = contour_level(fld, alpha)
    lines = []
    for c in measure.find_contours(fld, level):
        # find_contours returns (row, col) = (y index, x index)
        x = np.interp(c[:, 1], np.arange(xs.size), xs)
        y = np.interp(c[:, 0], np.arange(ys.size), ys)
        lines.append(np.column_stack([x, y]))
    return lines


def polygon_area(poly) -> float:
    """Shoelace area of a closed or open polygon ``(m, 2)``."""
    poly = np.asarray(poly, dtype=float)
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


# -- median and trimmed mean -------------------------------------------------

@dataclass
class MedianResult:
    point: np.ndarray
    depth: float
    policy: str
    candidates: int = field(default=0)


def _lexi_best(cands, vals):
    top = vals.max()
    tied = np.flatnonzero(vals >= top - _kernels.DEPTH_TIE_TOL)
    sub = cands[tied]
    order = np.lexsort(sub.T[::-1])
    j = tied[order[0]]
    return j


def conditional_median(s: WeightedLocalSample, kind="halfspace",
                       cfg: DepthConfig | None = None) -> MedianResult:
    """Deepest point among the support atoms, refined by a local grid search in 2-D.

    In 2-D two 3x3 neighborhood searches are run around the deepest atom,
    the first with step half the larger side of the support's bounding box,
    the second with half that step around the first winner. Ties go to the
    lexicographically smallest candidate.
    """
    kind = DepthKind.parse(kind)
    cands = s.points.copy()
    vals = depth_at_points(s, kind, cfg)
    policy = "atoms"
    if s.p == 2:
        policy = "atoms+grid2"
        extent = np.ptp(s.points, axis=0).max()
        if extent > 0:
            center = cands[_lexi_best(cands, vals)]
            step = 0.5 * extent
            offsets = np.array([(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)], dtype=float)
            for _ in range(2):
                trial = center + step * offsets
                tv = depths(trial, s, kind, cfg)
                cands = np.vstack([cands, trial])
                vals = np.concatenate([vals, tv])
                center = trial[_lexi_best(trial, tv)]
                step /= 2
    j = _lexi_best(cands, vals)
    return MedianResult(cands[j].copy(), float(vals[j]), policy, cands.shape[0])


def trimmed_mean(s: WeightedLocalSample, kind="halfspace", cfg: DepthConfig | None = None,
                 r: float = 0.1, depth_values=None) -> np.ndarray:
    """Weighted mean of the atoms inside the 100(1-r)% central region."""
    if not 0 <= r < 1:
        raise InputError(f"trimming proportion must lie in [0, 1), got {r!r}")
    dv = depth_at_points(s, kind, cfg) if depth_values is None else np.asarray(depth_values, float)
    alpha = _threshold(dv, s.weights, 1.0 - r)
    inside = dv >= alpha
    w = s.weights[inside]
    return (w @ s.points[inside]) / w.sum()


def hausdorff_distance(a, b) -> float:
    """Hausdorff distance between two finite point sets."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise InputError("Hausdorff distance needs two non-empty sets")
    if a.shape[1] != b.shape[1]:
        raise DimensionError("point sets have different dimensions")
    d = cdist(a, b)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def diameter(points) -> float:
    """Largest pairwise Euclidean distance in a finite point set."""
    pts = np.ascontiguousarray(np.asarray(points, dtype=float).reshape(len(points), -1))
    return float(_kernels.max_pairwise_distance(pts, np.ones(pts.shape[0], dtype=np.bool_))[0])
