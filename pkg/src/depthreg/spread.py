"""Conditional spread: diameter and volume of the central region."""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from . import _kernels
from .depth import DepthConfig, depths
from .errors import InputError, UnsupportedDimensionError
from .regions import bounding_box, central_region
from .weights import WeightedLocalSample


class SpreadKind(str, enum.Enum):
    DIAMETER = "diameter"
    GRID_VOLUME = "grid_volume"
    HULL_VOLUME = "hull_volume"


@dataclass
class SpreadEstimate:
    r: float
    kind: SpreadKind
    value: float
    # diameter: achieving (i, j) atom pair; grid volume: cells per axis;
    # hull volume: number of hull vertices
    detail: object = None
    degenerate: bool = False


def spread_diameter(s: WeightedLocalSample, kind="halfspace", cfg: DepthConfig | None = None,
                    r: float = 0.5, depth_values=None) -> SpreadEstimate:
    """Largest distance between two atoms of the 100r% central region."""
    reg = central_region(s, kind, cfg, r, depth_values)
    mask = np.zeros(s.size, dtype=np.bool_)
    mask[reg.member_indices] = True
    d, i, j = _kernels.max_pairwise_distance(np.ascontiguousarray(s.points), mask)
    return SpreadEstimate(r, SpreadKind.DIAMETER, float(d), (int(i), int(j)))


def spread_volume_grid(s: WeightedLocalSample, kind="halfspace", cfg: DepthConfig | None = None,
                       r: float = 0.5, resolution: int = 64) -> SpreadEstimate:
    """Lebesgue measure of the central region by midpoint-rule cell counting.

    The 10%-expanded bounding box of the support is cut into
    ``resolution**p`` cells; a cell counts when its center has depth
    ``>= alpha``.
    """
    p = s.p
    if p not in (2, 3):
        raise UnsupportedDimensionError(
            f"grid volume supports p in {{2, 3}}, got p={p}; cost grows as resolution**p"
        )
    if resolution < 16:
        raise InputError(f"resolution must be >= 16, got {resolution}")
    reg = central_region(s, kind, cfg, r)
    box = bounding_box(s.points)
    width = (box[:, 1] - box[:, 0]) / resolution
    axes = [box[a, 0] + width[a] * (np.arange(resolution) + 0.5) for a in range(p)]
    mesh = np.meshgrid(*axes, indexing="ij")
    centers = np.column_stack([m.ravel() for m in mesh])
    inside = depths(centers, s, kind, cfg) >= reg.alpha
    vol = float(np.count_nonzero(inside) * np.prod(width))
    return SpreadEstimate(r, SpreadKind.GRID_VOLUME, vol, resolution)


def hull_volume(points) -> tuple[float, int, bool]:
    """Convex-hull volume (2-D shoelace, 3-D facet tetrahedra) of a point set.

    Returns ``(volume, vertex_count, degenerate)``; an affinely dependent set
    has volume 0 and ``degenerate=True``.
    """
    pts = np.asarray(points, dtype=float)
    p = pts.shape[1]
    if pts.shape[0] < p + 1 or np.linalg.matrix_rank(pts[1:] - pts[0]) < p:
        return 0.0, 0, True
    hull = ConvexHull(pts)
    if p == 2:
        # 2-D hull vertices come in counterclockwise order
        v = pts[hull.vertices]
        x, y = v[:, 0], v[:, 1]
        area = 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
        return float(area), len(hull.vertices), False
    c = pts[hull.vertices].mean(axis=0)
    tri = pts[hull.simplices] - c
    vol = np.abs(np.einsum("ij,ij->i", tri[:, 0], np.cross(tri[:, 1], tri[:, 2]))).sum() / 6
    return float(vol), len(hull.vertices), False


def spread_volume_hull(s: WeightedLocalSample, kind="halfspace", cfg: DepthConfig | None = None,
                       r: float = 0.5) -> SpreadEstimate:
    """Volume of the convex hull of the central-region atoms.

    Consistent only when the population region is convex; kept as a
    comparator for the grid estimate.
    """
    if s.p not in (2, 3):
        raise UnsupportedDimensionError(f"hull volume supports p in {{2, 3}}, got p={s.p}")
    reg = central_region(s, kind, cfg, r)
    vol, nv, deg = hull_volume(s.points[reg.member_indices])
    if deg:
        warnings.warn("central-region atoms are affinely dependent; hull volume is 0")
    return SpreadEstimate(r, SpreadKind.HULL_VOLUME, vol, nv, deg)
