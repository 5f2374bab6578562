"""Central regions, depth median and trimmed mean, with an SVG per point.

The 50% central region is the analogue of the box in a boxplot. Its
boundary is traced by marching squares on a depth grid.
"""
from pathlib import Path

import numpy as np

from depthreg import NeighborCache, WeightSpec, central_region, conditional_median, contour_2d, trimmed_mean
from depthreg.simlab import SimulationModel, sample_model
from depthreg.svg import Canvas, padded_limits

out = Path("demo_output")
out.mkdir(exist_ok=True)

ds = sample_model(SimulationModel(1, a=8.0), n=400, seed=2)
cache = NeighborCache(ds.covariates.distance_matrix(), WeightSpec())

# the covariate points with smallest and largest x1*x2*x3: the latter has larger spread
g = ds.covariates.values.prod(axis=1)
for label, i in (("low", int(np.argmin(g))), ("high", int(np.argmax(g)))):
    s = cache.local_sample(ds.responses, i)
    reg = central_region(s, r=0.5)
    med = conditional_median(s)
    tm = trimmed_mean(s, r=0.1, depth_values=reg.depths)
    lines = contour_2d(s, alpha=reg.alpha)
    print(f"{label}: alpha={reg.alpha:.3f}, {reg.member_indices.size} members, "
          f"median={np.round(med.point, 3)}, trimmed mean={np.round(tm, 3)}")

    canvas = Canvas(padded_limits(s.points[:, 0]), padded_limits(s.points[:, 1]),
                    title=f"50% central region ({label} spread)", xlabel="y1", ylabel="y2")
    canvas.points(s.points)
    for line in lines:
        canvas.path(line, closed=True)
    canvas.circle_marker(med.point)
    canvas.cross_marker(tm)
    canvas.save(out / f"region_{label}.svg")
