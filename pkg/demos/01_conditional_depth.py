"""Conditional depth of a bivariate response given a covariate.

Simulate heteroscedastic data, build nearest-neighbor weights at one
covariate value and compare the four depth functions on the local sample.
"""
import numpy as np

from depthreg import DepthConfig, NeighborCache, WeightSpec, depths
from depthreg.simlab import SimulationModel, sample_model

ds = sample_model(SimulationModel(1, a=4.0), n=300, seed=1)

# weights at covariate point 0: k = floor(log(n)^2) + 1 nearest neighbors
cache = NeighborCache(ds.covariates.distance_matrix(), WeightSpec())
s = cache.local_sample(ds.responses, 0)
print(f"local sample at X_0: {s.size} atoms, total mass {s.weights.sum():.3f}")

queries = np.array([[0.0, 0.0], [1.0, 1.0], [3.0, -3.0]])
cfg = DepthConfig(direction_count=256)
for kind in ("halfspace", "spatial", "projection", "simplicial"):
    print(f"{kind:>10}:", np.round(depths(queries, s, kind, cfg), 4))

# a kernel with a fixed bandwidth instead of nearest neighbors
kern = NeighborCache(ds.covariates.distance_matrix(), WeightSpec(bandwidth=0.5, kernel="epanechnikov"))
print("epanechnikov support size:", kern.local_sample(ds.responses, 0).size)
