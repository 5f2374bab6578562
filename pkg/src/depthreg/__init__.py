"""Depth-based nonparametric regression for multivariate responses.

Conditional depths, central regions, depth medians and trimmed means,
conditional spread, and a permutation test for heteroscedasticity, with
covariates in any metric space (vectors and L2 curves ship).
"""
__version__ = "0.1.0"

from .dataset import Dataset, load_dataset
from .depth import (
    DepthConfig,
    DepthKind,
    depth,
    depth_at_points,
    depths,
    halfspace_depth,
    projection_depth,
    simplicial_depth,
    spatial_depth,
)
from .errors import (
    DegenerateScaleError,
    DepthRegError,
    DimensionError,
    EmptyNeighborhoodError,
    InputError,
    NumericalError,
    UnsupportedDimensionError,
)
from .heterotest import HeteroTestResult, delta_profile, permutation_test, t_statistic
from .metrics import Covariates, euclidean_distance, l2_curve_distance
from .regions import (
    CentralRegion,
    alpha_r,
    central_region,
    conditional_median,
    contour_2d,
    hausdorff_distance,
    region_membership,
    trimmed_mean,
)
from .simlab import SimulationModel, make_sigma, power_study, sample_model
from .spread import SpreadEstimate, spread_diameter, spread_volume_grid, spread_volume_hull
from .weights import (
    NeighborCache,
    WeightedLocalSample,
    WeightSpec,
    default_k,
    kernel_weights,
    knn_bandwidth,
    knn_weights,
    local_sample,
)

__all__ = [
    "Dataset",
    "load_dataset",
    "DepthConfig",
    "DepthKind",
    "depth",
    "depth_at_points",
    "depths",
    "halfspace_depth",
    "projection_depth",
    "simplicial_depth",
    "spatial_depth",
    "DegenerateScaleError",
    "DepthRegError",
    "DimensionError",
    "EmptyNeighborhoodError",
    "InputError",
    "NumericalError",
    "UnsupportedDimensionError",
    "HeteroTestResult",
    "delta_profile",
    "permutation_test",
    "t_statistic",
    "Covariates",
    "euclidean_distance",
    "l2_curve_distance",
    "CentralRegion",
    "alpha_r",
    "central_region",
    "conditional_median",
    "contour_2d",
    "hausdorff_distance",
    "region_membership",
    "trimmed_mean",
    "SimulationModel",
    "make_sigma",
    "power_study",
    "sample_model",
    "SpreadEstimate",
    "spread_diameter",
    "spread_volume_grid",
    "spread_volume_hull",
    "NeighborCache",
    "WeightedLocalSample",
    "WeightSpec",
    "default_k",
    "kernel_weights",
    "knn_bandwidth",
    "knn_weights",
    "local_sample",
]
