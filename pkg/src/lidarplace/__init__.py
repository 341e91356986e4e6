"""Cost-effective multi-LiDAR placement.

Voxelize a region of interest, segment it into the non-detectable subspaces
cut out by spinning-beam cones, and search sensor poses that minimize the
worst subspace's volume-to-surface-area ratio.  A Monte Carlo detection-rate
estimator validates the objective as a detection proxy.
"""

from .bees import AbcParams, FoodSource, SolveResult, fitness, neighbor, optimize, roulette_select
from .cost import (
    PlacementReport,
    SubspaceMetrics,
    SubspaceRecord,
    decision_bounds,
    evaluate_placement,
    make_objective,
    max_vsr,
    poses_from_vector,
    subspace_metrics,
    surface_area,
    surface_area_axis,
    volume,
    vsr,
)
from .geometry import (
    Box,
    LidarModel,
    PoseBounds,
    PoseConfig,
    RoiSpec,
    Vec3,
    VoxelGrid,
    as_vec3,
    beam_surface_z,
    build_voxel_grid,
    lidar_to_world,
    rotation_matrix,
    world_to_lidar,
)
from .odr import ObjectSpec, OdrReport, count_occupied_subspaces, estimate_odr
from .scenario import (
    OdrSettings,
    Scenario,
    ScenarioError,
    canonical_dict,
    load_scenario,
    parse_scenario,
    scenario_digest,
    serialize_scenario,
    with_seed,
)
from .segmentation import (
    SubspaceCode,
    SubspaceSet,
    beam_digit,
    beam_digits,
    component_ids,
    connected_components,
    first_level_labels,
)

__version__ = "0.1.0"

__all__ = [
    "AbcParams",
    "Box",
    "FoodSource",
    "LidarModel",
    "ObjectSpec",
    "OdrReport",
    "OdrSettings",
    "PlacementReport",
    "PoseBounds",
    "PoseConfig",
    "RoiSpec",
    "Scenario",
    "ScenarioError",
    "SolveResult",
    "SubspaceCode",
    "SubspaceMetrics",
    "SubspaceRecord",
    "SubspaceSet",
    "Vec3",
    "VoxelGrid",
    "as_vec3",
    "beam_digit",
    "beam_digits",
    "beam_surface_z",
    "build_voxel_grid",
    "canonical_dict",
    "component_ids",
    "connected_components",
    "count_occupied_subspaces",
    "decision_bounds",
    "estimate_odr",
    "evaluate_placement",
    "first_level_labels",
    "fitness",
    "lidar_to_world",
    "load_scenario",
    "make_objective",
    "max_vsr",
    "neighbor",
    "optimize",
    "parse_scenario",
    "poses_from_vector",
    "rotation_matrix",
    "roulette_select",
    "scenario_digest",
    "serialize_scenario",
    "subspace_metrics",
    "surface_area",
    "surface_area_axis",
    "volume",
    "vsr",
    "with_seed",
    "world_to_lidar",
]
