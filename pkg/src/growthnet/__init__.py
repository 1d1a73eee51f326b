"""Hierarchical spatial growth networks and their hardware cost models."""

__version__ = "0.1.0"

from .graph_core import (
    HierarchySpec,
    InvalidArgumentError,
    InvalidSpecError,
    SpatialGraph,
    positions_for_hierarchy,
    tile_along_diagonal,
)
from .growth_gen import (
    GenerationReport,
    GrowthParams,
    generate_growth,
    generate_partial_growth,
    generate_random,
    grow_sector,
)
from .physical_layout import (
    AreaReport,
    PhysicalParams,
    anchored_area_law,
    area_fit,
    delta_degree_capacity,
    emit_routing_layout,
    feedforward_metrics,
    network_area_exact,
    network_area_scaling,
)
from .power_model import PowerParams, network_power, unit_energy
from .scaling_laws import (
    DegreeLawParams,
    PoolParams,
    max_degree,
    pool_area,
    pool_count_ratio,
)
from .metrics import (
    MetricsReport,
    average_path_length,
    clustering_coefficient,
    fit_power_law,
    hierarchy_edge_census,
    measure,
    mean_clustering,
    rent_exponent,
    small_world_index,
)

PAPER_HIERARCHY = ((9, 9), (5, 5), (2, 2))

__all__ = [
    "__version__",
    "HierarchySpec",
    "InvalidArgumentError",
    "InvalidSpecError",
    "SpatialGraph",
    "positions_for_hierarchy",
    "tile_along_diagonal",
    "GenerationReport",
    "GrowthParams",
    "generate_growth",
    "generate_partial_growth",
    "generate_random",
    "grow_sector",
    "MetricsReport",
    "average_path_length",
    "clustering_coefficient",
    "fit_power_law",
    "hierarchy_edge_census",
    "measure",
    "mean_clustering",
    "rent_exponent",
    "small_world_index",
    "AreaReport",
    "PhysicalParams",
    "anchored_area_law",
    "area_fit",
    "delta_degree_capacity",
    "emit_routing_layout",
    "feedforward_metrics",
    "network_area_exact",
    "network_area_scaling",
    "PowerParams",
    "network_power",
    "unit_energy",
    "DegreeLawParams",
    "PoolParams",
    "max_degree",
    "pool_area",
    "pool_count_ratio",
    "PAPER_HIERARCHY",
]
