"""Force-directed graph layout: spring embedders, barycentric, distance-based,
multiscale and Riemannian methods with deterministic seeding."""

from . import kernels
from .distance import KkModel, kk_build, kk_delta, kk_energy, kk_layout, pivot_init, smacof_step, stress_layout
from .graph import (
    DistanceMatrix,
    Graph,
    GraphParseError,
    GraphWarning,
    bfs_apsp,
    connected_components,
    k_neighborhood,
    load_graph,
    parse_edge_list,
    parse_json_graph,
)
from .layout import (
    Layout,
    QualityReport,
    Temperature,
    cool,
    count_crossings,
    edge_length_stats,
    init_random,
    layout_from_json,
    layout_to_json,
    min_vertex_separation,
    normalized_stress,
    quality_report,
    stress,
)
from .multiscale import grip_layout, hk_layout, hk_local_layout, k_centers, match_coarsen, mis_filtration, walshaw_layout
from .render import render_svg
from .riemannian import ManifoldPoint, TangentVector, exp_map, geodesic_distance, log_map, riemannian_layout
from .springs import EadesParams, FrParams, bh_build, bh_repulsion, eades_layout, fr_bh_layout, fr_grid_layout, fr_layout
from .tutte import FixedFaceSpec, tutte_layout

__version__ = "0.1.0"
