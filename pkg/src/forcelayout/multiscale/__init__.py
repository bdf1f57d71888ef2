"""Multiscale layouts for large graphs."""

from .grip import Filtration, grip_layout, mis_filtration, neighborhoods
from .hk import covering_radius, hk_layout, hk_levels, hk_local_layout, k_centers
from .walshaw import CoarseHierarchy, build_hierarchy, match_coarsen, walshaw_forces, walshaw_layout

__all__ = [
    "CoarseHierarchy",
    "Filtration",
    "build_hierarchy",
    "covering_radius",
    "grip_layout",
    "hk_layout",
    "hk_levels",
    "hk_local_layout",
    "k_centers",
    "match_coarsen",
    "mis_filtration",
    "neighborhoods",
    "walshaw_forces",
    "walshaw_layout",
]
