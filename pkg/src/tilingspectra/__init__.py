"""Exact generation and spectral analysis of substitution tilings."""

__version__ = "0.1.0"

from .adjacency import TileGraph, build_graph, laplacian
from .energy import parse_energy
from .exactnum import CycloPoint, QuadScalar
from .spectral import exact_nullspace, inertia_below, multiplicity
from .tiling import FAMILY_NAMES, generate

__all__ = [
    "FAMILY_NAMES",
    "CycloPoint",
    "QuadScalar",
    "TileGraph",
    "__version__",
    "build_graph",
    "exact_nullspace",
    "generate",
    "inertia_below",
    "laplacian",
    "multiplicity",
    "parse_energy",
]
