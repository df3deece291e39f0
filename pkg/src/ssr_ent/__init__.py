"""ssr-ent - Mode-entanglement transformations of fermionic states under superselection rules"""

__version__ = "0.1.0"
__author__ = "ssr-ent developers"
__description__ = (
    "Decide SSR-restricted LOCC convertibility of bipartite fermionic states "
    "and search for wedge-product catalysts"
)

# Core imports for easy access
from .core import DensityOperator, ModeLayout, SsrKind, two_orbital_state
from .engine import (
    CatalystSpec,
    TransformationReport,
    Verdict,
    build_catalyst,
    decide,
    search_catalyst,
    wedge_density,
)

__all__ = [
    "DensityOperator",
    "ModeLayout",
    "SsrKind",
    "two_orbital_state",
    "CatalystSpec",
    "TransformationReport",
    "Verdict",
    "build_catalyst",
    "decide",
    "search_catalyst",
    "wedge_density",
]
