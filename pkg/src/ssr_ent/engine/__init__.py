"""Convertibility decisions and catalyst search."""

from .catalysis import (
    CatalysisResult,
    CatalystSearch,
    CatalystSpec,
    build_catalyst,
    decide_catalyzed,
    get_search_engine,
    joint_sector_purity,
    joint_sector_weights,
    search_catalyst,
    wedge_density,
)
from .transform import (
    FailingStep,
    SectorReport,
    TransformationReport,
    Verdict,
    decide,
    schmidt_vector,
)

__all__ = [
    "CatalysisResult",
    "CatalystSearch",
    "CatalystSpec",
    "build_catalyst",
    "decide_catalyzed",
    "get_search_engine",
    "joint_sector_purity",
    "joint_sector_weights",
    "search_catalyst",
    "wedge_density",
    "FailingStep",
    "SectorReport",
    "TransformationReport",
    "Verdict",
    "decide",
    "schmidt_vector",
]
