"""
State model and linear algebra: Fock basis, operators, SSR sectors, majorization.
"""

from .fock import (
    BasisConstraint,
    ModeLayout,
    OccupationState,
    SignedState,
    TWO_ELECTRON_SINGLET,
    basis_dimension,
    enumerate_basis,
    parse_occupation,
    reorder_sign,
    wedge_layout,
    wedge_state,
)
from .majorization import ProbabilityVector, majorizes, partial_sums_desc
from .operators import (
    DensityOperator,
    SpectrumResult,
    fermionic_partial_trace,
    hermitian_eigenvalues,
    mixture,
    pure_state,
    purity,
    reduce_to_modes,
)
from .ssr import (
    SectorDecomposition,
    SectorLabel,
    SsrKind,
    decompose,
    physical_part,
    sector_of,
    two_orbital_state,
)

__all__ = [
    "BasisConstraint",
    "ModeLayout",
    "OccupationState",
    "SignedState",
    "TWO_ELECTRON_SINGLET",
    "basis_dimension",
    "enumerate_basis",
    "parse_occupation",
    "reorder_sign",
    "wedge_layout",
    "wedge_state",
    "ProbabilityVector",
    "majorizes",
    "partial_sums_desc",
    "DensityOperator",
    "SpectrumResult",
    "fermionic_partial_trace",
    "hermitian_eigenvalues",
    "mixture",
    "pure_state",
    "purity",
    "reduce_to_modes",
    "SectorDecomposition",
    "SectorLabel",
    "SsrKind",
    "decompose",
    "physical_part",
    "sector_of",
    "two_orbital_state",
]
