"""
Superselection rules and Fock-space sectors.

A local SSR splits the basis into sectors labeled by per-party quantum numbers
(local parity or local particle number). Any state decomposes as

    rho = sum_j P_j rho_j + chi

with sector weights ``P_j``, normalized sector projections ``rho_j`` and the
cross-sector residual ``chi`` that SSR-restricted operations cannot touch.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple, Union

import numpy as np

from ..config import Tolerances, default_tolerances
from ..errors import LayoutError, StateValidationError
from .fock import (
    TWO_ELECTRON_SINGLET,
    ModeLayout,
    OccupationState,
    enumerate_basis,
    parse_occupation,
)
from .operators import DensityOperator

logger = logging.getLogger(__name__)


class SsrKind(Enum):
    """Which conserved quantity the local superselection rule fixes."""

    LOCAL_PARITY = "parity"
    LOCAL_NUMBER = "number"

    @classmethod
    def parse(cls, value: Union[str, "SsrKind"]) -> "SsrKind":
        if isinstance(value, SsrKind):
            return value
        aliases = {"parity": cls.LOCAL_PARITY, "p": cls.LOCAL_PARITY,
                   "number": cls.LOCAL_NUMBER, "n": cls.LOCAL_NUMBER}
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise ValueError(f"unknown superselection rule {value!r} (use parity or number)")


@dataclass(frozen=True, order=True)
class SectorLabel:
    """Per-party quantum numbers: parity bits or particle counts."""

    values: Tuple[int, ...]
    kind: SsrKind = field(compare=False)
    parties: Tuple[str, ...] = field(compare=False)

    def value_of(self, party: str) -> int:
        return self.values[self.parties.index(party)]

    def __str__(self) -> str:
        if self.kind is SsrKind.LOCAL_PARITY:
            return "".join("o" if v else "e" for v in self.values)
        return "(" + ",".join(str(v) for v in self.values) + ")"


def sector_of(state: OccupationState, ssr: SsrKind) -> SectorLabel:
    """Sector of a basis ket under ``ssr``."""
    parties = state.layout.parties
    if ssr is SsrKind.LOCAL_PARITY:
        values = tuple(state.parity(p) for p in parties)
    else:
        values = tuple(state.number(p) for p in parties)
    return SectorLabel(values, ssr, parties)


@lru_cache(maxsize=256)
def _sector_labels(basis: Tuple[OccupationState, ...], ssr: SsrKind) -> Tuple[SectorLabel, ...]:
    return tuple(sector_of(state, ssr) for state in basis)


@lru_cache(maxsize=256)
def _same_sector_mask(basis: Tuple[OccupationState, ...], ssr: SsrKind) -> np.ndarray:
    labels = _sector_labels(basis, ssr)
    mask = np.array([[a == b for b in labels] for a in labels], dtype=bool)
    mask.flags.writeable = False
    return mask


@dataclass(frozen=True, eq=False)
class SectorBlock:
    """One sector of a decomposition. ``projection`` is None for zero-weight sectors."""

    label: SectorLabel
    weight: float
    projection: Optional[DensityOperator]
    indices: Tuple[int, ...]
    raw_block: np.ndarray

    @property
    def is_null(self) -> bool:
        return self.projection is None


@dataclass(frozen=True, eq=False)
class SectorDecomposition:
    """``rho = sum_j weight_j * projection_j + chi``."""

    sectors: Tuple[SectorBlock, ...]
    chi: np.ndarray
    ssr: SsrKind
    basis: Tuple[OccupationState, ...]

    @property
    def labels(self) -> Tuple[SectorLabel, ...]:
        return tuple(block.label for block in self.sectors)

    def weights(self) -> Dict[SectorLabel, float]:
        return {block.label: block.weight for block in self.sectors}

    def sector(self, label: SectorLabel) -> SectorBlock:
        for block in self.sectors:
            if block.label == label:
                return block
        raise KeyError(str(label))

    def chi_norm(self) -> float:
        return float(np.max(np.abs(self.chi), initial=0.0))

    def reassemble(self) -> np.ndarray:
        matrix = self.chi.copy()
        for block in self.sectors:
            idx = np.ix_(block.indices, block.indices)
            if block.projection is None:
                matrix[idx] += block.raw_block
            else:
                matrix[idx] += block.weight * block.projection.matrix[idx]
        return matrix


def decompose(
    rho: DensityOperator, ssr: SsrKind, tol: Optional[Tolerances] = None
) -> SectorDecomposition:
    """Split ``rho`` into sector weights, normalized projections and ``chi``."""
    tol = tol or default_tolerances()
    labels = _sector_labels(rho.basis, ssr)
    matrix = rho.matrix

    blocks = []
    for label in sorted(set(labels)):
        indices = tuple(i for i, l in enumerate(labels) if l == label)
        idx = np.ix_(indices, indices)
        raw = matrix[idx].copy()
        weight = float(np.real(np.trace(raw)))
        if weight < -tol.psd:
            raise StateValidationError(f"sector {label} has negative weight {weight:.3e}")
        weight = max(weight, 0.0)

        projection = None
        if weight > tol.weight:
            full = np.zeros_like(matrix)
            full[idx] = raw / weight
            projection = DensityOperator(rho.basis, full, rho.layout)
        blocks.append(SectorBlock(label, weight, projection, indices, raw))

    same_sector = _same_sector_mask(rho.basis, ssr)
    chi = np.where(same_sector, 0.0, matrix).astype(complex)
    logger.debug(
        f"[SECTORS] {ssr.value}: "
        + ", ".join(f"{b.label}={b.weight:.6g}" for b in blocks)
        + f", |chi|max={float(np.max(np.abs(chi), initial=0.0)):.3g}"
    )
    return SectorDecomposition(tuple(blocks), chi, ssr, rho.basis)


def physical_part(
    rho: DensityOperator, ssr: SsrKind, tol: Optional[Tolerances] = None
) -> DensityOperator:
    """``rho - chi``: the block-diagonal part allowed under the SSR."""
    decomposition = decompose(rho, ssr, tol)
    return DensityOperator(rho.basis, rho.matrix - decomposition.chi, rho.layout)


def _check_two_orbital(layout: ModeLayout) -> None:
    if len(layout.parties) != 2 or len(layout.segments) != 1:
        raise LayoutError("the two-orbital family needs two parties and a single segment")
    if any(len(layout.modes_of(p)) != 2 for p in layout.parties):
        raise LayoutError("the two-orbital family needs exactly two modes per party")


def two_orbital_state(
    P: float,
    p1: float,
    p2: float,
    alpha1: Optional[complex] = None,
    alpha2: Optional[complex] = None,
    chi: Optional[Mapping[Tuple[str, str], complex]] = None,
    layout: Optional[ModeLayout] = None,
    tol: Optional[Tolerances] = None,
) -> DensityOperator:
    """
    ``rho(P, p1, p2, alpha1, alpha2) = P rho_ee + (1 - P) rho_oo + chi``.

    ``rho_ee`` lives on {|00,11>, |11,00>} with population ``p1`` on |00,11> and
    coherence ``alpha1``; ``rho_oo`` likewise on {|01,10>, |10,01>}. Omitted
    coherences take the pure value ``sqrt(p (1 - p))``. ``chi`` maps pairs of
    occupation strings to cross-sector entries (the conjugate is added).
    """
    tol = tol or default_tolerances()
    layout = layout or ModeLayout.two_orbital()
    _check_two_orbital(layout)
    for name, value in (("P", P), ("p1", p1), ("p2", p2)):
        if not 0.0 <= value <= 1.0:
            raise StateValidationError(f"{name}={value} outside [0, 1]")

    basis = tuple(enumerate_basis(layout, TWO_ELECTRON_SINGLET))
    index = {state.label: i for i, state in enumerate(basis)}
    matrix = np.zeros((len(basis), len(basis)), dtype=complex)

    for weight, (first, second), p, alpha in (
        (P, ("00,11", "11,00"), p1, alpha1),
        (1.0 - P, ("01,10", "10,01"), p2, alpha2),
    ):
        if alpha is None:
            alpha = np.sqrt(p * (1.0 - p))
        if abs(alpha) ** 2 > p * (1.0 - p) + tol.psd:
            raise StateValidationError(
                f"|alpha|^2 = {abs(alpha) ** 2:.6g} exceeds p(1-p) = {p * (1 - p):.6g}"
            )
        i, j = index[first], index[second]
        matrix[i, i] += weight * p
        matrix[j, j] += weight * (1.0 - p)
        matrix[i, j] += weight * alpha
        matrix[j, i] += weight * np.conj(alpha)

    for (left, right), value in (chi or {}).items():
        i = index[parse_occupation(left, layout).label]
        j = index[parse_occupation(right, layout).label]
        if sector_of(basis[i], SsrKind.LOCAL_PARITY) == sector_of(basis[j], SsrKind.LOCAL_PARITY):
            raise StateValidationError(f"chi entry ({left}, {right}) is not cross-sector")
        matrix[i, j] += value
        matrix[j, i] += np.conj(value)

    rho = DensityOperator(basis, matrix, layout)
    if chi:
        rho.validate(tol)
    return rho
