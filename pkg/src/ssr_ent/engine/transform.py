"""
Convertibility of bipartite fermionic states under SSR-restricted LOCC.

The decision runs three steps in order:

1. the cross-sector residuals must agree (``chi_rho == chi_sigma``);
2. the sector weights must agree (``P_j == Q_j`` for every sector);
3. inside every populated sector both projections must be pure and the Schmidt
   vector of rho's projection must be majorized by sigma's.

The first failing step is reported. Mixed projections make step 3 undecidable
rather than impossible.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ..config import Tolerances, default_tolerances
from ..core.majorization import ProbabilityVector, majorizes, partial_sums_desc
from ..core.operators import DensityOperator, fermionic_partial_trace, hermitian_eigenvalues, purity
from ..core.ssr import SectorLabel, SsrKind, decompose
from ..errors import ImpurityInSector, LayoutError

logger = logging.getLogger(__name__)


class Verdict(Enum):
    POSSIBLE = "possible"
    IMPOSSIBLE = "impossible"
    UNDECIDABLE = "undecidable"

    @property
    def exit_code(self) -> int:
        return {"possible": 0, "impossible": 1, "undecidable": 3}[self.value]


class FailingStep(Enum):
    CHI_MISMATCH = "chi_mismatch"
    SECTOR_WEIGHT_MISMATCH = "sector_weight_mismatch"
    MAJORIZATION_FAILURE = "majorization_failure"
    IMPURITY_IN_SECTOR = "impurity_in_sector"

    @property
    def step(self) -> int:
        return {
            "chi_mismatch": 1,
            "sector_weight_mismatch": 2,
            "majorization_failure": 3,
            "impurity_in_sector": 3,
        }[self.value]


@dataclass
class SectorReport:
    """Per-sector diagnostics of a decision."""

    label: SectorLabel
    weight_rho: float
    weight_sigma: float
    schmidt_rho: Optional[ProbabilityVector] = None
    schmidt_sigma: Optional[ProbabilityVector] = None
    majorization_ok: Optional[bool] = None
    purity_rho: Optional[float] = None
    purity_sigma: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        def vector(v: Optional[ProbabilityVector]) -> Optional[Dict[str, List[float]]]:
            if v is None:
                return None
            return {"values": list(v.sorted_desc()), "partial_sums": partial_sums_desc(v)}

        return {
            "sector": str(self.label),
            "weight_rho": self.weight_rho,
            "weight_sigma": self.weight_sigma,
            "purity_rho": self.purity_rho,
            "purity_sigma": self.purity_sigma,
            "schmidt_rho": vector(self.schmidt_rho),
            "schmidt_sigma": vector(self.schmidt_sigma),
            "majorization_ok": self.majorization_ok,
        }


@dataclass
class TransformationReport:
    """Verdict plus the step that decided it and per-sector diagnostics."""

    verdict: Verdict
    failing_step: Optional[FailingStep]
    ssr: SsrKind
    chi_distance: float
    per_sector: List[SectorReport] = field(default_factory=list)

    @property
    def possible(self) -> bool:
        return self.verdict is Verdict.POSSIBLE

    def sector(self, name: str) -> SectorReport:
        for report in self.per_sector:
            if str(report.label) == name:
                return report
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "failing_step": None if self.failing_step is None else self.failing_step.value,
            "step": None if self.failing_step is None else self.failing_step.step,
            "ssr": self.ssr.value,
            "chi_distance": self.chi_distance,
            "sectors": [s.to_dict() for s in self.per_sector],
        }


def schmidt_vector(
    sector_proj: DensityOperator, keep: Optional[str] = None, tol: Optional[Tolerances] = None
) -> ProbabilityVector:
    """
    Schmidt coefficients of a pure sector projection.

    The nonzero eigenvalues of the fermionic partial trace onto ``keep``
    (default: the first party), in descending order.
    """
    tol = tol or default_tolerances()
    value = purity(sector_proj)
    if value < 1.0 - tol.purity:
        raise ImpurityInSector(f"sector projection is mixed (purity {value:.12g})", value)
    keep = keep or sector_proj.layout.parties[0]
    reduced = fermionic_partial_trace(sector_proj, keep).matrix
    support = np.flatnonzero(np.max(np.abs(reduced), axis=1) > tol.psd)
    spectrum = hermitian_eigenvalues(reduced[np.ix_(support, support)], tol)
    coefficients = [v for v in spectrum.eigenvalues if v > tol.psd] or [1.0]
    total = sum(coefficients)
    return ProbabilityVector(tuple(v / total for v in coefficients), tol)


def _is_pure(value: Optional[float], tol: Tolerances) -> bool:
    return value is not None and value >= 1.0 - tol.purity


def decide(
    rho: DensityOperator,
    sigma: DensityOperator,
    ssr: SsrKind,
    keep: Optional[str] = None,
    tol: Optional[Tolerances] = None,
) -> TransformationReport:
    """Decide whether ``rho -> sigma`` is possible under LOCC restricted by ``ssr``."""
    tol = tol or default_tolerances()
    if rho.layout != sigma.layout or rho.basis != sigma.basis:
        raise LayoutError("rho and sigma must share the same layout and basis")
    keep = keep or rho.layout.parties[0]

    dec_rho = decompose(rho, ssr, tol)
    dec_sigma = decompose(sigma, ssr, tol)
    chi_distance = float(np.max(np.abs(dec_rho.chi - dec_sigma.chi), initial=0.0))

    per_sector = []
    for block_rho, block_sigma in zip(dec_rho.sectors, dec_sigma.sectors):
        report = SectorReport(block_rho.label, block_rho.weight, block_sigma.weight)
        if block_rho.projection is not None:
            report.purity_rho = purity(block_rho.projection)
        if block_sigma.projection is not None:
            report.purity_sigma = purity(block_sigma.projection)
        per_sector.append(report)

    def verdict(result: Verdict, step: Optional[FailingStep]) -> TransformationReport:
        logger.debug(
            f"[DECIDE] {result.value}"
            + ("" if step is None else f" at step {step.step} ({step.value})")
        )
        return TransformationReport(result, step, ssr, chi_distance, per_sector)

    # Step 1
    if chi_distance > tol.chi:
        return verdict(Verdict.IMPOSSIBLE, FailingStep.CHI_MISMATCH)

    # Step 2
    if any(abs(s.weight_rho - s.weight_sigma) > tol.weight for s in per_sector):
        return verdict(Verdict.IMPOSSIBLE, FailingStep.SECTOR_WEIGHT_MISMATCH)

    # Step 3
    mixed = False
    failed = False
    for report, block_rho, block_sigma in zip(per_sector, dec_rho.sectors, dec_sigma.sectors):
        if block_rho.projection is None or block_sigma.projection is None:
            continue
        if not (_is_pure(report.purity_rho, tol) and _is_pure(report.purity_sigma, tol)):
            mixed = True
            continue
        report.schmidt_rho = schmidt_vector(block_rho.projection, keep, tol)
        report.schmidt_sigma = schmidt_vector(block_sigma.projection, keep, tol)
        report.majorization_ok = majorizes(report.schmidt_sigma, report.schmidt_rho, tol)
        failed = failed or not report.majorization_ok

    if failed:
        return verdict(Verdict.IMPOSSIBLE, FailingStep.MAJORIZATION_FAILURE)
    if mixed:
        return verdict(Verdict.UNDECIDABLE, FailingStep.IMPURITY_IN_SECTOR)
    return verdict(Verdict.POSSIBLE, None)
