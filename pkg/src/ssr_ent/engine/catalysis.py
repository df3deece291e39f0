"""
Catalytic transformations with fermionic joint states.

A catalyst tau joins the system through the wedge product: ``rho' = rho ∧ tau``
and ``sigma' = sigma ∧ tau`` live on the party-grouped joint layout, and the
conversion ``rho' -> sigma'`` is decided like any other. The catalyst family is

    tau = R tau_e + (1 - R) tau_o,   chi_tau = 0,

with pure sector projections ``tau_e`` (population r1, coherence gamma1) and
``tau_o`` (r2, gamma2). ``CatalystSearch`` scans this family on a lattice.
"""

import cmath
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from contextlib import closing
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Dict, Generator, Iterator, List, Optional, Tuple

import numpy as np

from ..config import Settings, Tolerances, default_tolerances
from ..core.fock import ModeLayout, OccupationState, wedge_layout, wedge_state
from ..core.operators import DensityOperator, reduce_to_modes
from ..core.ssr import SsrKind, two_orbital_state
from ..errors import CatalystSpecError, LayoutError
from .transform import FailingStep, TransformationReport, decide

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CatalystSpec:
    """Parameters of ``tau = R tau_e + (1 - R) tau_o`` with pure sector projections."""

    R: float
    r1: float
    r2: float
    phase1: complex = 1.0
    phase2: complex = 1.0

    def __post_init__(self):
        for name in ("R", "r1", "r2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise CatalystSpecError(f"{name}={value} outside [0, 1]")
        for name in ("phase1", "phase2"):
            if abs(abs(getattr(self, name)) - 1.0) > 1e-12:
                raise CatalystSpecError(f"{name} must have unit modulus")

    @property
    def gamma1(self) -> complex:
        return complex(self.phase1) * math.sqrt(self.r1 * (1.0 - self.r1))

    @property
    def gamma2(self) -> complex:
        return complex(self.phase2) * math.sqrt(self.r2 * (1.0 - self.r2))

    @property
    def chi_tau(self) -> float:
        return 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "R": self.R,
            "r1": self.r1,
            "r2": self.r2,
            "phase1": [complex(self.phase1).real, complex(self.phase1).imag],
            "phase2": [complex(self.phase2).real, complex(self.phase2).imag],
        }


@dataclass
class CatalysisResult:
    """Outcome of a catalyst search."""

    found: bool
    catalyst: Optional[CatalystSpec] = None
    joint_report: Optional[TransformationReport] = None
    examined: int = 0
    rejections: Dict[str, int] = field(default_factory=dict)
    solutions: List[CatalystSpec] = field(default_factory=list)
    catalyst_preserved: Optional[bool] = None
    grid_step: Optional[float] = None

    def rejections_by_step(self) -> Dict[int, int]:
        """Rejection counts keyed by the numbered decision step (1, 2 or 3)."""
        counts: Dict[int, int] = {}
        for name, count in self.rejections.items():
            step = FailingStep(name).step
            counts[step] = counts.get(step, 0) + count
        return dict(sorted(counts.items()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "found": self.found,
            "catalyst": None if self.catalyst is None else self.catalyst.to_dict(),
            "joint_report": None if self.joint_report is None else self.joint_report.to_dict(),
            "examined": self.examined,
            "rejections": dict(sorted(self.rejections.items())),
            "rejections_by_step": {str(k): v for k, v in self.rejections_by_step().items()},
            "solutions": [s.to_dict() for s in self.solutions],
            "catalyst_preserved": self.catalyst_preserved,
            "grid_step": self.grid_step,
        }


def build_catalyst(spec: CatalystSpec, layout: Optional[ModeLayout] = None) -> DensityOperator:
    """Four-mode catalyst state on a primed two-orbital layout."""
    return two_orbital_state(
        spec.R,
        spec.r1,
        spec.r2,
        alpha1=spec.gamma1,
        alpha2=spec.gamma2,
        layout=layout or ModeLayout.two_orbital(catalyst=True),
    )


@lru_cache(maxsize=64)
def _wedge_plan(
    basis_a: Tuple[OccupationState, ...],
    basis_b: Tuple[OccupationState, ...],
    joint_layout: ModeLayout,
) -> Tuple[Tuple[OccupationState, ...], np.ndarray, np.ndarray]:
    """Joint basis (lexicographic), permutation of Kronecker indices, wedge signs."""
    signed = [wedge_state(a, b, joint_layout) for a in basis_a for b in basis_b]
    order = sorted(range(len(signed)), key=lambda k: signed[k].state.occupations)
    basis = tuple(signed[k].state for k in order)
    signs = np.array([signed[k].sign for k in order], dtype=float)
    return basis, np.array(order), signs


def wedge_density(
    rho: DensityOperator, tau: DensityOperator, joint_layout: Optional[ModeLayout] = None
) -> DensityOperator:
    """``rho ∧ tau`` on the joint layout, with fermionic signs on every ket."""
    if joint_layout is None:
        joint_layout = wedge_layout(rho.layout, tau.layout)
    basis, order, signs = _wedge_plan(rho.basis, tau.basis, joint_layout)
    product = np.kron(rho.matrix, tau.matrix)[np.ix_(order, order)]
    return DensityOperator(basis, product * np.outer(signs, signs), joint_layout)


def joint_states(
    rho: DensityOperator, sigma: DensityOperator, tau: DensityOperator
) -> Tuple[DensityOperator, DensityOperator]:
    joint = wedge_layout(rho.layout, tau.layout)
    return wedge_density(rho, tau, joint), wedge_density(sigma, tau, joint)


def decide_catalyzed(
    rho: DensityOperator,
    sigma: DensityOperator,
    tau: DensityOperator,
    ssr: SsrKind,
    keep: Optional[str] = None,
    tol: Optional[Tolerances] = None,
) -> TransformationReport:
    """Run the decision on ``rho ∧ tau -> sigma ∧ tau``."""
    rho_joint, sigma_joint = joint_states(rho, sigma, tau)
    return decide(rho_joint, sigma_joint, ssr, keep=keep, tol=tol)


def joint_sector_weights(S: float, R: float) -> Tuple[float, float]:
    """(even-even, odd-odd) weights of a joint state whose factors have even-even
    weights S and R."""
    odd = S + R - 2.0 * S * R
    return 1.0 - R - S * (1.0 - 2.0 * R), odd


def joint_sector_purity(S: float) -> float:
    """Purity of each joint sector projection for an R = 1/2 catalyst."""
    return 1.0 - 2.0 * S * (1.0 - S)


def catalyst_preserved(
    sigma_joint: DensityOperator, tau: DensityOperator, atol: float = 1e-9
) -> bool:
    """True if the catalyst modes of ``sigma ∧ tau`` reduce back to ``tau``."""
    reduced = reduce_to_modes(sigma_joint, tau.layout)
    basis = tuple(sorted(set(reduced.basis) | set(tau.basis), key=lambda s: s.occupations))
    return bool(
        np.allclose(reduced.on_basis(basis).matrix, tau.on_basis(basis).matrix, rtol=0.0, atol=atol)
    )


def grid_values(step: float) -> List[float]:
    """``0, step, 2 step, ...`` up to and including 1."""
    count = int(math.floor(1.0 / step + 1e-9))
    values = [round(k * step, 12) for k in range(count + 1)]
    if values[-1] < 1.0 - 1e-12:
        values.append(1.0)
    return values


class CatalystSearch:
    """Deterministic lattice scan over the catalyst family."""

    def __init__(
        self,
        grid_step: float = 0.05,
        phase_steps: int = 1,
        max_workers: int = 1,
        collect_all: bool = False,
        tolerances: Optional[Tolerances] = None,
        keep: Optional[str] = None,
    ):
        if not 0.0 < grid_step <= 0.5:
            raise CatalystSpecError(f"grid_step={grid_step} must lie in (0, 0.5]")
        if phase_steps < 1:
            raise CatalystSpecError("phase_steps must be at least 1")
        self.grid_step = grid_step
        self.phase_steps = phase_steps
        self.max_workers = max(1, max_workers)
        self.collect_all = collect_all
        self.tolerances = tolerances or default_tolerances()
        self.keep = keep
        self.logger = logging.getLogger(__name__)

    def candidates(self) -> Iterator[CatalystSpec]:
        """R ascending, then r1, then r2, then the phases."""
        values = grid_values(self.grid_step)
        phases = [cmath.exp(2j * math.pi * k / self.phase_steps) for k in range(self.phase_steps)]
        phases[0] = 1.0
        for R, r1, r2, phase1, phase2 in itertools.product(values, values, values, phases, phases):
            yield CatalystSpec(R, r1, r2, phase1, phase2)

    def run(self, rho: DensityOperator, sigma: DensityOperator, ssr: SsrKind) -> CatalysisResult:
        if rho.layout != sigma.layout or rho.basis != sigma.basis:
            raise LayoutError("rho and sigma must share the same layout and basis")

        direct = decide(rho, sigma, ssr, keep=self.keep, tol=self.tolerances)
        if direct.possible:
            self.logger.warning("[SEARCH] rho -> sigma is already possible without a catalyst")

        catalyst_layout = ModeLayout.two_orbital(catalyst=True)
        joint = wedge_layout(rho.layout, catalyst_layout)
        result = CatalysisResult(found=False, grid_step=self.grid_step)
        self.logger.info(
            f"[SEARCH] Scanning catalysts on a {self.grid_step} lattice "
            f"({self.max_workers} worker(s), ssr={ssr.value})"
        )

        def evaluate(spec: CatalystSpec) -> TransformationReport:
            tau = build_catalyst(spec, catalyst_layout)
            rho_joint = wedge_density(rho, tau, joint)
            sigma_joint = wedge_density(sigma, tau, joint)
            return decide(rho_joint, sigma_joint, ssr, keep=self.keep, tol=self.tolerances)

        with closing(self._evaluations(evaluate)) as evaluations:
            for spec, report in evaluations:
                result.examined += 1
                if report.possible:
                    result.solutions.append(spec)
                    if not result.found:
                        result.found = True
                        result.catalyst = spec
                        result.joint_report = report
                    if not self.collect_all:
                        break
                else:
                    key = report.failing_step.value  # type: ignore[union-attr]
                    result.rejections[key] = result.rejections.get(key, 0) + 1

        if result.found and result.catalyst is not None:
            tau = build_catalyst(result.catalyst, catalyst_layout)
            result.catalyst_preserved = catalyst_preserved(wedge_density(sigma, tau, joint), tau)
            self.logger.info(
                f"[SEARCH] Found catalyst R={result.catalyst.R} r1={result.catalyst.r1} "
                f"r2={result.catalyst.r2} after {result.examined} candidates"
            )
        else:
            self.logger.info(
                f"[SEARCH] Exhausted {result.examined} candidates; rejections {result.rejections}"
            )
        return result

    def _evaluations(
        self, evaluate: Callable[[CatalystSpec], TransformationReport]
    ) -> Generator[Tuple[CatalystSpec, TransformationReport], None, None]:
        """Yield (spec, report) in lattice order, evaluating in parallel when configured."""
        candidates = self.candidates()
        if self.max_workers == 1:
            for spec in candidates:
                yield spec, evaluate(spec)
            return

        batch_size = self.max_workers * 8
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            while True:
                batch = list(itertools.islice(candidates, batch_size))
                if not batch:
                    return
                future_to_index = {
                    executor.submit(evaluate, spec): i for i, spec in enumerate(batch)
                }
                reports: Dict[int, TransformationReport] = {}
                for future in as_completed(future_to_index):
                    reports[future_to_index[future]] = future.result()
                # lowest lattice index first, so the reduction matches the sequential scan
                for i, spec in enumerate(batch):
                    yield spec, reports[i]


def search_catalyst(
    rho: DensityOperator,
    sigma: DensityOperator,
    ssr: SsrKind,
    grid_step: float = 0.05,
    phase_steps: int = 1,
    max_workers: int = 1,
    collect_all: bool = False,
    tol: Optional[Tolerances] = None,
    keep: Optional[str] = None,
) -> CatalysisResult:
    """Scan the catalyst lattice for a tau making ``rho ∧ tau -> sigma ∧ tau`` possible."""
    engine = CatalystSearch(grid_step, phase_steps, max_workers, collect_all, tol, keep)
    return engine.run(rho, sigma, ssr)


def get_search_engine(settings: Optional[Settings] = None) -> CatalystSearch:
    """
    Factory for a catalyst search engine configured from settings.

    Returns:
        CatalystSearch ready for ``run``
    """
    settings = settings or Settings()
    return CatalystSearch(
        grid_step=settings.grid_step,
        phase_steps=settings.phase_steps,
        max_workers=settings.max_workers,
        collect_all=settings.collect_all,
        tolerances=settings.tolerances,
        keep=settings.keep_party,
    )
