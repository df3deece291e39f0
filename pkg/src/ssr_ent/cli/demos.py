"""
Annotated walkthroughs of the two worked examples.

``example2``: parity can be moved between sectors with a catalyst. The
uncatalyzed conversion fails at the sector-weight step. With the R = 1/2 catalyst
the joint Schmidt vectors factorize and majorization holds in both sectors.

``example1``: when only one sector fails majorization, no catalyst of the
two-orbital family repairs it. R in {0, 1} multiplies both sectors by the same
Schmidt vector, and any other R mixes the sectors.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from colorama import Fore, Style

from ..config import Tolerances, default_tolerances
from ..core.majorization import ProbabilityVector
from ..core.operators import DensityOperator, purity
from ..core.ssr import SsrKind, decompose, two_orbital_state
from ..engine.catalysis import (
    CatalystSearch,
    CatalystSpec,
    build_catalyst,
    decide_catalyzed,
    joint_sector_purity,
    joint_sector_weights,
    joint_states,
)
from ..engine.transform import FailingStep, Verdict, decide, schmidt_vector
from .render import partial_sum_table, render_catalysis, render_report

logger = logging.getLogger(__name__)

GOLDEN_TOL = 1e-9
DEMO_NAMES = ("example1", "example2")


@dataclass
class GoldenChecks:
    """Accumulates named pass/fail checks and echoes each one."""

    echo: Callable[[str], None]
    results: List[bool] = field(default_factory=list)

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        mark = f"{Fore.GREEN}PASS{Style.RESET_ALL}" if ok else f"{Fore.RED}FAIL{Style.RESET_ALL}"
        self.echo(f"  [{mark}] {name}" + (f"  ({detail})" if detail else ""))
        self.results.append(bool(ok))
        return bool(ok)

    def close(self, values: Sequence[float], expected: Sequence[float], name: str) -> bool:
        got = sorted(values)
        want = sorted(expected)
        ok = len(got) == len(want) and all(abs(a - b) <= GOLDEN_TOL for a, b in zip(got, want))
        shown = "{" + ", ".join(f"{v:.10g}" for v in got) + "}"
        target = "{" + ", ".join(f"{v:g}" for v in want) + "}"
        return self.check(name, ok, f"got {shown}, expected {target}")

    @property
    def passed(self) -> bool:
        return all(self.results)


def example2_states() -> Tuple[DensityOperator, DensityOperator, DensityOperator]:
    """(rho, sigma, tau) of the parity-changing example."""
    rho = two_orbital_state(1.0, 0.16, 0.5)
    sigma = two_orbital_state(0.0, 0.5, 0.09)
    tau = build_catalyst(CatalystSpec(0.5, 0.25, 0.25))
    return rho, sigma, tau


def example1_states(
    S: float = 0.5, p: Sequence[float] = (0.16, 0.1), q: Sequence[float] = (0.09, 0.3)
) -> Tuple[DensityOperator, DensityOperator]:
    """Equal sector weights; sigma majorizes rho in the even sector only."""
    return two_orbital_state(S, p[0], p[1]), two_orbital_state(S, q[0], q[1])


def _sector_schmidt(rho: DensityOperator, tol: Tolerances) -> Dict[str, ProbabilityVector]:
    vectors = {}
    for block in decompose(rho, SsrKind.LOCAL_PARITY, tol).sectors:
        if block.projection is not None:
            vectors[str(block.label)] = schmidt_vector(block.projection, tol=tol)
    return vectors


def run_example2(echo: Callable[[str], None], tol: Optional[Tolerances] = None) -> bool:
    tol = tol or default_tolerances()
    checks = GoldenChecks(echo)
    rho, sigma, tau = example2_states()

    echo("Example: changing the local parity with a catalyst")
    echo("  rho   = 0.4|00,11> + sqrt(0.84)|11,00>   (even-even sector only)")
    echo("  sigma = 0.3|01,10> + sqrt(0.91)|10,01>   (odd-odd sector only)")
    echo("  tau   = (|Psi><Psi| + |Phi><Phi|)/2, Psi = 0.5|00,11> + sqrt(0.75)|11,00>, "
         "Phi = 0.5|01,10> + sqrt(0.75)|10,01>")
    echo("")

    echo("Without a catalyst:")
    direct = decide(rho, sigma, SsrKind.LOCAL_PARITY, tol=tol)
    echo(render_report(direct))
    checks.check(
        "rho -> sigma is impossible at the sector-weight step",
        direct.verdict is Verdict.IMPOSSIBLE
        and direct.failing_step is FailingStep.SECTOR_WEIGHT_MISMATCH,
        f"{direct.verdict.value}, step {direct.failing_step.step if direct.failing_step else '-'}",
    )
    echo("")

    echo("Catalyst sectors:")
    for label, vector in _sector_schmidt(tau, tol).items():
        echo(f"  tau sector {label}: schmidt {vector}")
    echo("")

    rho_joint, sigma_joint = joint_states(rho, sigma, tau)
    dec_rho = decompose(rho_joint, SsrKind.LOCAL_PARITY, tol)
    dec_sigma = decompose(sigma_joint, SsrKind.LOCAL_PARITY, tol)
    even, odd = joint_sector_weights(1.0, 0.5)
    weights_rho = [b.weight for b in dec_rho.sectors if b.weight > tol.weight]
    weights_sigma = [b.weight for b in dec_sigma.sectors if b.weight > tol.weight]
    checks.check(
        "joint sector weights agree at R = 1/2",
        np.allclose(weights_rho, [even, odd], atol=GOLDEN_TOL)
        and np.allclose(weights_sigma, [even, odd], atol=GOLDEN_TOL),
        f"rho' {weights_rho}, sigma' {weights_sigma}",
    )
    for block in dec_rho.sectors + dec_sigma.sectors:
        if block.projection is not None:
            value = purity(block.projection)
            expected = joint_sector_purity(1.0)
            echo(f"  joint sector {block.label}: purity {value:.12g} (expected {expected:g})")

    joint = decide(rho_joint, sigma_joint, SsrKind.LOCAL_PARITY, tol=tol)
    for sector in joint.per_sector:
        if sector.schmidt_rho is None or sector.schmidt_sigma is None:
            continue
        echo(f"  sector {sector.label}:")
        echo(partial_sum_table(sector.schmidt_rho, sector.schmidt_sigma, ("rho'", "sigma'")))
        checks.close(
            sector.schmidt_rho.values,
            [0.04, 0.12, 0.21, 0.63],
            f"rho' schmidt vector ({sector.label})",
        )
        checks.close(
            sector.schmidt_sigma.values,
            [0.0225, 0.0675, 0.2275, 0.6825],
            f"sigma' schmidt vector ({sector.label})",
        )
    populated = [s for s in joint.per_sector if s.majorization_ok is not None]
    checks.check(
        "rho' is majorized by sigma' in both joint sectors",
        len(populated) == 2 and all(s.majorization_ok for s in populated),
    )
    checks.check(
        "rho ^ tau -> sigma ^ tau is possible",
        joint.verdict is Verdict.POSSIBLE,
        joint.verdict.value,
    )
    echo("")
    echo(_summary(checks))
    return checks.passed


def _random_example1_pair(
    rng: np.random.Generator,
) -> Tuple[float, Tuple[float, float], Tuple[float, float]]:
    """Random pair with equal weights where only the odd sector fails majorization."""
    S = float(rng.uniform(0.2, 0.8))
    big_rho_even, big_rho_odd = sorted(float(v) for v in rng.uniform(0.5, 0.95, size=2))
    big_sigma_even = float(rng.uniform(big_rho_even, 0.99))
    big_sigma_odd = float(rng.uniform(0.5, big_rho_odd))
    p = (1.0 - big_rho_even, 1.0 - big_rho_odd)
    q = (1.0 - big_sigma_even, 1.0 - big_sigma_odd)
    return S, p, q


def run_example1(
    echo: Callable[[str], None],
    seed: int = 7,
    tol: Optional[Tolerances] = None,
    samples: int = 3,
) -> bool:
    tol = tol or default_tolerances()
    checks = GoldenChecks(echo)
    rho, sigma = example1_states()

    echo("Example: a single-sector majorization failure cannot be catalyzed")
    echo("  rho   = 0.5 rho_e(p1=0.16) + 0.5 rho_o(p2=0.1)")
    echo("  sigma = 0.5 sigma_e(q1=0.09) + 0.5 sigma_o(q2=0.3)")
    echo("")
    direct = decide(rho, sigma, SsrKind.LOCAL_PARITY, tol=tol)
    echo(render_report(direct))
    failing = [str(s.label) for s in direct.per_sector if s.majorization_ok is False]
    checks.check(
        "rho -> sigma fails majorization in exactly one sector",
        direct.failing_step is FailingStep.MAJORIZATION_FAILURE and len(failing) == 1,
        f"failing sectors {failing}",
    )
    echo("")

    echo("Catalysts with R in {0, 1} scale both sectors by the catalyst's Schmidt vector:")
    for R in (0.0, 1.0):
        for r in (0.0, 0.25, 0.5):
            tau = build_catalyst(CatalystSpec(R, r, r))
            report = decide_catalyzed(rho, sigma, tau, SsrKind.LOCAL_PARITY, tol=tol)
            checks.check(
                f"R={R:g} r1=r2={r:g} rejected by majorization",
                report.failing_step is FailingStep.MAJORIZATION_FAILURE,
                report.verdict.value,
            )

    tau = build_catalyst(CatalystSpec(0.5, 0.25, 0.25))
    report = decide_catalyzed(rho, sigma, tau, SsrKind.LOCAL_PARITY, tol=tol)
    checks.check(
        "R=0.5 mixes the joint sectors",
        report.failing_step is FailingStep.IMPURITY_IN_SECTOR,
        report.verdict.value,
    )
    echo("")

    echo("Coarse lattice search (step 0.25):")
    result = CatalystSearch(grid_step=0.25, tolerances=tol).run(rho, sigma, SsrKind.LOCAL_PARITY)
    echo(render_catalysis(result))
    checks.check(
        "search exhausts with every rejection at step 3",
        not result.found and set(result.rejections_by_step()) == {3},
    )
    echo("")

    rng = np.random.default_rng(seed)
    echo(f"Sampled pairs (seed {seed}):")
    for _ in range(samples):
        S, p, q = _random_example1_pair(rng)
        rho_s, sigma_s = example1_states(S, p, q)
        base = decide(rho_s, sigma_s, SsrKind.LOCAL_PARITY, tol=tol)
        rejected = base.failing_step is FailingStep.MAJORIZATION_FAILURE
        for R in (0.0, 1.0):
            r = float(rng.uniform(0.0, 1.0))
            report = decide_catalyzed(
                rho_s, sigma_s, build_catalyst(CatalystSpec(R, r, r)), SsrKind.LOCAL_PARITY, tol=tol
            )
            rejected = rejected and report.failing_step is FailingStep.MAJORIZATION_FAILURE
        checks.check(
            f"S={S:.3f} p=({p[0]:.3f}, {p[1]:.3f}) q=({q[0]:.3f}, {q[1]:.3f}) stays impossible",
            rejected,
        )
    echo("")
    echo(_summary(checks))
    return checks.passed


def _summary(checks: GoldenChecks) -> str:
    total = len(checks.results)
    passed = sum(checks.results)
    if checks.passed:
        return f"{Fore.GREEN}PASS{Style.RESET_ALL}: {passed}/{total} checks"
    return f"{Fore.RED}FAIL{Style.RESET_ALL}: {passed}/{total} checks"


def run_demo(
    name: str, echo: Callable[[str], None], seed: int = 7, tol: Optional[Tolerances] = None
) -> bool:
    """Run a walkthrough by name; True when every golden check passed."""
    if name == "example2":
        return run_example2(echo, tol)
    if name == "example1":
        return run_example1(echo, seed, tol)
    raise ValueError(f"unknown demo {name!r}")
