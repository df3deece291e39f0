"""
Text and JSON rendering of reports.

Text output uses colorama for the verdict line; ``click.echo`` strips the colour
codes when stdout is not a terminal. JSON output is key-sorted.
"""

import json
from typing import Any, Dict, List, Optional, Sequence

from colorama import Fore, Style

from ..config import Tolerances, default_tolerances
from ..core.majorization import ProbabilityVector, majorizes, partial_sums_desc
from ..core.operators import purity
from ..core.ssr import SectorDecomposition
from ..engine.catalysis import CatalysisResult, CatalystSpec
from ..engine.transform import TransformationReport, Verdict, schmidt_vector

VERDICT_COLORS = {
    Verdict.POSSIBLE: Fore.GREEN,
    Verdict.IMPOSSIBLE: Fore.RED,
    Verdict.UNDECIDABLE: Fore.YELLOW,
}


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.10g}"


def _vector(values: Optional[ProbabilityVector]) -> str:
    return "-" if values is None else str(values)


def decomposition_to_dict(
    decomposition: SectorDecomposition,
    keep: Optional[str] = None,
    tol: Optional[Tolerances] = None,
) -> Dict[str, Any]:
    """Per-sector weight, purity and (for pure sectors) Schmidt vector."""
    tol = tol or default_tolerances()
    sectors: List[Dict[str, Any]] = []
    for block in decomposition.sectors:
        entry: Dict[str, Any] = {
            "sector": str(block.label),
            "weight": block.weight,
            "purity": None,
            "pure": None,
            "schmidt": None,
        }
        if block.projection is not None:
            value = purity(block.projection)
            entry["purity"] = value
            entry["pure"] = value >= 1.0 - tol.purity
            if entry["pure"]:
                vector = schmidt_vector(block.projection, keep, tol)
                entry["schmidt"] = list(vector.sorted_desc())
        sectors.append(entry)
    chi_norm = decomposition.chi_norm()
    return {
        "ssr": decomposition.ssr.value,
        "sectors": sectors,
        "chi_max": chi_norm,
        "chi_zero": chi_norm <= tol.chi,
    }


def render_decomposition(summary: Dict[str, Any]) -> str:
    lines = [f"Sector decomposition (ssr={summary['ssr']})"]
    lines.append(f"  {'sector':<8} {'weight':>14} {'purity':>14}  schmidt")
    for entry in summary["sectors"]:
        if entry["schmidt"] is not None:
            schmidt = "{" + ", ".join(f"{v:.6g}" for v in entry["schmidt"]) + "}"
        elif entry["pure"] is False:
            schmidt = f"{Fore.YELLOW}mixed{Style.RESET_ALL}"
        else:
            schmidt = "-"
        lines.append(
            f"  {entry['sector']:<8} {_fmt(entry['weight']):>14} "
            f"{_fmt(entry['purity']):>14}  {schmidt}"
        )
    chi = "chi = 0" if summary["chi_zero"] else f"chi != 0 (max |chi| = {summary['chi_max']:.3g})"
    lines.append(f"  {chi}")
    return "\n".join(lines)


def partial_sum_table(
    x: ProbabilityVector, y: ProbabilityVector, names: Sequence[str] = ("x", "y")
) -> str:
    """Side-by-side descending partial sums of two vectors."""
    length = max(len(x), len(y))
    sx = partial_sums_desc(x.padded(length))
    sy = partial_sums_desc(y.padded(length))
    lines = [f"  {'k':>3} {'sum ' + names[0]:>14} {'sum ' + names[1]:>14}"]
    for k, (a, b) in enumerate(zip(sx, sy), start=1):
        mark = "" if b >= a - 1e-12 else f"  {Fore.RED}<{Style.RESET_ALL}"
        lines.append(f"  {k:>3} {a:>14.10g} {b:>14.10g}{mark}")
    return "\n".join(lines)


def verdict_line(report: TransformationReport) -> str:
    color = VERDICT_COLORS[report.verdict]
    text = f"{color}{report.verdict.value.upper()}{Style.RESET_ALL}"
    if report.failing_step is not None:
        text += f" (step {report.failing_step.step}: {report.failing_step.value})"
    return text


def render_report(report: TransformationReport, title: str = "rho -> sigma") -> str:
    lines = [
        f"{title}: {verdict_line(report)}",
        f"  ssr={report.ssr.value}  |chi_rho - chi_sigma|max={report.chi_distance:.3g}",
    ]
    for sector in report.per_sector:
        lines.append(
            f"  sector {sector.label}: "
            f"weight {_fmt(sector.weight_rho)} -> {_fmt(sector.weight_sigma)}, "
            f"purity {_fmt(sector.purity_rho)} -> {_fmt(sector.purity_sigma)}"
        )
        if sector.schmidt_rho is not None and sector.schmidt_sigma is not None:
            lines.append(
                f"    schmidt {_vector(sector.schmidt_rho)} -> {_vector(sector.schmidt_sigma)}"
                f"  majorized: {sector.majorization_ok}"
            )
            table = partial_sum_table(sector.schmidt_rho, sector.schmidt_sigma, ("rho", "sigma"))
            lines.append(table)
    return "\n".join(lines)


def _spec_line(spec: CatalystSpec) -> str:
    line = f"R={spec.R:g} r1={spec.r1:g} r2={spec.r2:g}"
    if complex(spec.phase1) != 1 or complex(spec.phase2) != 1:
        line += f" phase1={complex(spec.phase1):.4g} phase2={complex(spec.phase2):.4g}"
    return line


def render_catalysis(result: CatalysisResult) -> str:
    lines = []
    if result.found and result.catalyst is not None:
        lines.append(f"{Fore.GREEN}Catalyst found{Style.RESET_ALL}: {_spec_line(result.catalyst)}")
        lines.append(f"  examined {result.examined} lattice points (step {result.grid_step})")
        lines.append(f"  catalyst preserved: {result.catalyst_preserved}")
        if len(result.solutions) > 1:
            lines.append(f"  {len(result.solutions)} solutions:")
            lines.extend(f"    {_spec_line(s)}" for s in result.solutions)
        if result.joint_report is not None:
            lines.append(render_report(result.joint_report, "rho^tau -> sigma^tau"))
    else:
        lines.append(
            f"{Fore.RED}Search exhausted{Style.RESET_ALL}: no catalyst among "
            f"{result.examined} lattice points (step {result.grid_step})"
        )
    if result.rejections:
        lines.append("  rejections:")
        for name, count in sorted(result.rejections.items()):
            lines.append(f"    {name:<24} {count}")
        by_step = ", ".join(f"step {k}: {v}" for k, v in result.rejections_by_step().items())
        lines.append(f"    by step: {by_step}")
    return "\n".join(lines)


def majorization_to_dict(
    x: ProbabilityVector, y: ProbabilityVector, tol: Tolerances
) -> Dict[str, Any]:
    length = max(len(x), len(y))
    return {
        "x": list(x.sorted_desc()),
        "y": list(y.sorted_desc()),
        "partial_sums_x": partial_sums_desc(x.padded(length)),
        "partial_sums_y": partial_sums_desc(y.padded(length)),
        "x_majorized_by_y": majorizes(y, x, tol),
    }
