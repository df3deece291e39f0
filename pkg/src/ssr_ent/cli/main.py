"""
ssr-ent command line.

Commands:
  sectors   sector weights, purities and Schmidt vectors of one state
  check     decide rho -> sigma under SSR-restricted LOCC
  catalyze  search the catalyst lattice, or evaluate a given catalyst
  majorize  compare two probability vectors
  demo      annotated walkthroughs of the worked examples

Exit codes: 0 possible/pass, 1 impossible, 2 input error, 3 undecidable,
4 catalyst search exhausted.
"""

import functools
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Optional

import click
import colorama

from .. import __version__
from ..config import Settings, load_config
from ..core.majorization import ProbabilityVector, majorizes
from ..core.operators import DensityOperator
from ..core.ssr import SsrKind, decompose
from ..engine.catalysis import (
    build_catalyst,
    decide_catalyzed,
    get_search_engine,
    joint_states,
)
from ..engine.transform import decide
from ..errors import ConfigError, SsrEntError
from . import render
from .demos import DEMO_NAMES, run_demo
from .statefile import load_state, write_state

logger = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 2
EXIT_SEARCH_EXHAUSTED = 4
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class CliContext:
    settings: Settings
    seed: int

    def ssr(self, value: Optional[str]) -> SsrKind:
        try:
            return SsrKind.parse(value or self.settings.ssr)
        except ValueError as e:
            raise ConfigError(str(e))


def handle_errors(command: Callable[..., Any]) -> Callable[..., Any]:
    """Report library errors as ``path:line: message`` on stderr and exit 2."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except SsrEntError as e:
            logger.debug(f"[CLI] {type(e).__name__}: {e}")
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT_ERROR)

    return wrapper


def _emit_joint(
    directory: str, rho: DensityOperator, sigma: DensityOperator, tau: DensityOperator
) -> None:
    rho_joint, sigma_joint = joint_states(rho, sigma, tau)
    write_state(Path(directory) / "rho_joint.json", rho_joint)
    write_state(Path(directory) / "sigma_joint.json", sigma_joint)


ssr_option = click.option(
    "--ssr",
    type=click.Choice(["parity", "number"]),
    default=None,
    help="Local superselection rule (default from config: parity).",
)
json_option = click.option("--json", "as_json", is_flag=True, help="Emit machine-readable JSON.")
state_argument = functools.partial(click.argument, type=click.Path(dir_okay=False))


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="YAML configuration file (default config/ssr_ent.yaml or $SSR_ENT_CONFIG).",
)
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr.")
@click.option("--seed", type=int, default=7, show_default=True, help="Seed for sampled demo cases.")
@click.version_option(__version__, prog_name="ssr-ent")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], verbose: bool, seed: int) -> None:
    """Mode-entanglement transformations under local superselection rules."""
    try:
        settings = load_config(config_path)
    except SsrEntError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_INPUT_ERROR)

    level = logging.DEBUG if verbose else getattr(logging, settings.log_level, logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    ctx.obj = CliContext(settings=settings, seed=seed)


@cli.command()
@state_argument("state_path")
@ssr_option
@click.option(
    "--keep", default=None, help="Party kept by the partial trace (default: first party)."
)
@json_option
@click.pass_obj
@handle_errors
def sectors(
    obj: CliContext, state_path: str, ssr: Optional[str], keep: Optional[str], as_json: bool
) -> None:
    """Sector weights, purities and Schmidt vectors of STATE_PATH."""
    tol = obj.settings.tolerances
    rho = load_state(state_path, tol)
    decomposition = decompose(rho, obj.ssr(ssr), tol)
    summary = render.decomposition_to_dict(decomposition, keep or obj.settings.keep_party, tol)
    if as_json:
        click.echo(render.dump_json({"state": state_path, **summary}))
    else:
        click.echo(f"{state_path}")
        click.echo(render.render_decomposition(summary))


@cli.command()
@state_argument("rho_path")
@state_argument("sigma_path")
@ssr_option
@json_option
@click.pass_obj
@handle_errors
def check(
    obj: CliContext, rho_path: str, sigma_path: str, ssr: Optional[str], as_json: bool
) -> None:
    """Decide whether RHO_PATH converts into SIGMA_PATH."""
    tol = obj.settings.tolerances
    rho = load_state(rho_path, tol)
    sigma = load_state(sigma_path, tol)
    report = decide(rho, sigma, obj.ssr(ssr), keep=obj.settings.keep_party, tol=tol)
    if as_json:
        click.echo(render.dump_json(report.to_dict()))
    else:
        click.echo(render.render_report(report))
    sys.exit(report.verdict.exit_code)


@cli.command()
@state_argument("rho_path")
@state_argument("sigma_path")
@ssr_option
@click.option(
    "--grid-step", type=float, default=None, help="Lattice step for R, r1, r2 (default 0.05)."
)
@click.option(
    "--phase-steps", type=int, default=None, help="Roots of unity scanned for the coherences."
)
@click.option("--workers", type=int, default=None, help="Parallel evaluation threads.")
@click.option("--all", "collect_all", is_flag=True, help="Collect every successful lattice point.")
@click.option(
    "--apply",
    "apply_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Evaluate this catalyst state file instead of searching.",
)
@click.option(
    "--emit-catalyst",
    type=click.Path(dir_okay=False),
    default=None,
    help="Write the found catalyst as a state file.",
)
@click.option(
    "--emit-joint",
    type=click.Path(file_okay=False),
    default=None,
    help="Write rho_joint.json and sigma_joint.json into this directory.",
)
@json_option
@click.pass_obj
@handle_errors
def catalyze(
    obj: CliContext,
    rho_path: str,
    sigma_path: str,
    ssr: Optional[str],
    grid_step: Optional[float],
    phase_steps: Optional[int],
    workers: Optional[int],
    collect_all: bool,
    apply_path: Optional[str],
    emit_catalyst: Optional[str],
    emit_joint: Optional[str],
    as_json: bool,
) -> None:
    """Find a catalyst tau with RHO ^ tau -> SIGMA ^ tau, or test a given one."""
    settings = obj.settings
    tol = settings.tolerances
    rho = load_state(rho_path, tol)
    sigma = load_state(sigma_path, tol)
    kind = obj.ssr(ssr)

    if apply_path is not None:
        tau = load_state(apply_path, tol)
        report = decide_catalyzed(rho, sigma, tau, kind, keep=settings.keep_party, tol=tol)
        if emit_joint is not None:
            _emit_joint(emit_joint, rho, sigma, tau)
        if as_json:
            click.echo(render.dump_json(report.to_dict()))
        else:
            click.echo(render.render_report(report, "rho^tau -> sigma^tau"))
        sys.exit(report.verdict.exit_code)

    overrides = {
        "grid_step": grid_step,
        "phase_steps": phase_steps,
        "max_workers": None if workers is None else max(1, workers),
        "collect_all": True if collect_all else None,
    }
    engine = get_search_engine(
        replace(settings, **{k: v for k, v in overrides.items() if v is not None})
    )

    result = engine.run(rho, sigma, kind)
    if result.found and result.catalyst is not None:
        tau = build_catalyst(result.catalyst)
        if emit_catalyst is not None:
            write_state(emit_catalyst, tau)
        if emit_joint is not None:
            _emit_joint(emit_joint, rho, sigma, tau)

    if as_json:
        click.echo(render.dump_json(result.to_dict()))
    else:
        click.echo(render.render_catalysis(result))
    sys.exit(0 if result.found else EXIT_SEARCH_EXHAUSTED)


@cli.command()
@click.argument("x")
@click.argument("y")
@json_option
@click.pass_obj
@handle_errors
def majorize(obj: CliContext, x: str, y: str, as_json: bool) -> None:
    """Test X ≺ Y for comma-separated probability vectors."""
    tol = obj.settings.tolerances
    vx = ProbabilityVector.parse(x, tol)
    vy = ProbabilityVector.parse(y, tol)
    ok = majorizes(vy, vx, tol)
    if as_json:
        click.echo(render.dump_json(render.majorization_to_dict(vx, vy, tol)))
    else:
        click.echo(f"x = {vx}\ny = {vy}")
        click.echo(render.partial_sum_table(vx, vy))
        click.echo(f"x {'is' if ok else 'is not'} majorized by y")
    sys.exit(0 if ok else 1)


@cli.command()
@click.argument("name", type=click.Choice(DEMO_NAMES))
@click.pass_obj
@handle_errors
def demo(obj: CliContext, name: str) -> None:
    """Run an annotated walkthrough (example1 or example2)."""
    passed = run_demo(name, click.echo, seed=obj.seed, tol=obj.settings.tolerances)
    sys.exit(0 if passed else 1)


def main() -> None:
    """Console entry point."""
    colorama.just_fix_windows_console()
    cli(prog_name="ssr-ent")


if __name__ == "__main__":
    main()
