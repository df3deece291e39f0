"""
JSON state files.

A state file declares a layout, an optional basis and exactly one of three
forms::

    {
      "layout": "two-orbital",
      "basis": {"parity": 0, "number": 2, "spin_z": 0},
      "pure": [[0.4, "00,11"], [0.916515138991168, "11,00"]]
    }

``layout`` is a preset name (``two-orbital``, ``two-orbital-catalyst``,
``two-orbital-joint``), a ``{party: [modes]}`` mapping, or
``{"parties": [...], "segments": [[[modes of party 1], ...], ...]}``.
``basis`` is either a constraint mapping or a list of occupation strings; two-orbital
presets default to the two-electron singlet basis, other layouts to the full Fock space.
Files whose basis would exceed 256 kets are rejected before enumeration.

Forms:
  - ``pure``: list of ``[amplitude, occupation]``
  - ``mixed``: list of ``{"weight": w, "pure": [...]}``
  - ``matrix``: dense rows over the basis

Amplitudes and matrix entries are numbers or ``[re, im]`` pairs.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import Tolerances, default_tolerances
from ..core.fock import (
    TWO_ELECTRON_SINGLET,
    BasisConstraint,
    ModeLayout,
    OccupationState,
    basis_dimension,
    enumerate_basis,
    parse_occupation,
    wedge_layout,
)
from ..core.operators import MAX_DIMENSION, DensityOperator, mixture, pure_state
from ..errors import SsrEntError, StateFileError

logger = logging.getLogger(__name__)

FORMS = ("pure", "mixed", "matrix")


def _presets() -> Dict[str, ModeLayout]:
    system = ModeLayout.two_orbital()
    catalyst = ModeLayout.two_orbital(catalyst=True)
    return {
        "two-orbital": system,
        "two-orbital-catalyst": catalyst,
        "two-orbital-joint": wedge_layout(system, catalyst),
    }


def _line_of(text: str, needle: str) -> Optional[int]:
    """1-based line of the first occurrence of ``needle`` in the raw file."""
    position = text.find(needle)
    if position < 0:
        return None
    return text.count("\n", 0, position) + 1


class _Reader:
    """Turns a decoded JSON document into a density operator, anchoring errors to lines."""

    def __init__(self, path: str, text: str, tol: Tolerances):
        self.path = path
        self.text = text
        self.tol = tol

    def fail(self, message: str, anchor: Optional[str] = None) -> StateFileError:
        line = _line_of(self.text, anchor) if anchor else None
        return StateFileError(self.path, message, line)

    def layout(self, spec: Any) -> Tuple[ModeLayout, Optional[str]]:
        if spec is None:
            raise self.fail("missing 'layout'")
        try:
            if isinstance(spec, str):
                presets = _presets()
                if spec not in presets:
                    raise self.fail(
                        f"unknown layout preset {spec!r} (choose from {', '.join(presets)})",
                        f'"{spec}"',
                    )
                return presets[spec], spec
            if isinstance(spec, dict) and "segments" in spec:
                parties = tuple(spec.get("parties") or ())
                segments = tuple(
                    tuple(tuple(modes) for modes in segment) for segment in spec["segments"]
                )
                return ModeLayout(parties=parties, segments=segments), None
            if isinstance(spec, dict):
                return ModeLayout.build({p: list(m) for p, m in spec.items()}), None
        except StateFileError:
            raise
        except SsrEntError as e:
            raise self.fail(str(e), '"layout"')
        except (TypeError, ValueError) as e:
            raise self.fail(f"invalid layout: {e}", '"layout"')
        raise self.fail("'layout' must be a preset name or a mapping", '"layout"')

    def basis(
        self, spec: Any, layout: ModeLayout, preset: Optional[str]
    ) -> Tuple[OccupationState, ...]:
        if spec is None:
            if preset in ("two-orbital", "two-orbital-catalyst"):
                return self.enumerated(layout, TWO_ELECTRON_SINGLET, '"layout"')
            return self.enumerated(layout, None, '"layout"')
        if isinstance(spec, dict):
            try:
                constraint = BasisConstraint.from_mapping(spec)
            except (TypeError, ValueError) as e:
                raise self.fail(f"invalid basis constraint: {e}", '"basis"')
            return self.enumerated(layout, constraint, '"basis"')
        if isinstance(spec, list):
            if len(spec) > MAX_DIMENSION:
                raise self.fail(
                    f"basis lists {len(spec)} kets, above the dense limit of {MAX_DIMENSION}",
                    '"basis"',
                )
            states = [self.occupation(label, layout) for label in spec]
            if len(set(states)) != len(states):
                raise self.fail("basis lists a ket twice", '"basis"')
            return tuple(states)
        raise self.fail("'basis' must be a constraint mapping or a list of kets", '"basis"')

    def enumerated(
        self, layout: ModeLayout, constraint: Optional[BasisConstraint], anchor: str
    ) -> Tuple[OccupationState, ...]:
        dim = basis_dimension(layout, constraint)
        if dim > MAX_DIMENSION:
            raise self.fail(
                f"basis dimension {dim} over {layout.n_modes} modes exceeds "
                f"the dense limit of {MAX_DIMENSION}",
                anchor,
            )
        return tuple(enumerate_basis(layout, constraint))

    def occupation(self, label: Any, layout: ModeLayout) -> OccupationState:
        if not isinstance(label, str):
            raise self.fail(f"occupation {label!r} must be a string")
        try:
            return parse_occupation(label, layout)
        except SsrEntError as e:
            raise self.fail(str(e), f'"{label}"')

    def number(self, value: Any, anchor: str) -> complex:
        if isinstance(value, bool):
            raise self.fail(f"{value!r} is not a number", anchor)
        if isinstance(value, (int, float)):
            return complex(value)
        if (
            isinstance(value, list)
            and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
        ):
            return complex(value[0], value[1])
        raise self.fail(f"{value!r} is neither a number nor an [re, im] pair", anchor)

    def terms(
        self, spec: Any, layout: ModeLayout, anchor: str
    ) -> List[Tuple[complex, OccupationState]]:
        if not isinstance(spec, list) or not spec:
            raise self.fail("a pure state is a non-empty list of [amplitude, occupation]", anchor)
        terms = []
        for entry in spec:
            if not isinstance(entry, list) or len(entry) != 2:
                raise self.fail(f"term {entry!r} must be [amplitude, occupation]", anchor)
            amplitude, label = entry
            state = self.occupation(label, layout)
            terms.append((self.number(amplitude, f'"{label}"'), state))
        return terms

    def pure(
        self, spec: Any, layout: ModeLayout, basis: Sequence[OccupationState], anchor: str
    ) -> DensityOperator:
        terms = self.terms(spec, layout, anchor)
        try:
            return pure_state(layout, basis, terms, norm_tol=self.tol.total)
        except SsrEntError as e:
            raise self.fail(str(e), anchor)

    def mixed(
        self, spec: Any, layout: ModeLayout, basis: Sequence[OccupationState]
    ) -> DensityOperator:
        if not isinstance(spec, list) or not spec:
            raise self.fail("'mixed' must be a non-empty list", '"mixed"')
        components = []
        for component in spec:
            if not isinstance(component, dict) or not component.keys() >= {"weight", "pure"}:
                raise self.fail("each mixed component needs 'weight' and 'pure'", '"mixed"')
            weight = self.number(component["weight"], '"weight"')
            if weight.imag != 0:
                raise self.fail("mixture weights must be real", '"weight"')
            components.append((weight.real, self.pure(component["pure"], layout, basis, '"pure"')))
        try:
            return mixture(components, weight_tol=self.tol.total)
        except SsrEntError as e:
            raise self.fail(str(e), '"mixed"')

    def matrix(
        self, spec: Any, layout: ModeLayout, basis: Sequence[OccupationState]
    ) -> DensityOperator:
        if not isinstance(spec, list) or any(not isinstance(row, list) for row in spec):
            raise self.fail("'matrix' must be a list of rows", '"matrix"')
        if len(spec) != len(basis) or any(len(row) != len(basis) for row in spec):
            raise self.fail(
                f"matrix must be {len(basis)}x{len(basis)} to match the basis", '"matrix"'
            )
        values = np.array(
            [[self.number(v, '"matrix"') for v in row] for row in spec], dtype=complex
        )
        return DensityOperator(tuple(basis), values, layout)


def parse_state(
    document: str, path: str = "<string>", tol: Optional[Tolerances] = None
) -> DensityOperator:
    """Parse and validate the JSON text of a state file."""
    tol = tol or default_tolerances()
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise StateFileError(path, f"invalid JSON: {e.msg}", e.lineno)
    if not isinstance(data, dict):
        raise StateFileError(path, "top level must be a JSON object", 1)

    reader = _Reader(path, document, tol)
    forms = [name for name in FORMS if name in data]
    if len(forms) != 1:
        raise reader.fail(f"expected exactly one of {', '.join(FORMS)}, found {forms or 'none'}")

    layout, preset = reader.layout(data.get("layout"))
    basis = reader.basis(data.get("basis"), layout, preset)
    form = forms[0]
    if form == "pure":
        rho = reader.pure(data["pure"], layout, basis, '"pure"')
    elif form == "mixed":
        rho = reader.mixed(data["mixed"], layout, basis)
    else:
        rho = reader.matrix(data["matrix"], layout, basis)

    try:
        rho.validate(tol)
    except SsrEntError as e:
        raise reader.fail(str(e), f'"{form}"')
    logger.debug(f"[STATEFILE] Loaded {path}: {form} state, dim {rho.dim}")
    return rho


def load_state(path: Union[str, Path], tol: Optional[Tolerances] = None) -> DensityOperator:
    """Read and validate a state file."""
    try:
        with open(path) as f:
            document = f.read()
    except OSError as e:
        raise StateFileError(str(path), f"cannot read file: {e.strerror}")
    return parse_state(document, str(path), tol)


def _layout_spec(layout: ModeLayout) -> Union[str, Dict[str, Any]]:
    for name, preset in _presets().items():
        if preset == layout:
            return name
    return {
        "parties": list(layout.parties),
        "segments": [[list(modes) for modes in segment] for segment in layout.segments],
    }


def _entry(value: complex) -> Union[float, List[float]]:
    value = complex(value)
    if value.imag == 0:
        return float(value.real)
    return [float(value.real), float(value.imag)]


def state_to_dict(rho: DensityOperator) -> Dict[str, Any]:
    """Matrix-form state file content."""
    return {
        "layout": _layout_spec(rho.layout),
        "basis": [state.label for state in rho.basis],
        "matrix": [[_entry(v) for v in row] for row in rho.matrix],
    }


_NUMBER_ROW = re.compile(r"\[\s*([^\[\]]*?)\s*\]", re.S)


def write_state(path: Union[str, Path], rho: DensityOperator) -> Path:
    """Write ``rho`` as a matrix-form state file; returns the path written."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    document = json.dumps(state_to_dict(rho), indent=2, sort_keys=True)
    # keep [re, im] pairs on one line
    document = _NUMBER_ROW.sub(
        lambda m: "[" + ", ".join(part.strip() for part in m.group(1).split(",")) + "]"
        if "\n" in m.group(0) and '"' not in m.group(0)
        else m.group(0),
        document,
    )
    with open(path, "w") as f:
        f.write(document + "\n")
    logger.info(f"[STATEFILE] Wrote {path} ({rho.dim}x{rho.dim})")
    return path
