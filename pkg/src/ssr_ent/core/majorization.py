"""
Probability vectors and the majorization preorder.

``majorizes(y, x)`` is Nielsen's criterion ``x ≺ y``: a pure state with Schmidt
vector x converts into one with Schmidt vector y under LOCC iff it holds.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import Tolerances, default_tolerances
from ..errors import MajorizationInputError


@dataclass(frozen=True)
class ProbabilityVector:
    """
    Nonnegative reals summing to one. Tiny negative entries are clamped to 0.

    ``tol`` sets the ``psd`` and ``total`` bounds used to validate; defaults apply when omitted.
    """

    values: Tuple[float, ...]
    tol: Optional[Tolerances] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        tol = self.tol or default_tolerances()
        values = tuple(float(v) for v in self.values)
        if not values:
            raise MajorizationInputError("a probability vector needs at least one entry")
        if min(values) < -tol.psd:
            raise MajorizationInputError(f"negative entry {min(values):.3e} in {values}")
        values = tuple(max(v, 0.0) for v in values)
        if abs(sum(values) - 1.0) > tol.total:
            raise MajorizationInputError(f"entries sum to {sum(values):.12g}, not 1")
        object.__setattr__(self, "values", values)

    @classmethod
    def parse(cls, text: str, tol: Optional[Tolerances] = None) -> "ProbabilityVector":
        """``"0.04,0.12,0.21,0.63"`` (braces and spaces allowed)."""
        cleaned = text.strip().strip("{}[]()")
        try:
            values = tuple(float(x) for x in cleaned.split(",") if x.strip())
        except ValueError:
            raise MajorizationInputError(f"cannot parse probability vector {text!r}")
        return cls(values, tol)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def total(self) -> float:
        return float(sum(self.values))

    def sorted_desc(self) -> Tuple[float, ...]:
        return tuple(sorted(self.values, reverse=True))

    def padded(self, length: int) -> "ProbabilityVector":
        if length < len(self.values):
            raise ValueError("cannot pad to a shorter length")
        return ProbabilityVector(self.values + (0.0,) * (length - len(self.values)), self.tol)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{v:.6g}" for v in self.sorted_desc()) + "}"


def partial_sums_desc(x: ProbabilityVector) -> List[float]:
    """Cumulative sums of ``x`` sorted in descending order."""
    return [float(v) for v in np.cumsum(x.sorted_desc())]


def _aligned(x: ProbabilityVector, length: int) -> np.ndarray:
    return np.array(x.sorted_desc() + (0.0,) * (length - len(x)))


def majorizes(
    y: ProbabilityVector, x: ProbabilityVector, tol: Optional[Tolerances] = None
) -> bool:
    """True iff ``x ≺ y``: every leading partial sum of y dominates that of x."""
    tol = tol or default_tolerances()
    if abs(x.total - y.total) > tol.total:
        raise MajorizationInputError(f"totals differ: {x.total:.12g} vs {y.total:.12g}")
    length = max(len(x), len(y))
    cx = np.cumsum(_aligned(x, length))
    cy = np.cumsum(_aligned(y, length))
    return bool(np.all(cy >= cx - tol.majorization))


def majorization_gaps(
    y: ProbabilityVector, x: ProbabilityVector
) -> Sequence[float]:
    """Partial-sum differences ``sum_k y - sum_k x`` (all >= 0 iff x ≺ y)."""
    length = max(len(x), len(y))
    return [float(v) for v in np.cumsum(_aligned(y, length)) - np.cumsum(_aligned(x, length))]
