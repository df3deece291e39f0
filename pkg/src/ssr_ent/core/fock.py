"""
Fermionic occupation-number basis.

A ket ``|n>`` over a layout stands for the creation operators of its occupied
modes applied to the vacuum in canonical order. Canonical order groups modes by
party, and inside a party keeps system modes before catalyst modes, so tracing
out a party is a contiguous contraction once the kept party is moved first.

Occupation strings follow the ket notation without brackets: ``"00,11"``
(comma between parties, spin-up bit before spin-down bit) and ``"00,00;11,11"``
for joint states (semicolon between the system and catalyst segments).
"""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from ..errors import LayoutError

logger = logging.getLogger(__name__)

SPIN_UP = ".up"
SPIN_DOWN = ".dn"


@dataclass(frozen=True)
class ModeLayout:
    """
    Parties and their modes, split into segments (system, catalyst, ...).

    ``segments[s][k]`` holds the modes party ``parties[k]`` owns in segment ``s``.
    """

    parties: Tuple[str, ...]
    segments: Tuple[Tuple[Tuple[str, ...], ...], ...]

    def __post_init__(self):
        if not self.parties:
            raise LayoutError("a layout needs at least one party")
        if len(set(self.parties)) != len(self.parties):
            raise LayoutError(f"duplicate party labels in {self.parties}")
        if not self.segments:
            raise LayoutError("a layout needs at least one segment")
        for segment in self.segments:
            if len(segment) != len(self.parties):
                raise LayoutError(
                    f"segment {segment} does not list modes for every party {self.parties}"
                )
        labels = [mode for segment in self.segments for modes in segment for mode in modes]
        if not all(isinstance(x, str) for x in (*self.parties, *labels)):
            raise LayoutError("party and mode labels must be strings")
        if len(set(labels)) != len(labels):
            raise LayoutError(f"mode labels must be unique, got {labels}")

    @classmethod
    def build(cls, modes_per_party: Mapping[str, Sequence[str]]) -> "ModeLayout":
        """Single-segment layout from ``{party: modes}`` (insertion order is kept)."""
        parties = tuple(modes_per_party.keys())
        segment = tuple(tuple(modes_per_party[p]) for p in parties)
        return cls(parties=parties, segments=(segment,))

    @classmethod
    def two_orbital(cls, catalyst: bool = False) -> "ModeLayout":
        """One spin orbital per party: ``A.up, A.dn | B.up, B.dn`` (primed for a catalyst)."""
        prime = "'" if catalyst else ""
        return cls.build(
            {
                "A": (f"A{prime}{SPIN_UP}", f"A{prime}{SPIN_DOWN}"),
                "B": (f"B{prime}{SPIN_UP}", f"B{prime}{SPIN_DOWN}"),
            }
        )

    def modes_of(self, party: str) -> Tuple[str, ...]:
        """Modes of ``party`` in canonical order (system segment first)."""
        k = self._party_index(party)
        return tuple(mode for segment in self.segments for mode in segment[k])

    @cached_property
    def canonical_order(self) -> Tuple[str, ...]:
        return tuple(mode for party in self.parties for mode in self.modes_of(party))

    @cached_property
    def mode_index(self) -> Dict[str, int]:
        return {mode: i for i, mode in enumerate(self.canonical_order)}

    @property
    def n_modes(self) -> int:
        return len(self.canonical_order)

    def party_of(self, mode: str) -> str:
        for party in self.parties:
            if mode in self.modes_of(party):
                return party
        raise LayoutError(f"unknown mode {mode!r}")

    def restrict(self, party: str) -> "ModeLayout":
        """Layout of a single party, keeping its segment structure."""
        k = self._party_index(party)
        return ModeLayout(
            parties=(party,),
            segments=tuple((segment[k],) for segment in self.segments),
        )

    def _party_index(self, party: str) -> int:
        try:
            return self.parties.index(party)
        except ValueError:
            raise LayoutError(f"unknown party {party!r}; layout has {self.parties}")


def spin_of(mode: str) -> int:
    """Twice the spin projection carried by a mode label (+1, -1, or 0 if unlabeled)."""
    if mode.endswith(SPIN_UP):
        return 1
    if mode.endswith(SPIN_DOWN):
        return -1
    return 0


@dataclass(frozen=True)
class OccupationState:
    """Basis ket: one occupation bit per mode, in the layout's canonical order."""

    occupations: Tuple[int, ...]
    layout: ModeLayout

    def __post_init__(self):
        if len(self.occupations) != self.layout.n_modes:
            raise LayoutError(
                f"{len(self.occupations)} occupation bits for {self.layout.n_modes} modes"
            )
        if any(bit not in (0, 1) for bit in self.occupations):
            raise LayoutError(f"occupations must be 0/1 bits, got {self.occupations}")

    @property
    def occupied_modes(self) -> Tuple[str, ...]:
        order = self.layout.canonical_order
        return tuple(order[i] for i, bit in enumerate(self.occupations) if bit)

    def bits_of(self, modes: Sequence[str]) -> Tuple[int, ...]:
        index = self.layout.mode_index
        return tuple(self.occupations[index[m]] for m in modes)

    def number(self, party: str) -> int:
        """Local particle number of ``party``."""
        return sum(self.bits_of(self.layout.modes_of(party)))

    def parity(self, party: str) -> int:
        """Local parity of ``party`` (0 even, 1 odd)."""
        return self.number(party) % 2

    @property
    def total_number(self) -> int:
        return sum(self.occupations)

    @property
    def total_parity(self) -> int:
        return self.total_number % 2

    @property
    def spin_z2(self) -> int:
        """Twice the total spin projection."""
        return sum(spin_of(m) for m in self.occupied_modes)

    @property
    def label(self) -> str:
        chunks = []
        for segment in self.layout.segments:
            chunks.append(
                ",".join("".join(str(b) for b in self.bits_of(modes)) for modes in segment)
            )
        return ";".join(chunks)

    def __str__(self) -> str:
        return f"|{self.label}>"


@dataclass(frozen=True)
class SignedState:
    """A basis ket with the phase picked up while re-sorting its creation operators."""

    state: OccupationState
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class BasisConstraint:
    """Optional filters on total parity, total particle number and total spin."""

    parity: Optional[int] = None
    number: Optional[int] = None
    spin_z2: Optional[int] = None

    @classmethod
    def from_mapping(cls, values: Mapping[str, object]) -> "BasisConstraint":
        parity, number, spin = (values.get(k) for k in ("parity", "number", "spin_z"))
        return cls(
            parity=None if parity is None else int(parity),  # type: ignore[call-overload]
            number=None if number is None else int(number),  # type: ignore[call-overload]
            spin_z2=None if spin is None else int(round(2 * float(spin))),  # type: ignore[arg-type]
        )

    def admits(self, state: OccupationState) -> bool:
        return self.admits_totals(state.total_number, state.spin_z2)

    def admits_totals(self, number: int, spin_z2: int) -> bool:
        """Filter on the conserved totals alone."""
        if self.parity is not None and number % 2 != self.parity % 2:
            return False
        if self.number is not None and number != self.number:
            return False
        if self.spin_z2 is not None and spin_z2 != self.spin_z2:
            return False
        return True


# Two electrons, zero spin projection, even total parity.
TWO_ELECTRON_SINGLET = BasisConstraint(parity=0, number=2, spin_z2=0)


def enumerate_basis(
    layout: ModeLayout, constraint: Optional[BasisConstraint] = None
) -> List[OccupationState]:
    """All kets of ``layout`` admitted by ``constraint``, lexicographic in the bits."""
    spins = [spin_of(mode) for mode in layout.canonical_order]
    n_modes = len(spins)
    # (number, spin) totals the modes from position i onwards can still add
    reachable: List[Set[Tuple[int, int]]] = [set() for _ in range(n_modes + 1)]
    reachable[n_modes].add((0, 0))
    for i in range(n_modes - 1, -1, -1):
        tail = reachable[i + 1]
        reachable[i] = tail | {(number + 1, spin + spins[i]) for number, spin in tail}

    def viable(i: int, number: int, spin: int) -> bool:
        return constraint is None or any(
            constraint.admits_totals(number + dn, spin + ds) for dn, ds in reachable[i]
        )

    states: List[OccupationState] = []

    def extend(bits: List[int], number: int, spin: int) -> None:
        i = len(bits)
        if i == n_modes:
            states.append(OccupationState(tuple(bits), layout))
            return
        for bit in (0, 1):
            totals = (number + bit, spin + bit * spins[i])
            if viable(i + 1, *totals):
                bits.append(bit)
                extend(bits, *totals)
                bits.pop()

    if viable(0, 0, 0):
        extend([], 0, 0)
    return states


def basis_dimension(layout: ModeLayout, constraint: Optional[BasisConstraint] = None) -> int:
    """Number of kets ``enumerate_basis`` would return, counted without listing them."""
    counts: Counter = Counter({(0, 0): 1})
    for mode in layout.canonical_order:
        step: Counter = Counter()
        for (number, spin), count in counts.items():
            step[(number, spin)] += count
            step[(number + 1, spin + spin_of(mode))] += count
        counts = step
    return sum(
        count
        for (number, spin), count in counts.items()
        if constraint is None or constraint.admits_totals(number, spin)
    )


def parse_occupation(text: str, layout: ModeLayout) -> OccupationState:
    """Parse ``"00,11"`` / ``"00,00;11,11"`` (optionally wrapped as ``|...>``)."""
    cleaned = text.strip().lstrip("|").rstrip(">").replace(" ", "")
    chunks = cleaned.split(";")
    if len(chunks) != len(layout.segments):
        raise LayoutError(
            f"{text!r}: expected {len(layout.segments)} ';'-separated segment(s)"
        )
    bits: Dict[str, int] = {}
    for chunk, segment in zip(chunks, layout.segments):
        parts = chunk.split(",")
        if len(parts) != len(segment):
            raise LayoutError(f"{text!r}: expected {len(segment)} ','-separated parties")
        for part, modes in zip(parts, segment):
            if len(part) != len(modes) or any(c not in "01" for c in part):
                raise LayoutError(f"{text!r}: {part!r} is not {len(modes)} occupation bits")
            bits.update({mode: int(c) for mode, c in zip(modes, part)})
    return OccupationState(tuple(bits[m] for m in layout.canonical_order), layout)


def permutation_sign(positions: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``positions`` (inversion count parity)."""
    inversions = 0
    for i in range(len(positions)):
        for j in range(i + 1, len(positions)):
            if positions[i] > positions[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def reorder_sign(
    occ: OccupationState, from_order: Sequence[str], to_order: Sequence[str]
) -> int:
    """Sign picked up when the creation operators of ``occ`` written in
    ``from_order`` are re-sorted into ``to_order``."""
    if len(from_order) != len(to_order) or set(from_order) != set(to_order):
        raise LayoutError("orders must be permutations of the same mode set")
    if len(set(from_order)) != len(from_order):
        raise LayoutError("orders must not repeat modes")
    occupied = set(occ.occupied_modes)
    if not occupied <= set(from_order):
        raise LayoutError(f"occupied modes {sorted(occupied - set(from_order))} not in order")
    target = {mode: i for i, mode in enumerate(to_order)}
    return permutation_sign([target[m] for m in from_order if m in occupied])


def wedge_layout(system: ModeLayout, catalyst: ModeLayout) -> ModeLayout:
    """Joint layout: same parties, system segments followed by catalyst segments."""
    if system.parties != catalyst.parties:
        raise LayoutError(
            f"wedge needs the same parties, got {system.parties} and {catalyst.parties}"
        )
    overlap = set(system.canonical_order) & set(catalyst.canonical_order)
    if overlap:
        raise LayoutError(f"overlapping mode sets: {sorted(overlap)}")
    return ModeLayout(parties=system.parties, segments=system.segments + catalyst.segments)


def wedge_state(
    a: OccupationState, b: OccupationState, joint_layout: Optional[ModeLayout] = None
) -> SignedState:
    """``a ∧ b``: concatenate the creation strings, then sort into joint canonical order."""
    overlap = set(a.layout.canonical_order) & set(b.layout.canonical_order)
    if overlap:
        raise LayoutError(f"overlapping mode sets: {sorted(overlap)}")
    if joint_layout is None:
        joint_layout = wedge_layout(a.layout, b.layout)
    naive_order = a.layout.canonical_order + b.layout.canonical_order
    if set(joint_layout.canonical_order) != set(naive_order):
        raise LayoutError("joint layout does not cover exactly the union of both mode sets")

    bits = dict(zip(a.layout.canonical_order, a.occupations))
    bits.update(zip(b.layout.canonical_order, b.occupations))
    joint = OccupationState(tuple(bits[m] for m in joint_layout.canonical_order), joint_layout)
    return SignedState(joint, reorder_sign(joint, naive_order, joint_layout.canonical_order))


def wedge_all(states: Iterable[OccupationState]) -> SignedState:
    """Left-to-right wedge of several kets."""
    iterator = iter(states)
    result = SignedState(next(iterator), 1)
    for state in iterator:
        step = wedge_state(result.state, state)
        result = SignedState(step.state, result.sign * step.sign)
    return result
