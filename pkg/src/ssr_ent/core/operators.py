"""
Small dense Hermitian operators over a fermionic basis.

Density operators, purity, a cyclic Jacobi eigensolver for complex Hermitian
matrices, and the fermionic partial trace.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import Tolerances, default_tolerances
from ..errors import (
    EigenSolverError,
    LayoutError,
    NonHermitianError,
    StateValidationError,
)
from .fock import ModeLayout, OccupationState, reorder_sign

logger = logging.getLogger(__name__)

MAX_JACOBI_SWEEPS = 64
MAX_DIMENSION = 256


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Complex square matrix indexed by an ordered tuple of basis kets."""

    basis: Tuple[OccupationState, ...]
    matrix: np.ndarray
    layout: ModeLayout

    def __post_init__(self):
        basis = tuple(self.basis)
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise StateValidationError(f"matrix must be square, got shape {matrix.shape}")
        if matrix.shape[0] != len(basis):
            raise StateValidationError(
                f"matrix dimension {matrix.shape[0]} does not match basis size {len(basis)}"
            )
        if len(set(basis)) != len(basis):
            raise LayoutError("basis contains duplicate kets")
        for state in basis:
            if state.layout != self.layout:
                raise LayoutError(f"basis ket {state} belongs to a different layout")
        matrix.flags.writeable = False
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def index_of(self, state: OccupationState) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise LayoutError(f"{state} is not in the basis")

    @property
    def _index(self) -> Dict[OccupationState, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {state: i for i, state in enumerate(self.basis)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def validate(self, tol: Optional[Tolerances] = None, weight: float = 1.0) -> "DensityOperator":
        """Check Hermiticity, trace ``weight`` and positivity; return self."""
        tol = tol or default_tolerances()
        herm = self.hermiticity_error()
        if herm > tol.hermitian:
            raise StateValidationError(f"not Hermitian (max |A - A^H| = {herm:.3e})")
        trace = self.trace()
        if abs(trace - weight) > tol.trace:
            raise StateValidationError(f"trace is {trace:.12g}, expected {weight}")
        smallest = hermitian_eigenvalues(self, tol).eigenvalues[-1] if self.dim else 0.0
        if smallest < -tol.psd:
            raise StateValidationError(f"not positive semidefinite (eigenvalue {smallest:.3e})")
        return self

    def on_basis(self, basis: Sequence[OccupationState]) -> "DensityOperator":
        """Re-express on ``basis``; kets outside it must carry no weight."""
        basis = tuple(basis)
        target = {state: i for i, state in enumerate(basis)}
        keep = [i for i, s in enumerate(self.basis) if s in target]
        dropped = [i for i, s in enumerate(self.basis) if s not in target]
        if dropped and np.max(np.abs(self.matrix[dropped, :]), initial=0.0) > 0:
            raise LayoutError("operator has support outside the requested basis")
        matrix = np.zeros((len(basis), len(basis)), dtype=complex)
        rows = [target[self.basis[i]] for i in keep]
        matrix[np.ix_(rows, rows)] = self.matrix[np.ix_(keep, keep)]
        return DensityOperator(basis, matrix, self.layout)

    def __repr__(self) -> str:
        return f"DensityOperator(dim={self.dim}, layout={self.layout.canonical_order})"


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues in descending order and the worst eigenpair residual."""

    eigenvalues: Tuple[float, ...]
    residual: float
    sweeps: int = 0


def pure_state(
    layout: ModeLayout,
    basis: Sequence[OccupationState],
    terms: Iterable[Tuple[complex, OccupationState]],
    norm_tol: float = 1e-9,
) -> DensityOperator:
    """``|psi><psi|`` for ``|psi> = sum amplitude * ket``; amplitudes must be normalized."""
    basis = tuple(basis)
    index = {state: i for i, state in enumerate(basis)}
    psi = np.zeros(len(basis), dtype=complex)
    for amplitude, state in terms:
        if state not in index:
            raise LayoutError(f"{state} is not in the declared basis")
        psi[index[state]] += amplitude
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > norm_tol:
        raise StateValidationError(f"amplitudes are not normalized (norm^2 = {norm:.12g})")
    return DensityOperator(basis, np.outer(psi, psi.conj()), layout)


def mixture(
    components: Sequence[Tuple[float, DensityOperator]], weight_tol: float = 1e-9
) -> DensityOperator:
    """Convex combination of operators that share one basis."""
    if not components:
        raise StateValidationError("a mixture needs at least one component")
    first = components[0][1]
    total = 0.0
    matrix = np.zeros_like(first.matrix)
    for weight, op in components:
        if weight < 0:
            raise StateValidationError(f"negative mixture weight {weight}")
        if op.basis != first.basis:
            raise LayoutError("mixture components must share the same basis")
        total += weight
        matrix = matrix + weight * op.matrix
    if abs(total - 1.0) > weight_tol:
        raise StateValidationError(f"mixture weights sum to {total:.12g}, not 1")
    return DensityOperator(first.basis, matrix, first.layout)


def _as_matrix(op: Union[DensityOperator, np.ndarray]) -> np.ndarray:
    matrix = op.matrix if isinstance(op, DensityOperator) else np.asarray(op, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise StateValidationError(f"expected a square matrix, got shape {matrix.shape}")
    return matrix


def purity(rho: Union[DensityOperator, np.ndarray]) -> float:
    """``tr(rho^2)``."""
    matrix = _as_matrix(rho)
    # tr(A A) = sum_ij A_ij A_ji
    return float(np.real(np.sum(matrix * matrix.T)))


def jacobi_eigh(
    matrix: np.ndarray, max_sweeps: int = MAX_JACOBI_SWEEPS
) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Each rotation first removes the phase of ``a[p, q]`` with a diagonal unitary,
    then applies the real symmetric Jacobi rotation that zeroes it.

    Returns:
        (eigenvalues, eigenvectors as columns, sweeps used), unsorted.
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n < 2:
        return np.real(np.diag(a)).copy(), v, 0

    scale = max(float(np.max(np.abs(a))), 1e-300)
    threshold = 1e-14 * scale
    upper = np.triu_indices(n, k=1)

    for sweep in range(1, max_sweeps + 1):
        off = math.sqrt(float(np.sum(np.abs(a[upper]) ** 2)))
        if off <= threshold:
            return np.real(np.diag(a)).copy(), v, sweep - 1

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude <= threshold * 1e-3:
                    continue
                phase = apq.conjugate() / magnitude
                theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                u = np.array([[c, s], [-phase * s, phase * c]], dtype=complex)
                pq = [p, q]
                a[:, pq] = a[:, pq] @ u
                a[pq, :] = u.conj().T @ a[pq, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, pq] = v[:, pq] @ u

    raise EigenSolverError(f"Jacobi sweeps did not converge within {max_sweeps} sweeps")


def hermitian_eigenvalues(
    rho: Union[DensityOperator, np.ndarray], tol: Optional[Tolerances] = None
) -> SpectrumResult:
    """Real eigenvalues of a Hermitian operator, descending, with residual check."""
    tol = tol or default_tolerances()
    matrix = _as_matrix(rho)
    if matrix.shape[0] > MAX_DIMENSION:
        raise StateValidationError(
            f"dimension {matrix.shape[0]} exceeds the dense limit of {MAX_DIMENSION}"
        )
    herm = float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0))
    if herm > tol.hermitian:
        raise NonHermitianError(f"matrix is not Hermitian (max |A - A^H| = {herm:.3e})")
    hermitian = 0.5 * (matrix + matrix.conj().T)

    values, vectors, sweeps = jacobi_eigh(hermitian)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]

    residual = 0.0
    if len(values):
        residuals = hermitian @ vectors - vectors * values[np.newaxis, :]
        residual = float(np.max(np.linalg.norm(residuals, axis=0)))
    scale = max(1.0, float(np.max(np.abs(matrix), initial=0.0)))
    if residual > tol.eigen * scale:
        raise EigenSolverError(f"eigenpair residual {residual:.3e} above tolerance")
    logger.debug(f"Jacobi: n={len(values)} sweeps={sweeps} residual={residual:.2e}")
    return SpectrumResult(tuple(float(x) for x in values), residual, sweeps)


@lru_cache(maxsize=256)
def _reduction_plan(
    basis: Tuple[OccupationState, ...], keep: ModeLayout
) -> Tuple[Tuple[OccupationState, ...], np.ndarray, List[Tuple[np.ndarray, np.ndarray]]]:
    """Reduced basis, reorder signs, and per-traced-occupation index groups."""
    layout = basis[0].layout
    keep_order = keep.canonical_order
    rest_order = tuple(m for m in layout.canonical_order if m not in set(keep_order))
    target_order = keep_order + rest_order

    signs = np.empty(len(basis))
    kept_bits = []
    traced_bits = []
    for i, state in enumerate(basis):
        signs[i] = reorder_sign(state, layout.canonical_order, target_order)
        kept_bits.append(state.bits_of(keep_order))
        traced_bits.append(state.bits_of(rest_order))

    reduced = sorted(set(kept_bits))
    reduced_index = {bits: i for i, bits in enumerate(reduced)}
    reduced_basis = tuple(OccupationState(bits, keep) for bits in reduced)

    groups: Dict[Tuple[int, ...], List[int]] = {}
    for i, bits in enumerate(traced_bits):
        groups.setdefault(bits, []).append(i)
    plan = [
        (np.array(members), np.array([reduced_index[kept_bits[i]] for i in members]))
        for _, members in sorted(groups.items())
    ]
    return reduced_basis, signs, plan


def reduce_to_modes(rho: DensityOperator, keep: ModeLayout) -> DensityOperator:
    """
    Fermionic partial trace onto the modes of ``keep``.

    Every ket is first re-sorted so the kept modes come first (collecting the
    reordering sign), then the trailing block is contracted:
    ``<k|rho_K|k'> = sum_t s(k,t) s(k',t) <k t|rho|k' t>``.
    """
    missing = set(keep.canonical_order) - set(rho.layout.canonical_order)
    if missing:
        raise LayoutError(f"modes {sorted(missing)} are not part of the operator's layout")
    if not rho.basis:
        raise LayoutError("cannot reduce an operator with an empty basis")

    reduced_basis, signs, plan = _reduction_plan(rho.basis, keep)
    signed = rho.matrix * np.outer(signs, signs)
    reduced = np.zeros((len(reduced_basis), len(reduced_basis)), dtype=complex)
    for full_idx, kept_idx in plan:
        reduced[np.ix_(kept_idx, kept_idx)] += signed[np.ix_(full_idx, full_idx)]
    return DensityOperator(reduced_basis, reduced, keep)


def fermionic_partial_trace(rho: DensityOperator, keep: str) -> DensityOperator:
    """Reduced operator of party ``keep`` (every other party is traced out)."""
    return reduce_to_modes(rho, rho.layout.restrict(keep))
