import numpy as np
import pytest

from jordan_wigner import JordanWigner
from ssr_ent.core.fock import (
    BasisConstraint,
    enumerate_basis,
    parse_occupation,
    wedge_layout,
)
from ssr_ent.core.operators import (
    DensityOperator,
    fermionic_partial_trace,
    hermitian_eigenvalues,
    jacobi_eigh,
    mixture,
    pure_state,
    purity,
    reduce_to_modes,
)
from ssr_ent.errors import LayoutError, NonHermitianError, StateValidationError


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_state(rng, basis, layout, rank=3):
    vectors = rng.normal(size=(len(basis), rank)) + 1j * rng.normal(size=(len(basis), rank))
    matrix = vectors @ vectors.conj().T
    return DensityOperator(basis, matrix / np.trace(matrix).real, layout)


class TestPurity:
    def test_pure_state(self, system_layout, singlet_basis):
        ket = singlet_basis[0]
        rho = pure_state(system_layout, singlet_basis, [(1.0, ket)])
        assert purity(rho) == pytest.approx(1.0)

    def test_half_mixed(self):
        assert purity(np.diag([0.5, 0.5])) == pytest.approx(0.5)

    def test_maximally_mixed(self, system_layout, singlet_basis):
        rho = DensityOperator(singlet_basis, np.eye(4) / 4, system_layout)
        assert purity(rho) == pytest.approx(0.25)

    def test_rejects_non_square(self):
        with pytest.raises(StateValidationError):
            purity(np.zeros((2, 3)))


class TestJacobi:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
    def test_matches_numpy(self, rng, n):
        matrix = random_hermitian(rng, n)
        values = hermitian_eigenvalues(matrix).eigenvalues
        np.testing.assert_allclose(values, np.linalg.eigvalsh(matrix)[::-1], atol=1e-10)

    def test_eigenvectors(self, rng):
        matrix = random_hermitian(rng, 6)
        values, vectors, _ = jacobi_eigh(matrix)
        np.testing.assert_allclose(matrix @ vectors, vectors * values, atol=1e-10)
        np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(6), atol=1e-10)

    def test_two_by_two_closed_form(self):
        a, d, b = 0.7, 0.2, 0.1 + 0.3j
        values = hermitian_eigenvalues(np.array([[a, b], [np.conj(b), d]])).eigenvalues
        mean, radius = (a + d) / 2, np.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
        assert values == pytest.approx((mean + radius, mean - radius), abs=1e-12)

    def test_rank_one(self):
        psi = np.array([0.4, np.sqrt(0.84)])
        values = hermitian_eigenvalues(np.outer(psi, psi)).eigenvalues
        assert values == pytest.approx((1.0, 0.0), abs=1e-12)

    def test_already_diagonal(self):
        result = hermitian_eigenvalues(np.diag([0.1, 0.6, 0.3]))
        assert result.eigenvalues == pytest.approx((0.6, 0.3, 0.1))
        assert result.sweeps == 0

    def test_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            hermitian_eigenvalues(np.array([[0.5, 0.2], [0.0, 0.5]]))


class TestDensityOperator:
    def test_validate_accepts_state(self, system_layout, singlet_basis, rng, tol):
        rho = random_state(rng, singlet_basis, system_layout)
        assert rho.validate(tol) is rho

    def test_validate_trace(self, system_layout, singlet_basis, tol):
        with pytest.raises(StateValidationError, match="trace"):
            DensityOperator(singlet_basis, np.eye(4) / 2, system_layout).validate(tol)

    def test_validate_positivity(self, system_layout, singlet_basis, tol):
        matrix = np.diag([1.2, -0.2, 0.0, 0.0])
        with pytest.raises(StateValidationError, match="positive"):
            DensityOperator(singlet_basis, matrix, system_layout).validate(tol)

    def test_validate_hermiticity(self, system_layout, singlet_basis, tol):
        matrix = np.eye(4) / 4
        matrix[0, 1] = 0.1
        with pytest.raises(StateValidationError, match="Hermitian"):
            DensityOperator(singlet_basis, matrix, system_layout).validate(tol)

    def test_dimension_mismatch(self, system_layout, singlet_basis):
        with pytest.raises(StateValidationError):
            DensityOperator(singlet_basis, np.eye(3) / 3, system_layout)

    def test_matrix_is_read_only(self, system_layout, singlet_basis):
        rho = DensityOperator(singlet_basis, np.eye(4) / 4, system_layout)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0

    def test_on_basis_embeds(self, system_layout, singlet_basis):
        rho = DensityOperator(singlet_basis, np.eye(4) / 4, system_layout)
        full = rho.on_basis(enumerate_basis(system_layout))
        assert full.dim == 16
        assert full.trace() == pytest.approx(1.0)
        back = full.on_basis(singlet_basis)
        np.testing.assert_allclose(back.matrix, rho.matrix)

    def test_on_basis_rejects_lost_support(self, system_layout, singlet_basis):
        rho = DensityOperator(singlet_basis, np.eye(4) / 4, system_layout)
        with pytest.raises(LayoutError):
            rho.on_basis(singlet_basis[:2])


class TestConstructors:
    def test_pure_state_normalization(self, system_layout, singlet_basis):
        with pytest.raises(StateValidationError, match="normalized"):
            pure_state(system_layout, singlet_basis, [(0.5, singlet_basis[0])])

    def test_pure_state_outside_basis(self, system_layout, singlet_basis):
        vacuum = parse_occupation("00,00", system_layout)
        with pytest.raises(LayoutError):
            pure_state(system_layout, singlet_basis, [(1.0, vacuum)])

    def test_mixture(self, system_layout, singlet_basis):
        a = pure_state(system_layout, singlet_basis, [(1.0, singlet_basis[0])])
        b = pure_state(system_layout, singlet_basis, [(1.0, singlet_basis[3])])
        rho = mixture([(0.3, a), (0.7, b)])
        np.testing.assert_allclose(np.diag(rho.matrix).real, [0.3, 0, 0, 0.7])

    def test_mixture_errors(self, system_layout, singlet_basis):
        a = pure_state(system_layout, singlet_basis, [(1.0, singlet_basis[0])])
        with pytest.raises(StateValidationError):
            mixture([])
        with pytest.raises(StateValidationError):
            mixture([(-0.1, a), (1.1, a)])
        with pytest.raises(StateValidationError):
            mixture([(0.3, a), (0.3, a)])


class TestPartialTrace:
    def test_product_state(self, system_layout):
        # |10,10> traced over B leaves |10><10| on A
        basis = enumerate_basis(system_layout, BasisConstraint(number=2))
        ket = parse_occupation("10,10", system_layout)
        rho = pure_state(system_layout, basis, [(1.0, ket)])
        reduced = fermionic_partial_trace(rho, "A")
        assert [s.label for s in reduced.basis] == ["00", "01", "10", "11"]
        np.testing.assert_allclose(reduced.matrix, np.diag([0.0, 0.0, 1.0, 0.0]))

    def test_entangled_pair(self, system_layout, singlet_basis):
        rho = pure_state(
            system_layout,
            singlet_basis,
            [(0.4, singlet_basis[0]), (np.sqrt(0.84), singlet_basis[3])],
        )
        reduced = fermionic_partial_trace(rho, "A")
        spectrum = hermitian_eigenvalues(reduced).eigenvalues
        nonzero = [v for v in spectrum if v > 1e-12]
        assert nonzero == pytest.approx([0.84, 0.16])
        assert reduced.trace() == pytest.approx(1.0)

    def test_either_side_same_spectrum(self, system_layout, singlet_basis, rng):
        coefficients = rng.normal(size=4) + 1j * rng.normal(size=4)
        coefficients /= np.linalg.norm(coefficients)
        rho = pure_state(system_layout, singlet_basis, zip(coefficients, singlet_basis))
        a = sorted(hermitian_eigenvalues(fermionic_partial_trace(rho, "A")).eigenvalues)
        b = sorted(hermitian_eigenvalues(fermionic_partial_trace(rho, "B")).eigenvalues)
        np.testing.assert_allclose(
            [v for v in a if v > 1e-12], [v for v in b if v > 1e-12], atol=1e-10
        )

    def test_unknown_modes(self, system_layout, catalyst_layout, singlet_basis):
        rho = DensityOperator(singlet_basis, np.eye(4) / 4, system_layout)
        with pytest.raises(LayoutError):
            reduce_to_modes(rho, catalyst_layout)

    def test_four_mode_oracle(self, system_layout, rng):
        basis = tuple(enumerate_basis(system_layout, BasisConstraint(parity=0)))
        rho = random_state(rng, basis, system_layout, rank=4)
        oracle = JordanWigner(system_layout)
        for party in ("A", "B"):
            reduced = fermionic_partial_trace(rho, party)
            expected = oracle.reduce(rho, reduced.layout, reduced.basis)
            np.testing.assert_allclose(reduced.matrix, expected, atol=1e-12)

    @pytest.mark.parametrize("keep", ["A", "catalyst"])
    def test_eight_mode_oracle(self, system_layout, catalyst_layout, rng, keep):
        joint = wedge_layout(system_layout, catalyst_layout)
        basis = tuple(
            s for s in enumerate_basis(joint, BasisConstraint(parity=0)) if s.total_number <= 4
        )
        rho = random_state(rng, basis, joint, rank=3)
        kept = joint.restrict("A") if keep == "A" else catalyst_layout
        reduced = reduce_to_modes(rho, kept)
        expected = JordanWigner(joint).reduce(rho, kept, reduced.basis)
        np.testing.assert_allclose(reduced.matrix, expected, atol=1e-12)
        assert reduced.trace() == pytest.approx(1.0)
