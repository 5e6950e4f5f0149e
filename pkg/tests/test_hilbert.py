import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmac.hilbert import (
    PAULIS,
    DensityOperator,
    PureState,
    basis_state,
    bell_state,
    entropy_directional_derivative,
    haar_pure,
    hermitian_eigenvalues,
    maximally_mixed,
    partial_trace,
    permute_systems,
    product_state,
    projector,
    random_density,
    random_traceless_hermitian,
    shannon_entropy,
    tensor,
    von_neumann_entropy,
)


def controlled_pauli_by_hand():
    # Independent 8x8 construction: U|i>|b> = |i> sigma_i |b>.
    u = np.zeros((8, 8), dtype=complex)
    for i in range(4):
        for b in range(2):
            col = np.kron(np.eye(4)[i], PAULIS[i] @ np.eye(2)[b])
            u[:, 2 * i + b] = col
    return u


class TestTensor:
    def test_identity(self):
        assert np.array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_block_layout(self):
        m = tensor(PAULIS[1], projector(basis_state(2, 0).vec))
        expected = np.zeros((4, 4))
        expected[2, 0] = expected[0, 2] = 1.0
        assert np.allclose(m, expected)

    def test_against_controlled_pauli_block(self):
        # e_0 (x) sigma_1 must be the top-left block of the by-hand unitary
        # restricted to control value 0... cross-checked entrywise.
        u = controlled_pauli_by_hand()
        block = np.zeros((8, 8), dtype=complex)
        block[:2, :2] = PAULIS[1]
        # control 0 block of u is PAULIS[0]; compare against e_1 (x) sigma_1 instead
        m = tensor(projector(basis_state(4, 1).vec), PAULIS[1])
        assert np.allclose(m[2:4, 2:4], u[2:4, 2:4])
        assert np.allclose(tensor(projector(basis_state(4, 0).vec), PAULIS[0])[:2, :2], u[:2, :2])


class TestStates:
    def test_density_validation(self):
        with pytest.raises(ValueError):
            DensityOperator(np.array([[1.0, 1.0], [0.0, 0.0]]), (2,))  # not Hermitian
        with pytest.raises(ValueError):
            DensityOperator(np.eye(2), (2,))  # trace 2
        with pytest.raises(ValueError):
            DensityOperator(np.diag([1.5, -0.5]), (2,))  # negative eigenvalue
        with pytest.raises(ValueError):
            DensityOperator(np.eye(4) / 4, (2,))  # dims mismatch

    def test_pure_state_norm(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0]), (2,))

    def test_bell_reduction(self):
        rho = partial_trace(bell_state(0).density(), keep=[0])
        assert np.allclose(rho.mat, np.eye(2) / 2, atol=1e-12)

    def test_product_state_reduction(self):
        rng = np.random.default_rng(0)
        rho_b = random_density((2,), rng)
        for i in range(4):
            joint = product_state(basis_state(4, i).density(), rho_b)
            reduced = partial_trace(joint, keep=[0])
            assert np.allclose(reduced.mat, projector(basis_state(4, i).vec), atol=1e-12)

    def test_partial_trace_index_error(self):
        with pytest.raises(ValueError):
            partial_trace(bell_state(0).density(), keep=[2])


def test_depolarized_control_reduction():
    # Tr_A[U (I/4 (x) v) U^dag] = I/2, oracle: (1/4) sum_i sigma_i v sigma_i.
    u = controlled_pauli_by_hand()
    rng = np.random.default_rng(1)
    for _ in range(5):
        v = projector(haar_pure((2,), rng).vec)
        joint = u @ np.kron(np.eye(4) / 4, v) @ u.conj().T
        reduced = partial_trace(DensityOperator(joint, (4, 2)), keep=[1])
        oracle = sum(PAULIS[i] @ v @ PAULIS[i] for i in range(4)) / 4
        assert np.allclose(reduced.mat, oracle, atol=1e-12)
        assert np.allclose(oracle, np.eye(2) / 2, atol=1e-12)


class TestPermute:
    def test_identity_permutation(self):
        rng = np.random.default_rng(2)
        rho = random_density((2, 2, 2), rng)
        assert np.allclose(permute_systems(rho, [0, 1, 2]).mat, rho.mat)

    def test_swap_basis_states(self):
        swapped = permute_systems(
            product_state(basis_state(2, 0).density(), basis_state(2, 1).density()),
            [1, 0],
        )
        expected = product_state(basis_state(2, 1).density(), basis_state(2, 0).density())
        assert np.allclose(swapped.mat, expected.mat)

    def test_spectrum_invariant(self):
        rng = np.random.default_rng(3)
        rho = random_density((2, 2, 2), rng)
        base = np.linalg.eigvalsh(rho.mat)  # oracle: direct eigendecomposition
        for perm in ([1, 2, 0], [2, 1, 0], [0, 2, 1]):
            assert np.allclose(np.linalg.eigvalsh(permute_systems(rho, perm).mat), base, atol=1e-10)

    def test_invalid_permutation(self):
        rho = maximally_mixed((2, 2))
        with pytest.raises(ValueError):
            permute_systems(rho, [0, 0])


class TestEigenvalues:
    def test_identity(self):
        assert np.allclose(hermitian_eigenvalues(np.eye(4)), np.ones(4))

    def test_pauli_z(self):
        assert np.allclose(hermitian_eigenvalues(PAULIS[3]), [1.0, -1.0])

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestEntropies:
    def test_pure_state_zero(self):
        assert von_neumann_entropy(bell_state(2).density()) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_qubit(self):
        assert von_neumann_entropy(maximally_mixed((2,))) == pytest.approx(1.0, abs=1e-12)

    def test_uniform_64(self):
        # I/4 (x) I/4 (x) (average of the four Bell states) = I/64.
        bell_avg = DensityOperator(
            sum(bell_state(i).density().mat for i in range(4)) / 4, (2, 2)
        )
        rho = product_state(maximally_mixed((4,)), maximally_mixed((4,)), bell_avg)
        assert np.allclose(rho.mat, np.eye(64) / 64, atol=1e-12)
        assert von_neumann_entropy(rho) == pytest.approx(6.0, abs=1e-9)

    @pytest.mark.parametrize(
        "dist,expected",
        [([1, 0, 0, 0], 0.0), ([0.25] * 4, 2.0), ([0.125] * 8, 3.0)],
    )
    def test_shannon_values(self, dist, expected):
        assert shannon_entropy(dist) == pytest.approx(expected, abs=1e-12)

    def test_shannon_rejects_bad_input(self):
        with pytest.raises(ValueError):
            shannon_entropy([0.5, 0.4])
        with pytest.raises(ValueError):
            shannon_entropy([1.2, -0.2])

    def test_entropy_bounds_random(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            rho = random_density((2, 2), rng)
            s = von_neumann_entropy(rho)
            assert -1e-9 <= s <= 2.0 + 1e-9

    def test_entanglement_entropy_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            psi = haar_pure((4, 2), rng).density()
            s_a = von_neumann_entropy(partial_trace(psi, [0]))
            s_b = von_neumann_entropy(partial_trace(psi, [1]))
            assert s_a == pytest.approx(s_b, abs=1e-9)


class TestEntropyDerivative:
    def test_maximally_mixed_critical(self):
        delta = np.diag([1.0, -1.0]).astype(complex)
        d = entropy_directional_derivative(maximally_mixed((2,)), delta)
        assert d == pytest.approx(0.0, abs=1e-12)

    def test_diagonal_example(self):
        rho = DensityOperator(np.diag([0.25, 0.75]), (2,))
        d = entropy_directional_derivative(rho, np.diag([1.0, -1.0]))
        assert d == pytest.approx(np.log2(3.0), abs=1e-12)

    def test_finite_difference_oracle(self):
        # Central difference with step 1e-6, relative error < 1e-5.
        rng = np.random.default_rng(6)
        step = 1e-6
        for _ in range(100):
            raw = random_density((2, 2), rng)
            rho = DensityOperator(0.9 * raw.mat + 0.1 * np.eye(4) / 4, (2, 2))
            delta = random_traceless_hermitian(4, rng)
            exact = entropy_directional_derivative(rho, delta)
            s_plus = von_neumann_entropy(DensityOperator(rho.mat + step * delta, (2, 2)))
            s_minus = von_neumann_entropy(DensityOperator(rho.mat - step * delta, (2, 2)))
            fd = (s_plus - s_minus) / (2 * step)
            assert abs(exact - fd) <= 1e-5 * max(1.0, abs(fd))

    def test_rejects_traceful_direction(self):
        with pytest.raises(ValueError):
            entropy_directional_derivative(maximally_mixed((2,)), np.eye(2))

    def test_divergence_detected(self):
        pure = basis_state(2, 0).density()
        with pytest.raises(ValueError):
            entropy_directional_derivative(pure, np.diag([1.0, -1.0]))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_random_density_is_valid_state(seed):
    rng = np.random.default_rng(seed)
    rho = random_density((2, 2), rng)  # constructor re-checks all invariants
    assert rho.mat.trace().real == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.eigvalsh(rho.mat)[0] >= -1e-10
