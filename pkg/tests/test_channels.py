import numpy as np
import pytest

from qmac.channels import (
    KrausChannel,
    apply,
    apply_matrix,
    compose,
    controlled_pauli_unitary,
    dephasing,
    depolarizing,
    gamma_p,
    identity_channel,
    phi_p,
    psi_id,
    tensor_channels,
    unitary_channel,
)
from qmac.hilbert import (
    PAULIS,
    DensityOperator,
    basis_state,
    haar_pure,
    hermitian_eigenvalues,
    partial_trace,
    product_state,
    projector,
    random_density,
    shannon_entropy,
    tensor,
    von_neumann_entropy,
)


def pure(vec, dims):
    return DensityOperator(projector(vec), dims)


class TestApply:
    def test_identity(self):
        rng = np.random.default_rng(0)
        rho = random_density((2, 2), rng)
        assert np.allclose(apply(identity_channel((2, 2)), rho).mat, rho.mat)

    def test_full_depolarization(self):
        out = apply(depolarizing(2, 1.0), basis_state(2, 0).density())
        assert np.allclose(out.mat, np.eye(2) / 2, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply(depolarizing(2, 0.5), basis_state(4, 0).density())

    def test_phi_p_reference_spectrum(self):
        # Maximally mixed register input: spectrum {(2-p)/8 x4, p/8 x4}.
        rng = np.random.default_rng(1)
        for p in (0.3, 0.7):
            v = haar_pure((2,), rng).density()
            out = apply(phi_p(p), product_state(DensityOperator(np.eye(4) / 4, (4,)), v))
            expected = sorted([(2 - p) / 8] * 4 + [p / 8] * 4, reverse=True)
            assert np.allclose(hermitian_eigenvalues(out.mat), expected, atol=1e-10)


class TestConstructors:
    def test_kraus_validation(self):
        with pytest.raises(ValueError):
            KrausChannel((np.eye(2) * 0.5,), (2,), (2,))  # not trace preserving
        with pytest.raises(ValueError):
            KrausChannel((np.eye(2),), (2,), (4,))  # shape mismatch

    @pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
    def test_trace_preservation(self, p):
        for ch in (phi_p(p), gamma_p(p), depolarizing(4, p), psi_id()):
            total = sum(k.conj().T @ k for k in ch.kraus)
            assert np.max(np.abs(total - np.eye(ch.in_dim))) < 1e-10

    def test_channels_map_states_to_states(self):
        rng = np.random.default_rng(2)
        cases = [(phi_p(0.4), (4, 2)), (gamma_p(0.6), (2, 4, 2)), (depolarizing(3, 0.2), (3,))]
        for ch, dims in cases:
            for _ in range(100):
                out = apply(ch, random_density(dims, rng))  # validates on construction
                assert out.dims == ch.out_dims

    def test_probability_range(self):
        for bad in (-0.1, 1.1):
            with pytest.raises(ValueError):
                depolarizing(2, bad)
            with pytest.raises(ValueError):
                phi_p(bad)
            with pytest.raises(ValueError):
                gamma_p(bad)


class TestCompose:
    def test_identity_neutral(self):
        rng = np.random.default_rng(3)
        rho = random_density((2,), rng)
        ch = depolarizing(2, 0.3)
        left = compose(identity_channel((2,)), ch)
        right = compose(ch, identity_channel((2,)))
        assert np.allclose(apply(left, rho).mat, apply(ch, rho).mat, atol=1e-12)
        assert np.allclose(apply(right, rho).mat, apply(ch, rho).mat, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            compose(depolarizing(2, 0.1), depolarizing(4, 0.1))

    def test_phi_p_definition(self):
        # (depolarize (x) id) after the controlled-Pauli unitary, on 50 random inputs.
        rng = np.random.default_rng(4)
        p = 0.37
        built = compose(
            tensor_channels(depolarizing(4, p), identity_channel((2,))),
            unitary_channel(controlled_pauli_unitary(), (4, 2)),
        )
        direct = phi_p(p)
        for _ in range(50):
            rho = random_density((4, 2), rng)
            assert np.allclose(apply(built, rho).mat, apply(direct, rho).mat, atol=1e-12)


class TestTensorChannels:
    def test_identity_product(self):
        rng = np.random.default_rng(5)
        rho = random_density((2, 2), rng)
        ch = tensor_channels(identity_channel((2,)), identity_channel((2,)))
        assert np.allclose(apply(ch, rho).mat, rho.mat)

    def test_product_action_factorizes(self):
        rng = np.random.default_rng(6)
        joint = tensor_channels(phi_p(1.0), psi_id())
        x = random_density((4, 2), rng)
        y = random_density((2, 2), rng)
        out = apply(joint, product_state(x, y))
        expected = np.kron(apply(phi_p(1.0), x).mat, y.mat)
        assert np.allclose(out.mat, expected, atol=1e-12)

    def test_two_use_parallel_matches_sequential(self):
        # Oracle: apply the copies one at a time instead of as one Kraus family.
        rng = np.random.default_rng(7)
        p = 0.45
        parallel = tensor_channels(phi_p(p), phi_p(p))
        first = tensor_channels(phi_p(p), identity_channel((4, 2)))
        second = tensor_channels(identity_channel((4, 2)), phi_p(p))
        for _ in range(3):
            rho = random_density((4, 2, 4, 2), rng)
            assert np.allclose(
                apply(parallel, rho).mat, apply(second, apply(first, rho)).mat, atol=1e-11
            )


class TestControlledPauli:
    def test_control_zero_fixes_target(self):
        u = controlled_pauli_unitary()
        rng = np.random.default_rng(8)
        v = haar_pure((2,), rng).vec
        vec = np.kron(basis_state(4, 0).vec, v)
        assert np.allclose(u @ vec, vec)

    def test_control_one_flips(self):
        u = controlled_pauli_unitary()
        vec_in = np.kron(basis_state(4, 1).vec, basis_state(2, 0).vec)
        vec_out = np.kron(basis_state(4, 1).vec, basis_state(2, 1).vec)
        assert np.allclose(u @ vec_in, vec_out)

    def test_unitarity(self):
        u = controlled_pauli_unitary()
        assert np.allclose(u.conj().T @ u, np.eye(8), atol=1e-12)


class TestPhiP:
    def test_noiseless_regime(self):
        rng = np.random.default_rng(9)
        v = haar_pure((2,), rng)
        for i in range(4):
            out = apply(phi_p(0.0), product_state(basis_state(4, i).density(), v.density()))
            target = PAULIS[i] @ projector(v.vec) @ PAULIS[i]
            expected = np.kron(projector(basis_state(4, i).vec), target)
            assert np.allclose(out.mat, expected, atol=1e-12)

    def test_fully_depolarized_register(self):
        rng = np.random.default_rng(10)
        v = haar_pure((2,), rng)
        for i in range(4):
            out = apply(phi_p(1.0), product_state(basis_state(4, i).density(), v.density()))
            target = PAULIS[i] @ projector(v.vec) @ PAULIS[i]
            assert np.allclose(out.mat, np.kron(np.eye(4) / 4, target), atol=1e-12)

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
    def test_signal_spectrum(self, p):
        out = apply(
            phi_p(p),
            product_state(basis_state(4, 0).density(), basis_state(2, 0).density()),
        )
        expected = sorted([1 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p] + [0.0] * 4, reverse=True)
        assert np.allclose(hermitian_eigenvalues(out.mat), expected, atol=1e-10)

    def test_action_formula(self):
        # rho -> (1-p) U rho U^dag + p (I/4)(x)Tr_reg[U rho U^dag] on random inputs.
        rng = np.random.default_rng(11)
        p = 0.63
        ch = phi_p(p)
        u = controlled_pauli_unitary()
        for _ in range(100):
            rho = random_density((4, 2), rng)
            rotated = u @ rho.mat @ u.conj().T
            reduced = partial_trace(DensityOperator(rotated, (4, 2)), [1]).mat
            expected = (1 - p) * rotated + p * np.kron(np.eye(4) / 4, reduced)
            assert np.allclose(apply(ch, rho).mat, expected, atol=1e-12)

    def test_depolarizing_output_entropy(self):
        p = 0.41
        out = apply(depolarizing(4, p), basis_state(4, 2).density())
        expected = shannon_entropy([1 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p])
        assert von_neumann_entropy(out) == pytest.approx(expected, abs=1e-10)


class TestPsiId:
    def test_identity_action(self):
        rng = np.random.default_rng(12)
        rho = random_density((2, 2), rng)
        out = apply(psi_id(), rho)
        assert np.allclose(out.mat, rho.mat)
        assert von_neumann_entropy(out) == pytest.approx(von_neumann_entropy(rho), abs=1e-12)


class TestGammaP:
    def test_up_branch_only(self):
        rng = np.random.default_rng(13)
        psi1, psi2 = haar_pure((2,), rng), haar_pure((2,), rng)
        for j in range(4):
            inp = product_state(psi1.density(), basis_state(4, j).density(), psi2.density())
            out = apply(gamma_p(0.0), inp)
            expected = np.kron(PAULIS[j] @ projector(psi1.vec) @ PAULIS[j], projector(psi2.vec))
            assert np.allclose(out.mat, expected, atol=1e-12)

    def test_down_branch_only(self):
        rng = np.random.default_rng(14)
        psi1, psi2 = haar_pure((2,), rng), haar_pure((2,), rng)
        for j in range(4):
            inp = product_state(psi1.density(), basis_state(4, j).density(), psi2.density())
            out = apply(gamma_p(1.0), inp)
            expected = np.kron(projector(psi1.vec), PAULIS[j] @ projector(psi2.vec) @ PAULIS[j])
            assert np.allclose(out.mat, expected, atol=1e-12)

    def test_even_mixture_hand_result(self):
        # Register e_1, both side qubits |0>: output (|10><10| + |01><01|)/2.
        inp = product_state(
            basis_state(2, 0).density(), basis_state(4, 1).density(), basis_state(2, 0).density()
        )
        out = apply(gamma_p(0.5), inp)
        expected = 0.5 * (
            np.kron(projector([0, 1]), projector([1, 0]))
            + np.kron(projector([1, 0]), projector([0, 1]))
        )
        assert np.allclose(out.mat, expected, atol=1e-12)

    def test_commutes_with_register_dephasing(self):
        rng = np.random.default_rng(15)
        deph = tensor_channels(
            tensor_channels(identity_channel((2,)), dephasing(4)), identity_channel((2,))
        )
        for p in (0.0, 0.5, 1.0):
            ch = gamma_p(p)
            for _ in range(20):
                rho = random_density((2, 4, 2), rng)
                dephased = apply(deph, rho)
                assert np.allclose(apply(ch, rho).mat, apply(ch, dephased).mat, atol=1e-12)
