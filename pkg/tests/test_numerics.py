import numpy as np
import pytest

from fourier_circuits.errors import ValidationError
from fourier_circuits.numerics import (
    apply_gate,
    gellmann_basis,
    hermitian_eig,
    is_unitary,
    unitary_exp,
)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (raw + raw.conj().T) / 2.0


def random_state(dim, seed):
    rng = np.random.default_rng(seed)
    state = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return state / np.linalg.norm(state)


class TestHermitianEig:
    def test_already_diagonal(self):
        values, vectors = hermitian_eig(np.diag([3.0, 1.0]))
        assert np.allclose(values, [1.0, 3.0])
        assert np.allclose(np.abs(vectors), [[0, 1], [1, 0]])

    def test_pauli_x_spectrum(self):
        values, _ = hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(values, [-1.0, 1.0])

    def test_roundtrip_from_known_decomposition(self):
        # H assembled from a known random spectrum must be reproduced
        rng = np.random.default_rng(5)
        raw = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        q, _ = np.linalg.qr(raw)
        spectrum = np.sort(rng.normal(size=6))
        matrix = (q * spectrum) @ q.conj().T
        values, vectors = hermitian_eig(matrix)
        rebuilt = (vectors * values) @ vectors.conj().T
        assert np.max(np.abs(rebuilt - matrix)) <= 1e-9
        assert np.allclose(values, spectrum)

    def test_eigenvalues_sorted_and_vectors_unitary(self):
        values, vectors = hermitian_eig(random_hermitian(81, 7))
        assert np.all(np.diff(values) >= 0)
        assert is_unitary(vectors)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestUnitaryExp:
    def test_diagonal_exponential(self):
        result = unitary_exp(np.diag([1.0, -1.0]), np.pi)
        assert np.allclose(result, -np.eye(2), atol=1e-12)

    def test_zero_time_is_identity(self):
        result = unitary_exp(random_hermitian(5, 1), 0.0)
        assert np.max(np.abs(result - np.eye(5))) <= 1e-12

    def test_spin_half_phases(self):
        x = 0.83
        result = unitary_exp(np.diag([0.5, -0.5]), x)
        expected = np.diag([np.exp(1j * x / 2), np.exp(-1j * x / 2)])
        assert np.allclose(result, expected, atol=1e-12)

    @pytest.mark.parametrize("dim", [2, 5, 16])
    def test_roundtrip_inverse(self, dim):
        matrix = random_hermitian(dim, dim)
        forward = unitary_exp(matrix, 0.7)
        backward = unitary_exp(matrix, -0.7)
        assert np.max(np.abs(forward @ backward - np.eye(dim))) <= 1e-10
        assert is_unitary(forward)


class TestGellmannBasis:
    def test_su2_matches_paulis(self):
        basis = gellmann_basis(2)
        paulis = [
            np.array([[0, 1], [1, 0]], dtype=complex),
            np.array([[0, -1j], [1j, 0]]),
            np.array([[1, 0], [0, -1]], dtype=complex),
        ]
        for got, expected in zip(basis, paulis):
            assert np.allclose(got, expected)

    @pytest.mark.parametrize("dim", [2, 3, 4, 9])
    def test_invariants(self, dim):
        basis = gellmann_basis(dim)
        assert len(basis) == dim**2 - 1
        for i, g in enumerate(basis):
            assert np.max(np.abs(g - g.conj().T)) <= 1e-12
            assert abs(np.trace(g)) <= 1e-12
            for h in basis[i + 1 :]:
                assert abs(np.trace(g @ h)) <= 1e-10

    @pytest.mark.parametrize("dim", [2, 3, 9])
    def test_spans_traceless_hermitian(self, dim):
        matrix = random_hermitian(dim, dim + 10)
        matrix -= np.trace(matrix) / dim * np.eye(dim)
        basis = gellmann_basis(dim)
        rebuilt = sum(
            np.trace(g @ matrix).real / np.trace(g @ g).real * g for g in basis
        )
        assert np.max(np.abs(rebuilt - matrix)) <= 1e-9

    def test_rejects_small_dim(self):
        with pytest.raises(ValidationError):
            gellmann_basis(1)


class TestApplyGate:
    def test_identity_leaves_state(self):
        state = random_state(8, 3)
        result = apply_gate(state, np.eye(2), [1], 2)
        assert np.allclose(result, state, atol=1e-14)

    def test_full_register_is_dense_multiply(self):
        state = random_state(4, 4)
        gate = unitary_exp(random_hermitian(4, 9), 1.0)
        result = apply_gate(state, gate, [0, 1], 2)
        assert np.allclose(result, gate @ state, atol=1e-13)

    def test_single_qudit_matches_kron_oracle(self):
        state = random_state(4, 6)
        gate = unitary_exp(random_hermitian(2, 11), 0.4)
        result = apply_gate(state, gate, [1], 2)
        oracle = np.kron(np.eye(2), gate) @ state
        assert np.max(np.abs(result - oracle)) <= 1e-12

    def test_qutrit_register_oracle(self):
        state = random_state(9, 8)
        gate = unitary_exp(random_hermitian(3, 12), 0.9)
        result = apply_gate(state, gate, [0], 3)
        oracle = np.kron(gate, np.eye(3)) @ state
        assert np.max(np.abs(result - oracle)) <= 1e-12

    def test_norm_preserved_over_chain(self):
        state = random_state(8, 10)
        for seed in range(6):
            gate = unitary_exp(random_hermitian(2, seed), 0.3 * seed)
            state = apply_gate(state, gate, [seed % 3], 2)
        assert abs(np.linalg.norm(state) - 1.0) <= 1e-10

    def test_rejects_bad_targets(self):
        state = random_state(4, 2)
        with pytest.raises(ValidationError):
            apply_gate(state, np.eye(4), [0, 0], 2)
        with pytest.raises(ValidationError):
            apply_gate(state, np.eye(2), [5], 2)
        with pytest.raises(ValidationError):
            apply_gate(state, np.eye(4), [0], 2)
