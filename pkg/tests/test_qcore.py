import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scrteleport.errors import InvalidArgumentError, InvalidStateError
from scrteleport.qcore import (
    PAULI,
    BlochVector,
    DensityMatrix,
    StateVector,
    UnitaryGate,
    apply_gate,
    bell_state,
    bloch_vector,
    fidelity,
    partial_trace,
    project_pair,
)

R2 = 1 / math.sqrt(2)
H = UnitaryGate(np.array([[1, 1], [1, -1]]) / math.sqrt(2))
X = UnitaryGate(PAULI["X"])
CNOT = UnitaryGate(np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]))
SWAP = UnitaryGate(np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]))


def random_state(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(v / np.linalg.norm(v))


def random_unitary(rng, k):
    z = rng.normal(size=(2**k, 2**k)) + 1j * rng.normal(size=(2**k, 2**k))
    q, r = np.linalg.qr(z)
    return UnitaryGate(q * (np.diag(r) / np.abs(np.diag(r))))


def random_density(rng, n, rank=None):
    d = 2**n
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m))


seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestBellState:
    def test_beta0(self):
        np.testing.assert_allclose(bell_state(0).amplitudes, [R2, 0, 0, R2], atol=1e-15)

    def test_beta3(self):
        np.testing.assert_allclose(bell_state(3).amplitudes, [0, R2, -R2, 0], atol=1e-15)

    def test_beta1_beta2(self):
        np.testing.assert_allclose(bell_state(1).amplitudes, [0, R2, R2, 0], atol=1e-15)
        np.testing.assert_allclose(bell_state(2).amplitudes, [R2, 0, 0, -R2], atol=1e-15)

    def test_orthonormal(self):
        gram = np.array([[bell_state(i).inner(bell_state(j)) for j in range(4)] for i in range(4)])
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-15)

    @pytest.mark.parametrize("bad", [-1, 4, 1.5])
    def test_out_of_range(self, bad):
        with pytest.raises(InvalidArgumentError):
            bell_state(bad)


class TestApplyGate:
    def test_bit_flip_on_wire_0(self):
        out = apply_gate(StateVector.basis("00"), X, [0])
        np.testing.assert_allclose(out.amplitudes, StateVector.basis("10").amplitudes)

    def test_identity_leaves_state(self):
        s = random_state(np.random.default_rng(1), 4)
        out = apply_gate(s, UnitaryGate(np.eye(4)), [3, 1])
        np.testing.assert_allclose(out.amplitudes, s.amplitudes, atol=1e-15)

    def test_h_then_cnot_matches_matrix_product(self):
        # Oracle: explicit 4x4 products on the amplitude vector.
        full = CNOT.matrix @ np.kron(H.matrix, np.eye(2))
        expected = full @ StateVector.basis("00").amplitudes
        out = apply_gate(apply_gate(StateVector.basis("00"), H, [0]), CNOT, [0, 1])
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)
        np.testing.assert_allclose(out.amplitudes, bell_state(0).amplitudes, atol=1e-15)

    def test_matches_kron_embedding(self):
        rng = np.random.default_rng(7)
        s = random_state(rng, 3)
        g = random_unitary(rng, 1)
        full = np.kron(np.kron(np.eye(2), g.matrix), np.eye(2))
        np.testing.assert_allclose(apply_gate(s, g, [1]).amplitudes, full @ s.amplitudes, atol=1e-13)

    def test_wire_order_sets_significance(self):
        # CNOT with wires (1, 0): qubit 1 controls qubit 0.
        out = apply_gate(StateVector.basis("01"), CNOT, [1, 0])
        np.testing.assert_allclose(out.amplitudes, StateVector.basis("11").amplitudes)

    @pytest.mark.parametrize("wires", [[0, 0], [0, 5], [-1, 0]])
    def test_bad_wires(self, wires):
        with pytest.raises(InvalidArgumentError):
            apply_gate(StateVector.basis("000"), CNOT, wires)

    def test_wire_count_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            apply_gate(StateVector.basis("000"), CNOT, [0])

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds, n=st.integers(2, 6), k=st.integers(1, 3))
    def test_norm_preserved(self, seed, n, k):
        rng = np.random.default_rng(seed)
        k = min(k, n)
        wires = list(rng.permutation(n)[:k])
        out = apply_gate(random_state(rng, n), random_unitary(rng, k), wires)
        assert abs(out.norm() - 1) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=st.integers(2, 5))
    def test_swap_is_relabeling(self, seed, n):
        rng = np.random.default_rng(seed)
        s = random_state(rng, n)
        a, b = (int(w) for w in rng.permutation(n)[:2])
        swapped = apply_gate(s, SWAP, [a, b])
        axes = list(range(n))
        axes[a], axes[b] = axes[b], axes[a]
        relabeled = np.transpose(s.as_tensor(), axes).reshape(-1)
        np.testing.assert_allclose(swapped.amplitudes, relabeled, atol=1e-14)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=st.integers(2, 5))
    def test_reversed_wires_equal_swap_conjugation(self, seed, n):
        rng = np.random.default_rng(seed)
        s = random_state(rng, n)
        g = random_unitary(rng, 2)
        a, b = (int(w) for w in rng.permutation(n)[:2])
        conj = UnitaryGate(SWAP.matrix @ g.matrix @ SWAP.matrix)
        np.testing.assert_allclose(
            apply_gate(s, g, [b, a]).amplitudes, apply_gate(s, conj, [a, b]).amplitudes, atol=1e-13
        )


class TestPartialTrace:
    def test_bell_half_is_maximally_mixed(self):
        rho = partial_trace(bell_state(0), [0])
        np.testing.assert_allclose(rho.entries, np.eye(2) / 2, atol=1e-15)

    def test_product_state(self):
        psi = StateVector.from_unnormalized([0.6, 0.8j])
        rho = partial_trace(StateVector.basis("0").tensor(psi), [1])
        np.testing.assert_allclose(rho.entries, np.outer(psi.amplitudes, psi.amplitudes.conj()), atol=1e-15)

    def test_keep_order(self):
        s = StateVector.basis("01")
        np.testing.assert_allclose(partial_trace(s, [1, 0]).entries, DensityMatrix.from_state(StateVector.basis("10")).entries)

    def test_empty_keep(self):
        with pytest.raises(InvalidArgumentError):
            partial_trace(bell_state(0), [])

    def test_bob_state_after_bell_outcome_00_matches_closed_form(self):
        from scrteleport.teleport import SecretState, run_protocol

        theta, alpha, phi = 0.5, 0.45, 0.7
        state = run_protocol(SecretState(alpha, phi), theta)
        _, post = project_pair(state, (2, 3), 0)
        rho = partial_trace(post, [6])
        # Independent evaluation of the outcome-(0,0) Bloch formulas.
        s, c = math.sin(theta), math.cos(theta)
        a = 0.5 * s**2 * c**4
        ap, am = 0.25 * (1 + c**4), 0.25 * (1 - c**4)
        p0 = (36 + 23 * math.cos(2 * theta) + 4 * math.cos(4 * theta) + math.cos(6 * theta)) / 64
        beta = math.sqrt(1 - alpha**2) * complex(math.cos(phi), math.sin(phi))
        re = alpha * beta.conjugate() + alpha * beta
        im = alpha * beta.conjugate() - alpha * beta
        expected = [
            (a + am) / p0 * re.real,
            (1j * (am - a) / p0 * im).real,
            (2 * ap - p0) / p0 * (alpha**2 - abs(beta) ** 2),
        ]
        np.testing.assert_allclose(bloch_vector(rho).as_array(), expected, atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, n=st.integers(1, 6))
    def test_trace_one(self, seed, n):
        rng = np.random.default_rng(seed)
        keep = [int(q) for q in rng.permutation(n)[: rng.integers(1, n + 1)]]
        rho = partial_trace(random_state(rng, n), keep)
        assert abs(np.trace(rho.entries) - 1) < 1e-12
        assert rho.dim == 2 ** len(keep)


class TestFidelity:
    def test_identical(self):
        rho = random_density(np.random.default_rng(3), 2)
        assert fidelity(rho, rho) == pytest.approx(1, abs=1e-10)

    def test_orthogonal_pure(self):
        zero = DensityMatrix.from_state(StateVector.basis("0"))
        one = DensityMatrix.from_state(StateVector.basis("1"))
        assert fidelity(zero, one) == pytest.approx(0, abs=1e-15)

    def test_pure_vs_mixed(self):
        zero = DensityMatrix.from_state(StateVector.basis("0"))
        mixed = DensityMatrix(np.eye(2) / 2)
        assert fidelity(zero, mixed) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert fidelity(mixed, zero) == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_mixed_general_route(self):
        # Commuting diagonal states: F = sum sqrt(p_i q_i).
        p, q = np.array([0.7, 0.3]), np.array([0.2, 0.8])
        f = fidelity(DensityMatrix(np.diag(p)), DensityMatrix(np.diag(q)))
        assert f == pytest.approx(np.sum(np.sqrt(p * q)), abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            fidelity(DensityMatrix(np.eye(2) / 2), DensityMatrix(np.eye(4) / 4))

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds, n=st.integers(1, 3))
    def test_symmetry(self, seed, n):
        rng = np.random.default_rng(seed)
        rho, sigma = random_density(rng, n), random_density(rng, n, rank=int(rng.integers(1, 2**n + 1)))
        assert abs(fidelity(rho, sigma) - fidelity(sigma, rho)) < 1e-10
        assert 0 <= fidelity(rho, sigma) <= 1


class TestBloch:
    def test_maximally_mixed(self):
        assert bloch_vector(DensityMatrix(np.eye(2) / 2)).as_array() == pytest.approx([0, 0, 0])

    def test_zero(self):
        assert bloch_vector(DensityMatrix.from_state(StateVector.basis("0"))).as_array() == pytest.approx([0, 0, 1])

    def test_reconstruction(self):
        rho = random_density(np.random.default_rng(11), 1)
        back = bloch_vector(rho).to_density_matrix()
        np.testing.assert_allclose(back.entries, rho.entries, atol=1e-12)

    def test_outcome_10_s1(self):
        from scrteleport.teleport import SecretState, measure, run_protocol

        state = run_protocol(SecretState(1 / math.sqrt(3), 0.0), math.pi / 4)
        rec = measure(state, "23", 2)
        assert bloch_vector(rec.bob_raw).s1 == pytest.approx(-2 * math.sqrt(2) / 3, abs=1e-12)

    def test_wrong_dim(self):
        with pytest.raises(InvalidArgumentError):
            bloch_vector(DensityMatrix(np.eye(4) / 4))

    def test_outside_ball_rejected(self):
        with pytest.raises(InvalidStateError):
            BlochVector(1.0, 0.5, 0.0)


class TestProjectPair:
    def test_exact_bell_pair(self):
        s = bell_state(0).tensor(StateVector.basis("0"))
        prob, post = project_pair(s, (0, 1), 0)
        assert prob == pytest.approx(1, abs=1e-15)
        np.testing.assert_allclose(post.amplitudes, s.amplitudes, atol=1e-15)

    def test_orthogonal_outcome_is_flagged(self):
        s = bell_state(0).tensor(StateVector.basis("0"))
        res = project_pair(s, (0, 1), 3)
        assert res.probability == pytest.approx(0, abs=1e-15)
        assert res.is_null and res.post_state is None

    def test_nonadjacent_pair(self):
        # |beta_1> on (0, 2) with qubit 1 in |1>.
        amps = np.zeros(8, dtype=complex)
        amps[int("011", 2)] = amps[int("110", 2)] = R2
        prob, post = project_pair(StateVector(amps), (0, 2), 1)
        assert prob == pytest.approx(1)
        np.testing.assert_allclose(post.amplitudes, amps, atol=1e-15)

    def test_bad_args(self):
        s = StateVector.basis("000")
        with pytest.raises(InvalidArgumentError):
            project_pair(s, (1, 1), 0)
        with pytest.raises(InvalidArgumentError):
            project_pair(s, (0, 1), 4)

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds, n=st.integers(2, 6))
    def test_completeness(self, seed, n):
        rng = np.random.default_rng(seed)
        s = random_state(rng, n)
        a, b = (int(w) for w in rng.permutation(n)[:2])
        total = sum(project_pair(s, (a, b), j).probability for j in range(4))
        assert abs(total - 1) < 1e-12


class TestValidation:
    def test_nan_rejected(self):
        with pytest.raises(InvalidStateError):
            StateVector(np.array([np.nan, 1]))

    def test_unnormalized_rejected(self):
        with pytest.raises(InvalidStateError):
            StateVector(np.array([1.0, 1.0]))

    def test_non_unitary_rejected(self):
        with pytest.raises(InvalidStateError):
            UnitaryGate(np.array([[1, 1], [0, 1]]))

    def test_density_checks(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.array([[1, 1], [0, 0]]))
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.eye(2))
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_tiny_negative_eigenvalue_tolerated(self):
        rho = DensityMatrix(np.diag([1 + 5e-11, -5e-11]))
        assert fidelity(rho, rho) == pytest.approx(1)

    def test_immutable(self):
        s = StateVector.basis("0")
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0
