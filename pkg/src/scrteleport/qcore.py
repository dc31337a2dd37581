"""Dense state-vector and density-matrix primitives for a handful of qubits.

Basis convention: qubit 0 is the most significant bit of an amplitude
index, so ``|q0 q1 ... q_{n-1}>`` reads left to right.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from scrteleport.errors import InvalidArgumentError, InvalidStateError

ATOL = 1e-10
# Clamp window for eigenvalues that went slightly negative in floating point.
EIG_CLAMP = 1e-10
# Branches below this probability are treated as impossible.
ZERO_PROBABILITY = 1e-14

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
for _m in PAULI.values():
    _m.flags.writeable = False


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex, copy=True)
    out.flags.writeable = False
    return out


def _log2_exact(n: int, what: str) -> int:
    k = int(n).bit_length() - 1
    if n < 2 or (1 << k) != n:
        raise InvalidStateError(f"{what} must be a power of two >= 2, got {n}")
    return k


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of ``n_qubits`` qubits."""

    amplitudes: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if amps.ndim != 1:
            raise InvalidStateError("amplitudes must be one-dimensional")
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError("amplitudes contain NaN or Inf")
        n = _log2_exact(amps.size, "amplitude count")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > ATOL:
            raise InvalidStateError(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def basis(cls, bits: str) -> StateVector:
        """Computational basis state from a bitstring such as ``"0110"``."""
        if not bits or set(bits) - {"0", "1"}:
            raise InvalidArgumentError(f"not a bitstring: {bits!r}")
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(amps)

    @classmethod
    def from_unnormalized(cls, amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidStateError("cannot normalize the zero vector")
        return cls(amps / norm)

    def tensor(self, other: StateVector) -> StateVector:
        return StateVector(np.kron(self.amplitudes, other.amplitudes))

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def inner(self, other: StateVector) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix."""

    entries: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("density matrix contains NaN or Inf")
        _log2_exact(m.shape[0], "density matrix dimension")
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise InvalidStateError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > ATOL:
            raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
        if np.min(np.linalg.eigvalsh(m)) < -EIG_CLAMP:
            raise InvalidStateError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _frozen(m))
        object.__setattr__(self, "dim", m.shape[0])

    @classmethod
    def from_state(cls, state: StateVector) -> DensityMatrix:
        a = state.amplitudes
        return cls(np.outer(a, a.conj()))

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def purity(self) -> float:
        m = self.entries
        return float(np.real(np.trace(m @ m)))

    def conjugate_by(self, op: np.ndarray) -> DensityMatrix:
        """Return ``op rho op^dagger``."""
        return DensityMatrix(op @ self.entries @ op.conj().T)


@dataclass(frozen=True, eq=False)
class UnitaryGate:
    matrix: np.ndarray
    name: str = ""
    k_qubits: int = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"gate matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("gate matrix contains NaN or Inf")
        k = _log2_exact(m.shape[0], "gate dimension")
        defect = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if defect > ATOL:
            raise InvalidStateError(f"gate is not unitary (defect {defect:.3e})")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "k_qubits", k)

    def conj(self) -> UnitaryGate:
        """Entrywise complex conjugate (not the adjoint)."""
        return UnitaryGate(self.matrix.conj(), name=f"{self.name}*" if self.name else "")

    def dagger(self) -> UnitaryGate:
        return UnitaryGate(self.matrix.conj().T, name=f"{self.name}^dag" if self.name else "")

    def unitarity_defect(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))))


@dataclass(frozen=True)
class BlochVector:
    s1: float
    s2: float
    s3: float

    def __post_init__(self):
        comps = (self.s1, self.s2, self.s3)
        if not all(np.isfinite(c) for c in comps):
            raise InvalidStateError("Bloch vector has a non-finite component")
        if any(abs(c) > 1 + 1e-9 for c in comps) or sum(c * c for c in comps) > 1 + 1e-9:
            raise InvalidStateError(f"Bloch vector outside the unit ball: {comps}")

    def as_array(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3])

    def to_density_matrix(self) -> DensityMatrix:
        m = PAULI["I"] + self.s1 * PAULI["X"] + self.s2 * PAULI["Y"] + self.s3 * PAULI["Z"]
        return DensityMatrix(m / 2)


class Projection(NamedTuple):
    probability: float
    post_state: StateVector | None

    @property
    def is_null(self) -> bool:
        return self.post_state is None


_BELL = (
    np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
    np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2),
    np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2),
)


def bell_state(index: int) -> StateVector:
    """Bell state |beta_index>: (|00>+|11>), (|01>+|10>), (|00>-|11>), (|01>-|10>), each over sqrt 2."""
    if index not in (0, 1, 2, 3):
        raise InvalidArgumentError(f"Bell index must be 0..3, got {index!r}")
    return StateVector(_BELL[index])


def _check_wires(wires: Sequence[int], n_qubits: int) -> tuple[int, ...]:
    wires = tuple(int(w) for w in wires)
    if len(set(wires)) != len(wires):
        raise InvalidArgumentError(f"wires must be distinct, got {wires}")
    for w in wires:
        if not 0 <= w < n_qubits:
            raise InvalidArgumentError(f"wire {w} out of range for {n_qubits} qubits")
    return wires


def apply_gate(state: StateVector, gate: UnitaryGate, wires: Sequence[int]) -> StateVector:
    """Apply ``gate`` to ``wires``; ``wires[0]`` takes the gate's most significant slot."""
    wires = _check_wires(wires, state.n_qubits)
    k = gate.k_qubits
    if len(wires) != k:
        raise InvalidArgumentError(f"{k}-qubit gate given {len(wires)} wires")
    g = gate.matrix.reshape((2,) * (2 * k))
    out = np.tensordot(g, state.as_tensor(), axes=(list(range(k, 2 * k)), list(wires)))
    out = np.moveaxis(out, list(range(k)), list(wires))
    return StateVector(out.reshape(-1))


def partial_trace(state: StateVector, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix of the ``keep`` qubits, in the listed order."""
    if len(keep) == 0:
        raise InvalidArgumentError("keep must name at least one qubit")
    keep = _check_wires(keep, state.n_qubits)
    rest = [q for q in range(state.n_qubits) if q not in keep]
    m = np.transpose(state.as_tensor(), list(keep) + rest).reshape(2 ** len(keep), -1)
    rho = m @ m.conj().T
    return DensityMatrix((rho + rho.conj().T) / 2)


def _sqrtm_psd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    if np.min(w) < -EIG_CLAMP:
        raise InvalidStateError(f"eigenvalue {np.min(w):.3e} is too negative")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def _dominant_vector(rho: DensityMatrix) -> np.ndarray:
    w, v = np.linalg.eigh(rho.entries)
    return v[:, np.argmax(w)]


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)); returns F, not F^2."""
    if rho.dim != sigma.dim:
        raise InvalidArgumentError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    pure_cut = 1 - 1e-10
    if rho.purity() > pure_cut or sigma.purity() > pure_cut:
        if rho.purity() <= pure_cut:
            rho, sigma = sigma, rho
        psi = _dominant_vector(rho)
        overlap = float(np.real(np.vdot(psi, sigma.entries @ psi)))
        return float(np.sqrt(min(max(overlap, 0.0), 1.0)))
    # Nuclear norm of sqrt(rho) sqrt(sigma): same value, better conditioned
    # than eigenvalues of sqrt(rho) sigma sqrt(rho) when sigma is low rank.
    product = _sqrtm_psd(rho.entries) @ _sqrtm_psd(sigma.entries)
    f = float(np.sum(np.linalg.svd(product, compute_uv=False)))
    return min(f, 1.0)


def bloch_vector(rho: DensityMatrix) -> BlochVector:
    if rho.dim != 2:
        raise InvalidArgumentError(f"Bloch vector needs a single qubit, got dim {rho.dim}")
    m = rho.entries
    s = [float(np.real(np.trace(m @ PAULI[p]))) for p in "XYZ"]
    return BlochVector(*s)


def project_pair(state: StateVector, pair: Sequence[int], outcome: int) -> Projection:
    """Project qubits ``pair`` onto Bell state |beta_outcome>.

    ``pair[0]`` is the first qubit of the Bell state. A branch with
    probability below ``ZERO_PROBABILITY`` comes back with ``post_state=None``.
    """
    if len(pair) != 2:
        raise InvalidArgumentError(f"pair must name two qubits, got {pair}")
    pair = _check_wires(pair, state.n_qubits)
    if outcome not in (0, 1, 2, 3):
        raise InvalidArgumentError(f"outcome must be 0..3, got {outcome!r}")
    n = state.n_qubits
    rest = [q for q in range(n) if q not in pair]
    order = list(pair) + rest
    m = np.transpose(state.as_tensor(), order).reshape(4, -1)
    bell = _BELL[outcome]
    residual = bell.conj() @ m
    prob = float(np.vdot(residual, residual).real)
    if prob < ZERO_PROBABILITY:
        return Projection(prob, None)
    projected = np.outer(bell, residual / np.sqrt(prob)).reshape((2,) * n)
    projected = np.transpose(projected, np.argsort(order))
    return Projection(prob, StateVector(projected.reshape(-1)))
