"""Three-qubit scrambling unitaries and Pauli-string conjugation analysis."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from scrteleport.errors import InvalidArgumentError
from scrteleport.qcore import PAULI, UnitaryGate

COEFF_CUTOFF = 1e-12

_MAX_SCRAMBLER = 0.5 * np.array(
    [
        [-1, 0, 0, -1, 0, -1, -1, 0],
        [0, 1, -1, 0, -1, 0, 0, 1],
        [0, -1, 1, 0, -1, 0, 0, 1],
        [1, 0, 0, 1, 0, -1, -1, 0],
        [0, -1, -1, 0, 1, 0, 0, 1],
        [1, 0, 0, -1, 0, 1, -1, 0],
        [1, 0, 0, -1, 0, -1, 1, 0],
        [0, -1, -1, 0, -1, 0, 0, -1],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class PauliString:
    ops: str

    def __post_init__(self):
        ops = self.ops.upper()
        if not ops or set(ops) - set("IXYZ"):
            raise InvalidArgumentError(f"not a Pauli string: {self.ops!r}")
        object.__setattr__(self, "ops", ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __str__(self) -> str:
        return self.ops

    @property
    def weight(self) -> int:
        return sum(op != "I" for op in self.ops)

    def matrix(self) -> np.ndarray:
        return _pauli_matrix(self.ops)

    @classmethod
    def single_site(cls, op: str, site: int, k: int) -> PauliString:
        ops = ["I"] * k
        ops[site] = op
        return cls("".join(ops))


@lru_cache(maxsize=None)
def _pauli_matrix(ops: str) -> np.ndarray:
    m = reduce(np.kron, (PAULI[o] for o in ops))
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class PauliExpansion:
    """Operator written as a sum of Pauli strings with complex coefficients."""

    k_qubits: int
    coefficients: dict[PauliString, complex]

    def __getitem__(self, key: str | PauliString) -> complex:
        if isinstance(key, str):
            key = PauliString(key)
        return self.coefficients.get(key, 0j)

    def __len__(self) -> int:
        return len(self.coefficients)

    def terms(self) -> list[tuple[PauliString, complex]]:
        return sorted(self.coefficients.items(), key=lambda kv: kv[0].ops)

    def total_weight(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.coefficients.values()))

    def local_weight(self) -> float:
        """Squared-coefficient weight carried by weight-1 strings."""
        return float(sum(abs(c) ** 2 for p, c in self.coefficients.items() if p.weight == 1))

    def to_matrix(self) -> np.ndarray:
        dim = 2**self.k_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for p, c in self.coefficients.items():
            out += c * p.matrix()
        return out


@dataclass(frozen=True)
class ScramblerParams:
    theta: float

    def __post_init__(self):
        t = float(self.theta)
        if not math.isfinite(t) or not 0.0 <= t <= math.pi / 2:
            raise InvalidArgumentError(f"theta must lie in [0, pi/2], got {self.theta!r}")
        object.__setattr__(self, "theta", t)


def max_scrambler() -> UnitaryGate:
    return UnitaryGate(_MAX_SCRAMBLER, name="U")


def partial_scrambler(params: ScramblerParams | float) -> UnitaryGate:
    """Scrambler interpolating from the identity (theta=0) to ``max_scrambler`` (theta=pi/2)."""
    if not isinstance(params, ScramblerParams):
        params = ScramblerParams(params)
    ep = np.exp(2j * params.theta)
    em = np.conj(ep)
    m1p, m1m = 1 - ep, 1 - em
    m2p, m2m = 1 + 3 * ep, 1 + 3 * em
    m3p, m3m = 3 + ep, 3 + em
    u = np.array(
        [
            [m2p, 0, 0, -m1p, 0, -m1p, -m1p, 0],
            [0, m3p, -m1p, 0, -m1p, 0, 0, m1p],
            [0, -m1p, m3p, 0, -m1p, 0, 0, m1p],
            [m1m, 0, 0, m3m, 0, -m1m, -m1m, 0],
            [0, -m1p, -m1p, 0, m3p, 0, 0, m1p],
            [m1m, 0, 0, -m1m, 0, m3m, -m1m, 0],
            [m1m, 0, 0, -m1m, 0, -m1m, m3m, 0],
            [0, -m1m, -m1m, 0, -m1m, 0, 0, m2m],
        ],
        dtype=complex,
    )
    return UnitaryGate(u / 4, name=f"U({params.theta:g})")


def pauli_basis(k: int) -> list[PauliString]:
    return [PauliString("".join(p)) for p in itertools.product("IXYZ", repeat=k)]


def decompose(operator: np.ndarray) -> PauliExpansion:
    """Pauli-basis coefficients c_Q = Tr(Q M) / 2^k, dropping |c_Q| < 1e-12."""
    operator = np.asarray(operator, dtype=complex)
    dim = operator.shape[0]
    k = dim.bit_length() - 1
    if operator.shape != (dim, dim) or 2**k != dim:
        raise InvalidArgumentError(f"operator must be 2^k x 2^k, got {operator.shape}")
    coeffs = {}
    for q in pauli_basis(k):
        # Tr(Q M) without forming the product.
        c = complex(np.sum(q.matrix().T * operator)) / dim
        re = c.real if abs(c.real) >= COEFF_CUTOFF else 0.0
        im = c.imag if abs(c.imag) >= COEFF_CUTOFF else 0.0
        if re or im:
            coeffs[q] = complex(re, im)
    return PauliExpansion(k, coeffs)


def conjugate_pauli(u: UnitaryGate, p: PauliString | str) -> PauliExpansion:
    """Expand U^dagger P U in the Pauli-string basis."""
    if isinstance(p, str):
        p = PauliString(p)
    if len(p) != u.k_qubits:
        raise InvalidArgumentError(f"{len(p)}-qubit Pauli string vs {u.k_qubits}-qubit unitary")
    m = u.matrix
    return decompose(m.conj().T @ p.matrix() @ m)


@dataclass(frozen=True)
class ScramblingRow:
    pauli: PauliString
    expansion: PauliExpansion

    @property
    def delocalization(self) -> float:
        # Clip float noise so the endpoints read exactly 0 and 1.
        score = 1.0 - self.expansion.local_weight()
        return 0.0 if abs(score) < 1e-12 else min(score, 1.0)


@dataclass(frozen=True)
class ScramblingReport:
    theta: float
    rows: tuple[ScramblingRow, ...]

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "rows": [
                {
                    "pauli": row.pauli.ops,
                    "terms": [
                        {"string": p.ops, "re": c.real, "im": c.imag}
                        for p, c in row.expansion.terms()
                    ],
                    "delocalization": row.delocalization,
                }
                for row in self.rows
            ],
        }


def scrambling_report(theta: float) -> ScramblingReport:
    """Conjugate each of the nine single-site Paulis through U(theta)."""
    u = partial_scrambler(ScramblerParams(theta))
    rows = []
    for op in "XYZ":
        for site in range(3):
            p = PauliString.single_site(op, site, 3)
            rows.append(ScramblingRow(p, conjugate_pauli(u, p)))
    return ScramblingReport(float(theta), tuple(rows))
