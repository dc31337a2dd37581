"""Secret input states, measurement pair choices and Bob's correction tables."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from scrteleport.errors import InvalidArgumentError
from scrteleport.qcore import PAULI, DensityMatrix, StateVector


@dataclass(frozen=True)
class SecretState:
    """Alice's qubit alpha|0> + beta|1> with real alpha and beta = sqrt(1-alpha^2) e^{i phi}."""

    alpha: float
    phi: float = 0.0

    def __post_init__(self):
        a, phi = float(self.alpha), float(self.phi)
        if not (math.isfinite(a) and math.isfinite(phi)):
            raise InvalidArgumentError("alpha and phi must be finite")
        if not 0.0 <= a <= 1.0:
            raise InvalidArgumentError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "phi", phi)

    @property
    def beta(self) -> complex:
        return math.sqrt(max(0.0, 1.0 - self.alpha**2)) * complex(math.cos(self.phi), math.sin(self.phi))

    def state(self) -> StateVector:
        return StateVector.from_unnormalized([self.alpha, self.beta])

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix.from_state(self.state())


class MeasurementPair(enum.Enum):
    PAIR_23 = (2, 3)
    PAIR_14 = (1, 4)
    PAIR_05 = (0, 5)

    @property
    def qubits(self) -> tuple[int, int]:
        return self.value

    @property
    def label(self) -> str:
        return f"{self.value[0]}{self.value[1]}"

    @classmethod
    def parse(cls, text: str | MeasurementPair) -> MeasurementPair:
        """Accept ``"23"``, ``"2,3"``, ``"{2,3}"`` or ``"PAIR_23"``."""
        if isinstance(text, cls):
            return text
        digits = "".join(ch for ch in str(text) if ch.isdigit())
        for pair in cls:
            if digits == pair.label:
                return pair
        raise InvalidArgumentError(f"unknown measurement pair {text!r}; use 23, 14 or 05")


_ZX = PAULI["Z"] @ PAULI["X"]

# Operator Bob applies for each Bell outcome (0,0), (0,1), (1,0), (1,1).
CORRECTIONS = {
    MeasurementPair.PAIR_23: (PAULI["I"], PAULI["Z"], _ZX, PAULI["X"]),
    MeasurementPair.PAIR_14: (PAULI["I"], PAULI["Z"], _ZX, PAULI["X"]),
    MeasurementPair.PAIR_05: (PAULI["I"], PAULI["X"], PAULI["Z"], _ZX),
}
CORRECTION_NAMES = {
    MeasurementPair.PAIR_23: ("I", "Z", "ZX", "X"),
    MeasurementPair.PAIR_14: ("I", "Z", "ZX", "X"),
    MeasurementPair.PAIR_05: ("I", "X", "Z", "ZX"),
}


def outcome_bits(outcome: int) -> tuple[int, int]:
    return (outcome >> 1) & 1, outcome & 1


def correction(pair: MeasurementPair, outcome: int) -> np.ndarray:
    return CORRECTIONS[pair][outcome]
