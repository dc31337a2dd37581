"""Seven-qubit scrambling teleportation, simulated exactly.

Qubit roles: 0 is Alice's secret, 1-2 Charlie, 3-4 Daniel, 5-6 Bob.
Bell pairs |beta_0> are prepared on (1,4), (2,3) and (5,6); the scrambler
acts on (0,1,2) and its complex conjugate on (5,4,3).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from scrteleport.errors import InvalidArgumentError
from scrteleport.qcore import (
    PAULI,
    DensityMatrix,
    StateVector,
    UnitaryGate,
    apply_gate,
    bell_state,
    fidelity,
    partial_trace,
    project_pair,
)
from scrteleport.scrambler import ScramblerParams, partial_scrambler
from scrteleport.teleport.report import FidelityReport, Source, weighted_average
from scrteleport.teleport.states import MeasurementPair, SecretState, correction

N_QUBITS = 7
BOB = 6
SCRAMBLER_WIRES = (0, 1, 2)
CONJUGATE_WIRES = (5, 4, 3)


def build_initial_state(secret: SecretState) -> StateVector:
    """|psi>_0 with |beta_0> on pairs (1,4), (2,3) and (5,6)."""
    # Lay out as 0,1,4,2,3,5,6 then permute to natural order.
    bell = bell_state(0)
    product = secret.state().tensor(bell).tensor(bell).tensor(bell)
    layout = (0, 1, 4, 2, 3, 5, 6)
    tensor = product.as_tensor().transpose(_inverse(layout))
    return StateVector(tensor.reshape(-1))


def _inverse(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def run_protocol(
    secret: SecretState,
    theta: float,
    *,
    scrambler: Optional[UnitaryGate] = None,
    conjugate_wires: Sequence[int] = CONJUGATE_WIRES,
) -> StateVector:
    """Prepare the initial state and apply U(theta) and U(theta)*.

    ``scrambler`` overrides U(theta) (theta is still range-checked).
    """
    params = ScramblerParams(theta)
    u = scrambler if scrambler is not None else partial_scrambler(params)
    state = build_initial_state(secret)
    state = apply_gate(state, u, SCRAMBLER_WIRES)
    return apply_gate(state, u.conj(), conjugate_wires)


@dataclass(frozen=True)
class MeasurementRecord:
    pair: MeasurementPair
    outcome: int
    probability: float
    post_state: Optional[StateVector]
    bob_raw: Optional[DensityMatrix]
    bob_corrected: Optional[DensityMatrix]

    @property
    def is_null(self) -> bool:
        return self.post_state is None


def measure(state: StateVector, pair: MeasurementPair, outcome: int) -> MeasurementRecord:
    """Bell-measure ``pair`` with result ``outcome`` and extract Bob's qubit 6."""
    pair = MeasurementPair.parse(pair)
    if state.n_qubits != N_QUBITS:
        raise InvalidArgumentError(f"expected a {N_QUBITS}-qubit state, got {state.n_qubits}")
    prob, post = project_pair(state, pair.qubits, outcome)
    if post is None:
        return MeasurementRecord(pair, outcome, prob, None, None, None)
    raw = partial_trace(post, [BOB])
    corrected = raw.conjugate_by(correction(pair, outcome))
    return MeasurementRecord(pair, outcome, prob, post, raw, corrected)


def circuit_fidelities(
    secret: SecretState,
    theta: float,
    pair: MeasurementPair | str,
    *,
    scrambler: Optional[UnitaryGate] = None,
) -> FidelityReport:
    """Exact-simulation counterpart of ``analytic_fidelities``."""
    pair = MeasurementPair.parse(pair)
    state = run_protocol(secret, theta, scrambler=scrambler)
    target = secret.density_matrix()
    probs, raw, corrected = [], [], []
    for outcome in range(4):
        rec = measure(state, pair, outcome)
        probs.append(rec.probability)
        if rec.is_null:
            raw.append(None)
            corrected.append(None)
            continue
        raw.append(fidelity(target, rec.bob_raw) ** 2)
        corrected.append(fidelity(target, rec.bob_corrected) ** 2)
    return FidelityReport(
        theta=float(theta),
        alpha=secret.alpha,
        phi=secret.phi,
        pair=pair,
        per_outcome_probability=tuple(probs),
        per_outcome_fsq_raw=tuple(raw),
        per_outcome_fsq_corrected=tuple(corrected),
        favg_sq=weighted_average(probs, corrected),
        source=Source.CIRCUIT,
    )


@dataclass(frozen=True)
class TeleportBranch:
    outcome: int
    probability: float
    bob_state: StateVector
    fidelity: float


_STANDARD_CORRECTIONS = (
    PAULI["I"],
    PAULI["X"],
    PAULI["Z"],
    PAULI["Z"] @ PAULI["X"],
)


def standard_teleportation(secret: SecretState) -> list[TeleportBranch]:
    """Three-qubit teleportation with CNOT+H Bell measurement on qubits 0, 1.

    Outcome index is the measured bit pair (q0, q1); Bob applies X for q1
    and then Z for q0.
    """
    h = UnitaryGate(np.array([[1, 1], [1, -1]]) / np.sqrt(2), name="H")
    cnot = UnitaryGate(
        np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]), name="CNOT"
    )
    state = secret.state().tensor(bell_state(0))
    state = apply_gate(state, cnot, (0, 1))
    state = apply_gate(state, h, (0,))
    amps = state.amplitudes.reshape(4, 2)
    target = secret.density_matrix()
    branches = []
    for outcome in range(4):
        bob = amps[outcome]
        prob = float(np.vdot(bob, bob).real)
        bob_state = StateVector(_STANDARD_CORRECTIONS[outcome] @ (bob / np.sqrt(prob)))
        f = fidelity(target, DensityMatrix.from_state(bob_state))
        branches.append(TeleportBranch(outcome, prob, bob_state, f))
    return branches
