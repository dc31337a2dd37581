"""Finite-shot estimates of the average fidelity."""
from __future__ import annotations

import numpy as np

from scrteleport.errors import InvalidArgumentError
from scrteleport.teleport.protocol import circuit_fidelities
from scrteleport.teleport.report import FidelityReport, Source, weighted_average
from scrteleport.teleport.states import MeasurementPair, SecretState


def sample_outcomes(probabilities, shots: int, rng: np.random.Generator) -> np.ndarray:
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    return rng.multinomial(shots, p / p.sum())


def shot_experiment(
    secret: SecretState,
    theta: float,
    pair: MeasurementPair | str,
    shots: int,
    seed: int | np.random.SeedSequence,
) -> FidelityReport:
    """Sample ``shots`` Bell outcomes and weight the exact per-outcome F^2 by their frequencies.

    Each outcome's post-measurement Bob state is known exactly, so shot
    noise enters only through the empirical outcome frequencies.
    """
    if int(shots) != shots or shots < 1:
        raise InvalidArgumentError(f"shots must be a positive integer, got {shots!r}")
    shots = int(shots)
    exact = circuit_fidelities(secret, theta, pair)
    rng = np.random.default_rng(seed)
    counts = sample_outcomes(exact.per_outcome_probability, shots, rng)
    freqs = tuple(float(c) / shots for c in counts)
    seed_label = seed if isinstance(seed, (int, np.integer)) else None
    return FidelityReport(
        theta=exact.theta,
        alpha=exact.alpha,
        phi=exact.phi,
        pair=exact.pair,
        per_outcome_probability=freqs,
        per_outcome_fsq_raw=exact.per_outcome_fsq_raw,
        per_outcome_fsq_corrected=exact.per_outcome_fsq_corrected,
        favg_sq=weighted_average(freqs, exact.per_outcome_fsq_corrected),
        source=Source.SHOTS,
        shots=shots,
        seed=None if seed_label is None else int(seed_label),
    )
