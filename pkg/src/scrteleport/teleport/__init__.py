"""Scrambling teleportation: exact simulation, closed forms and shot sampling."""
from scrteleport.teleport.analytic import (
    AnalyticCoefficients,
    analytic_bloch,
    analytic_coefficients,
    analytic_fidelities,
    outcome_probabilities,
)
from scrteleport.teleport.protocol import (
    MeasurementRecord,
    TeleportBranch,
    build_initial_state,
    circuit_fidelities,
    measure,
    run_protocol,
    standard_teleportation,
)
from scrteleport.teleport.report import CSV_FIELDS, FidelityReport, Source
from scrteleport.teleport.shots import shot_experiment
from scrteleport.teleport.states import (
    CORRECTION_NAMES,
    MeasurementPair,
    SecretState,
    correction,
)

__all__ = [
    "AnalyticCoefficients",
    "CORRECTION_NAMES",
    "CSV_FIELDS",
    "FidelityReport",
    "MeasurementPair",
    "MeasurementRecord",
    "SecretState",
    "Source",
    "TeleportBranch",
    "analytic_bloch",
    "analytic_coefficients",
    "analytic_fidelities",
    "build_initial_state",
    "circuit_fidelities",
    "correction",
    "measure",
    "outcome_probabilities",
    "run_protocol",
    "shot_experiment",
    "standard_teleportation",
]
