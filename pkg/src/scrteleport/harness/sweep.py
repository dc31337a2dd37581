"""Parameter sweeps over theta or phi, evaluated on a worker pool."""
from __future__ import annotations

import csv
import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, TextIO

import numpy as np

from scrteleport.errors import InvalidArgumentError
from scrteleport.scrambler import ScramblerParams
from scrteleport.teleport import (
    CSV_FIELDS,
    FidelityReport,
    MeasurementPair,
    SecretState,
    analytic_fidelities,
    shot_experiment,
)
from scrteleport.teleport.report import fmt

RAW_FIELDS = tuple(f"fsq_raw{j}" for j in range(4))
SHOT_FIELDS = tuple(f"shots_p{j}" for j in range(4)) + ("shots_favg_sq",)


class SweepVariable(str, enum.Enum):
    THETA = "theta"
    PHI = "phi"


@dataclass(frozen=True)
class SweepSpec:
    variable: SweepVariable
    start: float
    stop: float
    points: int
    pair: MeasurementPair
    alpha: float = 1 / math.sqrt(3)
    theta: float = math.pi / 4
    phi: float = 0.0
    shots: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "variable", SweepVariable(self.variable))
        object.__setattr__(self, "pair", MeasurementPair.parse(self.pair))
        if not self.start < self.stop:
            raise InvalidArgumentError(f"start ({self.start}) must be below stop ({self.stop})")
        if int(self.points) != self.points or self.points < 2:
            raise InvalidArgumentError(f"points must be an integer >= 2, got {self.points!r}")
        if self.shots is not None and self.shots < 1:
            raise InvalidArgumentError(f"shots must be positive, got {self.shots!r}")
        if self.variable is SweepVariable.THETA:
            ScramblerParams(self.start)
            ScramblerParams(self.stop)
        else:
            ScramblerParams(self.theta)
        SecretState(self.alpha, self.phi)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.points))

    def setting(self, value: float) -> tuple[SecretState, float]:
        if self.variable is SweepVariable.THETA:
            return SecretState(self.alpha, self.phi), float(value)
        return SecretState(self.alpha, float(value)), self.theta


@dataclass(frozen=True)
class SweepRow:
    index: int
    value: float
    analytic: FidelityReport
    sampled: Optional[FidelityReport] = None

    def csv_row(self, spec: SweepSpec) -> dict[str, str]:
        row = self.analytic.csv_row()
        row.update(self.analytic.raw_columns())
        if spec.shots is not None:
            row["shots"] = str(spec.shots)
            row["seed"] = "" if spec.seed is None else str(spec.seed)
            for j in range(4):
                row[f"shots_p{j}"] = fmt(self.sampled.per_outcome_probability[j])
            row["shots_favg_sq"] = fmt(self.sampled.favg_sq)
        return row


def _evaluate(args) -> SweepRow:
    spec, index, value = args
    secret, theta = spec.setting(value)
    analytic = analytic_fidelities(secret, theta, spec.pair)
    sampled = None
    if spec.shots is not None:
        # Each point draws from its own child stream so results do not depend on scheduling.
        seq = np.random.SeedSequence(0 if spec.seed is None else spec.seed, spawn_key=(index,))
        sampled = shot_experiment(secret, theta, spec.pair, spec.shots, seq)
    return SweepRow(index, float(value), analytic, sampled)


def default_jobs() -> int:
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, jobs: Optional[int] = None) -> list[SweepRow]:
    """Evaluate every grid point; rows come back ordered by the swept value."""
    jobs = default_jobs() if jobs is None else int(jobs)
    if jobs < 1:
        raise InvalidArgumentError(f"jobs must be >= 1, got {jobs}")
    tasks = [(spec, i, v) for i, v in enumerate(spec.values())]
    if jobs == 1 or len(tasks) < 2:
        rows = [_evaluate(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            rows = list(pool.map(_evaluate, tasks))
    return sorted(rows, key=lambda r: r.index)


def fieldnames(spec: SweepSpec) -> list[str]:
    names = list(CSV_FIELDS) + list(RAW_FIELDS)
    if spec.shots is not None:
        names += list(SHOT_FIELDS)
    return names


def write_sweep_csv(spec: SweepSpec, rows: list[SweepRow], fh: TextIO) -> None:
    writer = csv.DictWriter(fh, fieldnames=fieldnames(spec), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.csv_row(spec))
