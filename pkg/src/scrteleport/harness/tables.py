"""Regenerate the published theory columns for the four fidelity tables."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from scrteleport.harness.reference import load_fixture
from scrteleport.teleport import MeasurementPair, SecretState, analytic_fidelities
from scrteleport.teleport.report import fmt

ALPHA = 1 / math.sqrt(3)


@dataclass(frozen=True)
class TableSpec:
    name: str
    pair: MeasurementPair
    variable: str  # "theta" or "phi"
    fixed: float  # phi for theta tables, theta for phi tables
    tolerance: float

    def evaluate(self, value: float) -> float:
        if self.variable == "theta":
            secret, theta = SecretState(ALPHA, self.fixed), value
        else:
            secret, theta = SecretState(ALPHA, value), self.fixed
        return analytic_fidelities(secret, theta, self.pair).favg_sq


TABLES = {
    "table4": TableSpec("table4", MeasurementPair.PAIR_23, "theta", 0.0, 5e-5),
    "table5": TableSpec("table5", MeasurementPair.PAIR_23, "phi", math.pi / 4, 5e-5),
    "table6": TableSpec("table6", MeasurementPair.PAIR_05, "theta", 0.0, 5e-6),
    "table7": TableSpec("table7", MeasurementPair.PAIR_05, "phi", math.pi / 3, 5e-6),
}

TABLE_FIELDS = ("key", "theory", "published", "abs_diff", "within_tolerance")


@dataclass(frozen=True)
class TableRow:
    key: str
    theory: float
    published: float | None
    tolerance: float

    @property
    def abs_diff(self) -> float | None:
        return None if self.published is None else abs(self.theory - self.published)

    @property
    def ok(self) -> bool:
        return self.published is None or self.abs_diff <= self.tolerance

    def csv_row(self) -> dict[str, str]:
        return {
            "key": self.key,
            "theory": fmt(self.theory),
            "published": "" if self.published is None else f"{self.published}",
            "abs_diff": "" if self.published is None else f"{self.abs_diff:.2e}",
            "within_tolerance": "" if self.published is None else str(self.ok).lower(),
        }


def reproduce(name: str) -> list[TableRow]:
    """Recompute one table; theta tables gain rows at the endpoints 0 and pi/2."""
    spec = TABLES[name]
    rows = [
        TableRow(r["key"], spec.evaluate(float(r["key"])), float(r["theory"]), spec.tolerance)
        for r in load_fixture(name)
    ]
    if spec.variable == "theta":
        rows.insert(0, TableRow(fmt(0.0), spec.evaluate(0.0), None, spec.tolerance))
        rows.append(TableRow(fmt(math.pi / 2), spec.evaluate(math.pi / 2), None, spec.tolerance))
    return rows


def write_table(rows: list[TableRow], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=TABLE_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.csv_row())
