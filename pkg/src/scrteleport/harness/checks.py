"""Invariant suite behind ``scrteleport verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from scrteleport.errors import InvalidArgumentError
from scrteleport.qcore import UnitaryGate
from scrteleport.scrambler import conjugate_pauli, max_scrambler, partial_scrambler
from scrteleport.harness import reference
from scrteleport.teleport import (
    MeasurementPair,
    SecretState,
    analytic_fidelities,
    circuit_fidelities,
    outcome_probabilities,
    run_protocol,
)

DEFAULT_GRID = (0.0, 0.1, 0.3, 0.7, 1.0, 1.2, 1.5, math.pi / 2)
DEFAULT_SECRETS = (
    SecretState(1 / math.sqrt(3), 0.0),
    SecretState(0.45, 0.7),
    SecretState(0.9, 2.3),
)


@dataclass
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


@dataclass
class VerifyReport:
    theta_grid: tuple[float, ...]
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "theta_grid": list(self.theta_grid),
            "passed": self.passed,
            "failed": self.failed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _maxdev(values: Iterable[float]) -> float:
    return max((float(v) for v in values), default=0.0)


def _report_gap(a, b) -> float:
    gaps = [abs(a.favg_sq - b.favg_sq)]
    for name in ("per_outcome_probability", "per_outcome_fsq_raw", "per_outcome_fsq_corrected"):
        for x, y in zip(getattr(a, name), getattr(b, name)):
            if (x is None) != (y is None):
                return math.inf
            if x is not None:
                gaps.append(abs(x - y))
    return max(gaps)


def check_max_scrambling(u: UnitaryGate) -> CheckResult:
    devs = []
    for src, (dst, coef) in reference.MAX_SCRAMBLING_TABLE.items():
        exp = conjugate_pauli(u, src)
        expected = {dst: coef}
        keys = set(expected) | {p.ops for p in exp.coefficients}
        devs.extend(abs(exp[k] - expected.get(k, 0.0)) for k in keys)
    return CheckResult("eq3-pauli-conjugation", _maxdev(devs), 1e-12)


def check_partial_scrambling(grid, make_u: Callable[[float], UnitaryGate]) -> CheckResult:
    devs = []
    for theta in grid:
        u = make_u(theta)
        for src in reference.PARTIAL_SCRAMBLING_TABLE:
            exp = conjugate_pauli(u, src)
            printed = reference.printed_partial_expansion(src, theta)
            keys = set(printed) | {p.ops for p in exp.coefficients}
            devs.extend(abs(exp[k] - printed.get(k, 0.0)) for k in keys)
    return CheckResult("partial-scrambling-expansion", _maxdev(devs), 1e-10)


def check_unitarity(grid, make_u) -> CheckResult:
    return CheckResult(
        "scrambler-unitarity", _maxdev(make_u(t).unitarity_defect() for t in grid), 1e-12
    )


def check_endpoints(make_u) -> CheckResult:
    d0 = np.max(np.abs(make_u(0.0).matrix - np.eye(8)))
    d1 = np.max(np.abs(make_u(math.pi / 2).matrix - max_scrambler().matrix))
    return CheckResult(
        "scrambler-endpoints", float(max(d0, d1)), 1e-12,
        f"|U(0)-I|={d0:.2e}, |U(pi/2)-U|={d1:.2e}",
    )


def check_bell_expansion(grid, secrets, scrambler: Optional[UnitaryGate]) -> CheckResult:
    devs = []
    for theta in grid:
        for secret in secrets:
            state = run_protocol(secret, theta, scrambler=scrambler)
            simulated = reference.bell_expand(state)
            devs.append(np.max(np.abs(simulated - reference.printed_bell_expansion(secret, theta))))
    return CheckResult("bell-basis-expansion", _maxdev(devs), 1e-10)


def check_oracle(grid, secrets, scrambler) -> tuple[CheckResult, CheckResult]:
    oracle, pairs_equal = [], []
    for theta in grid:
        for secret in secrets:
            circuit = {}
            for pair in MeasurementPair:
                ana = analytic_fidelities(secret, theta, pair)
                circuit[pair] = circuit_fidelities(secret, theta, pair, scrambler=scrambler)
                oracle.append(_report_gap(ana, circuit[pair]))
            pairs_equal.append(
                _report_gap(circuit[MeasurementPair.PAIR_23], circuit[MeasurementPair.PAIR_14])
            )
    return (
        CheckResult("oracle-equivalence", _maxdev(oracle), 1e-9),
        CheckResult("pair-equivalence", _maxdev(pairs_equal), 1e-10),
    )


def check_completeness(grid) -> CheckResult:
    devs = [
        abs(sum(outcome_probabilities(t, pair)) - 1)
        for t in grid
        for pair in (MeasurementPair.PAIR_23, MeasurementPair.PAIR_05)
    ]
    return CheckResult("probability-completeness", _maxdev(devs), 1e-12)


def run_checks(
    theta_grid: Iterable[float] = DEFAULT_GRID,
    *,
    scrambler_override: Optional[Callable[[float], UnitaryGate]] = None,
) -> VerifyReport:
    """Run every scrambler and oracle invariant over ``theta_grid``.

    ``scrambler_override`` replaces U(theta) everywhere, which is how the
    negative-control mode feeds a corrupted unitary through the suite.
    """
    grid = tuple(float(t) for t in theta_grid)
    if not grid:
        raise InvalidArgumentError("theta grid is empty")
    make_u = scrambler_override or partial_scrambler
    maximal = scrambler_override(math.pi / 2) if scrambler_override else max_scrambler()
    report = VerifyReport(grid)
    report.checks.append(check_max_scrambling(maximal))
    report.checks.append(check_partial_scrambling(grid, make_u))
    report.checks.append(check_unitarity(grid, make_u))
    report.checks.append(check_endpoints(make_u))

    per_theta = None
    if scrambler_override is not None:
        per_theta = {t: scrambler_override(t) for t in grid}
    report.checks.append(_per_theta(check_bell_expansion, grid, per_theta))
    oracle, pairs = _per_theta(check_oracle, grid, per_theta)
    report.checks.extend([oracle, pairs])
    report.checks.append(check_completeness(grid))
    return report


def _per_theta(fn, grid, per_theta):
    if per_theta is None:
        return fn(grid, DEFAULT_SECRETS, None)
    results = [fn((t,), DEFAULT_SECRETS, per_theta[t]) for t in grid]
    if isinstance(results[0], tuple):
        return tuple(_merge([r[i] for r in results]) for i in range(len(results[0])))
    return _merge(results)


def _merge(results: list[CheckResult]) -> CheckResult:
    worst = max(results, key=lambda r: r.max_deviation)
    return CheckResult(worst.name, worst.max_deviation, worst.tolerance, worst.detail)


def corrupted_scrambler(theta: float) -> UnitaryGate:
    """U(theta) with one entry sign-flipped after re-unitarizing, for negative controls."""
    m = np.array(partial_scrambler(theta).matrix)
    m[0, 0] = -m[0, 0]
    q, r = np.linalg.qr(m)
    return UnitaryGate(q * (np.diag(r) / np.abs(np.diag(r))), name="U-corrupt")
