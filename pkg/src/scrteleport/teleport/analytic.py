"""Closed-form outcome probabilities, Bob-qubit Bloch vectors and fidelities.

Pairs {2,3} and {1,4} share one set of formulas (probabilities P_j and
coefficients a, a_pm, b1, b2, c, d1, d2); pair {0,5} has its own
(probabilities Q_j and coefficients x, y, z).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import cos, sin

from scrteleport.qcore import ZERO_PROBABILITY, BlochVector
from scrteleport.scrambler import ScramblerParams
from scrteleport.teleport.report import FidelityReport, Source, weighted_average
from scrteleport.teleport.states import MeasurementPair, SecretState


@dataclass(frozen=True)
class AnalyticCoefficients:
    theta: float
    a: float
    a_plus: float
    a_minus: float
    b1: float
    b2: float
    c: float
    d1: float
    d2: float
    x1: float
    x2: float
    x3: float
    y1: float
    y3: float
    z1: float
    z3: float


def analytic_coefficients(theta: float) -> AnalyticCoefficients:
    t = ScramblerParams(theta).theta
    s, co = sin(t), cos(t)
    return AnalyticCoefficients(
        theta=t,
        a=0.5 * s**2 * co**4,
        a_plus=0.25 * (1 + co**4),
        a_minus=0.25 * (1 - co**4),
        b1=s**2 / 16 * (3 + cos(4 * t)),
        b2=sin(4 * t) ** 2 / 64,
        c=sin(2 * t) ** 2 / 16,
        d1=0.5 * s**4 * co**2,
        d2=s**4 / 8 * (1 + 4 * cos(2 * t) + cos(4 * t)),
        x1=0.5 * s**4 * co**2,
        x2=0.5 * s**2 * co**4,
        x3=0.5 * s**2 * co**4,
        y1=(3 + cos(4 * t)) ** 2 / 64,
        y3=-(11 + 20 * cos(4 * t) + cos(8 * t)) / 128,
        z1=co**3 / 4 * (s - sin(3 * t)),
        z3=sin(4 * t) * co**2 / 8,
    )


def outcome_probabilities(theta: float, pair: MeasurementPair | str) -> tuple[float, ...]:
    """P_j for pairs {2,3}/{1,4}, Q_j for pair {0,5}, ordered by outcome."""
    pair = MeasurementPair.parse(pair)
    t = ScramblerParams(theta).theta
    s, co = sin(t), cos(t)
    c2, c4, c6, c8 = cos(2 * t), cos(4 * t), cos(6 * t), cos(8 * t)
    if pair is MeasurementPair.PAIR_05:
        return (
            0.25 * (1 + 2 * s**4 * co**2),
            (33 - 2 * c2 + 2 * c6 - c8) / 128,
            0.25 * (co**4 + s**8 + 2 * s**2 * co**2 - s**4 * co**4),
            (31 + 2 * c2 - 2 * c6 + c8) / 128,
        )
    return (
        (36 + 23 * c2 + 4 * c4 + c6) / 64,
        s**2 / 32 * (16 + 11 * c2 + 4 * c4 + c6),
        s**2 / 16 * (5 + 2 * c2 + c4),
        s**4 / 8 * (7 + 6 * c2 + c4),
    )


class _Moments:
    """The three state-dependent combinations every formula is built from."""

    def __init__(self, secret: SecretState):
        al, be = complex(secret.alpha), secret.beta
        self.quartic = abs(al) ** 4 + abs(be) ** 4
        self.cross = abs(al) ** 2 * abs(be) ** 2
        # (alpha beta*)^2 + (alpha* beta)^2
        self.phase = 2 * ((al * be.conjugate()) ** 2).real
        self.re = al * be.conjugate() + al.conjugate() * be
        self.im = al * be.conjugate() - al.conjugate() * be
        self.z = abs(al) ** 2 - abs(be) ** 2


def analytic_bloch(secret: SecretState, theta: float, pair: MeasurementPair | str) -> tuple:
    """Bloch vectors of Bob's uncorrected qubit per outcome (None where undefined)."""
    pair = MeasurementPair.parse(pair)
    k = analytic_coefficients(theta)
    m = _Moments(secret)
    probs = outcome_probabilities(theta, pair)
    R, I, D = m.re, m.im, m.z
    out = []
    if pair is MeasurementPair.PAIR_05:
        q0, q1, q2, q3 = probs
        rows = [
            lambda: ((1 - 2 * q0) / (2 * q0) * R, 1j * I, (1 - 2 * q0) / (2 * q0) * D),
            lambda: (
                ((k.y1 - k.x1) * R - 1j * k.z1 * I) / q1,
                -1j / q1 * ((k.y1 + k.x1) * I - 1j * k.z1 * R),
                (2 * k.x1 - q1) / q1 * D,
            ),
            lambda: (-R, -1j * (q2 - 2 * k.x2) / q2 * I, -(2 * k.x2 - q2) / q2 * D),
            lambda: (
                ((k.y3 - k.x3) * R - 1j * k.z3 * I) / q3,
                -1j / q3 * ((k.y3 + k.x3) * I - 1j * k.z3 * R),
                (2 * k.x3 - q3) / q3 * D,
            ),
        ]
    else:
        p0, p1, p2, p3 = probs
        rows = [
            lambda: (
                (k.a + k.a_minus) / p0 * R,
                1j * (k.a_minus - k.a) / p0 * I,
                (2 * k.a_plus - p0) / p0 * D,
            ),
            lambda: (
                -(k.b1 + k.b2) / p1 * R,
                -1j * (k.b1 - k.b2) / p1 * I,
                (2 * k.b1 - p1) / p1 * D,
            ),
            lambda: (-R, -1j * (2 * k.c - p2) / p2 * I, (2 * k.c - p2) / p2 * D),
            lambda: (
                -(k.d1 + k.d2) / p3 * R,
                -1j * (k.d1 - k.d2) / p3 * I,
                (2 * k.d1 - p3) / p3 * D,
            ),
        ]
    for prob, row in zip(probs, rows):
        if prob < ZERO_PROBABILITY:
            out.append(None)
        else:
            out.append(BlochVector(*(complex(v).real for v in row())))
    return tuple(out)


def _fsq_pairs_23_14(k: AnalyticCoefficients, m: _Moments, probs):
    p0, p1, p2, p3 = probs
    raw = [
        lambda: (k.a_plus * m.quartic + 2 * (p0 + k.a_minus - k.a_plus) * m.cross + k.a * m.phase) / p0,
        lambda: (k.b1 * m.quartic + 2 * (p1 - 2 * k.b1) * m.cross - k.b2 * m.phase) / p1,
        lambda: (k.c * m.quartic + 2 * (p2 - 2 * k.c) * m.cross - (p2 - k.c) * m.phase) / p2,
        lambda: (k.d1 * m.quartic + 2 * (p3 - 2 * k.d1) * m.cross - k.d2 * m.phase) / p3,
    ]
    corrected = [
        raw[0],
        lambda: (k.b1 * m.quartic + 2 * p1 * m.cross + k.b2 * m.phase) / p1,
        lambda: ((p2 - k.c) * m.quartic + 2 * p2 * m.cross + k.c * m.phase) / p2,
        lambda: ((p3 - k.d1) * m.quartic + 2 * (k.d1 - k.d2) * m.cross - k.d1 * m.phase) / p3,
    ]
    return raw, corrected


def _fsq_pair_05(k: AnalyticCoefficients, m: _Moments, probs, secret, theta):
    q0, q1, q2, q3 = probs
    corrected = [
        lambda: (m.quartic + 8 * q0 * m.cross + (1 - 4 * q0) * m.phase) / (4 * q0),
        lambda: ((q1 - k.x1) * m.quartic + 2 * (k.x1 + k.y1) * m.cross - k.x1 * m.phase) / q1,
        lambda: ((q2 - k.x2) * m.quartic + 2 * q2 * m.cross + k.x2 * m.phase) / q2,
        lambda: ((q3 - k.x3) * m.quartic + 2 * (k.x3 - k.y3) * m.cross + k.x3 * m.phase) / q3,
    ]
    # No raw-fidelity formulas are printed for this pair; F^2 = (1 + s.r)/2
    # against the uncorrected Bloch vectors serves instead.
    blochs = analytic_bloch(secret, theta, MeasurementPair.PAIR_05)
    target = (m.re.real, (1j * m.im).real, m.z)
    raw = [
        (lambda b=b: (1 + b.s1 * target[0] + b.s2 * target[1] + b.s3 * target[2]) / 2)
        for b in blochs
    ]
    return raw, corrected


def analytic_fidelities(
    secret: SecretState, theta: float, pair: MeasurementPair | str
) -> FidelityReport:
    """Per-outcome F^2 (raw and corrected) and F^2_avg from the closed forms."""
    pair = MeasurementPair.parse(pair)
    k = analytic_coefficients(theta)
    m = _Moments(secret)
    probs = outcome_probabilities(theta, pair)
    if pair is MeasurementPair.PAIR_05:
        raw_f, cor_f = _fsq_pair_05(k, m, probs, secret, theta)
    else:
        raw_f, cor_f = _fsq_pairs_23_14(k, m, probs)
    defined = [p >= ZERO_PROBABILITY for p in probs]
    raw = tuple(f() if ok else None for f, ok in zip(raw_f, defined))
    corrected = tuple(f() if ok else None for f, ok in zip(cor_f, defined))
    return FidelityReport(
        theta=k.theta,
        alpha=secret.alpha,
        phi=secret.phi,
        pair=pair,
        per_outcome_probability=probs,
        per_outcome_fsq_raw=raw,
        per_outcome_fsq_corrected=corrected,
        favg_sq=weighted_average(probs, corrected),
        source=Source.ANALYTIC,
    )
