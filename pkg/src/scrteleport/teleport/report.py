from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from scrteleport.errors import InvalidStateError
from scrteleport.teleport.states import MeasurementPair

CSV_FIELDS = (
    "theta", "alpha", "phi", "pair", "source",
    "p0", "p1", "p2", "p3",
    "fsq0", "fsq1", "fsq2", "fsq3",
    "favg_sq", "shots", "seed",
)
DECIMALS = 6


class Source(str, enum.Enum):
    ANALYTIC = "ANALYTIC"
    CIRCUIT = "CIRCUIT"
    SHOTS = "SHOTS"


def _clip_unit(x: Optional[float], what: str) -> Optional[float]:
    if x is None:
        return None
    if not (-1e-9 <= x <= 1 + 1e-9):
        raise InvalidStateError(f"{what} = {x!r} outside [0, 1]")
    return min(max(float(x), 0.0), 1.0)


@dataclass(frozen=True)
class FidelityReport:
    """Outcome probabilities and squared fidelities for one protocol setting.

    ``None`` in a per-outcome fidelity slot marks an outcome whose
    probability is too small for the fidelity to be defined.
    """

    theta: float
    alpha: float
    phi: float
    pair: MeasurementPair
    per_outcome_probability: tuple[float, float, float, float]
    per_outcome_fsq_raw: tuple[Optional[float], ...]
    per_outcome_fsq_corrected: tuple[Optional[float], ...]
    favg_sq: float
    source: Source
    shots: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        probs = tuple(float(p) for p in self.per_outcome_probability)
        if len(probs) != 4 or any(p < -1e-12 for p in probs):
            raise InvalidStateError(f"bad outcome probabilities {probs}")
        tol = 3 / math.sqrt(self.shots) if self.source is Source.SHOTS and self.shots else 1e-10
        if abs(sum(probs) - 1) > tol:
            raise InvalidStateError(f"outcome probabilities sum to {sum(probs)!r}")
        object.__setattr__(self, "per_outcome_probability", probs)
        for name in ("per_outcome_fsq_raw", "per_outcome_fsq_corrected"):
            vals = tuple(_clip_unit(v, name) for v in getattr(self, name))
            object.__setattr__(self, name, vals)
        object.__setattr__(self, "favg_sq", _clip_unit(self.favg_sq, "favg_sq"))

    @property
    def defined(self) -> tuple[bool, ...]:
        return tuple(f is not None for f in self.per_outcome_fsq_corrected)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pair"] = self.pair.label
        d["source"] = self.source.value
        for key in ("per_outcome_probability", "per_outcome_fsq_raw", "per_outcome_fsq_corrected"):
            d[key] = list(d[key])
        return d

    def csv_row(self) -> dict[str, str]:
        """Flat row in ``CSV_FIELDS`` order, numbers at six decimals."""
        row = {
            "theta": fmt(self.theta),
            "alpha": fmt(self.alpha),
            "phi": fmt(self.phi),
            "pair": self.pair.label,
            "source": self.source.value,
        }
        for j in range(4):
            row[f"p{j}"] = fmt(self.per_outcome_probability[j])
        for j in range(4):
            row[f"fsq{j}"] = fmt(self.per_outcome_fsq_corrected[j])
        row["favg_sq"] = fmt(self.favg_sq)
        row["shots"] = "" if self.shots is None else str(self.shots)
        row["seed"] = "" if self.seed is None else str(self.seed)
        return row

    def raw_columns(self) -> dict[str, str]:
        """Uncorrected per-outcome F^2, the data behind the raw-fidelity figure."""
        return {f"fsq_raw{j}": fmt(self.per_outcome_fsq_raw[j]) for j in range(4)}


def fmt(x: Optional[float]) -> str:
    if x is None:
        return ""
    return f"{x:.{DECIMALS}f}"


def weighted_average(probs: Sequence[float], fsq: Sequence[Optional[float]]) -> float:
    """Probability-weighted F^2; undefined outcomes carry zero weight."""
    return float(sum(p * f for p, f in zip(probs, fsq) if f is not None))
