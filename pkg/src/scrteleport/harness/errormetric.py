"""Theory-versus-experiment gap, as percent of F^2 averaged over matched rows."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from scrteleport.errors import InvalidArgumentError

THEORY_COLUMNS = ("theory", "favg_sq")
EXPERIMENT_COLUMNS = ("shots_favg_sq", "favg_sq", "theory")


class KeyMismatchError(InvalidArgumentError):
    def __init__(self, only_theory: Sequence[float], only_experiment: Sequence[float]):
        self.only_theory = list(only_theory)
        self.only_experiment = list(only_experiment)
        super().__init__(
            f"unmatched keys: theory-only {self.only_theory}, experiment-only {self.only_experiment}"
        )


@dataclass(frozen=True)
class ErrorSummary:
    n: int
    mean_abs_pct: float
    mean_signed_pct: float

    def to_dict(self) -> dict:
        return {"n": self.n, "mean_abs_pct": self.mean_abs_pct, "mean_signed_pct": self.mean_signed_pct}


def _normalize_key(text: str) -> float:
    return round(float(text), 6)


def _pick(header: Sequence[str], wanted: Optional[str], fallbacks: Sequence[str], path) -> str:
    if wanted is not None:
        if wanted not in header:
            raise InvalidArgumentError(f"{path}: no column {wanted!r} (have {list(header)})")
        return wanted
    for name in fallbacks:
        if name in header:
            return name
    raise InvalidArgumentError(f"{path}: none of the columns {list(fallbacks)} present")


def _key_column(rows: list[dict[str, str]], header: Sequence[str], wanted: Optional[str], path) -> str:
    if wanted is not None:
        return _pick(header, wanted, (), path)
    if "key" in header:
        return "key"
    for name in ("theta", "phi"):
        if name in header and len({r[name] for r in rows}) > 1:
            return name
    raise InvalidArgumentError(f"{path}: cannot tell which column is the row key; pass --key")


def read_keyed(
    path: str | Path,
    column: Optional[str] = None,
    *,
    key: Optional[str] = None,
    fallbacks: Sequence[str] = THEORY_COLUMNS,
) -> dict[float, float]:
    """Map normalized row key -> value of ``column`` (or the first fallback present)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        rows = list(reader)
    col = _pick(header, column, fallbacks, path)
    key_col = _key_column(rows, header, key, path)
    return {_normalize_key(r[key_col]): float(r[col]) for r in rows if r[col] != ""}


def error_summary(theory: dict[float, float], experiment: dict[float, float]) -> ErrorSummary:
    only_t = sorted(set(theory) - set(experiment))
    only_e = sorted(set(experiment) - set(theory))
    if only_t or only_e:
        raise KeyMismatchError(only_t, only_e)
    if not theory:
        raise InvalidArgumentError("no rows to compare")
    diffs = [theory[k] - experiment[k] for k in sorted(theory)]
    n = len(diffs)
    return ErrorSummary(
        n=n,
        mean_abs_pct=100 * sum(abs(d) for d in diffs) / n,
        mean_signed_pct=100 * sum(diffs) / n,
    )
