"""``scrteleport`` command line.

Exit codes: 0 success, 1 invariant or reproduction failure, 2 usage or
input error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from scrteleport.errors import InvalidArgumentError, InvalidStateError
from scrteleport.harness import checks, errormetric, sweep, tables
from scrteleport.scrambler import scrambling_report
from scrteleport.teleport import MeasurementPair

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_NAMES = {"pi": math.pi}
_FUNCS = {"sqrt": math.sqrt}


def parse_real(text: str) -> float:
    """Float, or a small arithmetic expression such as ``pi/3`` or ``1/sqrt(3)``."""
    if isinstance(text, (int, float)):
        return float(text)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
        ):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(text)

    try:
        value = ev(ast.parse(str(text).strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or angle expression: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _pair(text: str) -> MeasurementPair:
    try:
        return MeasurementPair.parse(text)
    except InvalidArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc))


# Per-command defaults applied after merging --config, so that explicit
# flags beat the file and the file beats these.
DEFAULTS: dict[str, dict[str, Any]] = {
    "verify": {"theta": list(checks.DEFAULT_GRID), "json": False, "corrupt_u": False},
    "sweep": {
        "var": "theta", "start": None, "stop": None, "points": None,
        "alpha": 1 / math.sqrt(3), "phi": 0.0, "theta": math.pi / 4,
        "pair": MeasurementPair.PAIR_23, "shots": None, "seed": None,
        "jobs": None, "out": None, "json": False,
    },
    "tables": {"out": ".", "json": False},
    "error": {"theory_column": None, "experiment_column": None, "key": None, "json": False},
    "scramble-report": {"theta": None, "json": False},
}

_CONVERTERS = {
    "theta": parse_real, "phi": parse_real, "alpha": parse_real,
    "start": parse_real, "stop": parse_real, "pair": _pair,
    "points": int, "shots": int, "seed": int, "jobs": int,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file supplying any flag; flags win")
    common.add_argument("--json", action="store_const", const=True, default=None)

    parser = argparse.ArgumentParser(
        prog="scrteleport",
        description="Teleportation through a scrambling unitary: simulate, sweep, reproduce.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--theta", nargs="+", type=parse_real, help="theta grid (default: 8 points)")
    p.add_argument("--corrupt-u", action="store_const", const=True, default=None,
                   help=argparse.SUPPRESS)

    p = sub.add_parser("sweep", parents=[common], help="emit CSV over a theta or phi grid")
    p.add_argument("--var", choices=["theta", "phi"])
    p.add_argument("--start", type=parse_real)
    p.add_argument("--stop", type=parse_real)
    p.add_argument("--points", type=int)
    p.add_argument("--alpha", type=parse_real)
    p.add_argument("--phi", type=parse_real, help="fixed phi (theta sweeps)")
    p.add_argument("--theta", type=parse_real, help="fixed theta (phi sweeps)")
    p.add_argument("--pair", type=_pair, help="23, 14 or 05")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, help="worker processes (default: CPU count)")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("tables", parents=[common], help="write table4.csv .. table7.csv")
    p.add_argument("--out", type=Path, help="output directory (default: .)")

    p = sub.add_parser("error", parents=[common], help="theory-vs-experiment error metric")
    p.add_argument("theory_csv", type=Path)
    p.add_argument("experiment_csv", type=Path)
    p.add_argument("--theory-column")
    p.add_argument("--experiment-column")
    p.add_argument("--key", help="row-key column (default: key, else the swept theta/phi)")

    p = sub.add_parser("scramble-report", parents=[common], help="Pauli conjugation report")
    p.add_argument("--theta", type=parse_real, required=False)
    return parser


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    defaults = DEFAULTS[args.command]
    config: dict[str, Any] = {}
    if args.config is not None:
        with open(args.config) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            parser.error(f"{args.config}: config must be a JSON object")
        config = {k.replace("-", "_"): v for k, v in raw.items()}
        unknown = set(config) - set(defaults)
        if unknown:
            parser.error(f"{args.config}: unknown keys {sorted(unknown)}")
    for name, default in defaults.items():
        if getattr(args, name, None) is not None:
            continue
        if name in config:
            value = config[name]
            conv = _CONVERTERS.get(name)
            try:
                if isinstance(value, list) and conv:
                    value = [conv(v) for v in value]
                elif conv and value is not None:
                    value = conv(value)
            except (argparse.ArgumentTypeError, TypeError, ValueError) as exc:
                parser.error(f"{args.config}: bad value for {name}: {exc}")
        else:
            value = default
        setattr(args, name, value)
    return args


def _open_out(path: Optional[Path]):
    if path is None:
        return sys.stdout, False
    return open(path, "w", newline=""), True


def cmd_verify(args) -> int:
    override = checks.corrupted_scrambler if args.corrupt_u else None
    report = checks.run_checks(args.theta, scrambler_override=override)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        for c in report.checks:
            status = "PASS" if c.passed else "FAIL"
            print(f"{status} {c.name:32s} max_dev={c.max_deviation:.3e} tol={c.tolerance:.0e}")
    if not report.passed:
        print("failed checks: " + ", ".join(report.failed), file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.var == "theta":
        start = 0.0 if args.start is None else args.start
        stop = math.pi / 2 if args.stop is None else args.stop
    else:
        start = 0.0 if args.start is None else args.start
        stop = math.pi if args.stop is None else args.stop
    spec = sweep.SweepSpec(
        variable=args.var,
        start=start,
        stop=stop,
        points=16 if args.points is None else args.points,
        pair=args.pair,
        alpha=args.alpha,
        theta=args.theta,
        phi=args.phi,
        shots=args.shots,
        seed=args.seed,
    )
    rows = sweep.run_sweep(spec, args.jobs)
    fh, close = _open_out(args.out)
    try:
        if args.json:
            payload = [
                {"analytic": r.analytic.to_dict(), "shots": r.sampled.to_dict() if r.sampled else None}
                for r in rows
            ]
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        else:
            sweep.write_sweep_csv(spec, rows, fh)
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_tables(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary, ok = {}, True
    for name in tables.TABLES:
        rows = tables.reproduce(name)
        tables.write_table(rows, out / f"{name}.csv")
        worst = max(r.abs_diff for r in rows if r.published is not None)
        passed = all(r.ok for r in rows)
        ok &= passed
        summary[name] = {"max_abs_diff": worst, "tolerance": tables.TABLES[name].tolerance,
                         "passed": passed, "path": str(out / f"{name}.csv")}
    if args.json:
        print(json.dumps(summary, indent=2))
    else:
        for name, s in summary.items():
            print(f"{'PASS' if s['passed'] else 'FAIL'} {name} max|diff|={s['max_abs_diff']:.2e} -> {s['path']}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_error(args) -> int:
    theory = errormetric.read_keyed(args.theory_csv, args.theory_column, key=args.key,
                                    fallbacks=errormetric.THEORY_COLUMNS)
    experiment = errormetric.read_keyed(args.experiment_csv, args.experiment_column, key=args.key,
                                        fallbacks=errormetric.EXPERIMENT_COLUMNS)
    summary = errormetric.error_summary(theory, experiment)
    if args.json:
        print(json.dumps(summary.to_dict()))
    else:
        print(f"n={summary.n} mean_abs_pct={summary.mean_abs_pct:.3f} "
              f"mean_signed_pct={summary.mean_signed_pct:.3f}")
    return EXIT_OK


def cmd_scramble_report(args) -> int:
    if args.theta is None:
        raise InvalidArgumentError("scramble-report needs --theta")
    report = scrambling_report(args.theta)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
        return EXIT_OK
    print(f"theta = {report.theta:.6f}")
    for row in report.rows:
        terms = " ".join(f"{c.real:+.6f}{p.ops}" if abs(c.imag) < 1e-12 else f"({c:.6f}){p.ops}"
                         for p, c in row.expansion.terms())
        print(f"{row.pauli.ops}  deloc={row.delocalization:.6f}  {terms}")
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "tables": cmd_tables,
    "error": cmd_error,
    "scramble-report": cmd_scramble_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args, parser)
        return COMMANDS[args.command](args)
    except errormetric.KeyMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidArgumentError, InvalidStateError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
