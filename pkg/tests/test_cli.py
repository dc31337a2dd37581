import csv
import io
import json
import math
import subprocess
import sys

import pytest

from scrteleport.harness import tables
from scrteleport.harness.cli import main, parse_real
from scrteleport.harness.reference import PUBLISHED_ERRORS, fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestParseReal:
    @pytest.mark.parametrize(
        "text,value",
        [("0.5", 0.5), ("pi/3", math.pi / 3), ("1/sqrt(3)", 1 / math.sqrt(3)), ("-pi", -math.pi), ("2**-1", 0.5)],
    )
    def test_expressions(self, text, value):
        assert parse_real(text) == pytest.approx(value)

    @pytest.mark.parametrize("text", ["__import__('os')", "e", "1/0", "sqrt(2,3)", "", "inf"])
    def test_rejected(self, text):
        with pytest.raises(Exception):
            parse_real(text)


class TestVerify:
    def test_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == 0
        assert "eq3-pauli-conjugation" in out and "FAIL" not in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "verify", "--json", "--theta", "0.2", "pi/2")
        report = json.loads(out)
        assert code == 0 and report["passed"] and len(report["theta_grid"]) == 2

    def test_corrupted_unitary_fails(self, capsys):
        code, _, err = run(capsys, "verify", "--corrupt-u", "--theta", "0.7")
        assert code == 1
        assert "eq3-pauli-conjugation" in err

    def test_bad_theta(self, capsys):
        code, _, _ = run(capsys, "verify", "--theta", "3")
        assert code == 2


class TestSweep:
    def test_table_iv_grid(self, capsys):
        code, out, _ = run(capsys, "sweep", "--var", "theta", "--start", "0.1", "--stop", "1.5",
                           "--points", "15", "--pair", "23", "--jobs", "1")
        assert code == 0
        rows = read_csv(out)
        expected = {r["key"]: float(r["theory"]) for r in csv.DictReader(fixture_path("table4").open())}
        assert len(rows) == 15
        for row in rows:
            key = f"{float(row['theta']):.1f}"
            assert abs(float(row["favg_sq"]) - expected[key]) <= 5e-5

    def test_phi_sweep_pair_05(self, capsys):
        code, out, _ = run(capsys, "sweep", "--var", "phi", "--theta", "pi/3", "--start", "0.5",
                           "--stop", "3.5", "--points", "7", "--pair", "{0,5}", "--jobs", "1")
        rows = read_csv(out)
        assert code == 0 and rows[2]["phi"] == "1.500000"
        assert abs(float(rows[2]["favg_sq"]) - 0.801666) <= 5e-6

    def test_shots_columns_and_determinism(self, capsys):
        argv = ["sweep", "--points", "4", "--shots", "200", "--seed", "9", "--jobs", "1"]
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second
        rows = read_csv(first)
        assert rows[0]["shots"] == "200" and rows[0]["seed"] == "9"
        assert rows[0]["shots_favg_sq"] != ""

    def test_order_independent_of_jobs(self, capsys):
        argv = ["sweep", "--points", "9", "--shots", "300", "--seed", "3"]
        _, serial, _ = run(capsys, *argv, "--jobs", "1")
        _, parallel, _ = run(capsys, *argv, "--jobs", "3")
        assert serial == parallel

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "s.csv"
        code, out, _ = run(capsys, "sweep", "--points", "3", "--out", str(path), "--jobs", "1")
        assert code == 0 and out == ""
        assert len(read_csv(path.read_text())) == 3

    def test_json(self, capsys):
        _, out, _ = run(capsys, "sweep", "--points", "2", "--json", "--jobs", "1")
        payload = json.loads(out)
        assert len(payload) == 2 and payload[0]["shots"] is None

    @pytest.mark.parametrize(
        "argv",
        [
            ["--start", "1", "--stop", "0.5"],
            ["--points", "1"],
            ["--stop", "2"],
            ["--alpha", "1.5"],
            ["--shots", "0"],
            ["--jobs", "0"],
        ],
    )
    def test_invalid_arguments(self, capsys, argv):
        code, _, err = run(capsys, "sweep", *argv)
        assert code == 2 and err

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--pair", "12"])
        assert exc.value.code == 2

    def test_unwritable_out(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep", "--points", "2", "--out", str(tmp_path / "nope" / "x.csv"), "--jobs", "1")
        assert code == 3


class TestConfig:
    def test_file_supplies_values(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"points": 3, "pair": "05", "alpha": "1/sqrt(2)", "jobs": 1}))
        code, out, _ = run(capsys, "sweep", "--config", str(cfg))
        rows = read_csv(out)
        assert code == 0 and len(rows) == 3 and rows[0]["pair"] == "05"
        assert float(rows[0]["alpha"]) == pytest.approx(1 / math.sqrt(2), abs=1e-6)

    def test_flags_win(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"points": 3, "pair": "05", "jobs": 1}))
        _, out, _ = run(capsys, "sweep", "--config", str(cfg), "--points", "5")
        rows = read_csv(out)
        assert len(rows) == 5 and rows[0]["pair"] == "05"

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--config", str(cfg)])
        assert exc.value.code == 2

    def test_malformed_json(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text("{not json")
        code, _, _ = run(capsys, "sweep", "--config", str(cfg))
        assert code == 2

    def test_missing_config(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep", "--config", str(tmp_path / "missing.json"))
        assert code == 3


class TestTables:
    def test_writes_all(self, capsys, tmp_path):
        code, out, _ = run(capsys, "tables", "--out", str(tmp_path))
        assert code == 0 and out.count("PASS") == 4
        for name in tables.TABLES:
            rows = read_csv((tmp_path / f"{name}.csv").read_text())
            assert set(rows[0]) == set(tables.TABLE_FIELDS)
            assert all(r["within_tolerance"] in ("true", "") for r in rows)

    def test_json_summary(self, capsys, tmp_path):
        _, out, _ = run(capsys, "tables", "--out", str(tmp_path), "--json")
        summary = json.loads(out)
        assert summary["table6"]["tolerance"] == 5e-6
        assert all(s["passed"] for s in summary.values())


class TestError:
    @pytest.mark.parametrize("table,column", sorted(PUBLISHED_ERRORS))
    def test_fixture_metric(self, capsys, table, column):
        path = str(fixture_path(table))
        code, out, _ = run(capsys, "error", path, path, "--theory-column", "theory",
                           "--experiment-column", column, "--json")
        assert code == 0
        summary = json.loads(out)
        assert summary["n"] in (7, 15)
        assert summary["mean_abs_pct"] >= abs(summary["mean_signed_pct"])

    def test_round_trip_with_sweep(self, capsys, tmp_path):
        theory, shots = tmp_path / "t.csv", tmp_path / "s.csv"
        run(capsys, "sweep", "--points", "5", "--out", str(theory), "--jobs", "1")
        run(capsys, "sweep", "--points", "5", "--shots", "1000", "--seed", "1", "--out", str(shots), "--jobs", "1")
        code, out, _ = run(capsys, "error", str(theory), str(shots), "--json")
        summary = json.loads(out)
        assert code == 0 and summary["n"] == 5
        assert 0 < summary["mean_abs_pct"] < 10

    def test_self_comparison_is_zero(self, capsys):
        path = str(fixture_path("table5"))
        _, out, _ = run(capsys, "error", path, path)
        assert "mean_abs_pct=0.000" in out

    def test_key_mismatch(self, capsys):
        code, _, err = run(capsys, "error", str(fixture_path("table4")), str(fixture_path("table5")))
        assert code == 2 and "unmatched" in err

    def test_missing_column(self, capsys):
        path = str(fixture_path("table4"))
        code, _, _ = run(capsys, "error", path, path, "--experiment-column", "nope")
        assert code == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "error", str(tmp_path / "a.csv"), str(fixture_path("table4")))
        assert code == 3


class TestScrambleReport:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "scramble-report", "--theta", "0.7")
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 10
        assert lines[1].startswith("XII")

    def test_json(self, capsys):
        _, out, _ = run(capsys, "scramble-report", "--theta", "pi/2", "--json")
        d = json.loads(out)
        assert all(r["delocalization"] == 1.0 for r in d["rows"])

    def test_out_of_range(self, capsys):
        assert run(capsys, "scramble-report", "--theta", "2")[0] == 2

    def test_theta_required(self, capsys):
        assert run(capsys, "scramble-report")[0] == 2

    def test_theta_from_config(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"theta": "pi/4"}))
        code, out, _ = run(capsys, "scramble-report", "--config", str(cfg))
        assert code == 0 and out.startswith("theta = 0.785398")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "scrteleport", "verify", "--theta", "0.5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
