import csv
import io
import json
import os
import subprocess
import sys

import pytest

from dihedral_bessel.cli import main, parse_grid, UsageError

EVEN = ["--group", "even", "--p", "2", "--k0", "0.5", "--k1", "0.5"]


def run(*args):
    return subprocess.run([sys.executable, "-m", "dihedral_bessel", *args], capture_output=True,
                          text=True, timeout=300)


def test_eval_normalization():
    out = run("eval", *EVEN, "--rho", "0", "--theta", "0.1", "--r", "1", "--phi", "0",
              "--format", "json")
    assert out.returncode == 0, out.stderr
    rec = json.loads(out.stdout)
    assert rec["value"] == 1.0
    assert set(rec) == {"value", "abs_error_est", "method", "terms_used", "quad_order"}


def test_eval_integral_needs_integer_nu():
    out = run("eval", "--group", "even", "--p", "2", "--k0", "0.5", "--k1", "0.7", "--rho", "1",
              "--phi", "0.1", "--r", "1", "--theta", "0.2", "--method", "integral")
    assert out.returncode == 2
    assert "integer" in out.stderr and "nu" in out.stderr


def test_eval_odd_matches_library():
    from dihedral_bessel import DihedralParams, PolarPoint, dkw
    out = run("eval", "--group", "odd", "--n", "3", "--k0", "1", "--rho", "1", "--phi", "0.2",
              "--r", "1.5", "--theta", "0.9", "--format", "json")
    assert out.returncode == 0, out.stderr
    rec = json.loads(out.stdout)
    ref = dkw(DihedralParams.odd(3, 1.0), PolarPoint(1.0, 0.2), PolarPoint(1.5, 0.9))
    assert rec["value"] == ref.value
    assert rec["abs_error_est"] <= 1e-7


def test_eval_text_output():
    out = run("eval", *EVEN, "--rho", "1", "--phi", "0.3", "--r", "2", "--theta", "0.5")
    assert out.returncode == 0
    assert out.stdout.startswith("value")


def test_eval_chamber_violation_is_usage_error():
    out = run("eval", *EVEN, "--rho", "1", "--phi", "1.2", "--r", "2", "--theta", "0.5")
    assert out.returncode == 2


def test_eval_missing_point_flag():
    assert main(["eval", *EVEN, "--rho", "1", "--phi", "0.3", "--r", "2"]) == 2


def test_eval_numerical_failure_exit_code():
    code = main(["eval", *EVEN, "--rho", "5", "--phi", "0.3", "--r", "5", "--theta", "0.5",
                 "--method", "series", "--max-terms", "2"])
    assert code == 3


def test_bad_flag_values():
    assert run("eval", "--group", "odd", "--n", "4", "--k0", "1", "--rho", "1", "--phi", "0",
               "--r", "1", "--theta", "0").returncode == 2
    assert run("eval", "--group", "sideways", "--k0", "1").returncode == 2


def test_validate_unknown_suite():
    assert run("validate", "--suite", "nonsense").returncode == 2
    assert run("validate", "--suite", "").returncode == 2


def test_validate_identities_json():
    out = run("validate", "--suite", "identities", "--report", "json", "--threads", "1")
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    assert rep["failed"] == 0 and rep["total"] == len(rep["cases"]) > 1000
    assert all(c["residual"] <= c["threshold"] for c in rep["cases"])


def test_validate_crosscheck():
    out = run("validate", "--suite", "crosscheck", "--threads", "2")
    assert out.returncode == 0, out.stdout
    assert "failed=0" in out.stdout.splitlines()[-1]


def test_validate_failure_exit_code():
    out = run("validate", "--suite", "identities", "--tol", "1e-30")
    assert out.returncode == 1


def test_validate_json_is_thread_independent():
    a = run("validate", "--suite", "identities", "--report", "json", "--threads", "1")
    b = run("validate", "--suite", "identities", "--report", "json", "--threads", "4")
    assert a.stdout == b.stdout


def _table(path, threads="2", extra=()):
    return run("table", *EVEN, "--grid", "rho=0:2:5,theta=0:0.7:5", "--phi", "0.3", "--r", "1.5",
               "--out", str(path), "--threads", threads, *extra)


def test_table_shape_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _table(a).returncode == 0
    assert _table(b, threads="1").returncode == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.reader(io.StringIO(a.read_text())))
    assert len(rows) == 26
    assert rows[0] == ["rho", "phi", "r", "theta", "value", "abs_error_est", "method", "wall_micros"]
    for row in rows[1:]:
        if float(row[0]) == 0.0:
            assert float(row[4]) == 1.0
        assert row[7] == ""
        mantissa = row[4].split("e")[0].lstrip("-")
        assert len(mantissa.replace(".", "")) == 17


def test_table_timing_column(tmp_path):
    out = tmp_path / "t.csv"
    assert _table(out, extra=("--timing",)).returncode == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert all(int(r[7]) >= 0 for r in rows[1:])


def test_table_unwritable_path(tmp_path):
    out = _table(tmp_path / "missing_dir" / "x.csv")
    assert out.returncode == 2


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_table_read_only_dir(tmp_path):
    d = tmp_path / "ro"
    d.mkdir()
    d.chmod(0o500)
    try:
        assert _table(d / "x.csv").returncode == 2
    finally:
        d.chmod(0o700)


def test_table_stdout():
    out = run("table", *EVEN, "--grid", "rho=0:1:2", "--phi", "0.3", "--r", "1.5", "--theta", "0.2")
    assert out.returncode == 0
    assert len(out.stdout.splitlines()) == 3


def test_parse_grid():
    assert parse_grid("rho=0:2:5") == {"rho": [0.0, 0.5, 1.0, 1.5, 2.0]}
    assert parse_grid("theta=0.25") == {"theta": [0.25]}
    for bad in ("", "rho", "rho=1:2", "x=1", "rho=1,rho=2", "rho=a:b:c", "rho=0:1:0"):
        with pytest.raises(UsageError):
            parse_grid(bad)


def test_bench_json():
    out = run("bench", "--group", "odd", "--n", "3", "--k0", "1", "--pairs", "1", "--repeat", "1",
              "--quad-order", "16", "--format", "json")
    assert out.returncode == 0, out.stderr
    rep = json.loads(out.stdout)
    row = rep["rows"][0]
    for name in ("series", "integral_shared_fit", "integral_per_node_fit"):
        assert "wall_micros" in row[name] and "abs_error_est" in row[name]
    assert rep["summary"]["median_speedup"] > 0


def test_bench_needs_integer_nu():
    out = run("bench", "--group", "even", "--p", "2", "--k0", "0.5", "--k1", "0.7")
    assert out.returncode == 2
