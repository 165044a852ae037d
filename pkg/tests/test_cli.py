from __future__ import annotations

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from cmr.cli import OBJECTS, SCHEMA, main
from cmr.tensorcore import matrix_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_passes_with_sorted_schema(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "cybe", "--case", "trigonometric", "--a", "1",
                       "--n", "4", "--tol", "1e-9")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == SCHEMA and doc["passed"] and doc["failed"] == 0
    assert list(doc) == sorted(doc)
    assert out == json.dumps(doc, sort_keys=True, indent=2) + "\n"


def test_verify_reports_failure(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "cybe", "--n", "2", "--tol", "1e-300")
    assert code == 1
    doc = json.loads(out)
    assert not doc["passed"] and doc["failed"] >= 1


def test_verify_exact_all_zero(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all", "--case", "rational", "--n", "3",
                       "--mode", "exact", "--samples", "2")
    assert code == 0
    # every computed residual is an exact "0" except the Newton probe, which
    # iterates in floating point in every mode
    checks = [c for cs in json.loads(out)["suites"].values() for c in cs if c["status"] != "skipped"]
    assert len(checks) > 25
    for c in checks:
        assert c["residual"] == "0" or c["name"].startswith("Newton probe"), c


def test_verify_cg_rational_skips(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "cg", "--case", "rational", "--n", "2")
    assert code == 0
    checks = json.loads(out)["suites"]["cg"]
    status = {c["name"]: c["status"] for c in checks}
    assert any(s == "skipped" for s in status.values())
    assert any("key relation" in k and s == "pass" for k, s in status.items())


def test_build_examples(capsys):
    code, out, _ = run(capsys, "build", "L", "--case", "rational", "--n", "2", "--q", "1,0",
                       "--p", "2,3")
    assert code == 0
    assert np.array_equal(matrix_from_json(json.loads(out)), np.array([[2, 1j], [-1j, 3]]))
    code, out, _ = run(capsys, "build", "X", "--case", "rational", "--n", "2")
    assert np.array_equal(matrix_from_json(json.loads(out)), np.array([[0, 0], [-0.5, 0]]))
    code, out, _ = run(capsys, "build", "r_tilde_prime", "--case", "rational", "--n", "2")
    T = matrix_from_json(json.loads(out))
    assert np.count_nonzero(T) == 2 and set(T[T != 0].real) == {1.0, -1.0}


def test_build_every_object(capsys):
    for name in OBJECTS:
        code, out, _ = run(capsys, "build", name, "--case", "hyperbolic", "--n", "2", "--random")
        assert code == 0, name
        assert json.loads(out)["n"] == 2


def test_build_exact_and_negative_omega(capsys):
    code, out, _ = run(capsys, "build", "r_prime", "--n", "2", "--mode", "exact", "--omega=-1/4")
    assert code == 0 and json.loads(out)["mode"] == "exact"


@pytest.mark.parametrize("argv", [
    ["build", "nonsense"],
    ["build", "L", "--case", "hyperbolic", "--mode", "exact"],
    ["verify", "--tol", "-1"],
    ["verify", "--suite", "nope"],
    ["build", "L", "--n", "2", "--q", "1,1"],
    ["build", "phi", "--case", "hyperbolic", "--n", "2", "--q", "0.7,0.7000000000001"],
    ["evolve", "--steps", "0"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("cmr: error:")


def test_evolve_csv_and_drift(capsys, tmp_path):
    out = tmp_path / "traj.csv"
    code, _, err = run(capsys, "evolve", "--case", "rational", "--n", "2", "--q", "1,-1",
                       "--p", "0,0", "--dt", "1e-3", "--steps", "10000", "--format", "csv",
                       "--out", str(out))
    assert code == 0 and "max drift" in err
    lines = out.read_text().splitlines()
    assert lines[0].startswith("t,q1,q2,p1,p2") and len(lines) == 10002
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    col = lines[0].split(",").index("trL2")
    assert np.max(np.abs(data[:, col] - data[0, col])) <= 1e-6


def test_evolve_crossing_exits_1(capsys):
    code, out, _ = run(capsys, "evolve", "--case", "trigonometric", "--n", "2", "--q", "0.1,0.05",
                       "--p", "5,-5", "--dt", "1e-2", "--steps", "1000")
    assert code == 1
    assert json.loads(out)["error"]


def _cli(*argv, threads="1"):
    env = dict(os.environ, CMR_THREADS=threads)
    return subprocess.run([sys.executable, "-m", "cmr.cli", *argv], capture_output=True, text=True,
                          env=env)


def test_determinism_across_runs_and_threads():
    argv = ("verify", "--suite", "theorem1", "--suite", "cybe", "--case", "hyperbolic", "--n", "3",
            "--seed", "7", "--samples", "3")
    a, b, c = _cli(*argv), _cli(*argv), _cli(*argv, threads="4")
    assert a.returncode == 0
    assert a.stdout == b.stdout == c.stdout
    assert _cli(*argv, threads="zero").returncode == 2
