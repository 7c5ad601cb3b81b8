import json
import math
from pathlib import Path

import pytest

from algint import equilibrium_interval
from algint.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAIL, run

EQ_JSON = json.dumps({
    "kind": "EquilibriumInterval",
    "params": {"a": -2.0, "b": 2.0},
    "bounding_box": [-2.0, 2.0, 0.0],
})

POINT_MASS_JSON = json.dumps({
    "kind": "EmpiricalPoints",
    "params": {"points": [[0.0, 0.0, 1.0]]},
    "bounding_box": [-0.1, 0.1, 0.1],
})


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run(["synthesize"])  # missing required arguments
    assert exc.value.code == EXIT_USAGE


def test_unknown_command_exits_64():
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_check_measure_point_mass_fails(tmp_path):
    code = run(["check-measure", "--measure", POINT_MASS_JSON,
                "--max-degree", "1", "--max-height", "1",
                "--out-dir", str(tmp_path)])
    assert code == EXIT_VERIFY_FAIL
    doc = json.loads((tmp_path / "admissibility.json").read_text())
    assert doc["pass"] is False


def test_check_measure_equilibrium_passes(tmp_path):
    code = run(["check-measure", "--measure", EQ_JSON,
                "--max-degree", "1", "--max-height", "2",
                "--out-dir", str(tmp_path)])
    assert code == EXIT_OK


def test_sample_command(tmp_path):
    code = run(["sample", "--measure", EQ_JSON, "--n", "9",
                "--seed", "4", "--out-dir", str(tmp_path)])
    assert code == EXIT_OK
    assert (tmp_path / "plan.json").exists()
    assert (tmp_path / "points.csv").exists()
    assert (tmp_path / "points.png").exists()
    first = (tmp_path / "points.csv").read_text().splitlines()[0]
    assert first.startswith("# algint 0.1.0 config=")


def test_synthesize_artifacts_and_determinism(tmp_path):
    args = ["synthesize", "--measure", EQ_JSON, "--n", "24", "--seed", "3",
            "--precision-bits", "320", "--diagnostics"]
    d1, d2 = tmp_path / "a", tmp_path / "b"
    assert run(args + ["--out-dir", str(d1)]) == EXIT_OK
    assert run(args + ["--out-dir", str(d2)]) == EXIT_OK
    names = ["poly.txt", "roots.csv", "histogram.csv", "report.json",
             "gs_norms.csv", "roots.png", "histogram.png"]
    for name in names:
        b1 = (d1 / name).read_bytes()
        b2 = (d2 / name).read_bytes()
        assert b1 == b2, f"{name} differs between identical runs"
    # headers carry the version and a config hash
    for name in ("poly.txt", "roots.csv", "histogram.csv"):
        assert (d1 / name).read_text().startswith("# algint 0.1.0 config=")
    doc = json.loads((d1 / "report.json").read_text())
    assert doc["meta"]["tool"].startswith("algint")
    assert "timings" not in doc
    assert doc["eisenstein"] is True


def test_verify_command(tmp_path):
    out = tmp_path / "syn"
    assert run(["synthesize", "--measure", EQ_JSON, "--n", "24", "--seed", "3",
                "--precision-bits", "320", "--out-dir", str(out)]) == EXIT_OK
    vout = tmp_path / "ver"
    code = run(["verify", "--poly", str(out / "poly.txt"), "--measure",
                EQ_JSON, "--rho", "1.0", "--out-dir", str(vout)])
    assert code in (EXIT_OK, EXIT_VERIFY_FAIL)
    doc = json.loads((vout / "verify_report.json").read_text())
    assert doc["degree"] == 24


def test_weil_no_obstruction_exit_2(tmp_path):
    code = run(["weil", "--q", "3", "--n-ext", "1", "--degree", "16",
                "--retries", "1", "--out-dir", str(tmp_path)])
    assert code == EXIT_VERIFY_FAIL


def test_reduce_bench(tmp_path):
    code = run(["reduce-bench", "--dims", "2,3", "--count", "3",
                "--seed", "11", "--out-dir", str(tmp_path)])
    assert code == EXIT_OK
    rows = (tmp_path / "reduce_bench.csv").read_text().splitlines()
    assert rows[1] == "dim,instance,j,norm,lambda_j,ratio,bound"
    assert len(rows) > 5


def test_env_precision_override(tmp_path, monkeypatch):
    monkeypatch.setenv("ALGINT_PRECISION_BITS", "288")
    out = tmp_path / "env"
    assert run(["synthesize", "--measure", EQ_JSON, "--n", "20",
                "--seed", "1", "--out-dir", str(out)]) == EXIT_OK
    doc = json.loads((out / "report.json").read_text())
    assert doc["config"]["precision"] == 288
