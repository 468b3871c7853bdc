"""Command-line surface: exit codes, JSON/CSV output, determinism."""

import csv
import io
import json
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

from holevo2q.cli import main


@pytest.fixture
def generic_model(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"kind": "generic_z", "theta0": 0.2}))
    return str(path)


@pytest.fixture
def planar_model(tmp_path):
    path = tmp_path / "planar.json"
    path.write_text(
        json.dumps({"kind": "planar", "u1": [1, 0, 0], "u2": [0, 1, 0]})
    )
    return str(path)


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def read_csv(path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    assert lines[0].startswith("# holevo2q") and "schema v1" in lines[0]
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


class TestBoundsCommand:
    def test_reference_point(self, generic_model):
        t = 0.346 / np.sqrt(2.0)
        code, out, _ = run_cli(
            "bounds", "--model", generic_model, "--theta", f"{t},{t}", "--weight", "1,0,1"
        )
        assert code == 0
        record = json.loads(out)
        assert record["gamma1"] == pytest.approx(0.292, abs=1e-3)
        assert record["gamma2"] == pytest.approx(0.292, abs=1e-3)
        assert record["branch"] in ("rld", "correction", "boundary")

    def test_planar_values(self, planar_model):
        code, out, _ = run_cli(
            "bounds", "--model", planar_model, "--theta", "0.6,0", "--weight", "1,0,1"
        )
        assert code == 0
        record = json.loads(out)
        assert record["c_h"] == pytest.approx(1.64, rel=1e-10)
        assert record["c_s"] == pytest.approx(1.64, rel=1e-10)
        assert record["c_n"] == pytest.approx(3.24, rel=1e-10)
        assert record["asymptotically_classical"] is True

    def test_pure_point_rejected(self, generic_model):
        code, _, err = run_cli(
            "bounds", "--model", generic_model, "--theta", "0.9,0.5", "--weight", "1,0,1"
        )
        assert code == 2
        assert "PureStateError" in err

    def test_bad_weight_rejected(self, generic_model):
        code, _, err = run_cli(
            "bounds", "--model", generic_model, "--theta", "0.1,0.1", "--weight", "1,2,1"
        )
        assert code == 2
        assert "DomainError" in err


class TestSweepWeight:
    def test_deterministic_and_consistent(self, generic_model, tmp_path):
        t = 0.346 / np.sqrt(2.0)
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        for out in (out1, out2):
            code, _, _ = run_cli(
                "sweep-weight",
                "--model", generic_model,
                "--theta", f"{t},{t}",
                "--grid", "21",
                "--out", str(out),
                "--jobs", "2" if out is out2 else "1",
            )
            assert code == 0
        assert out1.read_text() == out2.read_text()  # order-independent output
        rows = read_csv(str(out1))
        assert len(rows) == 21 * 21
        branches = {r["branch"] for r in rows}
        assert "rld" in branches and "correction" in branches
        for r in rows:
            b = float(r["b_theta"])
            if r["branch"] == "rld":
                assert b > 0
            elif r["branch"] == "correction":
                assert b < 0

    def test_boundary_family_sweep(self, generic_model, tmp_path):
        t = 0.346 / np.sqrt(2.0)
        out = tmp_path / "fam42.csv"
        code, _, _ = run_cli(
            "sweep-weight",
            "--model", generic_model,
            "--theta", f"{t},{t}",
            "--grid", "15",
            "--weight-family", "42",
            "--w-max", "0.9",
            "--out", str(out),
        )
        assert code == 0
        rows = read_csv(str(out))
        assert len(rows) == 15 * 15
        # Region must correlate with w^2 + w2^2 vs 1.
        for r in rows:
            radius_sq = float(r["w"]) ** 2 + float(r["w2"]) ** 2
            if abs(radius_sq - 1.0) < 1e-2:
                continue
            expected = "rld" if radius_sq < 1.0 else "correction"
            assert r["branch"] == expected


class TestSweepTheta:
    def test_fixed_weight_regions(self, generic_model, tmp_path):
        out = tmp_path / "theta.csv"
        code, _, _ = run_cli(
            "sweep-theta",
            "--model", generic_model,
            "--weight", "0.55,0,0.45",
            "--grid", "31",
            "--out", str(out),
        )
        assert code == 0
        rows = read_csv(str(out))
        assert rows, "sweep produced no in-domain rows"
        branches = {r["branch"] for r in rows}
        assert "rld" in branches and "correction" in branches
        origin = min(
            rows, key=lambda r: float(r["theta1"]) ** 2 + float(r["theta2"]) ** 2
        )
        assert float(origin["gamma1"]) == pytest.approx(
            float(origin["theta1"]) / (1 - 0.2**2 - float(origin["theta1"]) ** 2
                                       - float(origin["theta2"]) ** 2), rel=1e-6
        )

    def test_planar_single_branch(self, planar_model, tmp_path):
        out = tmp_path / "planar.csv"
        code, _, _ = run_cli(
            "sweep-theta",
            "--model", planar_model,
            "--weight", "1,0,1",
            "--grid", "15",
            "--out", str(out),
        )
        assert code == 0
        rows = read_csv(str(out))
        assert {r["branch"] for r in rows} <= {"correction", "boundary"}

    def test_d_invariant_model_single_branch(self, tmp_path):
        model = tmp_path / "unitary.json"
        model.write_text(json.dumps({"kind": "unitary", "radius": 0.7}))
        out = tmp_path / "unitary-sweep.csv"
        code, _, _ = run_cli(
            "sweep-weight",
            "--model", str(model),
            "--theta", "1.0,2.0",
            "--grid", "15",
            "--out", str(out),
        )
        assert code == 0
        rows = read_csv(str(out))
        assert {r["branch"] for r in rows} <= {"rld", "boundary"}
        assert all(r["d_invariant"] == "1" for r in rows)

    def test_origin_cell_flagged_d_invariant(self, generic_model, tmp_path):
        out = tmp_path / "origin.csv"
        code, _, _ = run_cli(
            "sweep-theta",
            "--model", generic_model,
            "--weight", "1,0,1",
            "--grid", "31",  # odd count: the grid contains theta = (0, 0)
            "--out", str(out),
        )
        assert code == 0
        rows = read_csv(str(out))
        origin_rows = [
            r for r in rows
            if float(r["theta1"]) == 0.0 and float(r["theta2"]) == 0.0
        ]
        assert origin_rows and all(r["d_invariant"] == "1" for r in origin_rows)
        off_axis = [r for r in rows if float(r["theta1"]) != 0.0]
        assert all(r["d_invariant"] == "0" for r in off_axis)


class TestClassifyCommand:
    def test_point_and_family(self, generic_model):
        code, out, _ = run_cli(
            "classify", "--model", generic_model, "--theta", "0.2,0.3", "--grid", "5"
        )
        assert code == 0
        data = json.loads(out)
        assert data["point"]["label"] == "generic"
        assert data["family"]["globally_d_invariant"] is False

    def test_unitary_family_global(self, tmp_path):
        path = tmp_path / "unitary.json"
        path.write_text(json.dumps({"kind": "unitary", "radius": 0.7}))
        code, out, _ = run_cli("classify", "--model", str(path), "--grid", "4")
        assert code == 0
        data = json.loads(out)
        assert data["family"]["globally_d_invariant"] is True


class TestVerifyCommand:
    def test_small_run_passes(self):
        code, out, _ = run_cli("verify", "--seed", "7", "--count", "5")
        assert code == 0
        assert "all" in out and "passed" in out

    def test_zero_count_invalid(self):
        code, _, err = run_cli("verify", "--seed", "7", "--count", "0")
        assert code == 2
        assert "ModelError" in err

    def test_injected_failure(self):
        code, out, _ = run_cli(
            "verify", "--seed", "7", "--count", "3", "--inject-failure"
        )
        assert code == 1
        assert "FAIL" in out
