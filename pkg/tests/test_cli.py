import csv
import io
import json

import numpy as np
import pytest

from diracmech.cli import main, read_trajectory_csv


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_free_particle_csv(capsys):
    code, out, _ = run_cli(capsys, "run", "--system", "free_particle",
                           "--method", "del", "--h", "0.5", "--steps", "2",
                           "--q0", "0", "--p0", "1")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:3] == ["k", "q_0", "p_0"]
    qs = [float(r[1]) for r in rows[1:]]
    assert qs == [0.0, 0.5, 1.0]
    assert all(float(r[2]) == 1.0 for r in rows[1:])


def test_run_zero_steps_echoes_initial(capsys):
    code, out, _ = run_cli(capsys, "run", "--system", "harmonic_oscillator",
                           "--steps", "0", "--q0", "1", "--p0", "0")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 2  # header + k=0
    assert rows[1][0] == "0"
    assert float(rows[1][1]) == 1.0


def test_run_mismatched_q0_exits_1(capsys):
    code, _, err = run_cli(capsys, "run", "--system", "harmonic_oscillator",
                           "--q0", "1,2", "--p0", "0")
    assert code == 1
    assert "q0" in err


def test_run_json_format(capsys):
    code, out, _ = run_cli(capsys, "run", "--system", "free_particle",
                           "--h", "0.5", "--steps", "1", "--q0", "0",
                           "--p0", "1", "--format", "json")
    assert code == 0
    records = json.loads(out)
    assert len(records) == 2
    assert float(records[1]["q_0"]) == 0.5


def test_csv_round_trip_full_precision(capsys, tmp_path):
    out_file = tmp_path / "traj.csv"
    code, _, _ = run_cli(capsys, "run", "--system", "harmonic_oscillator",
                         "--method", "del", "--h", "0.1", "--steps", "20",
                         "--q0", "1", "--p0", "0", "--output", str(out_file))
    assert code == 0
    with open(out_file) as fh:
        points, header = read_trajectory_csv(fh)

    # recompute in memory and compare bit-for-bit
    import diracmech as dm
    ld = dm.discretize(dm.catalog("harmonic_oscillator"),
                       dm.QuadratureRule("midpoint", 0.1))
    traj = dm.integrate(dm.make_stepper("del", ld),
                        dm.PhasePoint([1.0], [0.0]), 20, 0.1)
    assert len(points) == len(traj.points)
    for a, b in zip(points, traj.points):
        assert a.q.tobytes() == b.q.tobytes()
        assert a.p.tobytes() == b.p.tobytes()


def test_run_partial_output_on_failure(capsys, tmp_path):
    cfg = {"system": "pendulum", "method": "del", "h": 0.1, "steps": 5,
           "q0": [1.0], "p0": [0.5],
           "newton": {"tol": 1e-30, "max_iters": 1, "damping": "none"}}
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps(cfg))
    code, out, err = run_cli(capsys, "run", "--config", str(cfg_file))
    assert code == 2
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 2  # header + initial point still written
    assert "step 0" in err


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"system": "free_particle", "h": 0.1,
                                    "steps": 3, "q0": [0.0], "p0": [1.0]}))
    code, out, _ = run_cli(capsys, "run", "--config", str(cfg_file),
                           "--h", "0.5", "--steps", "1")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 3
    assert float(rows[2][1]) == 0.5  # h override took effect


def test_run_constrained_emits_lambda_column(capsys):
    code, out, _ = run_cli(capsys, "run", "--system", "nonholonomic_particle",
                           "--method", "del-constrained", "--h", "0.05",
                           "--steps", "3", "--q0", "0,0,0", "--p0", "0.4,0.3,0")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][-1] == "lambda_0"
    assert rows[0][1:4] == ["q_0", "q_1", "q_2"]


def test_verify_pass(capsys):
    code, out, _ = run_cli(capsys, "verify", "--system", "harmonic_oscillator",
                           "--method", "del", "--h", "0.1", "--steps", "10",
                           "--q0", "1", "--p0", "0",
                           "--checks", "symplectic,genfunc1", "--tol", "1e-6")
    assert code == 0
    reports = json.loads(out)
    assert [r["name"] for r in reports] == ["symplectic", "genfunc1"]
    assert all(r["pass"] for r in reports)


def test_verify_unknown_check_exits_1(capsys):
    code, _, err = run_cli(capsys, "verify", "--system", "harmonic_oscillator",
                           "--checks", "entropy")
    assert code == 1
    assert "entropy" in err


def test_verify_dirac_wrong_method_fails(capsys):
    """Unconstrained integration of the constrained system violates phi_d."""
    code, out, _ = run_cli(capsys, "verify", "--system", "nonholonomic_particle",
                           "--method", "del", "--h", "0.05", "--steps", "20",
                           "--q0", "0,0,0", "--p0", "0.4,0.3,0.2",
                           "--checks", "dirac", "--tol", "1e-9")
    assert code == 2
    reports = json.loads(out)
    assert not reports[0]["pass"]


def test_compare_pass(capsys):
    code, out, _ = run_cli(capsys, "compare", "--system", "harmonic_oscillator",
                           "--h", "0.1", "--steps", "100", "--q0", "1",
                           "--p0", "0", "--methods", "del,ham-plus",
                           "--tol", "1e-8")
    assert code == 0
    result = json.loads(out)
    assert result["pass"]
    assert result["method_pairs"][0]["deviation"] <= 1e-8


def test_compare_needs_two_methods(capsys):
    code, _, err = run_cli(capsys, "compare", "--system", "harmonic_oscillator",
                           "--methods", "del")
    assert code == 1
    assert "two methods" in err


def test_compare_constrained_methods(capsys):
    code, out, _ = run_cli(capsys, "compare", "--system", "nonholonomic_particle",
                           "--h", "0.05", "--steps", "50", "--q0", "0,0,0",
                           "--p0", "0.4,0.3,0",
                           "--methods", "del-constrained,ham-plus-constrained",
                           "--tol", "1e-8")
    assert code == 0
    assert json.loads(out)["pass"]


def test_unknown_system_exits_1(capsys):
    cfg = {"system": "double_pendulum"}
    import tempfile, os
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(cfg, fh)
        path = fh.name
    try:
        code, _, err = run_cli(capsys, "run", "--config", path)
    finally:
        os.unlink(path)
    assert code == 1
    assert "system" in err
