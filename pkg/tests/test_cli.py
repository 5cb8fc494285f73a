"""End to end tests of the command line front end."""

import json

import numpy as np
import pytest

from isolab.cli import run
from isolab.operators import Operator, make_weighted_shift, operator_to_dict


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def shift_json(tmp_path):
    s = np.arange(1, 40, dtype=float)
    w = np.sqrt((1.0 + 0.5 * s) / (1.0 + 0.5 * (s - 1.0)))
    op = make_weighted_shift(w, 32)
    return write_json(tmp_path / "shift.json", operator_to_dict(op))


@pytest.fixture
def dense_json(tmp_path):
    rng = np.random.default_rng(1)
    a = rng.normal(size=(3, 3))
    c = 0.8 * a / np.linalg.norm(a, 2)
    return write_json(tmp_path / "dense.json", operator_to_dict(Operator(c)))


@pytest.fixture
def jordan_json(tmp_path):
    op = Operator(np.array([[1.0, 1.0], [0.0, 1.0]]))
    return write_json(tmp_path / "jordan.json", operator_to_dict(op))


def test_defect_pass_and_fail(shift_json, capsys):
    assert run(["defect", "--input", shift_json, "--order", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["schema"] == 1
    assert out["verdict"] is True
    assert "timestamp" not in out
    assert run(["defect", "--input", shift_json, "--order", "1"]) == 1


def test_defect_report_to_file(shift_json, tmp_path):
    out_file = tmp_path / "report.json"
    assert run(["defect", "--input", shift_json, "--order", "2", "--out", str(out_file)]) == 0
    data = json.loads(out_file.read_text())
    assert "timestamp" in data
    assert data["verdict"] is True


def test_classify_command(dense_json, capsys):
    assert run(["classify", "--input", dense_json]) == 0
    out = json.loads(capsys.readouterr().out)
    assert "contraction" in out["classes"]


def test_invalid_input_exit_2(tmp_path, capsys):
    bad = write_json(tmp_path / "bad.json", {"kind": "nonsense"})
    assert run(["defect", "--input", bad, "--order", "2"]) == 2
    missing = str(tmp_path / "missing.json")
    assert run(["defect", "--input", missing, "--order", "2"]) == 2


def test_lift_shift_command(dense_json, capsys):
    code = run(["lift", "shift", "--input", dense_json, "--trunc", "64", "--tol", "1e-8"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["defect_order"] == 3
    assert out["iso_residual"] <= 1e-8


def test_lift_convex_divergence_exit_1(jordan_json, capsys):
    code = run(["lift", "convex", "--input", jordan_json, "--steps", "5"])
    assert code == 1
    out = json.loads(capsys.readouterr().out)
    assert out["diverging"] is True


def test_lift_convex_csv(tmp_path, capsys):
    op = Operator(np.diag([1.0, 0.5]))
    src = write_json(tmp_path / "t.json", operator_to_dict(op))
    csv_path = tmp_path / "tower.csv"
    run(["lift", "convex", "--input", src, "--steps", "4", "--csv", str(csv_path)])
    capsys.readouterr()
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "level,dim,defect2_norm,growth_c"
    assert len(lines) == 6


def test_dilate_budget_exit_3(dense_json, capsys):
    code = run(["dilate", "--input", dense_json, "--trunc", "4", "--power", "99"])
    assert code == 3


def test_vn_command(dense_json, capsys):
    code = run(
        ["vn", "--input", dense_json, "--poly", "[0.2, 0.5, 0.3]", "--K", "1.0",
         "--sweep", "16,32,64"]
    )
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["monotone"] is True
    assert out["poly_norm"] <= max(out["shift_norms"]) + 1e-8


def test_foguel_power_command(capsys):
    code = run(["foguel-power", "--n-param", "4", "--k-max", "3", "--trunc", "40",
                "--n-max", "30"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["sup_power_norm"] <= out["bound"] + 1e-9


def test_ergodic_command(dense_json, capsys):
    assert run(["ergodic", "--input", dense_json]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["cesaro_vanishing"] is True


def test_lift_foguel_command(tmp_path, capsys):
    n = 24
    shift = np.eye(n, k=-1)
    i = np.arange(n)
    sym = np.zeros(2 * n)
    sym[:3] = [1.0, 0.5, 0.25]
    hank = sym[i[:, None] + i[None, :]]
    hank = 0.9 * hank / np.linalg.norm(hank, 2)
    s = 0.6
    payload = {
        "kind": "block",
        "blocks": [
            [operator_to_dict(Operator(s * shift.T)), operator_to_dict(Operator(hank))],
            [None, operator_to_dict(Operator(s * shift))],
        ],
    }
    src = write_json(tmp_path / "block.json", payload)
    code = run(["lift", "foguel", "--input", src, "--trunc", str(n)])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["defect3_interior"] <= 1e-8
