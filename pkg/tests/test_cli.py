import json

import numpy as np
import pytest

from qensembles import Ensemble, PointMeasure
from qensembles import serialize as ser
from qensembles.cli import main
from qensembles.ensembles import singleton

from conftest import basis_ket, ketbra


@pytest.fixture
def example1_files(tmp_path):
    z0, z1 = ketbra(basis_ket(2, 0)), ketbra(basis_ket(2, 1))
    sigma = np.eye(2, dtype=complex) / 2
    rho2 = np.diag([0.3, 0.7]).astype(complex)
    mu = Ensemble.from_members([(0.5, np.kron(z0, z0)), (0.5, np.kron(rho2, z1))])
    nu = singleton(np.kron(sigma, z0))
    a = tmp_path / "mu.json"
    b = tmp_path / "nu.json"
    a.write_text(json.dumps(ser.ensemble_to_json(mu)))
    b.write_text(json.dumps(ser.ensemble_to_json(nu)))
    return str(a), str(b)


def test_metric_d0(example1_files, capsys):
    a, b = example1_files
    assert main(["metric", "d0", "--a", a, "--b", b]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == pytest.approx(0.5, abs=1e-10)


def test_metric_dk_and_dehs(example1_files, capsys):
    a, b = example1_files
    assert main(["metric", "dk", "--a", a, "--b", b]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == pytest.approx(0.75, abs=1e-10)
    assert out["upper_bound"] >= out["value"] - 1e-12

    assert main(["metric", "dehs", "--a", a, "--b", b, "--tol", "1e-7"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["gap"] <= 1e-7


def test_metric_kr(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    pm1 = PointMeasure(points=np.array([[0.0, 0.0]]), weights=np.array([1.0]))
    pm2 = PointMeasure(points=np.array([[0.5, 0.0]]), weights=np.array([1.0]))
    a.write_text(json.dumps(ser.point_measure_to_json(pm1)))
    b.write_text(json.dumps(ser.point_measure_to_json(pm2)))
    assert main(["metric", "kr", "--a", str(a), "--b", str(b)]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(0.5, abs=1e-9)


def test_bound_subcommand(capsys):
    assert main(["bound", "prop2", "--param", "eps=0.1", "--param", "rank=4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == pytest.approx(0.1 * np.log(3) + 0.3250829733914482)


def test_verify_exits_clean(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code = main([
        "verify", "steering", "--seed", "3", "--trials", "4",
        "--out", str(out_path), "--format", "json",
    ])
    assert code == 0
    rows = json.loads(out_path.read_text())
    assert rows and all(r["holds"] for r in rows)


def test_verify_csv_output(tmp_path):
    out_path = tmp_path / "report.csv"
    code = main([
        "verify", "lemmas", "--seed", "3", "--trials", "4",
        "--out", str(out_path), "--format", "csv",
    ])
    assert code == 0
    header = out_path.read_text().splitlines()[0]
    assert header == "trial,tag,lhs,rhs,epsilon,holds,params"


def test_repro_crossover_surfaces_known_red(tmp_path, capsys):
    out_path = tmp_path / "cross.csv"
    code = main(["repro", "crossover", "--out", str(out_path), "--format", "csv"])
    assert code == 1  # the two reported bands that contradict the u/v equation
    text = out_path.read_text()
    assert "# table: crossover" in text
    err = capsys.readouterr().err
    assert "crossover/band-hi" in err and "crossover/band-lo" in err


def test_config_file_merging(tmp_path):
    out = tmp_path / "r.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "trials": 3, "dims": [2], "dehs_tol": 1e-6, "output_path": str(out),
    }))
    code = main(["verify", "scb-rank", "--config", str(cfg), "--seed", "9"])
    assert code == 0
    assert out.exists() and json.loads(out.read_text())
