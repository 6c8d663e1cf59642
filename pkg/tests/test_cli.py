import csv
import json

import pytest

from hcmalab.cli import main
from hcmalab.store import checkpoint_read


def run(tmp_path, *args):
    return main(list(args) + ["--out", str(tmp_path)])


def test_solve_writes_artifacts(tmp_path):
    ckpt = tmp_path / "p.ckpt"
    assert run(tmp_path, "solve", "--phi1", "const:0.3", "--checkpoint", str(ckpt)) == 0
    report = json.loads((tmp_path / "solve.json").read_text())
    assert report["constants"] == {"B": 0.0, "C": 1.0, "R": 0.0, "inf_f": 0.0, "inf_lap_f": 0.0,
                                   "sup_f": 0.0, "sup_grad_f": 0.0}
    assert report["config"]["phi1"] == "const:0.3"
    assert "wall_time" not in json.dumps(report)
    rows = list(csv.DictReader((tmp_path / "levels.csv").open()))
    assert list(rows[0]) == ["t", "sup_h", "min_eig", "E", "residual"]
    path, eps, meta = checkpoint_read(ckpt)
    assert eps == 0.1 and path.grid.N == 32
    assert (tmp_path / "energy.dat").exists()
    assert report["sup_h"] == pytest.approx(1.0)
    assert run(tmp_path, "verify", "--checkpoint", str(ckpt)) == 0
    ver = json.loads((tmp_path / "verify.json").read_text())
    assert ver["source"] == "checkpoint" and ver["residual_norm"] <= 1e-9


def test_sweep_and_distance(tmp_path):
    assert run(tmp_path, "sweep", "--phi0", "degenerate:1.0", "--schedule", "0.1,0.03") == 0
    report = json.loads((tmp_path / "sweep.json").read_text())
    assert report["smoothing"] == [0.1, 0.03]
    assert report["endpoint_classes"]["phi0"] == "H11"
    header = (tmp_path / "sweep.csv").read_text().splitlines()[0]
    assert header == "eps,sup_h,sup_phi_t,sup_grad"
    assert run(tmp_path, "distance", "--phi1", "const:0.7", "--schedule", "0.1,0.001") == 0
    d = json.loads((tmp_path / "distance.json").read_text())
    assert d["label"] == "distance estimate"
    assert d["distance_estimate"] == pytest.approx(0.7, abs=2e-3)


def test_triangle_reports_defect(tmp_path):
    assert run(tmp_path, "triangle", "--phi1", "const:0.3", "--phi2", "const:0.7",
               "--schedule", "0.1,0.01") == 0
    rep = json.loads((tmp_path / "triangle.json").read_text())
    assert abs(rep["defect"]) <= 1e-4


def test_oracle_and_verify(tmp_path):
    assert run(tmp_path, "oracle", "--count", "300") == 0
    assert json.loads((tmp_path / "oracle.json").read_text())["passed"]
    assert run(tmp_path, "verify", "--phi1", "cos:0.02") == 0
    lin = json.loads((tmp_path / "verify.json").read_text())["linearization"]
    assert 3.5 <= lin["ratio"] <= 4.5


def test_config_error_exit(tmp_path, capsys):
    assert run(tmp_path, "solve", "--n", "3") == 2
    err = capsys.readouterr().err.strip()
    assert err.startswith("error code=CONFIG_ERROR message=")
    assert len(err.splitlines()) == 1


def test_missing_config_file(tmp_path, capsys):
    assert run(tmp_path, "solve", "--config", str(tmp_path / "none.cfg")) == 2
    assert run(tmp_path, "verify", "--checkpoint", str(tmp_path / "none.ckpt")) == 2


def test_corrupt_checkpoint_exit(tmp_path, capsys):
    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(b"HCMA\x01")
    assert run(tmp_path, "verify", "--checkpoint", str(bad)) == 2
    assert "code=CHECKPOINT_TRUNCATED" in capsys.readouterr().err


def test_solver_failure_exit(tmp_path, capsys):
    assert run(tmp_path, "solve", "--phi1", "cos:0.02", "--max-newton", "1", "--tol", "1e-14") == 3
    assert "code=NON_CONVERGENCE" in capsys.readouterr().err


def test_inadmissible_endpoint(tmp_path, capsys):
    assert run(tmp_path, "solve", "--phi1", "cos:0.5") == 2


def test_thread_env(tmp_path, monkeypatch):
    monkeypatch.setenv("HCMA_THREADS", "1")
    assert run(tmp_path, "solve") == 0
    monkeypatch.setenv("HCMA_THREADS", "two")
    assert run(tmp_path, "solve") == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("phi1 = const:0.2\neps = 0.05\n")
    assert run(tmp_path, "solve", "--config", str(cfg)) == 0
    rep = json.loads((tmp_path / "solve.json").read_text())
    assert rep["config"]["eps"] == 0.05


def test_oracle_violation_exit(tmp_path, monkeypatch, capsys):
    from hcmalab import oracle

    real = oracle.run_suites

    def broken(**kw):
        out = real(**kw)
        out["yau"] = dict(out["yau"], passed=False)
        return out

    monkeypatch.setattr(oracle, "run_suites", broken)
    assert run(tmp_path, "oracle", "--count", "100") == 4
    assert "code=ORACLE_VIOLATION" in capsys.readouterr().err
    assert not json.loads((tmp_path / "oracle.json").read_text())["passed"]


def test_truncated_sweep_exit(tmp_path, capsys):
    assert run(tmp_path, "sweep", "--phi1", "cos:0.02", "--schedule", "0.1,0.01",
               "--max-newton", "1") == 3
    report = json.loads((tmp_path / "sweep.json").read_text())
    assert report["truncated"] and report["failure"]["code"] == "NON_CONVERGENCE"
