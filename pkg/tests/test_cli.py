import json

import numpy as np

from spheretrs import BtrsProblem, DiagonalOp, save_problem
from spheretrs.cli import main


def write_problem(tmp_path, d, b, name="p.json"):
    path = tmp_path / name
    save_problem(BtrsProblem(a=DiagonalOp(np.asarray(d, float)), b=np.asarray(b, float)), path)
    return path


def test_generate_then_solve(tmp_path, capsys):
    out = tmp_path / "prob.json"
    rc = main(["generate", "--n", "20", "--gap", "1.0", "--seed", "1", "--out", str(out)])
    assert rc == 0
    assert out.exists()
    assert out.with_suffix(".planted.json").exists()
    capsys.readouterr()

    trace = tmp_path / "trace.csv"
    rc = main(["solve", str(out), "--solver", "double-start", "--trace", str(trace)])
    assert rc == 0
    res = json.loads(capsys.readouterr().out)
    assert res["status"] == "Converged"

    lines = trace.read_text().strip().splitlines()
    assert lines[0] == "iter,q,grad_norm,res_norm,step,elapsed_s,marker"
    assert len(lines) > 1
    manifest = json.loads((tmp_path / "trace.csv.manifest.json").read_text())
    assert manifest["command"] == "solve"
    assert "problem_sha256" in manifest


def test_solve_max_iter_exit_code(tmp_path, capsys):
    out = tmp_path / "prob.json"
    main(["generate", "--n", "40", "--gap", "0.01", "--seed", "2", "--out", str(out)])
    capsys.readouterr()
    rc = main(["solve", str(out), "--solver", "rgd", "--max-iter", "2"])
    res = json.loads(capsys.readouterr().out)
    assert rc == 2
    assert res["status"] == "MaxIter"


def test_missing_file_exit_code(tmp_path, capsys):
    rc = main(["solve", str(tmp_path / "nope.json")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_trs_command(tmp_path, capsys):
    path = write_problem(tmp_path, [2.0, 2.0], [0.5, 0.0])
    rc = main(["trs", str(path)])
    assert rc == 0
    res = json.loads(capsys.readouterr().out)
    assert res["route"] == "interior"
    assert np.allclose(res["x"], [-0.25, 0.0], atol=1e-9)

    rc = main(["trs", str(path), "--strategy", "always-augment"])
    assert rc == 0
    res = json.loads(capsys.readouterr().out)
    assert res["route"] == "augmented"


def test_oracle_command(tmp_path, capsys):
    path = write_problem(tmp_path, [1.0, 3.0], [1.0, 1.0])
    rc = main(["oracle", str(path)])
    assert rc == 0
    res = json.loads(capsys.readouterr().out)
    assert res["case"] in ("easy", "hard")
    assert res["mu_star"] <= res["lambda"][0] + 1e-12
    assert len(res["x_star"]) == 2


def test_bench_command(tmp_path, capsys):
    out_dir = tmp_path / "bench"
    rc = main([
        "bench", "--n", "20", "--gaps", "1.0", "--seeds", "1",
        "--solvers", "rgd", "--out-dir", str(out_dir),
    ])
    capsys.readouterr()
    assert rc == 0
    assert (out_dir / "summary.csv").exists()
    assert (out_dir / "runs.json").exists()
    traces = list(out_dir.glob("trace_*.csv"))
    assert len(traces) == 1
    summary = (out_dir / "summary.csv").read_text().strip().splitlines()
    assert summary[0].startswith("solver,gap,")
    assert len(summary) == 2


def test_bench_rejects_bad_solver_list(tmp_path, capsys):
    rc = main(["bench", "--solvers", "", "--out-dir", str(tmp_path / "b")])
    assert rc == 1
    rc = main(["bench", "--solvers", "warp", "--out-dir", str(tmp_path / "b")])
    assert rc == 1
    capsys.readouterr()
