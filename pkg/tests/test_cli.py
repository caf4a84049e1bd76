import json
import subprocess
import sys

import pytest

from listrec.cli import cli
from listrec.harness import code_from_json


def run(argv, capsys):
    status = cli(argv)
    out = capsys.readouterr()
    return status, out.out, out.err


@pytest.fixture
def code_file(tmp_path, capsys):
    path = tmp_path / "code.json"
    assert cli(["gen", "--q", "3", "--n", "4", "--R", "1/2", "--seed", "5", "--out", str(path)]) == 0
    return path


@pytest.fixture
def lam_file(tmp_path):
    path = tmp_path / "lam.json"
    vecs = [[1, 2, 3, 4], [2, 4, 6, 1], [3, 6, 2, 5], [4, 1, 5, 2], [5, 3, 1, 6], [6, 5, 4, 3],
            [5, 4, 3, 1], [2, 0, 0, 0], [1, 5, 4, 6], [3, 4, 6, 5], [4, 3, 3, 6], [1, 5, 4, 0]]
    path.write_text(json.dumps({"schema": "listrec.lambda/1", "field": {"p": 7, "m": 1}, "d": 4, "vectors": vecs}))
    return path


def test_gen_writes_code(code_file):
    C = code_from_json(json.loads(code_file.read_text()))
    assert (C.field.q, C.n, C.k, C.seed) == (3, 4, 2, 5)


def test_gen_seed_before_subcommand(capsys):
    _, a, _ = run(["--seed", "9", "gen", "--q", "2", "--n", "5", "--k", "2"], capsys)
    _, b, _ = run(["gen", "--q", "2", "--n", "5", "--k", "2", "--seed", "9"], capsys)
    assert a == b and json.loads(a)["seed"] == 9


def test_check_verdict_and_assert(code_file, capsys):
    status, out, _ = run(["check", str(code_file), "--property", "ARLR", "--eps", "0.9", "--ell", "2", "--L", "3"], capsys)
    v = json.loads(out)
    assert v["schema"] == "listrec.verdict/1" and v["property"] == "ARLR"
    assert status == 0
    argv = ["check", str(code_file), "--property", "LD", "--rho", "3/4", "--L", "2"]
    status, out, _ = run(argv, capsys)
    assert status == 0 and not json.loads(out)["holds"]
    status, _, _ = run(argv + ["--assert"], capsys)
    assert status == 1


def test_usage_errors_exit_two(tmp_path, capsys):
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["check", str(tmp_path / "missing.json"), "--property", "LD", "--rho", "1/2", "--L", "2"], capsys)[0] == 2
    status, _, err = run(["gen", "--q", "6", "--n", "3", "--k", "1"], capsys)
    assert status == 2 and "NonPrimeCharacteristic" in err


def test_sigma_and_extract(lam_file, capsys):
    status, out, _ = run(["sigma", str(lam_file), "--p-max", "2"], capsys)
    prof = json.loads(out)
    assert status == 0 and [e["value"] for e in prof["values"]] == ["1/7", "11/196"]
    status, out, _ = run(["extract", str(lam_file), "--zeta", "1/5"], capsys)
    ex = json.loads(out)
    assert status == 0 and ex["meets_contract"] and sorted(ex["indices"]) == list(range(6))


def test_bounds_calculators(capsys):
    _, out, _ = run(["bounds", "zero-error", "--q", "16", "--ell", "2", "--zeta", "0.1", "--xi", "0.1"], capsys)
    assert json.loads(out)["rate_bound"] == pytest.approx(0.65)
    _, out, _ = run(["bounds", "window", "--q", "2"], capsys)
    assert json.loads(out) == {"q": 2, "eps0": 0.51, "eps1": 0.8}
    _, out, _ = run(["bounds", "entropy", "--q", "2", "--x", "0.5", "--format", "csv"], capsys)
    head, row = out.splitlines()
    assert head == "x,q,H" and float(row.split(",")[2]) == pytest.approx(1)
    _, out, _ = run(["bounds", "volume", "--q", "2", "--n", "3", "--rho", "1/3"], capsys)
    assert json.loads(out)["volume"] == "4"


def test_rates_csv(capsys):
    status, out, _ = run(["rates", "--q", "2", "--zeta", "0.01", "--ell", "1"], capsys)
    lines = out.splitlines()
    assert status == 0 and lines[0] == "eps,R0,R1,R,binding"
    first = lines[1].split(",")
    assert first[0] == "0.51" and first[4] == "R1"
    assert lines[-1].split(",")[0] == "0.99"


def test_out_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("LISTREC_OUT_DIR", str(tmp_path))
    assert cli(["rates", "--q", "4", "--zeta", "0.01"]) == 0
    assert (tmp_path / "rates.csv").read_text().startswith("eps,R0,R1,R,binding")
    assert capsys.readouterr().out == ""


def test_experiment_rerun_identical(tmp_path, capsys):
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({
        "schema": "listrec.experiment/1", "field": {"p": 2, "m": 1}, "n": 6, "R": "1/3",
        "property": "LD", "params": {"rho": "1/2", "L": 3}, "trials": 12, "master_seed": 4,
    }))
    outs = []
    for _ in range(2):
        status, out, _ = run(["experiment", str(cfg)], capsys)
        assert status == 0
        d = json.loads(out)
        d.pop("wall_time")
        outs.append(json.dumps(d, sort_keys=True))
    assert outs[0] == outs[1]
    status, out, _ = run(["experiment", str(cfg), "--compare", "--workers", "2"], capsys)
    assert set(json.loads(out)) == {"linear", "uniform"}


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "listrec", "bounds", "window", "--q", "3"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["eps0"] == pytest.approx(4 / 9)
