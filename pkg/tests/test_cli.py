import csv
import json
import subprocess
import sys

import pytest

from qubobox.bench import gen_random_spd
from qubobox.cli import float_list, main
from qubobox.linalg import save_system


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_float_list_forms():
    assert float_list("0.1,0.2") == [0.1, 0.2]
    assert float_list("0.05:0.2:0.05") == [0.05, 0.1, 0.15, 0.2]


def test_solve_file(tmp_path, capsys):
    path = tmp_path / "sys.json"
    save_system(gen_random_spd(3, 2), path)
    trace = tmp_path / "trace.jsonl"
    code, out, _ = run(["solve", str(path), "--beta", "0.2", "--solver", "exhaustive",
                        "--trace-out", str(trace)], capsys)
    assert code == 0
    res = json.loads(out)
    assert res["converged"] and res["n_total"] == res["n_t"] + res["n_c"]
    assert res["n_c"] == res["predicted_n_c"]
    assert res["error_inf"] <= 1e-6 / 0.2
    assert len(trace.read_text().splitlines()) == res["n_total"]


def test_poisson(capsys):
    code, out, _ = run(["poisson", "--beta", "0.2", "--seed", "3"], capsys)
    res = json.loads(out)
    assert code == 0 and res["residual_inf"] <= 1e-4


def test_theory_csv_and_clamp(tmp_path, capsys):
    out_path = tmp_path / "t.csv"
    code, _, _ = run(["theory", "--eps", "1e-6", "--beta-grid", "0.1,0.2,0.7", "--out", str(out_path)], capsys)
    assert code == 0
    rows = list(csv.DictReader(out_path.open(newline="")))
    assert [float(r["beta"]) for r in rows] == [0.1, 0.2]
    code, out, err = run(["theory", "--eps", "1e-6", "--beta-grid", "0.5"], capsys)
    assert out.splitlines()[0] == "beta,epsilon,n_c,n_hat,n_bar"
    assert "0.2315" in err


def test_sweep_writes_csv(tmp_path, capsys):
    out_path = tmp_path / "s.csv"
    code, out, _ = run(["sweep", "--dims", "2", "--instances", "2", "--betas", "0.2,0.5", "--eps-list", "1e-6",
                        "--solver", "exhaustive", "--out", str(out_path)], capsys)
    assert code == 0
    rows = list(csv.DictReader(out_path.open(newline="")))
    assert len(rows) == 4
    assert out.splitlines()[0] == "d,beta,epsilon,mean_n_total"


def test_exit_codes(tmp_path, capsys):
    assert run(["solve", str(tmp_path / "nope.json")], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"d": 2, "A": [[1, 2], [2, 1]], "b": [1, 1]}))
    assert run(["solve", str(bad)], capsys)[0] == 3
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert run(["solve", str(garbage)], capsys)[0] == 2
    assert run(["poisson", "--beta", "1.5"], capsys)[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["theory", "--beta-grid", "abc"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qubobox", "theory", "--eps", "1e-6", "--beta-grid", "0.5"],
                         capture_output=True, text=True, check=True)
    assert "0.5,1e-06,20," in out.stdout
