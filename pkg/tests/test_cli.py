import json

import pytest

from surveydrift.cli import main


def test_generate_stats_and_bound(tmp_path, capsys):
    f = tmp_path / "g.txt"
    assert main(["generate", "--n", "80", "--p", "0.1", "--seed", "2", "--out", str(f)]) == 0
    assert main(["stats", "--edges", str(f)]) == 0
    out = capsys.readouterr().out
    stats = json.loads(out[out.index("{"):])
    assert stats["vertices"] <= 80 and stats["edges"] > 0
    assert main(["bound", "random", "--edges", str(f), "--belief", "normal(0,1)", "--vertices", "0,1,2,3,4"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["note"] == "proof-form long-range term" and res["total"] > 0


def test_bound_indep_and_clique(capsys):
    assert main(["bound", "indep", "--belief", "beta(1,1)", "--size", "64"]) == 0
    assert json.loads(capsys.readouterr().out)["total"] == pytest.approx(0.0490873852)
    assert main(["bound", "clique", "--belief", "normal(0,1)", "--cliques", "4", "--clique-size", "1"]) == 0
    assert "clique_shrink" in capsys.readouterr().out
    assert main(["bound", "random"]) == 2


def test_sample_and_simulate(capsys):
    assert main(["sample", "--n", "60", "--p", "0.1", "--strategy", "independent", "--budget", "5"]) == 0
    ids = capsys.readouterr().out.split()
    assert 1 <= len(ids) <= 5
    assert main(["simulate", "--n", "60", "--p", "0.1", "--budget", "6", "--rule", "weighted"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "respondent,before,after" and len(lines) == 7


def test_experiment_and_ks(tmp_path, capsys):
    cfg = tmp_path / "e.ini"
    cfg.write_text("[experiment]\nn = 100\np = 0.05\nreplications = 6\nbound_reps = 1\n")
    out = tmp_path / "out"
    assert main(["experiment", str(cfg), "--out", str(out)]) == 0
    assert capsys.readouterr().out.startswith("strategy,mean,sd")
    assert main(["ks", str(out / "results.csv"), "random", "random"]) == 0
    assert capsys.readouterr().out.strip().startswith("D=0.0000")
    assert main(["ks", str(out / "results.csv"), "random", "nope"]) == 1


def test_experiment_sweep(tmp_path, capsys):
    cfg = tmp_path / "s.ini"
    cfg.write_text("[experiment]\nbelief = normal(0,1)\nreplications = 5\nsweep_axis = n\nsweep_values = 10 20\n")
    assert main(["experiment", str(cfg)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "axis,value,empirical_mean,stderr,bound" and len(lines) == 3


def test_bad_input_reports_error(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 x\n")
    assert main(["stats", "--edges", str(bad)]) == 1
    assert "bad.txt:1" in capsys.readouterr().err
