import json
import subprocess
import sys
from pathlib import Path

import pytest

from ggdp.cli import main
from ggdp.graph import gen_bull, parse_instance

ROOT = Path(__file__).resolve().parent.parent
INST = ROOT / "instances"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def test_gen_and_solve(tmp_path, capsys):
    path = tmp_path / "p4.ggdp"
    assert run(capsys, "gen", "path", "-n", 4, "-C", "empty", "-o", path)[0] == 0
    code, out, _ = run(capsys, "solve", path, "--exact")
    assert code == 0 and report(out)["value"] == "4"


def test_solve_examples(capsys):
    rep = report(run(capsys, "solve", INST / "web83.ggdp")[1])
    assert rep["value"] == "3" and rep["m"] == "3"
    rep = report(run(capsys, "solve", INST / "web81.ggdp")[1])
    assert rep["value"] == "6" and rep["m"] == "7"
    rep = report(run(capsys, "solve", INST / "bull.ggdp", "--greedy")[1])
    assert rep["method"] == "greedy" and int(rep["value"]) <= 3


def test_json_flag_either_side(capsys):
    a = json.loads(run(capsys, "--json", "solve", INST / "bull.ggdp")[1])
    b = json.loads(run(capsys, "solve", INST / "bull.ggdp", "--json")[1])
    assert a == b and a["value"] == 3


def test_gen_web_labels(capsys):
    code, out, _ = run(capsys, "gen", "web", "-n", 8, "-k", 3, "-C", "1,2,3,4,5,7")
    assert code == 0
    assert parse_instance(out).closed == {2, 3, 4, 5, 6, 8}
    assert run(capsys, "gen", "web", "-n", 8)[0] == 2


def test_gen_random_is_seeded(capsys):
    a = run(capsys, "gen", "random", "-n", 6, "-p", 0.5, "--c-mode", "half", "--seed", 4)[1]
    b = run(capsys, "gen", "random", "-n", 6, "-p", 0.5, "--c-mode", "half", "--seed", 4)[1]
    assert a == b
    assert run(capsys, "gen", "random", "-n", 10, "-p", 1.0, "--seed", 1)[0] == 1


def test_closed_form(capsys):
    assert report(run(capsys, "closed-form", "path", "-n", 5)[1])["value"] == "4"
    rep = report(run(capsys, "closed-form", "web", "-n", 8, "-k", 1, "-C", "1,2,3,4,5,7")[1])
    assert rep == {"value": "6", "m": "7"}
    assert run(capsys, "closed-form", "path", "-n", 1, "-C", "empty")[0] == 2


def test_model_and_count(tmp_path, capsys):
    lp_path = tmp_path / "bull.lp"
    code, out, _ = run(capsys, "model", INST / "bull.ggdp", "--form", "F1", "--lb", 1,
                       "--export", lp_path)
    assert code == 0 and report(out)["rows"] == "59"
    assert lp_path.read_text().startswith("\\ F1 n=5 m=4 lb=1\nMaximize")
    assert report(run(capsys, "count", INST / "bull.ggdp", "--form", "F8", "--lb", 1)[1])["count"] == "28"
    rep = report(run(capsys, "count", INST / "bull.ggdp", "--form", "F3")[1])
    assert rep["lb"] == "3"
    assert run(capsys, "count", INST / "bull.ggdp", "--lb", 9)[0] == 2


def test_poly(capsys):
    rep = report(run(capsys, "poly", "dim", INST / "bull.ggdp", "--form", "F3")[1])
    assert rep["dimension"] == rep["formula"] == "34"
    rep = report(run(capsys, "poly", "check", INST / "bull.ggdp", "--ineq", "type1 u=1 w=2 i=2")[1])
    assert rep["valid"] == "True" and rep["facet"] == rep["predicted"]
    code, _, err = run(capsys, "poly", "check", INST / "bull.ggdp", "--ineq",
                       "supernova i=2 k=1 U=4 W=1 j=1,2")
    assert code == 2 and "W" in err
    out = run(capsys, "poly", "audit", INST / "p4.ggdp")[1]
    assert "disagreements: 0" in out


def test_separate(tmp_path, capsys):
    point = tmp_path / "pt.txt"
    point.write_text("x 1 2 0.5\ny 2 1 0.4\ny 2 2 0.3\n")
    out = run(capsys, "separate", INST / "c5.ggdp", "--point", point)[1]
    assert out == "type1 u=1 w=2 i=2\n"
    assert run(capsys, "separate", INST / "c5.ggdp", "--point", point, "--type2")[1] == ""
    point.write_text("x 1 2\n")
    assert run(capsys, "separate", INST / "c5.ggdp", "--point", point)[0] == 2
    assert run(capsys, "separate", INST / "c5.ggdp", "--point", tmp_path / "none")[0] == 2


def test_root_bound(capsys):
    data = json.loads(run(capsys, "root-bound", INST / "bull.ggdp", "--lb", 1, "--json")[1])
    assert data["status"] == "optimal" and data["history"][-1] >= 3 - 1e-6
    assert run(capsys, "root-bound", INST / "bull.ggdp", "--cuts", "foo")[0] == 2


def test_reduce(tmp_path, capsys):
    src = tmp_path / "twin.ggdp"
    src.write_text("p ggdp 3 3\nc 1 2 3\ne 1 2\ne 1 3\ne 2 3\n")
    out_path = tmp_path / "red.ggdp"
    rep = report(run(capsys, "reduce", src, "-o", out_path)[1])
    assert rep["n"] == "1" and rep["removed"] == "2 3"
    assert parse_instance(out_path.read_text()).n == 1


def test_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.ggdp"
    bad.write_text("p ggdp 2 0\nc 1\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == 2 and "vertex 2" in err
    assert run(capsys, "solve", tmp_path / "missing.ggdp")[0] == 2


def test_budget_exit_code(capsys, monkeypatch):
    assert run(capsys, "solve", INST / "bull.ggdp", "--budget", 2)[0] == 1
    monkeypatch.setenv("GGDP_BUDGET", "2")
    assert run(capsys, "solve", INST / "bull.ggdp")[0] == 1


def test_stdin_pipeline():
    gen = subprocess.run([sys.executable, "-m", "ggdp", "gen", "path", "-n", "4", "-C", "empty"],
                         capture_output=True, text=True, check=True)
    solved = subprocess.run([sys.executable, "-m", "ggdp", "solve", "-", "--exact"],
                            input=gen.stdout, capture_output=True, text=True, check=True)
    assert "value: 4" in solved.stdout


def test_instance_files_match_generators():
    assert parse_instance((INST / "bull.ggdp").read_text()) == gen_bull()
