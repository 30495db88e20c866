import json
from pathlib import Path

import pytest

import wqslattice.corpus
from wqslattice.cli import main

CORPUS = Path(wqslattice.corpus.__file__).parent
EX1 = str(CORPUS / "example1.mkt")
EX2 = str(CORPUS / "example2.mkt")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_stabilize_trace(capsys):
    code, out, _ = run(capsys, "stabilize", "-m", EX2, "(w2w3,-)")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "start: (w2w3,-)"
    assert "  star: (f1,w1)" in lines and "  star: (f2,w3)" in lines
    assert lines[-2:] == ["fixed point: (w1w2,w3)", "rounds: 2"]


def test_stabilize_json_and_cap(capsys):
    code, out, _ = run(capsys, "stabilize", "-m", EX2, "(w2w3,∅)", "--format", "json")
    assert code == 0
    assert json.loads(out)["fixed_point"] == "(w1w2,w3)"
    code, _, err = run(capsys, "stabilize", "-m", EX2, "(w2w3,-)", "--max-rounds", "1")
    assert code == 2 and "round" in err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "-m", EX1)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 19
    assert sorted(line for line in lines if line.endswith("  stable")) == [
        "(w1w2,w3w4)  stable",
        "(w3,w1w2)  stable",
    ]
    code, out, _ = run(capsys, "enumerate", "-m", EX2, "--format", "json")
    assert len(json.loads(out)) == 8


def test_join_meet_fixed_points(capsys):
    assert run(capsys, "join", "-m", EX1, "(w3,w2)", "(w1w2,w3w4)")[1] == "(w3,w2w4)\n"
    assert run(capsys, "meet", "-m", EX1, "(w1,w3)", "(w2,w3)")[1] == "(-,w3)\n"
    assert run(capsys, "fixed-points", "-m", EX1)[1] == "(w1w2,w3w4)\n(w3,w1w2)\n"


def test_join_rejects_non_wqs(capsys):
    code, _, err = run(capsys, "join", "-m", EX1, "(-,w1w3)", "(-,-)")
    assert code == 2 and "(-,w1w3)" in err


def test_hasse_to_file(capsys, tmp_path):
    target = tmp_path / "ex1.dot"
    code, out, _ = run(capsys, "hasse", "-m", EX1, "-o", str(target))
    assert code == 0 and "19 nodes, 36 edges" in out
    golden = Path(__file__).parent / "golden" / "example1.dot"
    assert target.read_text(encoding="utf-8") == golden.read_text(encoding="utf-8")
    code, out, _ = run(capsys, "hasse", "-m", EX2)
    assert out.startswith("digraph wqs {") and out.count("->") == 10


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", "-m", EX1)
    assert code == 0
    assert "f1: substitutable yes; LAD no ({w1,w2}, {w1,w2,w3})" in out
    code, out, _ = run(capsys, "axioms", "-m", EX2, "--format", "json")
    assert all(row["lad"] for row in json.loads(out))


def test_axioms_exit_on_failure(capsys, tmp_path):
    path = tmp_path / "bad.mkt"
    path.write_text("firms: f\nworkers: a b c\npref a: f\npref b: f\npref c: f\npref f: {a b} {c}\n")
    code, out, _ = run(capsys, "axioms", "-m", str(path))
    assert code == 1 and "substitutable no (a, S={a,b}, S'={a})" in out
    code, _, err = run(capsys, "enumerate", "-m", str(path))
    assert code == 1 and "f" in err


def test_check(capsys):
    code, out, _ = run(capsys, "check", "-m", EX1, "(w3,w2w4)")
    assert code == 1
    assert "worker-quasi-stable: yes" in out and "(f2,w1)" in out
    code, out, _ = run(capsys, "check", "-m", EX1, "(w1w2,w3w4)", "--format", "json")
    assert code == 0 and json.loads(out)["blocking_pairs"] == []


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["enumerate"],
        ["bogus", "-m", EX1],
        ["stabilize", "-m", EX1],
        ["enumerate", "-m", EX1, "--format", "xml"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_input_errors(capsys, tmp_path):
    path = tmp_path / "broken.mkt"
    path.write_text("workers: w1\n")
    code, _, err = run(capsys, "enumerate", "-m", str(path))
    assert code == 2 and "no firms declared" in err
    code, _, err = run(capsys, "enumerate", "-m", str(tmp_path / "missing.mkt"))
    assert code == 2
    code, _, err = run(capsys, "check", "-m", EX1, "(w9,-)")
    assert code == 2


def test_budget_flag(capsys):
    code, _, err = run(capsys, "enumerate", "-m", EX1, "--budget", "10")
    assert code == 2 and "budget" in err.lower()


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "3", "--count", "4")
    assert code == 0
    assert out.splitlines()[-1].endswith(" 0 failures")
    assert "[free_lad_failure] LAD results: skip" in out
    code, out, _ = run(capsys, "verify", "-m", EX2, "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["markets"] == 1 and data["failures"] == 0
