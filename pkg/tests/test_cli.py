import json
from fractions import Fraction

import pytest

from qmk.algebraic import AlgebraicNumber
from qmk.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from qmk.forms import ModuleSolution, is_valid
from qmk.graph import from_json, isomorphic, to_text

from helpers import cycle, path

EDGE = "n 2;0 1 1"
TRIANGLE = "n 3;0 1 1;1 2 1;0 2 1"
TWO_LOOPS = "n 2;0 1 1;0 0 1;1 1 1"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    assert code == EXIT_OK
    return json.loads(out)


def test_classify_text(capsys):
    code, out, _ = run(capsys, "classify", EDGE)
    assert code == EXIT_OK
    assert "class = SuperRigid" in out and "A_2" in out
    code, out, _ = run(capsys, "classify", TRIANGLE)
    assert "L = 1   class = Rigid" in out


def test_classify_from_file(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text(to_text(cycle(4)))
    code, out, _ = run(capsys, "classify", str(f))
    assert code == EXIT_OK and "class = Rigid" in out


def test_disconnected_needs_split(capsys):
    code, _, err = run(capsys, "classify", "n 2;0 0 1")
    assert code == EXIT_USAGE and "DisconnectedGraph" in err
    code, out, _ = run(capsys, "classify", "--split", "n 2;0 0 1")
    assert code == EXIT_OK and out.count("component") == 2


def test_parse_errors(capsys):
    code, _, err = run(capsys, "classify", "n 2;0 5 1")
    assert code == EXIT_USAGE and "ParseError" in err
    code, _, err = run(capsys, "classify", "/no/such/file")
    assert code == EXIT_USAGE


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["solve", EDGE])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["adet", "2"])
    assert exc.value.code == EXIT_USAGE


def test_classify_structured(capsys):
    doc = structured(capsys, "classify", EDGE)
    assert doc["class"] == "SuperRigid" and doc["cycle_count"] == 0
    values = [AlgebraicNumber.from_json(r["value"]) for r in doc["spectrum"]["roots"]]
    assert sorted(float(v) for v in values) == [-1.0, 1.0]


def test_spectrum(capsys):
    doc = structured(capsys, "spectrum", "n 3;0 1 1;1 2 1;0 0 1;1 1 1;2 2 1")
    assert [r["nondegenerate"] for r in doc["roots"]] == [True, False, True]


def test_solve_all_flags_excluded(capsys):
    code, out, _ = run(capsys, "solve", "--all", TWO_LOOPS)
    assert code == EXIT_OK
    assert "lambda = 0   q+1/q = 0   EXCLUDED" in out
    assert "q+1/q = -2   q root of unity of order 2" in out
    doc = structured(capsys, "solve", "--all", TWO_LOOPS)
    assert [e["excluded"] for e in doc] == [True, False]
    sol = ModuleSolution.from_json(doc[1]["solution"])
    assert is_valid(sol)


def test_solve_single_lambda(capsys):
    doc = structured(capsys, "solve", "--lambda", "1,0,-2:1,2", "n 3;0 1 1;1 2 1")
    assert is_valid(ModuleSolution.from_json(doc["solution"]))
    code, out, _ = run(capsys, "solve", "--lambda", "2", EDGE)
    assert code == EXIT_OK and "no solution" in out
    code, _, _ = run(capsys, "solve", "--strict", "--lambda", "2", EDGE)
    assert code == EXIT_INFEASIBLE


def test_solve_needs_params_on_cycles(capsys):
    code, _, err = run(capsys, "solve", "--lambda", "2", TRIANGLE)
    assert code == EXIT_USAGE and "NotAGeneralizedTree" in err


def test_solve_sweep(capsys):
    code, out, _ = run(capsys, "solve", "--lambda", "-1", "--params", "sweep", "--samples", "10", "--seed", "1", TRIANGLE)
    assert code == EXIT_OK
    assert "(identically zero)" in out and "10 solution(s)" in out
    doc = structured(capsys, "solve", "--lambda", "41/20", "--params", "sweep", TRIANGLE)
    got = {AlgebraicNumber.from_json(s["s"]).as_fraction() for s in doc["solutions"]}
    assert got == {Fraction(4, 5), Fraction(5, 4)}


def test_solve_with_param_file(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"edges": [{"i": 1, "j": 2, "x": "1", "y": "1"}]}))
    doc = structured(capsys, "solve", "--lambda", "2", "--params", str(f), TRIANGLE)
    assert is_valid(ModuleSolution.from_json(doc["solution"]))
    f.write_text("{not json")
    code, _, err = run(capsys, "solve", "--lambda", "2", "--params", str(f), TRIANGLE)
    assert code == EXIT_USAGE and "ParseError" in err


def test_enumerate(capsys):
    doc = structured(capsys, "enumerate", "2", "rigid")
    assert doc["count"] == 7
    graphs = [from_json(g) for g in doc["graphs"]]
    assert all(g.n == 2 for g in graphs)
    doc = structured(capsys, "enumerate", "3", "super-rigid")
    assert any(isomorphic(path(3), from_json(g)) for g in doc["graphs"])


def test_adet(capsys):
    code, out, _ = run(capsys, "adet", "10")
    assert code == EXIT_OK and out.startswith("N = 10, N* = 5: A_4")
    doc = structured(capsys, "adet", "7")
    assert [r["name"] for r in doc["diagrams"]] == ["A_6", "T_3"]


def test_tlcheck(capsys):
    code, out, _ = run(capsys, "tlcheck", "--lambda", "1", "--N", "3", EDGE)
    assert code == EXIT_OK and "(exactly zero)" in out
    doc = structured(capsys, "tlcheck", "--lambda", "1,0,-2:1,2", "n 3;0 1 1;1 2 1")
    assert doc["N"] == 8 and doc["vanishing"] and doc["norms"]["3"] == 0
    code, out, _ = run(capsys, "tlcheck", "--strict", "--lambda", "2", "--N", "5", TRIANGLE)
    assert code == EXIT_VERIFY and "warning: q has order 2, not 5" in out


def test_tlcheck_without_root_of_unity(capsys):
    doc = structured(capsys, "tlcheck", "--lambda", "41/20", "--max-strands", "3", TRIANGLE)
    assert doc["q_order"] is None and not doc["vanishing"]
    assert set(doc["norms"]) == {"2", "3"} and min(doc["norms"].values()) >= 1e-2


def test_paper_verify(capsys):
    code, out, _ = run(capsys, "paper-verify")
    assert code == EXIT_OK
    assert out.rstrip().splitlines()[-1] == "24 PASS, 0 FAIL, 7 SKIPPED-AMBIGUOUS"


def test_export_dot(capsys):
    code, out, _ = run(capsys, "export-dot", "n 2;0 1 1;0 0 1")
    assert code == EXIT_OK
    assert out.startswith("graph G {") and "0 -- 0;" in out and "0 -- 1;" in out
