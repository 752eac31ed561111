import json
import random
from fractions import Fraction as F

import pytest

from convexcf import body2d as bd
from convexcf import fn1d
from convexcf.cli import (EXAMPLES, EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, SchemaError, dump_body,
                          dump_fn, load_terms_json, main, parse_body, parse_fn)

import gen
import oracles


def run_json(capsys, *argv):
    code = main(list(argv) + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_set_strip_const(capsys):
    code, doc = run_json(capsys, "set", "--terms", '{"strip": 1}', "--const", "--max-iter", "60")
    assert code == EXIT_OK
    assert doc["verdict"] == "converged"
    reports = {r["criterion"]: r for r in doc["reports"]}
    assert reports["nec-suf"]["verdict"] == "holds"
    assert reports["constant-theorem"]["verdict"] == "fails"
    assert reports["monotone"]["verdict"] == "holds"


def test_scalar_periodic(capsys):
    code, doc = run_json(capsys, "scalar", "--terms", "[1,1,1]", "--periodic")
    assert code == EXIT_OK
    assert doc["verdict"] == "converged"
    assert abs(doc["limit"] - oracles.GOLDEN_LIMIT) < 1e-9


def test_func_lf_const(capsys):
    code, doc = run_json(capsys, "func-lf", "--terms", '{"quad": 2}', "--const")
    assert code == EXIT_OK
    assert doc["verdict"] == "converged"
    assert doc["reports"][0]["verdict"] == "holds"


def test_csv_output_and_report(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code = main(["set", "--terms", '{"ball": 2}', "--const", "--max-iter", "20",
                 "--output", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().split("\n")
    assert lines[0] == "n,gap,norm,inradius-or-r,residual"
    assert len(lines) == 22 and lines[-1] == ""
    assert "inf" not in lines[3]
    report = json.loads((tmp_path / "trace.csv.report.json").read_text())
    assert report["verdict"] == "converged"


def test_deterministic_output(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["set", "--terms", '{"strip": 1}', "--const", "--output", str(p)]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_infinite_gaps_serialised(capsys):
    code = main(["set", "--terms", '{"segment": [[0, 0], [1, 0]]}', "--const", "--max-iter", "10"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert ",inf," in out


def test_examples_list(capsys):
    assert main(["examples", "--list"]) == EXIT_OK
    names = [line.split("\t")[0] for line in capsys.readouterr().out.strip().split("\n")]
    for name in ("ball", "segment", "strip", "seidel-counterexample", "three-segments",
                 "quadratic-function", "hp-selfpolar"):
        assert name in names


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_examples_reproduce(name, capsys):
    assert main(["examples", "--run", name]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["expected_verdict_met"] is True


def test_ball_example_value(capsys):
    assert main(["examples", "--run", "ball", "--param", "r=3"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["result"]["radius"] - oracles.BALL_LIMITS[3]) < 1e-9


def test_unknown_example_and_bad_input(capsys):
    assert main(["examples", "--run", "nope"]) == EXIT_INPUT
    assert main(["set", "--terms", "[1, 2", "--const"]) == EXIT_INPUT
    err = capsys.readouterr().err
    assert "line 1 column" in err
    assert main(["set", "--terms", '{"triangle": 1}', "--const"]) == EXIT_INPUT
    assert main(["scalar", "--terms", "[-1]"]) == EXIT_INPUT
    assert main(["scalar", "--terms", "[1]", "--max-iter", "1"]) == EXIT_INPUT
    assert main(["func-a", "--terms", '{"quad": 1}', "--const"]) == EXIT_INPUT
    assert main(["scalar", "--terms", "[1,2]", "--check", "nec-suf"]) == EXIT_INPUT
    assert main(["bogus"]) == EXIT_INPUT


def test_invariant_violation_exit(monkeypatch, capsys):
    import convexcf.cli as cli
    monkeypatch.setitem(cli.EXAMPLES, "ball", (lambda p: (False, {}), "broken"))
    assert main(["examples", "--run", "ball"]) == EXIT_INVARIANT


def test_terms_from_file(tmp_path, capsys):
    p = tmp_path / "terms.json"
    p.write_text("[2, 2]")
    code, doc = run_json(capsys, "scalar", "--terms", str(p), "--periodic")
    assert code == EXIT_OK and abs(doc["limit"] - oracles.SILVER_LIMIT) < 1e-9


def test_schema_errors_name_the_field():
    with pytest.raises(SchemaError, match=r"terms\[0\].polygon"):
        parse_body({"polygon": {"vertices": [[1, "x"]]}}, "terms[0]")
    with pytest.raises(SchemaError):
        load_terms_json("{bad")


def test_body_round_trip():
    rng = random.Random(17)
    bodies = [gen.random_polytope(rng) for _ in range(30)]
    bodies += [bd.strip(F(3, 2)), bd.segment((0, 0), (1, 2)), bd.Ball(F(5, 2)), bd.point()]
    for K in bodies:
        back = parse_body(json.loads(json.dumps(dump_body(K))))
        assert back == K


def test_function_round_trip():
    rng = random.Random(19)
    fns = [gen.random_pl(rng) for _ in range(30)] + [gen.random_between(rng, 4) for _ in range(10)]
    fns += [fn1d.H, fn1d.indicator(-1, 2), fn1d.abs_fn(3)]
    for f in fns:
        back = parse_fn(json.loads(json.dumps(dump_fn(f))))
        assert back == f
