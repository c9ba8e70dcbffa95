import json
import pathlib

import pytest

from fointerp.classes import axiom, gen_random
from fointerp.cli import run
from fointerp.constructions import build, schema
from fointerp.decide import decide_pi2_in_class
from fointerp.interpret import translate
from fointerp.samples import g0, g1
from fointerp.structures import FiniteStructure, dump_structure, load_structure
from fointerp.syntax import classify, parse, render

GOLDEN = pathlib.Path(__file__).parent / "golden"


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify(capsys):
    code, out, _ = _run(capsys, "classify", "--formula", "exists x. forall y. E(x,y)")
    assert code == 0 and out.strip() == "Sigma 2"


def test_classify_json(capsys):
    code, out, _ = _run(capsys, "classify", "--json", "--formula", "forall x. !E(x,x)")
    assert json.loads(out) == {"kind": "Pi", "k": 1}


def test_parse_from_file(capsys, tmp_path):
    f = tmp_path / "phi.txt"
    f.write_text("∀x ¬E(x,x)")
    code, out, _ = _run(capsys, "parse", "--file", str(f))
    assert code == 0 and out.strip() == render(parse("forall x. !E(x,x)"))


@pytest.fixture
def g1_file(tmp_path):
    path = tmp_path / "g1.json"
    dump_structure(g1(), path)
    return path


def test_verify_build(capsys, g1_file):
    code, out, _ = _run(capsys, "verify", "--kind", "big2eq", "--input", str(g1_file))
    assert code == 0 and out.startswith("verified: 6 elements")


def test_verify_failure_reports_condition(capsys, tmp_path):
    A = g0()
    path, bpath = tmp_path / "a.json", tmp_path / "b.json"
    dump_structure(A, path)
    dump_structure(build("big2eq-param", A).structure, bpath)
    code, out, _ = _run(capsys, "verify", "--kind", "big2eq-param", "--input", str(path),
                        "--witness", str(bpath), "--param", "yL=cP", "--param", "yR=cR",
                        "--param", "yP=cL", "--param", "yN=cN")
    assert code == 1 and "condition 3" in out


def test_construct_round_trip(capsys, g1_file, tmp_path):
    out_path = tmp_path / "b.json"
    code, out, _ = _run(capsys, "construct", "--kind", "big2eq", "--input", str(g1_file),
                        "--output", str(out_path))
    assert code == 0 and "75 elements" in out
    assert load_structure(out_path) == build("big2eq", g1()).structure


def test_translate_matches_library(capsys):
    text = "forall x. (L(x) | R(x))"
    code, out, _ = _run(capsys, "translate", "--kind", "big2eq-param", "--formula", text, "--json")
    data = json.loads(out)
    expected = translate(schema("big2eq-param"), parse(text))
    assert data["formula"] == render(expected) and data["class"] == str(classify(expected))


def test_schema_export(capsys, tmp_path):
    code, out, _ = _run(capsys, "schema", "--kind", "2eq2leq")
    assert code == 0 and json.loads(out) == schema("2eq2leq").to_json()


def test_decide_pi2_class(capsys):
    text = "forall x. forall y. (P(x,y) -> P(y,x))"
    code, out, _ = _run(capsys, "decide-pi2-class", "--axiom", "2eq", "--formula", text)
    assert code == 0 and out.startswith("valid")
    code, out, _ = _run(capsys, "decide-pi2-class", "--axiom", "2eq", "--json",
                        "--formula", "forall x. exists y. (P(x,y) & !(x = y))")
    v = decide_pi2_in_class(axiom("2eq"), parse("forall x. exists y. (P(x,y) & !(x = y))"))
    assert code == 1 and json.loads(out) == v.to_json()


def test_decide_pi2_inline_signature(capsys):
    code, out, _ = _run(capsys, "decide-pi2", "--sig", '{"E": 2}', "--json",
                        "--formula", "forall x. exists y. E(x,y)")
    data = json.loads(out)
    assert code == 1 and data["outcome"] == "invalid" and data["countermodel"]["size"] == 1


def test_search(capsys):
    code, out, _ = _run(capsys, "search", "--class", "2eq", "--max-size", "3",
                        "--formula", "forall x y. P(x,y)")
    assert code == 1 and "size 2" in out
    code, out, _ = _run(capsys, "search", "--class", "bigraph3", "--max-size", "6",
                        "--formula", "exists x. L(x)")
    assert code == 0 and "up to size 6" in out


def test_gen_matches_library(capsys):
    code, out, _ = _run(capsys, "gen", "--class", "2eq", "--seed", "4", "--size", "5")
    assert FiniteStructure.from_json(json.loads(out)) == gen_random("2eq", 4, size=5)


@pytest.mark.parametrize("kind", ["big2eq-param", "2eq2leq-param", "2eq2leq"])
def test_demo_golden(capsys, kind):
    code, out, _ = _run(capsys, "demo", "--kind", kind)
    assert code == 0
    assert out == (GOLDEN / f"demo_{kind}.txt").read_text()


def test_demo_layouts(capsys):
    _, out, _ = _run(capsys, "demo", "--kind", "big2eq-param")
    assert "P-classes (8)" in out and "Q-classes (8)" in out
    _, out, _ = _run(capsys, "demo", "--kind", "2eq2leq-param")
    assert "s0_1[4] < s0_2[5] < a*[6]" in out
    _, out, _ = _run(capsys, "demo", "--kind", "2eq2leq")
    chain = out.splitlines()[2]
    assert "c1[10] < c2[10] < c3[10] < c4[10] < r1_1" in chain


@pytest.mark.parametrize("argv, code", [
    ([], 2),
    (["classify"], 2),
    (["translate", "--kind", "nope", "--formula", "exists x. L(x)"], 2),
    (["classify", "--formula", "forall x. ("], 3),
    (["verify", "--kind", "big2eq", "--input", "/nonexistent.json"], 3),
    (["decide-pi2", "--sig", '{"E": 2}', "--formula", "exists x. forall y. exists z. E(x,z)"], 3),
    (["decide-pi2", "--sig", '{"P": 3}', "--cap", "2",
      "--formula", "forall x. exists y. (P(x,y,y) | !P(y,x,x))"], 0),
    (["search", "--class", "all", "--sig", '{"P": 3}', "--cap", "4", "--max-size", "3",
      "--formula", "forall x. P(x,x,x)"], 1),
    (["search", "--class", "all", "--sig", '{"P": 3}', "--cap", "4", "--max-size", "3",
      "--formula", "forall x. (P(x,x,x) | !P(x,x,x))"], 4),
])
def test_exit_codes(capsys, argv, code):
    assert _run(capsys, *argv)[0] == code
