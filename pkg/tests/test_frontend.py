from __future__ import annotations

import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relmult.cli import main
from relmult.errors import InhomogeneousRelation, ParseError, UndeclaredName
from relmult.frontend import RunFlags, format_problem, parse_problem, run
from relmult.gring import MultigradedRing
from relmult.multiplicity import ProblemSpec, rel_mixed_mult

from conftest import CORPUS

MINIMAL = """prime 32003
grading 1
vars x:1 y:1
H1 = x
cmd relmult t=1
"""


def test_minimal_document():
    doc = parse_problem(MINIMAL)
    assert doc.prime == 32003 and doc.names == ("x", "y")
    spec = ProblemSpec.from_generators(doc.ring(), doc.seeds())
    assert rel_mixed_mult(spec, (1,)) == {(1,): 1}
    assert doc.commands[0].verb == "relmult" and doc.commands[0].get("t") == (1,)


def test_comments_and_blank_lines():
    doc = parse_problem("# header\n\n" + MINIMAL.replace("H1 = x", "H1 = x   # the line"))
    assert doc.H[1] == [doc.ring().var("x")]


@pytest.mark.parametrize("text, cls, line, col", [
    ("", ParseError, 1, 1),
    ("   \n# only a comment\n", ParseError, 1, 1),
    ("grading 1\nvars x:1 y:1\nrel x^2 + y\n", InhomogeneousRelation, 3, 5),
    ("grading 1\nvars x:1\nrel x*z\n", UndeclaredName, 3, 7),
    ("grading 1\nrel x\n", UndeclaredName, 2, 4),
    ("grading 1\nvars x:1\ncmd frobnicate\n", ParseError, 3, 15),
    ("grading 2\nvars x:1\n", ParseError, 2, 9),
    ("grading 1\nvars x:1\nH1 = x +\n", ParseError, 3, 9),
    ("grading 1\nvars x:1 y:1\nH1 = x*y\n", ParseError, 3, 6),
    ("grading 2\nvars x:(1,0) y:(0,1)\nH1 = x\n", ParseError, 1, 1),
    ("prime 32001\nvars x:1\n", ParseError, 1, 1),
    ("bogus 3\n", ParseError, 1, 1),
])
def test_parse_errors(text, cls, line, col):
    with pytest.raises(cls) as info:
        parse_problem(text)
    assert (info.value.line, info.value.column) == (line, col)
    d = info.value.to_dict()
    assert d["error"] == cls.__name__ and d["message"]


def test_corpus_roundtrip():
    for path in sorted(CORPUS.glob("*.rm")):
        doc = parse_problem(path.read_text())
        assert parse_problem(format_problem(doc)) == doc, path.name


names = st.lists(st.sampled_from(["a", "b", "c", "u", "v"]), min_size=2, max_size=4, unique=True)


@st.composite
def documents(draw):
    vs = draw(names)
    p = draw(st.integers(1, 2))
    degs = [tuple(1 if j == draw(st.integers(0, p - 1)) else 0 for j in range(p)) for _ in vs]
    lines = [f"grading {p}", "vars " + " ".join(
        f"{n}:{d[0] if p == 1 else '(' + ','.join(map(str, d)) + ')'}" for n, d in zip(vs, degs))]
    for _ in range(draw(st.integers(0, 2))):
        i, j = draw(st.integers(0, len(vs) - 1)), draw(st.integers(0, len(vs) - 1))
        c = draw(st.integers(1, 9))
        lines.append(f"rel {c}*{vs[i]}*{vs[j]} - {vs[i]}^2*{vs[j]}^0" if degs[i] == degs[j]
                     and i != j else f"rel {vs[i]}^2*{vs[j]}")
    lines.append(f"cmd relmult t={'(' + ','.join(['2'] * p) + ')'}")
    return "\n".join(lines) + "\n"


@settings(max_examples=40, deadline=None)
@given(documents())
def test_roundtrip_property(text):
    try:
        doc = parse_problem(text)
    except ParseError:
        return
    printed = format_problem(doc)
    assert parse_problem(printed) == doc
    assert format_problem(parse_problem(printed)) == printed


def test_run_relmult_whole():
    doc = parse_problem("grading 2\nvars a:(1,0) b:(1,0) c:(0,1)\ncmd relmult t=(1,1)\n")
    out = run(doc)
    assert out["schema"] == 1
    assert out["multiplicities"] == {"(1,0)": 0, "(0,1)": 0}
    assert set(out["certificate"]) == {"origin", "extent", "validated_points"}


def test_run_example_criteria():
    out = run(parse_problem((CORPUS / "nonintegral_finite.rm").read_text()))
    assert out["verdicts"] == {"finite": True, "finiteBirational": True}
    assert out["r"] == 2 and out["command"] == "criteria"


def test_run_mapdeg():
    out = run(parse_problem((CORPUS / "cremona.rm").read_text()))
    assert out["projective_degrees"] == [1, 2, 1]
    assert out["exceptional"] == {"(1,0)": 0, "(0,1)": 3}


def test_run_multiple_commands():
    out = run(parse_problem((CORPUS / "affine_line.rm").read_text()))
    verbs = [r["command"] for r in out["results"]]
    assert verbs == ["relmult", "relmult", "br", "jsharp", "einf", "decomp", "suv", "criteria"]


def test_run_prime_override_and_second_prime():
    doc = parse_problem(MINIMAL)
    out = run(doc, RunFlags(prime=65521, second_prime=101))
    assert out["prime"] == 65521 and out["mismatches"] == []


def test_run_undeclared_system():
    doc = parse_problem("grading 1\nvars x:1 y:1\ncmd mapdeg system=S\n")
    with pytest.raises(UndeclaredName):
        run(doc)


def test_determinism():
    doc = parse_problem((CORPUS / "bigraded_monomial.rm").read_text())
    a = json.dumps(run(doc), sort_keys=True)
    b = json.dumps(run(parse_problem((CORPUS / "bigraded_monomial.rm").read_text())), sort_keys=True)
    assert a == b


def _cli(tmp_path, text, *flags):
    path = tmp_path / "doc.rm"
    path.write_text(text)
    proc = subprocess.run([sys.executable, "-m", "relmult", "--input", str(path), *flags],
                          capture_output=True, text=True)
    return proc


def test_cli_success_and_json_file(tmp_path):
    out_file = tmp_path / "out.json"
    proc = _cli(tmp_path, MINIMAL, "--json", str(out_file))
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == json.loads(out_file.read_text())
    assert json.loads(proc.stdout)["multiplicities"] == {"(1)": 1}


def test_cli_parse_error(tmp_path):
    proc = _cli(tmp_path, "grading 1\nvars x:1\nrel x + x^2\n")
    assert proc.returncode == 3
    err = json.loads(proc.stderr)
    assert err["error"] == "InhomogeneousRelation" and err["line"] == 3


def test_cli_no_stabilization(tmp_path, capsys):
    # dim k[x,y]/(y^5) in degree n is n+1 up to n=4 and 5 afterwards
    doc = tmp_path / "d.rm"
    doc.write_text("grading 1\nvars x:1 y:1\nrel y^5\ncmd hilbert max_origin=2\n")
    code = main(["--input", str(doc)])
    err = capsys.readouterr().err
    assert code == 2 and json.loads(err)["error"] == "NoStabilization"
    doc.write_text("grading 1\nvars x:1 y:1\nrel y^5\ncmd hilbert\n")
    assert main(["--input", str(doc)]) == 0
    assert json.loads(capsys.readouterr().out)["hilbert_polynomial"] == "(5)"


def test_cli_mismatch_exit(tmp_path):
    text = "prime 32003\ngrading 1\nvars x:1 y:1\nrel 32003*x*y\nH1 = x\ncmd relmult t=1\n"
    proc = _cli(tmp_path, text, "--oracle")
    assert proc.returncode == 4
    assert json.loads(proc.stdout)["mismatches"]


def test_cli_second_prime_disagreement(tmp_path):
    text = "prime 32003\ngrading 1\nvars x:1 y:1\nrel 32003*x*y\nH1 = x\ncmd hilbert\n"
    proc = _cli(tmp_path, text, "--second-prime", "65521")
    assert proc.returncode == 4


def test_cli_missing_file(tmp_path):
    assert main(["--input", str(tmp_path / "nope.rm")]) == 1
