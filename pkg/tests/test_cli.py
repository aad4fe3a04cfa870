import io
import json
from fractions import Fraction

import pytest

from relpoly.cli import run
from relpoly.ruling import AffineLine, bridge_polynomial
from relpoly.sqfree_poly import SqFreePoly

LINE = "0,1,5,0,0,3/20;1,1/2,1/3,1/4,1/5,13/40"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return out


def test_poly_text():
    out = ok("poly", "fixture:fig2").splitlines()
    assert out[0] == "R1*R4 + R2*R5 + R2*R3*R4 - R1*R2*R3*R4 - R1*R2*R4*R5 - R2*R3*R4*R5 + R1*R2*R3*R4*R5"
    assert out[1] == "constructions agree: true"


def test_poly_json_round_trip():
    doc = json.loads(ok("poly", "--format", "json"))
    assert SqFreePoly.from_json(doc["polynomial"]) == bridge_polynomial()


def test_eval():
    assert ok("eval", "fixture:fig2", "--at", "1/2,1/2,1/2,1/2,1/2").strip() == "15/32"
    assert ok("eval", "--at", "1/2").strip() == "15/32"
    assert ok("eval", "--at", "1/2", "--decimal", "4").strip() == "0.4688"
    assert json.loads(ok("eval", "--at", "9/10", "--format", "json"))["reliability"] == "97119/100000"


def test_cuts_and_paths():
    assert ok("cuts", "fixture:fig1").strip() == "{1,2},{1,5},{4,5},{2,3,4}"
    assert ok("paths", "fixture:fig2").strip() == "{1,4},{2,5},{2,3,4}"


def test_network_file(tmp_path):
    doc = {"nodes": ["s", "t"], "source": "s", "sink": "t",
           "arcs": [{"id": 1, "from": "s", "to": "t"}, {"id": 2, "from": "s", "to": "t"}]}
    path = tmp_path / "par.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert ok("poly", str(path)).splitlines()[0] == "R1 + R2 - R1*R2"


def test_mc_is_deterministic():
    args = ("mc", "--p", "9/10", "--trials", "20000", "--seed", "5", "--format", "json")
    a, b = ok(*args), ok(*args)
    assert a == b
    doc = json.loads(a)
    assert abs(doc["estimate"] - 0.97119) < 4 * doc["stderr"] + 1e-12


def test_mc_seed_from_environment(monkeypatch):
    base = ("mc", "--p", "1/2", "--trials", "5000", "--format", "json")
    monkeypatch.setenv("RELPOLY_SEED", "17")
    from_env = ok(*base)
    assert json.loads(from_env)["seed"] == 17
    assert from_env == ok(*base, "--seed", "17")


def test_diag():
    doc = json.loads(ok("diag", "--k", "3", "--format", "json"))
    assert doc["count"] == 50
    out = ok("diag", "--pattern", "12|345")
    assert "12|345: 2*x*y + x*y^2 - x*y^3 - 2*x^2*y^2 + x^2*y^3" in out
    rows = ok("diag", "--k", "2", "--format", "csv").splitlines()
    assert rows[0] == "pattern,polynomial" and len(rows) == 16


def test_critical_and_hessian():
    out = ok("critical", "--verify", "0,0,s,0,0", "--extrema")
    assert "critical: true" in out
    assert "cube min 0" in out and "cube max 1" in out
    assert ok("hessian", "--at", "0,0,1/3,0,0").splitlines()[-1] == "indefinite"


def test_roots():
    out = ok("roots", "--level", "0")
    assert "(1, 2, 2)" in out and "case: a = 0" in out
    doc = json.loads(ok("roots", "--level", "1/2", "--format", "json"))
    assert doc["counts"] == {"negative": 0, "zero": 0, "positive": 3}
    assert "a = min y" in ok("roots", "--level", "min")
    assert "(0, 0, 3)" in ok("roots", "--level", "max")


def test_roots_explicit_polynomial():
    out = ok("roots", "--poly", "x^2 - 2", "--level", "0")
    assert "(1, 0, 1)" in out
    # no local maximum at x >= 0, so the case table does not apply
    assert "case: unclassified" in out


def test_curve_csv(tmp_path):
    assert ok("curve", "--samples", "3", "--format", "csv").splitlines() == ["x,y", "0,0", "1/2,15/32", "1,1"]
    target = tmp_path / "curve.csv"
    doc = json.loads(ok("curve", "--samples", "5", "--out", str(target), "--format", "json"))
    assert doc["nondecreasing"] and doc["sigmoid_like"]
    lines = target.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "x,y" and len(lines) == 6


def test_lines_json_round_trip():
    doc = json.loads(ok("lines", "--point", "1,1/2,1/3,1/4,1/5", "--pattern", "a1=a4=a5=0,b1=1", "--format", "json"))
    lines = [AffineLine.from_json(d) for d in doc["lines"]]
    assert len(lines) == 49
    assert AffineLine((0, 1, 5, 0, 0, Fraction(3, 20)),
                      (1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(13, 40))) in lines


def test_window():
    assert ok("window", "--line", LINE).strip() == "[-1/15, 2/15]"
    doc = json.loads(ok("window", "--line", LINE, "--format", "json"))
    assert doc["window"] == {"lo": "-1/15", "hi": "2/15"}


def test_levelcheck():
    assert "contained: true" in ok("levelcheck", "--c", "0", "--fix", "R1=0,R2=0")
    out = ok("levelcheck", "--c", "0", "--fix", "R1=0")
    assert "contained: false" in out
    assert "R2*R5 + R2*R3*R4 - R2*R3*R4*R5" in out


def test_branches_report():
    doc = json.loads(ok("branches", "--format", "json"))
    assert doc["max_dof"] == 7 and doc["min_dof_nonempty"] == 6
    labels = {label for row in doc["branches"] for label in row["labels"]}
    assert {"Case 1 i", "Case 1 v"} <= labels


def test_output_is_byte_identical():
    for argv in (["poly", "--format", "json"], ["roots", "--level", "min"], ["diag", "--k", "4"]):
        assert ok(*argv) == ok(*argv)


@pytest.mark.parametrize("argv", [
    ["eval", "--at", "2"],
    ["eval", "--at", "1/2,1/2"],
    ["cuts", "does-not-exist.json"],
    ["cuts", "fixture:fig9"],
    ["lines", "--point", "1/2,1/2,1/2,1/2,1/2", "--pattern", "a1=0,b1=1"],
    ["hessian", "--at", "1,2"],
])
def test_domain_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1
    assert err.strip()


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["eval"],
    ["eval", "--at", "1/2", "--bogus"],
    ["eval", "--at", "0.5x"],
    ["window", "--line", "1,2"],
    ["poly", "--format", "xml"],
])
def test_usage_errors_exit_2(argv):
    code, out, err = call(*argv)
    assert code == 2
    assert err.strip()


def test_usage_error_names_flag():
    _, _, err = call("eval", "--at", "1/2", "--bogus")
    assert "--bogus" in err
