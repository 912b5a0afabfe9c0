import pytest
from hypothesis import given, settings, strategies as st

from weilcalc import diagrams as dg
from weilcalc.dsl import Environment, MapDecl, ScriptError, _elaborate, format_script, parse_script, run_checks
from weilcalc.infinitesimal import D_n, D_order, simplicial
from weilcalc.poly import Poly
from weilcalc.report import ERROR, FAIL, PASS
from weilcalc.suite import GROUPS, bundled_script


def objects_of(text):
    env = Environment()
    for st_ in parse_script(text).statements:
        _elaborate(st_, env)
    return env.objects


def test_object_sugar():
    objs = objects_of("obj Dpair = D(2)\nobj E = D^4{(1,3)(2,3)(1,4)(2,4)(3,4)}\n"
                      "obj L = D_3\nobj S = Dpair (+) E\n")
    assert objs["Dpair"] == D_n(2) == simplicial(2, [(1, 2)])
    assert objs["E"] == dg.E
    assert objs["L"] == D_order(3)
    assert objs["S"].n == 6


def test_map_components_parse():
    script = parse_script("obj Dpair = D(2)\nmap plus : D -> Dpair := d1, d1\n")
    m = script.statements[1]
    assert isinstance(m, MapDecl)
    assert m.comps == (Poly.var(0, 1), Poly.var(0, 1))


def test_comments_and_continuations():
    text = ("# header\nobj Q = D^3  # trailing\n"
            "map f : D -> Q :=\n  d1,\n  0,\n  0\n")
    script = parse_script(text)
    assert len(script.statements) == 2
    assert script.statements[1].pos[0] == 3


@pytest.mark.parametrize("name", sorted(v[1] for v in GROUPS.values()))
def test_round_trip_of_bundled_scripts(name):
    once = parse_script(bundled_script(name))
    printed = format_script(once)
    assert parse_script(printed) == once
    assert format_script(parse_script(printed)) == printed


seq = st.lists(st.integers(1, 4), min_size=2, max_size=3, unique=True).map(sorted).map(tuple)


@given(st.lists(seq, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=40)
def test_round_trip_generated(seqs, coeffs):
    body = "".join("(" + ",".join(map(str, s)) + ")" for s in seqs)
    obj = f"D^4{{{body}}}" if seqs else "D^4"
    comps = ", ".join(f"{c}*d1" for c in coeffs)
    text = f"obj A = {obj}\nmap f : D -> A := {comps}\nfield X on 2 := 1/2*x1*x2, -x1\ncheck map f\n"
    once = parse_script(text)
    assert parse_script(format_script(once)) == once


@pytest.mark.parametrize("text, line, col", [
    ("obj A = D^2\nmap f : D -> A := d1,\n", 3, 1),
    ("obj A = D^2\nmap f : D -> :=\n", 2, 14),
    ("obj A = D^2\nobj A = D\n", 2, 5),
    ("map f : D -> Nope := d1\n", 1, 14),
    ("check bracket X\n", 1, 15),
    ("obj A = D^2{(2,1)}\n", 1, 13),
    ("diagram q {\n  node a : D\n  banana\n}\n", 3, 3),
    ("check limit q\n", 1, 13),
])
def test_syntax_errors_have_positions(text, line, col):
    with pytest.raises(ScriptError) as info:
        parse_script(text)
    assert (info.value.line, info.value.column) == (line, col), info.value.message


def test_empty_script():
    report = run_checks(parse_script(""))
    assert report.records == [] and report.exit_code() == 0


def test_ill_defined_map_is_an_error_record():
    report = run_checks(parse_script("obj Q = D^2\nmap bad : Q -> D := d1 + d2\ncheck map bad\n"), "t.weil")
    first, second = report.records
    assert (first.kind, first.status, first.details["error"]) == ("declaration", ERROR, "IllDefinedMap")
    assert first.details["residue"] == "2*X1*X2"
    assert first.anchor == "t.weil:2"
    assert second.status == ERROR and second.details["error"] == "DependencyFailed"
    assert report.exit_code() == 1


def test_limit_check_that_fails():
    text = ("obj pt = D^0\nobj Q = D^2\nmap origin : pt -> D := 0\n"
            "map i1 : D -> Q := d1, 0\nmap i2 : D -> Q := 0, d1\n"
            "diagram pair {\n node a : D\n node b : D\n node base : pt\n"
            " arrow fa : a -> base := W[origin]\n arrow fb : b -> base := W[origin]\n}\n"
            "check limit pair apex Q leg a : W[i1] leg b : W[i2]\n")
    (rec,) = run_checks(parse_script(text)).records
    assert rec.status == FAIL
    assert (rec.details["limit_dim"], rec.details["apex_dim"]) == (3, 4)


def test_bracket_and_jacobi_checks():
    text = ("field X on 2 := -x2, x1\nfield Y on 2 := x2, 0\nfield Z on 2 := x1*x2, x1\n"
            "check bracket X Y\ncheck jacobi X Y Z\n")
    b, j = run_checks(parse_script(text)).records
    assert b.status == PASS and b.details["bracket"] == "(x1, -x2)"
    assert j.status == PASS and j.details["sum_is_zero"]


def test_mismatched_field_dimensions():
    text = "field X on 2 := x1, x2\nfield Y on 1 := x1\ncheck bracket X Y\n"
    (rec,) = run_checks(parse_script(text)).records
    assert rec.status == ERROR and rec.details["error"] == "DimensionMismatch"


def test_records_follow_declaration_order():
    report = run_checks(parse_script(bundled_script("differences.weil")))
    lines = [int(r.anchor.rsplit(":", 1)[1]) for r in report.records]
    assert lines == sorted(lines)
