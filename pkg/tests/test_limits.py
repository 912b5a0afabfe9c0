from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weilcalc import linalg
from weilcalc.infinitesimal import D, ONE, D_n, D_power, make_map
from weilcalc.limits import (
    Arrow, IncompatibleFamily, MalformedCone, NotALimit, WeilDiagram, complete_cone, compute_limit,
    lift_through_limit, solver_for, verify_cone,
)
from weilcalc.weil import algebra_of, induced_hom

from conftest import small_fractions

WD, W1 = algebra_of(D), algebra_of(ONE)
ORIGIN = induced_hom(make_map(ONE, D, ["0"]))


def pair_pullback():
    return WeilDiagram("pair", {"a": WD, "b": WD, "base": W1},
                       [Arrow("fa", "a", "base", ORIGIN), Arrow("fb", "b", "base", ORIGIN)])


def legs_from(apex, comps_a, comps_b):
    return {"a": induced_hom(make_map(D, apex, comps_a)), "b": induced_hom(make_map(D, apex, comps_b))}


matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(small_fractions, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
@settings(max_examples=60)
def test_rank_and_nullspace_match_sympy(m):
    ncols = len(m[0])
    assert linalg.rank(m, ncols) == sympy.Matrix(m).rank()
    basis = linalg.nullspace(m, ncols)
    assert len(basis) == ncols - linalg.rank(m, ncols)
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


def test_inverse():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    inv = linalg.inverse(m)
    assert inv == [[1, -1], [-1, 2]]


def test_wedge_is_the_pullback_of_two_lines():
    d = pair_pullback()
    assert compute_limit(d).dim == 3
    apex = D_n(2)
    cone = complete_cone(d, algebra_of(apex), legs_from(apex, ["d", "0"], ["0", "d"]))
    verdict = verify_cone(d, cone)
    assert verdict.ok and verdict.limit_dim == verdict.apex_dim == 3


def test_square_is_not_the_pullback():
    apex = D_power(2)
    cone = complete_cone(pair_pullback(), algebra_of(apex), legs_from(apex, ["d", "0"], ["0", "d"]))
    verdict = verify_cone(pair_pullback(), cone)
    assert verdict.commutes and not verdict.bijective
    assert (verdict.limit_dim, verdict.apex_dim) == (3, 4)
    with pytest.raises(NotALimit):
        solver_for(pair_pullback(), cone)


def test_noncommuting_cone_names_the_arrow():
    d = WeilDiagram("eq", {"s": WD, "t": WD}, [
        Arrow("id", "s", "t", induced_hom(make_map(D, D, ["d"]))),
        Arrow("twice", "s", "t", induced_hom(make_map(D, D, ["2*d"]))),
    ])
    leg = induced_hom(make_map(D, D, ["d"]))
    cone = complete_cone(d, WD, {"s": leg})
    verdict = verify_cone(d, cone)
    assert not verdict.commutes and verdict.failed_arrows == ["twice"]
    # the equalizer of x ↦ x and x ↦ 2x on the nilpotent part is the scalars
    assert compute_limit(d).dim == 1


def test_incomplete_cone():
    with pytest.raises(MalformedCone):
        complete_cone(pair_pullback(), WD, {})


def test_diagram_validation():
    with pytest.raises(ValueError):
        WeilDiagram("bad", {"a": WD}, [Arrow("x", "a", "missing", ORIGIN)])
    with pytest.raises(ValueError):
        WeilDiagram("bad", {"a": WD, "b": WD}, [Arrow("x", "a", "b", ORIGIN)])


@given(small_fractions, small_fractions, small_fractions)
def test_lift_recovers_the_unique_element(c0, c1, c2):
    apex = D_n(2)
    A = algebra_of(apex)
    d = pair_pullback()
    cone = complete_cone(d, A, legs_from(apex, ["d", "0"], ["0", "d"]))
    x = A.from_vector([c0, c1, c2])
    family = {n: leg(x) for n, leg in cone.legs.items()}
    assert lift_through_limit(d, cone, family) == x


def test_incompatible_family():
    apex = D_n(2)
    d = pair_pullback()
    cone = complete_cone(d, algebra_of(apex), legs_from(apex, ["d", "0"], ["0", "d"]))
    family = {"a": WD.parse("1 + X"), "b": WD.parse("2 + X"), "base": W1.scalar(1)}
    with pytest.raises(IncompatibleFamily):
        lift_through_limit(d, cone, family)
