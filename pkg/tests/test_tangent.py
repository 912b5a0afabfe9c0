import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weilcalc import diagrams as dg
from weilcalc.infinitesimal import D, D_n, D_power, make_map
from weilcalc.jacobi import random_field, random_flow
from weilcalc.tangent import (
    BaseMismatch, FlowElement, NotAPower, PolyMap, TangentVector, VectorField, add, along,
    block_projection, classical_bracket, compose, ell_combine, ell_points, field_to_flow,
    flow_to_field, lie_bracket, neg, prolong_point, scale, star, star_all, tangent_sum, zero,
)
from weilcalc.weil import algebra_of

from conftest import (
    field_as_sympy_matrix, field_from_sympy, fields, small_fractions, sympy_bracket, sympy_loop_bracket, to_sympy,
    xsyms,
)

points = lambda k: st.lists(small_fractions, min_size=k, max_size=k)


def tangents(k):
    return st.tuples(points(k), points(k), points(k), points(k)).map(
        lambda t: (TangentVector(t[0], t[1]), TangentVector(t[0], t[2]), TangentVector(t[0], t[3])))


# -- tangent vectors ---------------------------------------------------------------


@given(tangents(2), small_fractions, small_fractions)
@settings(max_examples=40)
def test_vector_space_axioms(abc, al, be):
    a, b, c = abc
    z = zero(a.base)
    assert add(add(a, b), c) == add(a, add(b, c))
    assert add(a, b) == add(b, a)
    assert add(a, z) == a
    assert add(a, neg(a)) == z
    assert scale(al, add(a, b)) == add(scale(al, a), scale(al, b))
    assert scale(al + be, a) == add(scale(al, a), scale(be, a))


@given(tangents(3))
@settings(max_examples=20)
def test_sum_is_componentwise(abc):
    a, b, _ = abc
    assert add(a, b).dir == tuple(x + y for x, y in zip(a.dir, b.dir))


def test_adding_tangents_at_different_points():
    with pytest.raises(BaseMismatch):
        add(TangentVector([0], [1]), TangentVector([1], [1]))


def test_ell_restricts_to_each_tangent():
    ts = [TangentVector([1, 2], [3, 4]), TangentVector([1, 2], [0, -1]), TangentVector([1, 2], [5, 5])]
    p = ell_combine(*ts)
    assert p.algebra == algebra_of(D_n(3))
    for j, t in enumerate(ts):
        assert TangentVector.from_point(along(dg.wedge_injection(3, j + 1), p)) == t
    total = TangentVector.from_point(tangent_sum([t.to_point() for t in ts]))
    assert total.dir == (8, 8)


def test_prolongation_is_the_chain_rule():
    f = PolyMap.parse(2, ["x1*x2", "x1^2"])
    p = TangentVector([2, 3], [1, 1]).to_point()
    q = TangentVector.from_point(prolong_point(f, p))
    assert q.base == (6, 4)
    assert q.dir == (5, 4)  # J_f(2,3)·(1,1) = (3+2, 4+0)


# -- flows and ∗ -----------------------------------------------------------------


def test_two_step_flow_taylor_expansion_matches_sympy():
    """star(fx, fy): x + d1 X + d2 Y + d1 d2 J_Y X, compared with a sympy expansion."""
    rng = random.Random(7)
    X, Y = random_field(rng, 2, 2), random_field(rng, 2, 2)
    got = star(field_to_flow(X), field_to_flow(Y))
    s = xsyms(2)
    d1, d2 = sympy.symbols("d1 d2")
    x = sympy.Matrix([to_sympy(c, s) for c in X.comps])
    y = sympy.Matrix([to_sympy(c, s) for c in Y.comps])
    p = sympy.Matrix(s) + d1 * x
    p = p + d2 * y.subs(dict(zip(s, p)), simultaneous=True)
    for mono, (a, b) in {(1, 0): (1, 0), (0, 1): (0, 1), (1, 1): (1, 1)}.items():
        want = p.diff(d1, a).diff(d2, b).subs({d1: 0, d2: 0}).applyfunc(sympy.expand)
        have = sympy.Matrix([to_sympy(c, s) for c in got.coefficient_map(mono).comps])
        assert (want - have).applyfunc(sympy.expand) == sympy.zeros(2, 1), mono


@pytest.mark.parametrize("seed", range(5))
def test_star_is_associative_with_units(seed):
    rng = random.Random(seed)
    k = 1 + seed % 2
    a = field_to_flow(random_field(rng, k))
    b = random_flow(rng, D_power(2), k, id_based=True)
    c = field_to_flow(random_field(rng, k))
    assert star(star(a, b), c) == star(a, star(b, c))
    assert star(FlowElement.identity(D, k), b) == along(block_projection(1, 2, False), b)
    assert star(b, FlowElement.identity(D, k)) == along(block_projection(2, 1, True), b)
    assert star_all(a, b, c) == star(star(a, b), c)


def test_star_needs_powers():
    with pytest.raises(NotAPower):
        star(FlowElement.identity(D_n(2), 1), FlowElement.identity(D, 1))


def test_compose_order():
    X = VectorField.parse(1, ["1"])
    Y = VectorField.parse(1, ["x1"])
    p1 = make_map(D_n(2), D, ["d1"])
    p2 = make_map(D_n(2), D, ["d2"])
    f = compose(along(p1, field_to_flow(X)), along(p2, field_to_flow(Y)))
    # x ↦ x + d1, then y ↦ y + d2 y: x + d1 + d2 x (d1 d2 = 0 on D(2))
    assert f.format() == "(x1 + d1 + x1*d2)"


@given(fields(2))
@settings(max_examples=20)
def test_field_flow_round_trip(X):
    assert flow_to_field(field_to_flow(X)) == X


def test_ell_of_two_fields_is_their_composite():
    rng = random.Random(3)
    X, Y = random_field(rng, 2), random_field(rng, 2)
    fx, fy = field_to_flow(X), field_to_flow(Y)
    xy = compose(along(make_map(D_n(2), D, ["d1"]), fx), along(make_map(D_n(2), D, ["d2"]), fy))
    assert ell_points([fx, fy]) == xy
    assert flow_to_field(along(make_map(D, D_n(2), ["d", "d"]), xy)) == X + Y


# -- brackets ------------------------------------------------------------------------


def test_loop_oracle_fixes_the_sign():
    X = VectorField.parse(2, ["1", "0"])
    Y = VectorField.parse(2, ["0", "x1"])
    # J_Y·X − J_X·Y = (0, 1)
    assert sympy_loop_bracket(X, Y) == sympy.Matrix([0, 1])
    assert lie_bracket(X, Y) == VectorField.parse(2, ["0", "1"])


@given(fields(2), fields(2))
@settings(max_examples=15, deadline=None)
def test_bracket_matches_both_sympy_oracles(X, Y):
    b = field_as_sympy_matrix(lie_bracket(X, Y))
    assert b == sympy_bracket(X, Y)
    assert b == sympy_loop_bracket(X, Y)


@given(fields(3, max_degree=1), fields(3, max_degree=1))
@settings(max_examples=10, deadline=None)
def test_bracket_in_three_dimensions(X, Y):
    assert field_as_sympy_matrix(lie_bracket(X, Y)) == sympy_bracket(X, Y)


@pytest.mark.parametrize("seed", range(4))
def test_linear_fields_give_the_commutator(seed):
    rng = random.Random(seed)
    k = 2 + seed % 2
    A = sympy.Matrix(k, k, lambda i, j: rng.randint(-3, 3))
    B = sympy.Matrix(k, k, lambda i, j: rng.randint(-3, 3))
    s = sympy.Matrix(xsyms(k))
    lin = lambda M: field_from_sympy(M * s, k)
    assert field_as_sympy_matrix(lie_bracket(lin(A), lin(B))) == ((B * A - A * B) * s).applyfunc(sympy.expand)


def test_bracket_antisymmetry_and_classical_formula():
    rng = random.Random(11)
    X, Y = random_field(rng, 2), random_field(rng, 2)
    assert lie_bracket(X, Y) == -lie_bracket(Y, X)
    assert lie_bracket(X, Y) == classical_bracket(X, Y)
    assert lie_bracket(X, X).is_zero()
