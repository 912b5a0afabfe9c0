from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from weilcalc.infinitesimal import (
    D, ONE, D_n, D_order, D_power, IllDefinedMap, MapMismatch, NonzeroConstantTerm, NotSimplicial,
    compose_maps, identity_map, make_map, make_object, oplus, simplicial,
)
from weilcalc.poly import Poly
from weilcalc.weil import algebra_of

from conftest import count_squarefree_monomials


@pytest.mark.parametrize("n", range(0, 9))
def test_power_and_wedge_dimensions(n):
    assert algebra_of(D_power(n)).dim == count_squarefree_monomials(n, []) == 2 ** n
    pairs = list(combinations(range(1, n + 1), 2))
    assert algebra_of(D_n(n)).dim == count_squarefree_monomials(n, pairs) == n + 1


@pytest.mark.parametrize("n, seqs", [
    (3, [(1, 3), (2, 3)]),
    (4, [(2, 4), (3, 4)]),
    (4, [(1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]),
    (5, [(1, 2, 3), (4, 5)]),
])
def test_simplicial_dimension_against_enumeration(n, seqs):
    assert algebra_of(simplicial(n, seqs)).dim == count_squarefree_monomials(n, seqs)


@given(st.integers(1, 6), st.data())
def test_random_simplicial_dimension(n, data):
    candidates = [c for r in (2, 3) for c in combinations(range(1, n + 1), r)]
    seqs = data.draw(st.lists(st.sampled_from(candidates), max_size=5)) if candidates else []
    assert algebra_of(simplicial(n, seqs)).dim == count_squarefree_monomials(n, seqs)


def test_higher_order_line():
    assert algebra_of(D_order(3)).dim == 4
    assert str(D_order(3)) == "D_3"


def test_redundant_relations_are_dropped():
    a = simplicial(3, [(1, 2), (1, 2, 3)])
    assert a == simplicial(3, [(1, 2)])


def test_oplus_kills_cross_products():
    s = oplus(D, D_power(2))
    assert s == simplicial(3, [(1, 2), (1, 3)])
    assert oplus(D, D) == D_n(2)
    with pytest.raises(NotSimplicial):
        oplus(D_order(2), D)


def test_printing():
    assert str(D) == "D" and str(ONE) == "1"
    assert str(D_n(3)) == "D(3)"
    assert str(simplicial(3, [(1, 3), (2, 3)])) == "D^3{(1,3)(2,3)}"


def test_bad_object_specs():
    with pytest.raises(ValueError):
        make_object(2, relations=[(2, 1)])
    with pytest.raises(ValueError):
        make_object(2, relations=[(1, 3)])


def test_sum_on_the_square_is_ill_defined():
    with pytest.raises(IllDefinedMap) as info:
        make_map(D_power(2), D, ["d1 + d2"])
    assert info.value.generator == (2,)
    assert info.value.residue == Poly(2, {(1, 1): 2})


def test_sum_on_the_wedge_is_fine():
    f = make_map(D_n(2), D, ["d1 + d2"])
    assert f.components[0] == Poly(2, {(1, 0): 1, (0, 1): 1})


def test_map_errors():
    with pytest.raises(NonzeroConstantTerm):
        make_map(D, D, ["1 + d"])
    with pytest.raises(MapMismatch):
        make_map(D, D_power(2), ["d"])


def test_components_are_reduced():
    f = make_map(D_power(2), D_power(2), ["d1 + d1^2", "d2 + d1*d2"])
    assert f.components[0] == Poly.var(0, 2)


def test_compose_is_f_then_g():
    f = make_map(D, D_power(2), ["d", "d"])
    g = make_map(D_power(2), D, ["d1*d2"])
    # d ↦ (d, d) ↦ d^2 = 0 on D
    assert compose_maps(f, g).components == (Poly.zero(1),)
    h = make_map(D_power(2), D_power(3), ["d1", "d2", "d1*d2"])
    assert compose_maps(identity_map(D_power(2)), h) == h


def test_wedge_object_from_five_products():
    E = simplicial(4, [(1, 3), (2, 3), (1, 4), (2, 4), (3, 4)])
    assert algebra_of(E).basis == ((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0),
                                   (0, 0, 0, 1), (1, 1, 0, 0))
