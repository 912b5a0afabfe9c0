import random

import pytest
import sympy

from weilcalc import diagrams as dg
from weilcalc.jacobi import (
    CUBE_LABELS, bracket_via_strong_diff, compatible_sextuple_basis, field_jacobi_expressions,
    general_jacobi_check, is_zero_tangent, jacobi_witness_from_fields, primordial_jacobi_check,
    random_compatible_sextuple, random_field, random_microsquare_triple, strong_diff,
    strong_diff_axis, _cubes_from_vector,
)
from weilcalc.limits import IncompatibleFamily
from weilcalc.tangent import (
    WeilPoint, along, field_to_flow, lie_bracket, star, tangent_sum,
)
from weilcalc.weil import algebra_of

from conftest import field_as_sympy_matrix, sympy_bracket

W2 = algebra_of(dg.D2)


def square(*coeffs):
    """A one-coordinate scalar microsquare a + b d1 + c d2 + e d1 d2."""
    return WeilPoint(W2, (W2.from_vector(coeffs),))


def test_strong_difference_of_scalar_squares():
    g1, g2 = square(1, 2, 3, 4), square(1, 2, 3, 9)
    diff = strong_diff(g1, g2)
    assert diff.base() == (1,)
    assert diff.coefficient((1,)) == (5,)


def test_strong_difference_needs_agreement():
    with pytest.raises(IncompatibleFamily):
        strong_diff(square(0, 1, 0, 0), square(0, 2, 0, 0))


def test_bad_axis():
    c = random_compatible_sextuple(random.Random(0), 1)["123"]
    with pytest.raises(ValueError):
        strong_diff_axis(c, c, 4)


@pytest.mark.parametrize("seed", range(6))
def test_primordial_identity(seed):
    rng = random.Random(seed)
    g = random_microsquare_triple(rng, 1 + seed % 2)
    verdict = primordial_jacobi_check(*g)
    assert verdict.zero and verdict.cross_check


def test_primordial_sum_is_sensitive_to_orientation():
    rng = random.Random(1)
    g1, g2, g3 = random_microsquare_triple(rng, 1)
    wrong = tangent_sum([strong_diff(g1, g2), strong_diff(g2, g3), strong_diff(g1, g3)])
    assert not is_zero_tangent(wrong)


def test_compatible_sextuples_form_a_16_dimensional_space():
    basis = compatible_sextuple_basis()
    assert len(basis) == 16
    assert sympy.Matrix(basis).rank() == 16
    for vec in basis[:4]:
        assert general_jacobi_check(_cubes_from_vector(vec)).ok


@pytest.mark.parametrize("seed", range(4))
def test_general_identity(seed):
    cubes = random_compatible_sextuple(random.Random(seed), 1 + seed % 2)
    assert set(cubes) == set(CUBE_LABELS)
    verdict = general_jacobi_check(cubes)
    assert verdict.zero and verdict.cross_check, verdict.notes


def test_general_identity_is_not_vacuous():
    cubes = random_compatible_sextuple(random.Random(9), 2)
    verdict = general_jacobi_check(cubes, cross_check=False)
    assert verdict.zero
    assert sum(not is_zero_tangent(t) for t in verdict.terms) >= 2


@pytest.mark.parametrize("seed", range(4))
def test_bracket_is_a_strong_difference(seed):
    rng = random.Random(seed)
    X, Y = random_field(rng, 1 + seed % 2), random_field(rng, 1 + seed % 2)
    assert bracket_via_strong_diff(X, Y) == lie_bracket(X, Y)


def test_unswapped_composites_are_not_comparable():
    rng = random.Random(2)
    fx, fy = field_to_flow(random_field(rng, 1)), field_to_flow(random_field(rng, 1))
    with pytest.raises(IncompatibleFamily):
        strong_diff(star(fy, fx), star(fx, fy))


def test_third_axis_difference_needs_the_swap():
    rng = random.Random(4)
    fx = field_to_flow(random_field(rng, 1))
    g1, g2, _ = random_microsquare_triple(rng, 1, id_based=True)
    lhs = strong_diff_axis(star(g2, fx), star(g1, fx), 3)
    diff = strong_diff(g2, g1)
    assert lhs == along(dg.SWAP_D2, star(diff, fx))
    assert lhs != star(diff, fx)


@pytest.mark.parametrize("seed", range(3))
def test_field_expressions_are_nested_brackets(seed):
    rng = random.Random(seed)
    X, Y, Z = (random_field(rng, 2) for _ in range(3))
    e1, e2, e3 = field_jacobi_expressions(X, Y, Z)
    assert field_as_sympy_matrix(e1) == sympy_bracket(X, lie_bracket(Y, Z))
    assert e2 == lie_bracket(Y, lie_bracket(Z, X))
    assert e3 == lie_bracket(Z, lie_bracket(X, Y))
    assert (e1 + e2 + e3).is_zero()
    assert general_jacobi_check(jacobi_witness_from_fields(X, Y, Z)).ok
