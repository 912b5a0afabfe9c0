"""Shared strategies, independent oracles and the acceptance-line reporter."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import strategies as st

from weilcalc.poly import Poly
from weilcalc.tangent import VectorField

# -- hypothesis strategies ------------------------------------------------------

small_fractions = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def polys(nvars: int, max_degree: int = 2, max_terms: int = 4):
    monos = st.tuples(*[st.integers(0, max_degree)] * nvars).filter(lambda m: sum(m) <= max_degree)
    return st.dictionaries(monos, small_fractions, max_size=max_terms).map(lambda t: Poly(nvars, t))


def fields(k: int, max_degree: int = 2):
    return st.tuples(*[polys(k, max_degree, 3)] * k).map(lambda cs: VectorField(k, cs))


# -- oracles that share no code with the engine ----------------------------------


def count_squarefree_monomials(n: int, seqs) -> int:
    """Brute-force dimension of D^n{seqs}: subsets of {1..n} containing no listed product."""
    killed = [set(s) for s in seqs]
    total = 0
    for r in range(n + 1):
        for subset in combinations(range(1, n + 1), r):
            s = set(subset)
            if not any(k <= s for k in killed):
                total += 1
    return total


def xsyms(k: int):
    return sympy.symbols(f"x1:{k + 1}")


def to_sympy(p: Poly, syms) -> sympy.Expr:
    expr = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, mono):
            term *= s ** e
        expr += term
    return expr


def field_to_sympy(X: VectorField):
    syms = xsyms(X.k)
    return sympy.Matrix([to_sympy(c, syms) for c in X.comps]), syms


def sympy_bracket(X: VectorField, Y: VectorField) -> sympy.Matrix:
    """J_Y·X − J_X·Y computed by sympy."""
    x, syms = field_to_sympy(X)
    y, _ = field_to_sympy(Y)
    return (y.jacobian(syms) * x - x.jacobian(syms) * y).applyfunc(sympy.expand)


def sympy_loop_bracket(X: VectorField, Y: VectorField) -> sympy.Matrix:
    """The d1*d2 coefficient of the commutator loop X(d1), Y(d2), X(-d1), Y(-d2).

    Squares of d1 and d2 vanish, so that coefficient is the mixed second
    derivative at zero of the untruncated composite.
    """
    x, syms = field_to_sympy(X)
    y, _ = field_to_sympy(Y)
    d1, d2 = sympy.symbols("d1 d2")

    def step(p, F, t):
        return p + t * F.subs(dict(zip(syms, p)), simultaneous=True)

    p = sympy.Matrix(syms)
    for F, t in ((x, d1), (y, d2), (x, -d1), (y, -d2)):
        p = step(p, F, t)
    return p.diff(d1).diff(d2).subs({d1: 0, d2: 0}).applyfunc(sympy.expand)


def field_as_sympy_matrix(Z: VectorField) -> sympy.Matrix:
    return field_to_sympy(Z)[0].applyfunc(sympy.expand)


def field_from_sympy(exprs, k: int) -> VectorField:
    syms = xsyms(k)
    comps = []
    for e in exprs:
        terms = sympy.Poly(sympy.expand(e), *syms).terms() if e != 0 else []
        comps.append(Poly(k, {m: Fraction(int(c.p), int(c.q)) for m, c in terms}))
    return VectorField(k, tuple(comps))


# -- acceptance reporting ----------------------------------------------------------

ACCEPTANCE: list[tuple[int, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        number, label = marker.args
        ACCEPTANCE.append((number, label, "PASS" if rep.passed else "FAIL"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, status in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {label}")
