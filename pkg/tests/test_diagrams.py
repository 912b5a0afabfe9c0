import time

import pytest
import sympy

from weilcalc import diagrams as dg
from weilcalc.infinitesimal import IllDefinedMap, compose_maps, make_map
from weilcalc.limits import compute_limit, verify_cone
from weilcalc.poly import Poly, var_names
from weilcalc.weil import algebra_of

from conftest import count_squarefree_monomials


def test_every_catalogued_cone_is_limiting():
    t0 = time.perf_counter()
    for entry in dg.all_entries():
        verdict = verify_cone(entry.diagram, entry.cone)
        assert verdict.ok, (entry.key, verdict)
    assert time.perf_counter() - t0 < 10


@pytest.mark.parametrize("obj, want", [
    (dg.E, 6), (dg.E_AXIS[1], 17), (dg.E_AXIS[2], 17), (dg.E_AXIS[3], 17), (dg.G, 16),
    (dg.SQUARE_ENCODING, 5), (dg.CUBE_ENCODING[1], 10),
])
def test_encoding_dimensions(obj, want):
    seqs = obj.simplicial_sequences()
    assert count_squarefree_monomials(obj.n, seqs) == want
    assert algebra_of(obj).dim == want


def test_sextuple_limit_has_the_triple_product():
    entry = dg.microcube_hexagon()
    assert compute_limit(entry.diagram).dim == 16
    assert (1, 1, 1, 0, 0, 0, 0, 0) in algebra_of(dg.G).basis


def test_iota_maps_are_composites():
    psi = compose_maps(dg.CUBE_PSI[2], dg.ETA1[2])
    assert dg.IOTA[2][1] == psi
    # the extra axis-2 coordinate d1*d3 lands in slot 6
    assert psi.components[6] == Poly.zero(3)
    assert psi.components[5] == Poly(3, {(1, 0, 1): 1})


def test_transcribed_third_leg_is_ill_defined():
    slots = [str(c.format(var_names("d", 7))) for c in dg.K_MAPS[3].components]
    slots[3] = "-d4*d5"
    slots[6] = "-d7"
    with pytest.raises(IllDefinedMap):
        make_map(dg.E_AXIS[3], dg.G, slots)


def _composite_rows(h, monomials):
    """For each monomial m of the unknown map's source, m pulled back along h."""
    return {m: Poly.monomial(m).substitute(h.components, h.source.n, h.source.keeps)
            for m in monomials}


def test_third_leg_is_forced_by_the_other_two():
    """Solve k3 ∘ h(3,23) = k2 ∘ h(2,23), k3 ∘ h(3,31) = k1 ∘ h(1,31) for k3."""
    src = algebra_of(dg.E_AXIS[3])
    monos = [m for m in src.basis if any(m)]
    unknowns = {(j, m): sympy.Symbol(f"c{j}_{''.join(map(str, m))}")
                for j in range(dg.G.n) for m in monos}
    equations = []
    for mine, other, k_other in (((3, "23"), (2, "23"), dg.K_MAPS[2]),
                                 ((3, "31"), (1, "31"), dg.K_MAPS[1])):
        h, h_other = dg.H_MAPS[mine], dg.H_MAPS[other]
        pulled = _composite_rows(h, monos)
        want = compose_maps(h_other, k_other).components
        for j in range(dg.G.n):
            lhs: dict = {}
            for m in monos:
                for mono, c in pulled[m].terms.items():
                    lhs[mono] = lhs.get(mono, 0) + unknowns[(j, m)] * sympy.Rational(c.numerator, c.denominator)
            for mono in set(lhs) | set(want[j].terms):
                c = want[j].terms.get(mono, 0)
                equations.append(lhs.get(mono, 0) - sympy.Rational(c.numerator, c.denominator) if c else lhs.get(mono, 0))
    symbols = list(unknowns.values())
    solution = sympy.linsolve(equations, symbols)
    (values,) = solution
    assert not any(v.free_symbols for v in values), "k3 is not determined"
    solved = dict(zip(unknowns, values))
    for j, comp in enumerate(dg.K_MAPS[3].components):
        expected = {m: sympy.Rational(c.numerator, c.denominator) for m, c in comp.terms.items()}
        got = {m: solved[(j, m)] for m in monos if solved[(j, m)] != 0}
        assert got == expected, f"slot {j + 1}"


def test_jacobi_extractions():
    got = [tuple(c.format(["d"]) for c in f.components) for f in dg.G_EXTRACT]
    assert got[0][-2:] == ("d", "0")
    assert got[1][-2:] == ("0", "d")
    assert got[2][-2:] == ("-d", "-d")


def test_bracket_equalizer_apex():
    entry = dg.bracket_equalizer()
    assert compute_limit(entry.diagram).dim == 2
    assert verify_cone(entry.diagram, entry.cone).ok
