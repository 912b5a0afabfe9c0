"""The built-in verification suite: bundled scripts plus randomized trials.

Checks are grouped into four numbered groups:

* ``3``: tangent spaces (the vector-space structure on tangents at a point)
* ``4``: microflows, the ∗ composition and the Lie bracket
* ``5``: limit diagrams for strong differences and both Jacobi identities
* ``6``: vector-field Jacobi identity via the six permuted composites

Randomized checks draw from ``random.Random`` seeded by a string built from
the suite seed, the check name and the trial number, so every record is
reproducible on its own and reports are identical across runs.
"""

from __future__ import annotations

import random
import time
from importlib import resources
from typing import Callable, Optional

from . import diagrams as dg
from .dsl import parse_script, run_checks
from .infinitesimal import D, D_n, D_power, make_map
from .jacobi import (
    bracket_via_strong_diff, general_jacobi_check,
    jacobi_witness_from_fields, primordial_jacobi_check, random_compatible_sextuple, random_field,
    random_flow, random_microsquare_triple, random_rational, strong_diff, strong_diff_axis,
)
from .limits import compute_limit, verify_cone
from .report import ERROR, FAIL, PASS, CheckRecord, Report
from .tangent import (
    FlowElement, TangentVector, VectorField, add, along, block_projection, classical_bracket,
    compose, ell_combine, ell_points, field_to_flow, flow_to_field, lie_bracket, neg, scale,
    star, star_all, zero,
)
from .weil import algebra_of

GROUPS = {
    "3": ("tangent spaces", "tangent.weil"),
    "4": ("microflows and brackets", "flows.weil"),
    "5": ("strong differences and Jacobi", "differences.weil"),
    "6": ("vector-field Jacobi", "fields.weil"),
}


def bundled_script(name: str) -> str:
    return resources.files("weilcalc").joinpath("scripts", name).read_text(encoding="utf-8")


def _rng(seed: int, name: str, t: int) -> random.Random:
    return random.Random(f"{seed}:{name}:{t}")


def _trials(name: str, anchor: str, trials: int, seed: int,
            body: Callable[[random.Random, int], Optional[str]], kind: str = "property") -> CheckRecord:
    """Run ``body`` per trial; it returns None on success or a failure note."""
    t0 = time.perf_counter()
    passed, first = 0, None
    status = PASS
    for t in range(trials):
        try:
            note = body(_rng(seed, name, t), t)
        except Exception as exc:  # an exception is an engine error, not a counterexample
            return CheckRecord(name, kind, ERROR, anchor,
                               {"trials": trials, "passed": passed, "trial": t,
                                "error": type(exc).__name__, "message": str(exc)},
                               time.perf_counter() - t0)
        if note is None:
            passed += 1
        elif first is None:
            first = f"trial {t}: {note}"
            status = FAIL
    details = {"trials": trials, "passed": passed}
    if first:
        details["first_failure"] = first
    return CheckRecord(name, kind, status, anchor, details, time.perf_counter() - t0)


def _failures(**conds: bool) -> Optional[str]:
    bad = [k for k, ok in conds.items() if not ok]
    return ", ".join(bad) if bad else None


# -- group 3: tangent spaces ------------------------------------------------------------


def _random_tangent(rng: random.Random, base) -> TangentVector:
    return TangentVector(base, [random_rational(rng) for _ in base])


def _axioms(rng: random.Random, k: int) -> Optional[str]:
    x = [random_rational(rng) for _ in range(k)]
    a, b, c = (_random_tangent(rng, x) for _ in range(3))
    al, be = random_rational(rng), random_rational(rng)
    z = zero(x)
    return _failures(
        associativity=add(add(a, b), c) == add(a, add(b, c)),
        commutativity=add(a, b) == add(b, a),
        identity=add(a, z) == a,
        inverse=add(a, neg(a)) == z,
        vector_distributivity=scale(al, add(a, b)) == add(scale(al, a), scale(al, b)),
        scalar_distributivity=scale(al + be, a) == add(scale(al, a), scale(be, a)),
        scalar_compatibility=scale(al * be, a) == scale(al, scale(be, a)),
        unit_scalar=scale(1, a) == a,
        coefficient_shortcut=add(a, b).dir == tuple(p + q for p, q in zip(a.dir, b.dir)),
    )


def _ell_projections(rng: random.Random, k: int, n: int) -> Optional[str]:
    x = [random_rational(rng) for _ in range(k)]
    ts = [_random_tangent(rng, x) for _ in range(n)]
    ell = ell_combine(*ts)
    ok = all(TangentVector.from_point(along(dg.wedge_injection(n, j + 1), ell)) == t
             for j, t in enumerate(ts))
    return _failures(projections=ok)


def group_tangent(seed: int, trials: int, dim: Optional[int], degree: int) -> Report:
    rep = Report()
    dims = (dim,) if dim else (1, 2, 3)
    rep.add(_trials("vector-space axioms", "tangent space at a point is a vector space",
                    trials, seed, lambda r, t: _axioms(r, dims[t % len(dims)])))
    rep.add(_trials("tangent tuple projections", "unique point over D(n) restricting to n tangents",
                    trials, seed, lambda r, t: _ell_projections(r, dims[t % len(dims)], 1 + t % 4)))
    return rep


# -- group 4: microflows and brackets --------------------------------------------------------

_P1 = make_map(D_n(2), D, ["d1"])
_P2 = make_map(D_n(2), D, ["d2"])
_SUM_D2 = make_map(D_n(2), D, ["d1 + d2"])
_ANTI = (make_map(D, D_n(2), ["d", "-d"]), make_map(D, D_n(2), ["-d", "d"]))


def _star_laws(rng: random.Random, k: int, degree: int) -> Optional[str]:
    g1 = field_to_flow(random_field(rng, k, degree))
    g2 = random_flow(rng, D_power(2), k, degree, id_based=True)
    g3 = field_to_flow(random_field(rng, k, degree))
    l, n = 1 + rng.randrange(2), 1 + rng.randrange(2)
    m = g2.object.n
    left_unit = star(FlowElement.identity(D_power(l), k), g2)
    right_unit = star(g2, FlowElement.identity(D_power(n), k))
    return _failures(
        associativity=star(star(g1, g2), g3) == star(g1, star(g2, g3)),
        unit_before=left_unit == along(block_projection(l, m, False), g2),
        unit_after=right_unit == along(block_projection(m, n, True), g2),
    )


def _sum_laws(rng: random.Random, k: int, degree: int) -> Optional[str]:
    X, Y = random_field(rng, k, degree), random_field(rng, k, degree)
    fx, fy = field_to_flow(X), field_to_flow(Y)
    xx = compose(along(_P1, fx), along(_P2, fx))
    ident = FlowElement.identity(D, k)
    xy = compose(along(_P1, fx), along(_P2, fy))
    yx = compose(along(_P1, fy), along(_P2, fx))
    plus = make_map(D, D_n(2), ["d", "d"])
    # the reversed composite restricts to Y on the first axis, so it is ell(Y, X)
    return _failures(
        sum_of_parameters=along(_SUM_D2, fx) == xx,
        opposite_contraction=all(along(phi, xx) == ident for phi in _ANTI),
        ell_in_order=ell_points([fx, fy]) == xy,
        ell_reversed=ell_points([fy, fx]) == yx,
        field_sum_in_order=flow_to_field(along(plus, xy)) == X + Y,
        field_sum_reversed=flow_to_field(along(plus, yx)) == X + Y,
    )


def _bracket_laws(rng: random.Random, k: int, degree: int) -> Optional[str]:
    X, Y = random_field(rng, k, degree), random_field(rng, k, degree)
    b = lie_bracket(X, Y)
    loop = along(dg.BRACKET_LOOP, star_all(*(field_to_flow(F) for F in (X, Y, X, Y))))
    axis_free = all(not c.coeff((1, 0)) and not c.coeff((0, 1)) for c in loop.point.coords)
    return _failures(
        axis_parts_vanish=axis_free,
        jacobian_formula=b == classical_bracket(X, Y),
        antisymmetry=b == -lie_bracket(Y, X),
        self_bracket=lie_bracket(X, X).is_zero(),
    )


def _linear_bracket(rng: random.Random, k: int) -> Optional[str]:
    A = [[random_rational(rng) for _ in range(k)] for _ in range(k)]
    B = [[random_rational(rng) for _ in range(k)] for _ in range(k)]
    X, Y = linear_field(A), linear_field(B)
    BA = [[sum(B[i][j] * A[j][l] for j in range(k)) for l in range(k)] for i in range(k)]
    AB = [[sum(A[i][j] * B[j][l] for j in range(k)) for l in range(k)] for i in range(k)]
    C = [[BA[i][j] - AB[i][j] for j in range(k)] for i in range(k)]
    return _failures(commutator_matrix=lie_bracket(X, Y) == linear_field(C))


def linear_field(M) -> VectorField:
    k = len(M)
    return VectorField.parse(k, [" + ".join(f"({M[i][j]})*x{j + 1}" for j in range(k)) for i in range(k)])


def group_flows(seed: int, trials: int, dim: Optional[int], degree: int) -> Report:
    rep = Report()
    dims = (dim,) if dim else (1, 2)
    pick = lambda t: dims[t % len(dims)]
    rep.add(_trials("star associativity and units", "block composition of microflows",
                    trials, seed, lambda r, t: _star_laws(r, pick(t), degree)))
    rep.add(_trials("tangent sums of fields by composition", "sum of fields as composite of flows",
                    trials, seed, lambda r, t: _sum_laws(r, pick(t), degree)))
    rep.add(_trials("bracket factorization", "commutator loop factors through d1*d2",
                    trials, seed, lambda r, t: _bracket_laws(r, pick(t), degree)))
    rep.add(_trials("bracket of linear fields", "linear fields give the matrix commutator BA - AB",
                    trials, seed, lambda r, t: _linear_bracket(r, 1 + t % 3)))
    return rep


# -- group 5: strong differences ------------------------------------------------------------------


def dimension_record() -> CheckRecord:
    t0 = time.perf_counter()
    entry = dg.microcube_hexagon()
    verdict = verify_cone(entry.diagram, entry.cone)
    dims = {
        "W_E": algebra_of(dg.E).dim,
        "W_E[1]": algebra_of(dg.E_AXIS[1]).dim,
        "W_E[2]": algebra_of(dg.E_AXIS[2]).dim,
        "W_E[3]": algebra_of(dg.E_AXIS[3]).dim,
        "W_G": algebra_of(dg.G).dim,
        "sextuple_limit_dim": compute_limit(entry.diagram).dim,
        "sextuple_cone_ok": verdict.ok,
    }
    ok = (dims["W_E"] == 6 and all(dims[f"W_E[{i}]"] == 17 for i in dg.AXES)
          and dims["W_G"] == dims["sextuple_limit_dim"] and verdict.ok)
    return CheckRecord("encoding algebra dimensions", "dimension", PASS if ok else FAIL,
                       "algebras encoding microsquare triples and microcube sextuples", dims,
                       time.perf_counter() - t0)


def _closed_form_difference(rng: random.Random, k: int, degree: int) -> Optional[str]:
    g1, g2, _ = random_microsquare_triple(rng, k, degree)
    diff = strong_diff(g1, g2)
    want = tuple(b.coeff((1, 1)) - a.coeff((1, 1)) for a, b in zip(g1.point.coords, g2.point.coords))
    base = tuple(a.aug() for a in g1.point.coords)
    return _failures(direction=diff.point.coefficient((1,)) == want,
                     base=diff.point.base() == base)


def _primordial(rng: random.Random, k: int, degree: int) -> Optional[str]:
    v = primordial_jacobi_check(*random_microsquare_triple(rng, k, degree))
    return _failures(sum_zero=v.zero, encoding_cross_check=bool(v.cross_check))


def _general(rng: random.Random, k: int, degree: int) -> Optional[str]:
    v = general_jacobi_check(random_compatible_sextuple(rng, k, degree))
    return _failures(sum_zero=v.zero, encoding_cross_check=bool(v.cross_check))


def group_differences(seed: int, trials: int, dim: Optional[int], degree: int) -> Report:
    rep = Report()
    dims = (dim,) if dim else (1, 2)
    pick = lambda t: dims[t % len(dims)]
    rep.add(dimension_record())
    rep.add(_trials("strong difference coefficients", "difference of the d1*d2 parts",
                    trials, seed, lambda r, t: _closed_form_difference(r, pick(t), degree)))
    rep.add(_trials("primordial Jacobi identity", "three strong differences of microsquares sum to zero",
                    trials, seed, lambda r, t: _primordial(r, pick(t), degree)))
    rep.add(_trials("general Jacobi identity", "alternating double differences of six microcubes",
                    trials, seed, lambda r, t: _general(r, pick(t), degree)))
    return rep


# -- group 6: vector fields ------------------------------------------------------------------


def _bracket_as_difference(rng: random.Random, k: int, degree: int) -> Optional[str]:
    X, Y = random_field(rng, k, degree), random_field(rng, k, degree)
    return _failures(equal=bracket_via_strong_diff(X, Y) == lie_bracket(X, Y))


def _composite_differences(rng: random.Random, k: int, degree: int) -> Optional[str]:
    fx = field_to_flow(random_field(rng, k, degree))
    g1, g2, _ = random_microsquare_triple(rng, k, degree, id_based=True)
    diff = strong_diff(g2, g1)  # g1 −̇ g2
    f1, f3 = dg.FACE_INCLUSION[1], dg.FACE_INCLUSION[3]
    return _failures(
        restriction_before=along(f1, star(fx, g1)) == along(f1, star(fx, g2)),
        restriction_after=along(f3, star(g1, fx)) == along(f3, star(g2, fx)),
        first_axis=strong_diff_axis(star(fx, g2), star(fx, g1), 1) == star(fx, diff),
        third_axis=strong_diff_axis(star(g2, fx), star(g1, fx), 3) == along(dg.SWAP_D2, star(diff, fx)),
    )


def _field_jacobi(rng: random.Random, k: int, degree: int) -> Optional[str]:
    X, Y, Z = (random_field(rng, k, degree) for _ in range(3))
    cubes = jacobi_witness_from_fields(X, Y, Z)
    verdict = general_jacobi_check(cubes, cross_check=False)
    expr = [flow_to_field(t) for t in verdict.terms]
    nested = [lie_bracket(X, lie_bracket(Y, Z)), lie_bracket(Y, lie_bracket(Z, X)),
              lie_bracket(Z, lie_bracket(X, Y))]
    total = nested[0] + nested[1] + nested[2]
    return _failures(
        bridge_1=expr[0] == nested[0], bridge_2=expr[1] == nested[1], bridge_3=expr[2] == nested[2],
        difference_sum_zero=verdict.zero, bracket_sum_zero=total.is_zero(),
    )


def group_fields(seed: int, trials: int, dim: Optional[int], degree: int) -> Report:
    rep = Report()
    dims = (dim,) if dim else (1, 2, 3)
    pick = lambda t: dims[t % len(dims)]
    rep.add(_trials("bracket as a strong difference", "bracket equals Y*X minus swapped X*Y",
                    trials, seed, lambda r, t: _bracket_as_difference(r, pick(t), degree)))
    rep.add(_trials("differences of composites", "strong differences commute with composing a field",
                    trials, seed, lambda r, t: _composite_differences(r, pick(t), degree)))
    # triple composites on R^3 cost seconds each; default to k <= 2 here
    small = (dim,) if dim else (1, 2)
    rep.add(_trials("Jacobi identity for vector fields", "nested brackets from the six permuted composites",
                    trials, seed, lambda r, t: _field_jacobi(r, small[t % len(small)], degree)))
    return rep


_GROUP_RUNNERS = {"3": group_tangent, "4": group_flows, "5": group_differences, "6": group_fields}


def run_suite(section: str = "all", seed: int = 0, trials: int = 10, dim: Optional[int] = None,
              degree: int = 2) -> Report:
    """Bundled scripts and randomized trials for the chosen group (or all)."""
    if section != "all" and section not in GROUPS:
        raise ValueError(f"unknown section {section!r}; expected one of {sorted(GROUPS)} or 'all'")
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    if dim is not None and dim < 1:
        raise ValueError("dim must be at least 1")
    report = Report()
    for key in GROUPS if section == "all" else (section,):
        title, script = GROUPS[key]
        report.extend(run_checks(parse_script(bundled_script(script)), script))
        report.extend(_GROUP_RUNNERS[key](seed, trials, dim, degree))
    return report
