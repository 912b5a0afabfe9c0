"""Strong differences and the Jacobi identities.

``strong_diff(g1, g2)`` is the tangent g2 −̇ g1: lift the pair through the
microsquare pullback and read off the fresh infinitesimal direction.
``strong_diff_axis(c1, c2, i)`` is the microsquare c2 −̇_i c1 obtained the
same way from the axis-i microcube pullback.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import diagrams as dg
from . import linalg
from .infinitesimal import D, make_map
from .limits import lift_through_limit
from .poly import Poly
from .tangent import (
    FlowElement, PointLike, VectorField, WeilPoint, _unwrap, _wrap, along, field_to_flow,
    flow_to_field, star, star_all, tangent_sum,
)
from .weil import AlgebraMismatch, algebra_of, hom_apply, induced_hom

_MICROSQUARE = algebra_of(dg.D2)
_MICROCUBE = algebra_of(dg.D3)


def _points(items: Sequence[PointLike], alg) -> tuple[list[WeilPoint], bool]:
    pts = [_unwrap(p) for p in items]
    kinds = {f for _, f in pts}
    if len(kinds) != 1:
        raise TypeError("cannot mix flows and points")
    for p, _ in pts:
        if p.algebra != alg:
            raise AlgebraMismatch(f"expected elements over {alg}, got {p.algebra}")
    return [p for p, _ in pts], kinds.pop()


def _lift(entry, family: dict, target) -> WeilPoint:
    coords = lift_through_limit(entry.diagram, entry.cone, family)
    return WeilPoint(algebra_of(target), tuple(coords))


def encode_pair(g1: PointLike, g2: PointLike) -> PointLike:
    """The point over D³{(1,3),(2,3)} restricting to g1 along φ and g2 along ψ."""
    (p1, p2), flow = _points([g1, g2], _MICROSQUARE)
    wedge = along(dg.I_DD2_D2, p1)
    out = _lift(dg.microsquare_pullback(),
                {"first": list(p1.coords), "second": list(p2.coords), "wedge": list(wedge.coords)},
                dg.SQUARE_ENCODING)
    return _wrap(out, flow)


def strong_diff(g1: PointLike, g2: PointLike) -> PointLike:
    """g2 −̇ g1 for microsquares agreeing on D(2)."""
    return along(dg.SQ_EXTRACT, encode_pair(g1, g2))


def encode_cube_pair(c1: PointLike, c2: PointLike, axis: int) -> PointLike:
    (p1, p2), flow = _points([c1, c2], _MICROCUBE)
    face = along(dg.FACE_INCLUSION[axis], p1)
    out = _lift(dg.microcube_pullback(axis),
                {"first": list(p1.coords), "second": list(p2.coords), "face": list(face.coords)},
                dg.CUBE_ENCODING[axis])
    return _wrap(out, flow)


def strong_diff_axis(c1: PointLike, c2: PointLike, axis: int) -> PointLike:
    """c2 −̇_axis c1 for microcubes agreeing on the face opposite ``axis``."""
    if axis not in dg.AXES:
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    return along(dg.CUBE_EXTRACT[axis], encode_cube_pair(c1, c2, axis))


def bracket_via_strong_diff(X: VectorField, Y: VectorField) -> VectorField:
    """Y∗X −̇ swap(X∗Y), read as a vector field."""
    fx, fy = field_to_flow(X), field_to_flow(Y)
    swapped = along(dg.SWAP_D2, star(fy, fx))
    return flow_to_field(strong_diff(swapped, star(fx, fy)))


def is_zero_tangent(p: PointLike) -> bool:
    """True when the d-part vanishes (identically in x for flows)."""
    pt, _ = _unwrap(p)
    return not any(c.coeff((1,)) for c in pt.coords)


# -- primordial Jacobi ---------------------------------------------------------


@dataclass
class JacobiVerdict:
    terms: list
    total: PointLike
    zero: bool
    cross_check: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.zero and self.cross_check is not False

    def __bool__(self) -> bool:
        return self.ok


# d ↦ position of each strong difference inside E (see the microsquare hexagon)
_E_EXTRACT = (
    make_map(D, dg.E, ["0", "0", "d", "0"]),
    make_map(D, dg.E, ["0", "0", "-d", "d"]),
    make_map(D, dg.E, ["0", "0", "0", "-d"]),
)


def primordial_jacobi_check(g1: PointLike, g2: PointLike, g3: PointLike,
                            cross_check: bool = True) -> JacobiVerdict:
    """(g2 −̇ g1) + (g3 −̇ g2) + (g1 −̇ g3) = 0."""
    terms = [strong_diff(g1, g2), strong_diff(g2, g3), strong_diff(g3, g1)]
    total = tangent_sum(terms)
    agreed = None
    notes = []
    if cross_check:
        (p1, p2, p3), flow = _points([g1, g2, g3], _MICROSQUARE)
        fam = {"sq1": list(p1.coords), "sq2": list(p2.coords), "sq3": list(p3.coords)}
        for node, p in (("w12", p1), ("w23", p2), ("w31", p3)):
            fam[node] = list(along(dg.I_DD2_D2, p).coords)
        e = _wrap(_lift(dg.microsquare_hexagon(), fam, dg.E), flow)
        agreed = all(along(phi, e) == t for phi, t in zip(_E_EXTRACT, terms))
        if not agreed:
            notes.append("strong differences disagree with the E-encoding extractions")
    return JacobiVerdict(terms, total, is_zero_tangent(total), agreed, notes)


# -- general Jacobi ------------------------------------------------------------

CUBE_LABELS = ("123", "132", "213", "231", "312", "321")

# (axis, first pair, second pair): expression i is
#   strong_diff(strong_diff_axis(*first, i), strong_diff_axis(*second, i))
_EXPRESSIONS = (
    (1, ("321", "231"), ("132", "123")),
    (2, ("132", "312"), ("213", "231")),
    (3, ("213", "123"), ("321", "312")),
)


def jacobi_expressions(cubes: dict) -> list:
    """The three alternating double strong differences, as tangents."""
    out = []
    for axis, (a, b), (c, d) in _EXPRESSIONS:
        inner1 = strong_diff_axis(cubes[a], cubes[b], axis)
        inner2 = strong_diff_axis(cubes[c], cubes[d], axis)
        out.append(strong_diff(inner1, inner2))
    return out


def _as_cube_dict(cubes) -> dict:
    if isinstance(cubes, dict):
        missing = set(CUBE_LABELS) - set(cubes)
        if missing:
            raise ValueError(f"missing microcubes {sorted(missing)}")
        return dict(cubes)
    cubes = list(cubes)
    if len(cubes) != 6:
        raise ValueError(f"expected six microcubes, got {len(cubes)}")
    return dict(zip(CUBE_LABELS, cubes))


def double_encoding(cubes: dict, axis: int) -> PointLike:
    """h^axis over E[axis], built from the two inner encodings of expression ``axis``."""
    _, (a, b), (c, d) = _EXPRESSIONS[axis - 1]
    first = encode_cube_pair(cubes[a], cubes[b], axis)
    second = encode_cube_pair(cubes[c], cubes[d], axis)
    (p1, p2), flow = _points([first, second], algebra_of(dg.CUBE_ENCODING[axis]))
    wedge = along(dg.AXIS_WEDGE[axis], p1)
    out = _lift(dg.double_difference_pullback(axis),
                {"first": list(p1.coords), "second": list(p2.coords), "wedge": list(wedge.coords)},
                dg.E_AXIS[axis])
    return _wrap(out, flow)


def sextuple_encoding(cubes) -> PointLike:
    """m over G: the common lift of the three double encodings."""
    cubes = _as_cube_dict(cubes)
    hs = [double_encoding(cubes, i) for i in dg.AXES]
    pts = [_unwrap(h)[0] for h in hs]
    flow = _unwrap(hs[0])[1]
    entry = dg.microcube_hexagon()
    fam = {f"e{i}": list(pts[i - 1].coords) for i in dg.AXES}
    for a in entry.diagram.arrows:
        if a.target not in fam:
            fam[a.target] = [hom_apply(a.hom, c) for c in fam[a.source]]
    return _wrap(_lift(entry, fam, dg.G), flow)


def general_jacobi_check(cubes, cross_check: bool = True) -> JacobiVerdict:
    """Sum of the three expressions is zero; optionally re-derive them from m."""
    cubes = _as_cube_dict(cubes)
    terms = jacobi_expressions(cubes)
    total = tangent_sum(terms)
    agreed = None
    notes = []
    if cross_check:
        for i in dg.AXES:
            h = double_encoding(cubes, i)
            if along(dg.DOUBLE_EXTRACT[i], h) != terms[i - 1]:
                notes.append(f"expression {i} disagrees with its double encoding")
        m = sextuple_encoding(cubes)
        for i in dg.AXES:
            if along(dg.G_EXTRACT[i - 1], m) != terms[i - 1]:
                notes.append(f"expression {i} disagrees with the G-encoding")
        agreed = not notes
    return JacobiVerdict(terms, total, is_zero_tangent(total), agreed, notes)


def _perm(*slots: int):
    return make_map(dg.D3, dg.D3, [f"d{s}" for s in slots])


def jacobi_witness_from_fields(X: VectorField, Y: VectorField, Z: VectorField) -> dict:
    """The six permuted composites of X, Y, Z over D³, keyed "123" ... "321"."""
    fx, fy, fz = (field_to_flow(F) for F in (X, Y, Z))
    return {
        "123": star_all(fx, fy, fz),
        "132": along(_perm(1, 3, 2), star_all(fx, fz, fy)),
        "213": along(_perm(2, 1, 3), star_all(fy, fx, fz)),
        "231": along(_perm(2, 3, 1), star_all(fy, fz, fx)),
        "312": along(_perm(3, 1, 2), star_all(fz, fx, fy)),
        "321": along(_perm(3, 2, 1), star_all(fz, fy, fx)),
    }


def field_jacobi_expressions(X: VectorField, Y: VectorField, Z: VectorField) -> list[VectorField]:
    """The three expressions for the field witnesses, read as vector fields."""
    return [flow_to_field(t) for t in jacobi_expressions(jacobi_witness_from_fields(X, Y, Z))]


# -- random generators -------------------------------------------------------------


def random_rational(rng: random.Random, size: int = 5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, 3))


def random_poly(rng: random.Random, k: int, degree: int, density: float = 0.6) -> Poly:
    terms = {}
    for mono in _monomials_upto(k, degree):
        if rng.random() < density:
            terms[mono] = random_rational(rng)
    return Poly(k, terms)


@lru_cache(maxsize=None)
def _monomials_upto(k: int, degree: int) -> tuple:
    out = [()]
    for _ in range(k):
        out = [m + (e,) for m in out for e in range(degree + 1)]
    return tuple(sorted(m for m in out if sum(m) <= degree))


def random_field(rng: random.Random, k: int, degree: int = 2) -> VectorField:
    return VectorField(k, tuple(random_poly(rng, k, degree) for _ in range(k)))


def random_flow(rng: random.Random, obj, k: int, degree: int = 2, id_based: bool = False) -> FlowElement:
    alg = algebra_of(obj)
    coords = []
    for i in range(k):
        table = {m: random_poly(rng, k, degree) for m in alg.basis}
        if id_based:
            table[alg.basis[0]] = Poly.var(i, k)
        coords.append(alg.element({m: c for m, c in table.items() if c}))
    return FlowElement(WeilPoint(alg, tuple(coords)))


def random_microsquare_triple(rng: random.Random, k: int, degree: int = 2,
                              id_based: bool = False) -> list[FlowElement]:
    """Three microsquares agreeing on D(2): they differ only in the d1d2 part."""
    base = random_flow(rng, dg.D2, k, degree, id_based)
    out = [base]
    top = (1, 1)
    for _ in range(2):
        coords = []
        for c in base.point.coords:
            table = dict(c.coeffs)
            table[top] = random_poly(rng, k, degree)
            coords.append(_MICROSQUARE.element({m: v for m, v in table.items() if v}))
        out.append(FlowElement(WeilPoint(_MICROSQUARE, tuple(coords))))
    return out


_AXIS_PAIRS = (
    (1, "123", "132"), (1, "231", "321"),
    (2, "231", "213"), (2, "312", "132"),
    (3, "312", "321"), (3, "123", "213"),
)


def _cubes_from_vector(vec: Sequence[Fraction]) -> dict:
    n = _MICROCUBE.dim
    return {lab: WeilPoint(_MICROCUBE, (_MICROCUBE.from_vector(vec[j * n:(j + 1) * n]),))
            for j, lab in enumerate(CUBE_LABELS)}


@lru_cache(maxsize=None)
def compatible_sextuple_basis() -> tuple[tuple[Fraction, ...], ...]:
    """Basis of the scalar sextuples for which all three expressions are defined.

    Coordinates are the 6 × 8 coefficients of the cubes in CUBE_LABELS order.
    The face agreements are linear; the agreement of the inner differences on
    D(2) is linear in what remains, so it is imposed on the first kernel.
    """
    n = _MICROCUBE.dim
    width = 6 * n
    rows = []
    for axis, a, b in _AXIS_PAIRS:
        mat = induced_hom(dg.FACE_INCLUSION[axis]).matrix
        ia, ib = CUBE_LABELS.index(a), CUBE_LABELS.index(b)
        for r in mat:
            row = [Fraction(0)] * width
            for j, v in enumerate(r):
                row[ia * n + j] += v
                row[ib * n + j] -= v
            rows.append(row)
    stage1 = linalg.nullspace(rows, width)

    residuals = []
    for vec in stage1:
        cubes = _cubes_from_vector(vec)
        res = []
        for axis, (a, b), (c, d) in _EXPRESSIONS:
            s1 = along(dg.I_DD2_D2, strong_diff_axis(cubes[a], cubes[b], axis))
            s2 = along(dg.I_DD2_D2, strong_diff_axis(cubes[c], cubes[d], axis))
            res.extend((s1.coords[0] - s2.coords[0]).to_vector())
        residuals.append(res)
    # columns of the residual matrix are indexed by stage-1 basis vectors
    matrix = [list(r) for r in zip(*residuals)]
    combos = linalg.nullspace(matrix, len(stage1))
    basis = []
    for w in combos:
        v = [sum((c * s[j] for c, s in zip(w, stage1) if c), Fraction(0)) for j in range(width)]
        basis.append(tuple(v))
    return tuple(basis)


def random_compatible_sextuple(rng: random.Random, k: int, degree: int = 2,
                               density: float = 0.3) -> dict:
    """Six microcube flows satisfying every hypothesis of the general identity."""
    basis = compatible_sextuple_basis()
    n = _MICROCUBE.dim
    per_cube: dict = {lab: [] for lab in CUBE_LABELS}
    for _ in range(k):
        weights = [random_poly(rng, k, degree, density) for _ in basis]
        vec = [Poly.zero(k)] * (6 * n)
        for w, b in zip(weights, basis):
            if not w:
                continue
            vec = [acc + w.scale(c) if c else acc for acc, c in zip(vec, b)]
        for j, lab in enumerate(CUBE_LABELS):
            per_cube[lab].append(_MICROCUBE.from_vector(vec[j * n:(j + 1) * n]))
    return {lab: FlowElement(WeilPoint(_MICROCUBE, tuple(cs))) for lab, cs in per_cube.items()}
