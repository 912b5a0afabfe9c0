"""Tangent calculus on the coordinate model M = R^k.

A point of M⊗W is a k-tuple of elements of W.  A flow, an element of
M^M⊗W, is the same thing with coefficients that are polynomials in the
model coordinates x1..xk: evaluating the coefficients at a point x gives the
point of M⊗W the flow assigns to x.  Both are :class:`WeilPoint` values;
:class:`FlowElement` adds the bookkeeping for the object and the model
dimension.

Every structural operation (tangent addition, the bracket factorization,
strong differences) goes through induced homomorphisms and
:func:`~weilcalc.limits.lift_through_limit`, never through closed-form
coefficient formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from . import diagrams as dg
from .infinitesimal import (
    D, ONE, D_n, D_power, InfinitesimalMap, InfinitesimalObject, make_map,
)
from .limits import IncompatibleFamily, lift_through_limit
from .poly import Poly, as_fraction, coerce_poly, var_names
from .weil import AlgebraHom, AlgebraMismatch, WeilAlgebra, WeilElement, algebra_of, hom_apply, induced_hom


class BaseMismatch(ValueError):
    pass


class NotAPower(ValueError):
    pass


class FactorizationFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelSpace:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("model dimension must be at least 1")

    def coordinate_names(self) -> list[str]:
        return var_names("x", self.k)


# -- polynomial maps and vector fields -----------------------------------------


@dataclass(frozen=True)
class PolyMap:
    """A polynomial map R^k -> R^m."""

    k: int
    comps: tuple[Poly, ...]

    def __post_init__(self):
        for c in self.comps:
            if c.nvars != self.k:
                raise ValueError(f"component in {c.nvars} variables, expected {self.k}")

    @classmethod
    def parse(cls, k: int, comps: Iterable) -> PolyMap:
        names = var_names("x", k)
        aliases = {"x": 0} if k == 1 else None
        return cls(k, tuple(coerce_poly(c, names, aliases) for c in comps))

    @classmethod
    def identity(cls, k: int) -> PolyMap:
        return cls(k, tuple(Poly.var(i, k) for i in range(k)))

    @property
    def m(self) -> int:
        return len(self.comps)

    def __call__(self, x: Sequence):
        if len(x) != self.k:
            raise ValueError(f"expected {self.k} coordinates, got {len(x)}")
        return tuple(c.evaluate(list(x)) for c in self.comps)

    def jacobian(self) -> list[list[Poly]]:
        return [[c.derivative(j) for j in range(self.k)] for c in self.comps]

    def format(self) -> str:
        names = var_names("x", self.k)
        return "(" + ", ".join(c.format(names) for c in self.comps) + ")"


@dataclass(frozen=True)
class VectorField(PolyMap):
    """A direction field X : R^k -> R^k."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.comps) != self.k:
            raise ValueError(f"a vector field on R^{self.k} needs {self.k} components")

    @classmethod
    def zero(cls, k: int) -> VectorField:
        return cls(k, tuple(Poly.zero(k) for _ in range(k)))

    def __add__(self, other: VectorField) -> VectorField:
        return VectorField(self.k, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __neg__(self) -> VectorField:
        return VectorField(self.k, tuple(-a for a in self.comps))

    def __sub__(self, other: VectorField) -> VectorField:
        return self + (-other)

    def scale(self, c) -> VectorField:
        return VectorField(self.k, tuple(a.scale(c) for a in self.comps))

    def is_zero(self) -> bool:
        return not any(self.comps)


def jacobian_action(J: Sequence[Sequence[Poly]], v: Sequence[Poly]) -> tuple[Poly, ...]:
    out = []
    for row in J:
        acc = Poly.zero(v[0].nvars)
        for a, b in zip(row, v):
            acc = acc + a * b
        out.append(acc)
    return tuple(out)


def classical_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """J_Y·X − J_X·Y, the coordinate formula the engine's bracket agrees with."""
    a = jacobian_action(Y.jacobian(), X.comps)
    b = jacobian_action(X.jacobian(), Y.comps)
    return VectorField(X.k, tuple(p - q for p, q in zip(a, b)))


# -- points of M⊗W and flows -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class WeilPoint:
    algebra: WeilAlgebra
    coords: tuple[WeilElement, ...]

    def __post_init__(self):
        for c in self.coords:
            if c.algebra != self.algebra:
                raise AlgebraMismatch(f"coordinate in {c.algebra}, expected {self.algebra}")

    @property
    def k(self) -> int:
        return len(self.coords)

    def base(self) -> tuple:
        """The augmentation: the underlying point of M."""
        return tuple(c.aug() for c in self.coords)

    def coefficient(self, mono) -> tuple:
        return tuple(c.coeff(mono) for c in self.coords)

    def __eq__(self, other) -> bool:
        return (isinstance(other, WeilPoint) and self.algebra == other.algebra
                and all(a == b for a, b in zip(self.coords, other.coords)))

    __hash__ = None

    def format(self) -> str:
        names = ["d"] if self.algebra.n == 1 else var_names("d", self.algebra.n)
        return "(" + ", ".join(c.format(names) for c in self.coords) + ")"

    def __repr__(self) -> str:
        return f"WeilPoint{self.format()} in {self.algebra}"


def constant_point(alg: WeilAlgebra, values: Sequence) -> WeilPoint:
    return WeilPoint(alg, tuple(alg.scalar(v) for v in values))


def apply_hom_point(h: AlgebraHom, p: WeilPoint) -> WeilPoint:
    """Coordinatewise id_M ⊗ h."""
    if p.algebra != h.domain:
        raise AlgebraMismatch(f"point lives in {p.algebra}, hom starts at {h.domain}")
    return WeilPoint(h.codomain, tuple(hom_apply(h, c) for c in p.coords))


def prolong_point(f: PolyMap, p: WeilPoint) -> WeilPoint:
    """f ⊗ W: substitute the coordinates of ``p`` into ``f``."""
    if f.k != p.k:
        raise ValueError(f"map takes {f.k} coordinates, point has {p.k}")
    one = p.algebra.one()
    return WeilPoint(p.algebra, tuple(c.evaluate(list(p.coords), one) for c in f.comps))


@dataclass(frozen=True, eq=False)
class FlowElement:
    """An element of M^M⊗W_O: for each x, a point of M⊗W_O, polynomial in x."""

    point: WeilPoint

    @property
    def object(self) -> InfinitesimalObject:
        return self.point.algebra.object

    @property
    def algebra(self) -> WeilAlgebra:
        return self.point.algebra

    @property
    def k(self) -> int:
        return self.point.k

    @classmethod
    def from_coefficients(cls, obj: InfinitesimalObject, k: int, table: dict) -> FlowElement:
        """``table`` maps basis monomials to k coefficient polynomials (or strings)."""
        alg = algebra_of(obj)
        names = var_names("x", k)
        coords = []
        for i in range(k):
            coeffs = {m: coerce_poly(v[i], names) for m, v in table.items()}
            coords.append(alg.element({m: c for m, c in coeffs.items() if c}))
        return cls(WeilPoint(alg, tuple(coords)))

    @classmethod
    def identity(cls, obj: InfinitesimalObject, k: int) -> FlowElement:
        """I: x ↦ x with no infinitesimal part."""
        alg = algebra_of(obj)
        return cls(WeilPoint(alg, tuple(alg.scalar(Poly.var(i, k)) for i in range(k))))

    @property
    def id_based(self) -> bool:
        return all(c.aug() == Poly.var(i, self.k) for i, c in enumerate(self.point.coords))

    def at(self, x: Sequence) -> WeilPoint:
        vals = [as_fraction(v) for v in x]
        coords = tuple(c.map_coeffs(lambda p: _eval_coeff(p, vals)) for c in self.point.coords)
        return WeilPoint(self.algebra, coords)

    def coefficient_map(self, mono) -> PolyMap:
        return PolyMap(self.k, tuple(_as_poly(c.coeff(mono), self.k) for c in self.point.coords))

    def __eq__(self, other) -> bool:
        return isinstance(other, FlowElement) and self.point == other.point

    __hash__ = None

    def format(self) -> str:
        return self.point.format()

    def __repr__(self) -> str:
        return f"FlowElement{self.format()} over {self.object}"


def _as_poly(c, k: int) -> Poly:
    return c if isinstance(c, Poly) else Poly.constant(c, k)


def _eval_coeff(c, vals):
    return c.evaluate(vals) if isinstance(c, Poly) else c


PointLike = Union[WeilPoint, FlowElement]


def _unwrap(p: PointLike) -> tuple[WeilPoint, bool]:
    if isinstance(p, FlowElement):
        return p.point, True
    if isinstance(p, WeilPoint):
        return p, False
    raise TypeError(f"expected a WeilPoint or FlowElement, got {type(p).__name__}")


def _wrap(p: WeilPoint, flow: bool) -> PointLike:
    return FlowElement(p) if flow else p


def apply_hom(h: AlgebraHom, p: PointLike) -> PointLike:
    pt, flow = _unwrap(p)
    return _wrap(apply_hom_point(h, pt), flow)


def along(phi: InfinitesimalMap, p: PointLike) -> PointLike:
    """id_M ⊗ W_phi."""
    return apply_hom(induced_hom(phi), p)


# -- tangent structure ----------------------------------------------------------

PLUS_D = make_map(D, D_n(2), ["d", "d"])
ZERO_D = make_map(D, ONE, [])
NEG_D = make_map(D, D, ["-d"])


def scale_map(alpha) -> InfinitesimalMap:
    return make_map(D, D, [Poly.var(0, 1).scale(alpha)])


def diagonal_map(n: int) -> InfinitesimalMap:
    """D -> D(n), d ↦ (d, ..., d)."""
    return make_map(D, D_n(n), ["d"] * n)


def _base_element(alg_one: WeilAlgebra, value) -> WeilElement:
    return alg_one.scalar(value)


def ell_points(points: Sequence[PointLike]) -> PointLike:
    """The unique point over W_{D(n)} restricting to each given tangent."""
    if not points:
        raise ValueError("need at least one tangent")
    pts = [_unwrap(p) for p in points]
    flow = pts[0][1]
    WD = algebra_of(D)
    for p, f in pts:
        if p.algebra != WD:
            raise AlgebraMismatch(f"tangents live in {WD}, got {p.algebra}")
        if f != flow:
            raise TypeError("cannot mix flows and points")
    base = pts[0][0].base()
    for p, _ in pts[1:]:
        if p.base() != base:
            raise BaseMismatch(f"tangents at different base points {base} and {p.base()}")
    n = len(pts)
    entry = dg.wedge_diagram(n)
    one = algebra_of(ONE)
    family = {f"t{j + 1}": list(p.coords) for j, (p, _) in enumerate(pts)}
    family["base"] = [one.scalar(b) for b in base]
    coords = lift_through_limit(entry.diagram, entry.cone, family)
    return _wrap(WeilPoint(algebra_of(D_n(n)), tuple(coords)), flow)


def tangent_sum(points: Sequence[PointLike]) -> PointLike:
    """t1 + ... + tn via ℓ and the diagonal d ↦ (d, ..., d)."""
    return along(diagonal_map(len(points)), ell_points(points))


def tangent_zero_like(p: PointLike) -> PointLike:
    pt, flow = _unwrap(p)
    base = constant_point(algebra_of(ONE), pt.base())
    return _wrap(apply_hom_point(induced_hom(ZERO_D), base), flow)


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector at ``base``: the point x + d·dir of M⊗W_D."""

    base: tuple
    dir: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(as_fraction(v) for v in self.base))
        object.__setattr__(self, "dir", tuple(as_fraction(v) for v in self.dir))
        if len(self.base) != len(self.dir):
            raise ValueError("base and direction have different dimensions")

    def to_point(self) -> WeilPoint:
        WD = algebra_of(D)
        return WeilPoint(WD, tuple(WD.element({(0,): b, (1,): v}) for b, v in zip(self.base, self.dir)))

    @classmethod
    def from_point(cls, p: WeilPoint) -> TangentVector:
        if p.algebra != algebra_of(D):
            raise AlgebraMismatch(f"tangent vectors live in W_D, got {p.algebra}")
        return cls(p.base(), p.coefficient((1,)))


def ell_combine(*ts: TangentVector) -> WeilPoint:
    return ell_points([t.to_point() for t in ts])


def add(t1: TangentVector, t2: TangentVector) -> TangentVector:
    if t1.base != t2.base:
        raise BaseMismatch(f"cannot add tangents at {t1.base} and {t2.base}")
    return TangentVector.from_point(along(PLUS_D, ell_combine(t1, t2)))


def zero(x: Sequence) -> TangentVector:
    base = constant_point(algebra_of(ONE), [as_fraction(v) for v in x])
    return TangentVector.from_point(along(ZERO_D, base))


def neg(t: TangentVector) -> TangentVector:
    return TangentVector.from_point(along(NEG_D, t.to_point()))


def scale(alpha, t: TangentVector) -> TangentVector:
    return TangentVector.from_point(along(scale_map(as_fraction(alpha)), t.to_point()))


# -- flows: composition, ∗ and the bracket ----------------------------------------


def field_to_flow(X: VectorField) -> FlowElement:
    """x ↦ x + d·X(x)."""
    WD = algebra_of(D)
    coords = tuple(WD.element({(0,): Poly.var(i, X.k), (1,): c}) for i, c in enumerate(X.comps))
    return FlowElement(WeilPoint(WD, coords))


def flow_to_field(f: FlowElement) -> VectorField:
    """Read back the d-coefficient of a flow over D."""
    if f.object != D:
        raise AlgebraMismatch(f"expected a flow over D, got one over {f.object}")
    return VectorField(f.k, f.coefficient_map((1,)).comps)


def compose(f: FlowElement, g: FlowElement) -> FlowElement:
    """``f`` then ``g``: the flow x ↦ g(f(x)) over their common algebra."""
    if f.algebra != g.algebra:
        raise AlgebraMismatch(f"cannot compose flows over {f.algebra} and {g.algebra}")
    if f.k != g.k:
        raise ValueError("flows on different model dimensions")
    alg = f.algebra
    one = alg.one()
    values = list(f.point.coords)
    cache: dict = {}

    def at_f(c):
        key = id(c)
        if key not in cache:
            cache[key] = _as_poly(c, f.k).evaluate(values, one)
        return cache[key]

    coords = []
    for gi in g.point.coords:
        acc = alg.zero()
        for mono, c in gi.coeffs.items():
            acc = acc + at_f(c) * alg.monomial(mono)
        coords.append(acc)
    return FlowElement(WeilPoint(alg, tuple(coords)))


def block_projection(m: int, n: int, first: bool) -> InfinitesimalMap:
    """p : D^{m+n} -> D^m (first block) or D^n (second block)."""
    total = D_power(m + n)
    if first:
        return make_map(total, D_power(m), [f"d{i + 1}" for i in range(m)])
    return make_map(total, D_power(n), [f"d{m + i + 1}" for i in range(n)])


def star(gamma1: FlowElement, gamma2: FlowElement) -> FlowElement:
    """γ₂∗γ₁: γ₁ in the first block of variables, then γ₂ in the second."""
    for g in (gamma1, gamma2):
        if not g.object.is_power:
            raise NotAPower(f"∗ is defined on flows over powers of D, got {g.object}")
    m, n = gamma1.object.n, gamma2.object.n
    first = along(block_projection(m, n, True), gamma1)
    second = along(block_projection(m, n, False), gamma2)
    return compose(first, second)


def star_all(*flows: FlowElement) -> FlowElement:
    """``star_all(a, b, c)`` is c∗b∗a: ``a`` occupies the first variables."""
    out = flows[0]
    for g in flows[1:]:
        out = star(out, g)
    return out


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Factor the commutator loop through (d1, d2) ↦ d1·d2 and read the field."""
    fx, fy = field_to_flow(X), field_to_flow(Y)
    loop = star_all(fx, fy, fx, fy)  # Y∗X∗Y∗X
    square = along(dg.BRACKET_LOOP, loop)
    entry = dg.bracket_equalizer()
    line = along(dg.ZERO_D_D2, square)
    family = {"square": list(square.point.coords), "line": list(line.point.coords)}
    try:
        coords = lift_through_limit(entry.diagram, entry.cone, family)
    except IncompatibleFamily as exc:
        raise FactorizationFailure(
            f"commutator loop does not factor through d1*d2 ({exc})") from exc
    flow = FlowElement(WeilPoint(algebra_of(D), tuple(coords)))
    return flow_to_field(flow)
