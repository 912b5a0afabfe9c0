"""Weil algebras as truncated polynomial rings with explicit monomial bases.

Elements are sparse coefficient tables keyed by basis monomials.  Scalars
are normally exact rationals, but any commutative ring element that mixes
with :class:`~fractions.Fraction` works too; the tangent layer uses
polynomials in the model coordinates as coefficients to represent flows.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Mapping, Sequence

from .infinitesimal import InfinitesimalMap, InfinitesimalObject
from .poly import Monomial, Poly, as_fraction, grlex_key, var_names


class AlgebraMismatch(ValueError):
    pass


class WeilAlgebra:
    """``Q[X1..Xn]`` modulo the monomial ideal of an infinitesimal object."""

    def __init__(self, obj: InfinitesimalObject):
        self.object = obj
        candidates = product(*(range(c) for c in obj.caps))
        basis = [m for m in candidates if not obj.kills(m)]
        basis.sort(key=grlex_key)
        self.basis: tuple[Monomial, ...] = tuple(basis)
        self.index: dict[Monomial, int] = {m: i for i, m in enumerate(basis)}
        self._unit_mono = (0,) * obj.n

    @property
    def n(self) -> int:
        return self.object.n

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"W_{self.object}"

    def __eq__(self, other) -> bool:
        return isinstance(other, WeilAlgebra) and self.object == other.object

    def __hash__(self) -> int:
        return hash(self.object)

    def product_monomial(self, a: Monomial, b: Monomial) -> Monomial | None:
        m = tuple(x + y for x, y in zip(a, b))
        return m if m in self.index else None

    # -- element constructors ----------------------------------------------

    def element(self, coeffs: Mapping[Monomial, object]) -> WeilElement:
        table = {}
        for m, c in coeffs.items():
            m = tuple(m)
            if m not in self.index:
                if self.object.kills(m):
                    continue
                raise KeyError(f"{m} is not a monomial of {self}")
            if c:
                table[m] = c
        return WeilElement(self, table)

    def zero(self) -> WeilElement:
        return WeilElement(self, {})

    def one(self) -> WeilElement:
        return WeilElement(self, {self._unit_mono: Fraction(1)})

    def scalar(self, c) -> WeilElement:
        return WeilElement(self, {self._unit_mono: c} if c else {})

    def var(self, i: int) -> WeilElement:
        """The class of X_{i+1} (0-based ``i``)."""
        m = tuple(1 if j == i else 0 for j in range(self.n))
        return self.element({m: Fraction(1)})

    def monomial(self, m: Monomial, c=Fraction(1)) -> WeilElement:
        return self.element({tuple(m): c})

    def from_poly(self, p: Poly) -> WeilElement:
        if p.nvars != self.n:
            raise AlgebraMismatch(f"polynomial in {p.nvars} variables, {self} has {self.n}")
        return self.element(p.terms)

    def from_vector(self, vec: Sequence) -> WeilElement:
        if len(vec) != self.dim:
            raise AlgebraMismatch(f"{self} has dimension {self.dim}, got {len(vec)} entries")
        return WeilElement(self, {m: c for m, c in zip(self.basis, vec) if c})

    def parse(self, text: str) -> WeilElement:
        from .poly import parse_poly
        names = var_names("X", self.n)
        aliases = {"X": 0} if self.n == 1 else None
        return self.from_poly(parse_poly(text, names, aliases))


class WeilElement:
    """An element of a Weil algebra; treat as immutable."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: WeilAlgebra, coeffs: dict):
        self.algebra = algebra
        self.coeffs = coeffs

    def _same(self, other: WeilElement) -> None:
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")

    def __add__(self, other):
        if not isinstance(other, WeilElement):
            if _is_scalar(other):
                return self + self.algebra.scalar(other)
            return NotImplemented
        self._same(other)
        table = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = table[m] + c if m in table else c
            if s:
                table[m] = s
            else:
                table.pop(m, None)
        return WeilElement(self.algebra, table)

    def __radd__(self, other):
        if _is_scalar(other):
            return self.algebra.scalar(other) + self
        return NotImplemented

    def __neg__(self) -> WeilElement:
        return WeilElement(self.algebra, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, WeilElement) or _is_scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> WeilElement:
        if not c:
            return self.algebra.zero()
        table = {}
        for m, v in self.coeffs.items():
            s = v * c
            if s:
                table[m] = s
        return WeilElement(self.algebra, table)

    def __mul__(self, other):
        if isinstance(other, WeilElement):
            self._same(other)
            alg = self.algebra
            index = alg.index
            table: dict = {}
            for m1, c1 in self.coeffs.items():
                for m2, c2 in other.coeffs.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    if m not in index:
                        continue
                    s = table[m] + c1 * c2 if m in table else c1 * c2
                    if s:
                        table[m] = s
                    else:
                        del table[m]
            return WeilElement(alg, table)
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> WeilElement:
        result = self.algebra.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, WeilElement):
            return self.algebra == other.algebra and _table_eq(self.coeffs, other.coeffs)
        if _is_scalar(other):
            return self == self.algebra.scalar(other)
        return NotImplemented

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, m: Monomial):
        return self.coeffs.get(tuple(m), Fraction(0))

    def aug(self):
        """Augmentation: the constant coefficient."""
        return self.coeffs.get(self.algebra._unit_mono, Fraction(0))

    def to_vector(self) -> list:
        return [self.coeffs.get(m, Fraction(0)) for m in self.algebra.basis]

    def map_coeffs(self, fn) -> WeilElement:
        table = {}
        for m, c in self.coeffs.items():
            v = fn(c)
            if v:
                table[m] = v
        return WeilElement(self.algebra, table)

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = ["X"] if self.algebra.n == 1 else var_names("X", self.algebra.n)
        if not self.coeffs:
            return "0"
        parts = []
        for m in self.algebra.basis:
            if m not in self.coeffs:
                continue
            c = self.coeffs[m]
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
            cs = c.format() if isinstance(c, Poly) else str(c)
            if isinstance(c, Poly) and len(c.terms) > 1:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"<{self.format()} in {self.algebra}>"


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, Poly))


def _table_eq(a: dict, b: dict) -> bool:
    if a.keys() != b.keys():
        return False
    return all(a[m] == b[m] for m in a)


@lru_cache(maxsize=None)
def algebra_of(obj: InfinitesimalObject) -> WeilAlgebra:
    return WeilAlgebra(obj)


def elem_linear(a: WeilElement, b: WeilElement, alpha=1, beta=1) -> WeilElement:
    """``alpha * a + beta * b``."""
    a._same(b)
    return a.scale(as_fraction(alpha)) + b.scale(as_fraction(beta))


def elem_mul(a: WeilElement, b: WeilElement) -> WeilElement:
    a._same(b)
    return a * b


class AlgebraHom:
    """A unital algebra homomorphism fixed by the images of the generators."""

    def __init__(self, domain: WeilAlgebra, codomain: WeilAlgebra,
                 images: Sequence[WeilElement], check: bool = True):
        if len(images) != domain.n:
            raise AlgebraMismatch(f"{domain} has {domain.n} generators, got {len(images)} images")
        for img in images:
            if img.algebra != codomain:
                raise AlgebraMismatch(f"image {img} is not in {codomain}")
            if img.aug():
                raise ValueError(f"generator image {img.format()} has a constant term")
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(images)
        if check:
            for gen in domain.object.generators():
                value = _monomial_value(self.images, gen, codomain)
                if value:
                    raise ValueError(
                        f"generator {gen} of {domain} maps to {value.format()} != 0")

    @cached_property
    def columns(self) -> tuple[WeilElement, ...]:
        """Image of each domain basis monomial, in basis order."""
        cache: dict[Monomial, WeilElement] = {}
        cols = []
        for m in self.domain.basis:
            cols.append(_monomial_value(self.images, m, self.codomain, cache))
        return tuple(cols)

    @cached_property
    def matrix(self) -> list[list[Fraction]]:
        """Rows indexed by the codomain basis, columns by the domain basis."""
        rows = [[Fraction(0)] * self.domain.dim for _ in range(self.codomain.dim)]
        cidx = self.codomain.index
        for j, col in enumerate(self.columns):
            for m, c in col.coeffs.items():
                rows[cidx[m]][j] = c
        return rows

    def __call__(self, x: WeilElement) -> WeilElement:
        return hom_apply(self, x)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgebraHom) and self.domain == other.domain
                and self.codomain == other.codomain and self.images == other.images)

    __hash__ = None

    def __repr__(self) -> str:
        names = ["X"] if self.domain.n == 1 else var_names("X", self.domain.n)
        maps = ", ".join(f"{n}↦{img.format()}" for n, img in zip(names, self.images))
        return f"AlgebraHom({self.domain} → {self.codomain}: {maps})"


def _monomial_value(images, mono: Monomial, codomain: WeilAlgebra, cache=None) -> WeilElement:
    if cache is not None and mono in cache:
        return cache[mono]
    value = codomain.one()
    for img, e in zip(images, mono):
        for _ in range(e):
            value = value * img
            if not value:
                break
        if not value:
            break
    if cache is not None:
        cache[mono] = value
    return value


def hom_apply(f: AlgebraHom, x: WeilElement) -> WeilElement:
    if x.algebra != f.domain:
        raise AlgebraMismatch(f"{x.algebra} is not the domain {f.domain}")
    cols = f.columns
    index = f.domain.index
    table: dict = {}
    for m, c in x.coeffs.items():
        for m2, v in cols[index[m]].coeffs.items():
            t = c * v
            s = table[m2] + t if m2 in table else t
            if s:
                table[m2] = s
            else:
                table.pop(m2, None)
    return WeilElement(f.codomain, table)


def hom_compose(f: AlgebraHom, g: AlgebraHom) -> AlgebraHom:
    """``f`` then ``g``: the homomorphism ``g ∘ f``."""
    if f.codomain != g.domain:
        raise AlgebraMismatch(f"cannot compose: {f.codomain} is not {g.domain}")
    return AlgebraHom(f.domain, g.codomain, [hom_apply(g, img) for img in f.images], check=False)


def identity_hom(alg: WeilAlgebra) -> AlgebraHom:
    return AlgebraHom(alg, alg, [alg.var(i) for i in range(alg.n)], check=False)


def induced_hom(phi: InfinitesimalMap) -> AlgebraHom:
    """The homomorphism ``W_target -> W_source`` induced by ``phi``."""
    return _induced_cached(phi)


@lru_cache(maxsize=4096)
def _induced_cached(phi: InfinitesimalMap) -> AlgebraHom:
    src = algebra_of(phi.source)
    tgt = algebra_of(phi.target)
    images = [src.from_poly(c) for c in phi.components]
    return AlgebraHom(tgt, src, images, check=False)


def product_object(a: InfinitesimalObject, b: InfinitesimalObject) -> InfinitesimalObject:
    rels = [r + (0,) * b.n for r in a.relations] + [(0,) * a.n + r for r in b.relations]
    return InfinitesimalObject.from_monomials(a.n + b.n, a.caps + b.caps, rels)


def product_algebra(a: WeilAlgebra, b: WeilAlgebra) -> WeilAlgebra:
    """Variable-block concatenation with no cross relations."""
    return algebra_of(product_object(a.object, b.object))


def unit_hom(alg: WeilAlgebra) -> AlgebraHom:
    """Scalars into ``alg`` (induced by the unique map to the terminal object)."""
    return AlgebraHom(algebra_of(InfinitesimalObject(0, (), ())), alg, [], check=False)


def augmentation(alg: WeilAlgebra) -> AlgebraHom:
    """``alg`` onto the scalars, killing every nilpotent."""
    one = algebra_of(InfinitesimalObject(0, (), ()))
    return AlgebraHom(alg, one, [one.zero()] * alg.n, check=False)


def is_identity(f: AlgebraHom) -> bool:
    return f.domain == f.codomain and f == identity_hom(f.domain)


__all__ = [
    "AlgebraHom", "AlgebraMismatch", "WeilAlgebra", "WeilElement", "algebra_of",
    "augmentation", "elem_linear", "elem_mul", "hom_apply", "hom_compose",
    "identity_hom", "induced_hom", "is_identity", "product_algebra", "product_object",
    "unit_hom",
]
