"""Finite limits of diagrams of Weil algebras, computed by exact linear algebra.

A diagram is a set of named nodes (Weil algebras) and named arrows
(algebra homomorphisms between nodes; parallel arrows are fine).  Its limit
in vector spaces is the subspace of the product of the nodes cut out by
``f(x_source) = x_target`` for every arrow.  A cone is a limiting cone when
its legs commute with the arrows and the induced map from the apex onto that
subspace is bijective.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .weil import AlgebraHom, WeilAlgebra, WeilElement, hom_apply, hom_compose


class MalformedCone(ValueError):
    pass


class IncompatibleFamily(ValueError):
    """A family violates one of the diagram's arrows."""

    def __init__(self, arrow: str, coordinate: int | None = None, detail: str = ""):
        self.arrow = arrow
        self.coordinate = coordinate
        where = f" (coordinate {coordinate + 1})" if coordinate is not None else ""
        super().__init__(f"family violates arrow {arrow!r}{where}" + (f": {detail}" if detail else ""))


class NotALimit(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Arrow:
    name: str
    source: str
    target: str
    hom: AlgebraHom


@dataclass(eq=False)
class WeilDiagram:
    name: str
    nodes: dict[str, WeilAlgebra]
    arrows: list[Arrow] = field(default_factory=list)

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("a diagram needs at least one node")
        seen = set()
        for a in self.arrows:
            if a.name in seen:
                raise ValueError(f"duplicate arrow name {a.name!r}")
            seen.add(a.name)
            for end in (a.source, a.target):
                if end not in self.nodes:
                    raise ValueError(f"arrow {a.name!r} refers to unknown node {end!r}")
            if a.hom.domain != self.nodes[a.source] or a.hom.codomain != self.nodes[a.target]:
                raise ValueError(
                    f"arrow {a.name!r} is {a.hom.domain} → {a.hom.codomain}, "
                    f"expected {self.nodes[a.source]} → {self.nodes[a.target]}")

    def arrow(self, name: str, source: str, target: str, hom: AlgebraHom) -> WeilDiagram:
        """Return a copy with one more arrow."""
        return WeilDiagram(self.name, dict(self.nodes), self.arrows + [Arrow(name, source, target, hom)])

    def offsets(self) -> dict[str, int]:
        out, pos = {}, 0
        for name, alg in self.nodes.items():
            out[name] = pos
            pos += alg.dim
        return out

    @property
    def total_dim(self) -> int:
        return sum(a.dim for a in self.nodes.values())

    def reordered(self, order: Sequence[str]) -> WeilDiagram:
        return WeilDiagram(self.name, {n: self.nodes[n] for n in order}, list(self.arrows))


@dataclass(eq=False)
class Cone:
    apex: WeilAlgebra
    legs: dict[str, AlgebraHom]


@dataclass
class LimitSpace:
    basis: list[list[Fraction]]
    offsets: dict[str, int]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class ConeVerdict:
    commutes: bool
    bijective: bool
    limit_dim: int
    apex_dim: int
    failed_arrows: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.commutes and self.bijective

    def __bool__(self) -> bool:
        return self.ok


def _constraint_rows(d: WeilDiagram) -> list[list[Fraction]]:
    offs = d.offsets()
    total = d.total_dim
    rows = []
    for a in d.arrows:
        src0, dst0 = offs[a.source], offs[a.target]
        mat = a.hom.matrix
        for i in range(a.hom.codomain.dim):
            row = [Fraction(0)] * total
            for j, v in enumerate(mat[i]):
                if v:
                    row[src0 + j] += v
            row[dst0 + i] -= 1
            rows.append(row)
    return rows


def compute_limit(d: WeilDiagram) -> LimitSpace:
    """The compatibility subspace ``{(x_v) : f(x_src) = x_dst for all arrows}``."""
    rows = _constraint_rows(d)
    total = d.total_dim
    if not rows:
        basis = [[Fraction(int(i == j)) for j in range(total)] for i in range(total)]
    else:
        basis = linalg.nullspace(rows, total)
    return LimitSpace(basis, d.offsets())


def complete_cone(d: WeilDiagram, apex: WeilAlgebra, legs: Mapping[str, AlgebraHom]) -> Cone:
    """Fill in missing legs by composing given legs with diagram arrows."""
    full = dict(legs)
    changed = True
    while changed and len(full) < len(d.nodes):
        changed = False
        for a in d.arrows:
            if a.source in full and a.target not in full:
                full[a.target] = hom_compose(full[a.source], a.hom)
                changed = True
    missing = [n for n in d.nodes if n not in full]
    if missing:
        raise MalformedCone(f"no leg reaches nodes {missing}")
    return Cone(apex, {n: full[n] for n in d.nodes})


def _check_shape(d: WeilDiagram, c: Cone) -> None:
    if set(c.legs) != set(d.nodes):
        raise MalformedCone(f"legs {sorted(c.legs)} do not match nodes {sorted(d.nodes)}")
    for n, leg in c.legs.items():
        if leg.domain != c.apex:
            raise MalformedCone(f"leg {n!r} starts at {leg.domain}, not the apex {c.apex}")
        if leg.codomain != d.nodes[n]:
            raise MalformedCone(f"leg {n!r} ends at {leg.codomain}, not {d.nodes[n]}")


def _leg_matrix(d: WeilDiagram, c: Cone) -> list[list[Fraction]]:
    rows = []
    for n in d.nodes:
        rows.extend(c.legs[n].matrix)
    return rows


def verify_cone(d: WeilDiagram, c: Cone) -> ConeVerdict:
    _check_shape(d, c)
    failed = [a.name for a in d.arrows
              if hom_compose(c.legs[a.source], a.hom) != c.legs[a.target]]
    limit_dim = compute_limit(d).dim
    rk = linalg.rank(_leg_matrix(d, c), c.apex.dim)
    bijective = rk == c.apex.dim == limit_dim
    return ConeVerdict(not failed, bijective and not failed, limit_dim, c.apex.dim, failed)


class ConeSolver:
    """Lifts compatible families through a verified limiting cone."""

    def __init__(self, d: WeilDiagram, c: Cone):
        verdict = verify_cone(d, c)
        if not verdict.ok:
            raise NotALimit(f"cone over {d.name!r} is not limiting: {verdict}")
        self.diagram = d
        self.cone = c
        self.verdict = verdict
        legs = _leg_matrix(d, c)
        rows = linalg.independent_rows(legs, c.apex.dim)
        self._rows = rows
        self._inv = linalg.inverse([legs[r] for r in rows])

    def check_family(self, family: Mapping[str, Sequence[WeilElement]]) -> int:
        d = self.diagram
        if set(family) != set(d.nodes):
            raise ValueError(f"family covers {sorted(family)}, diagram has {sorted(d.nodes)}")
        widths = {len(v) for v in family.values()}
        if len(widths) != 1:
            raise ValueError("family members have different widths")
        width = widths.pop()
        for n, vals in family.items():
            for v in vals:
                if v.algebra != d.nodes[n]:
                    raise ValueError(f"family member at {n!r} lives in {v.algebra}, not {d.nodes[n]}")
        for a in d.arrows:
            for k in range(width):
                if hom_apply(a.hom, family[a.source][k]) != family[a.target][k]:
                    raise IncompatibleFamily(a.name, k)
        return width

    def lift(self, family: Mapping[str, Sequence[WeilElement]]) -> list[WeilElement]:
        width = self.check_family(family)
        out = []
        for k in range(width):
            vec = []
            for n in self.diagram.nodes:
                vec.extend(family[n][k].to_vector())
            rhs = [vec[r] for r in self._rows]
            sol = linalg.matvec(self._inv, rhs)
            elem = self.cone.apex.from_vector(sol)
            for n, leg in self.cone.legs.items():
                if hom_apply(leg, elem) != family[n][k]:
                    raise IncompatibleFamily(f"leg {n}", k, "lift does not reproduce the family")
            out.append(elem)
        return out


_SOLVERS: dict[tuple[int, int], ConeSolver] = {}


def solver_for(d: WeilDiagram, c: Cone) -> ConeSolver:
    key = (id(d), id(c))
    s = _SOLVERS.get(key)
    if s is None or s.diagram is not d or s.cone is not c:
        s = ConeSolver(d, c)
        _SOLVERS[key] = s
    return s


def lift_through_limit(d: WeilDiagram, c: Cone, family: Mapping[str, object]):
    """The unique apex element (per coordinate) mapping onto ``family``.

    Each family member is either a single Weil element or a sequence of
    them (one per model coordinate); the result has the same shape.
    """
    single = all(isinstance(v, WeilElement) for v in family.values())
    fam = {n: [v] if single else list(v) for n, v in family.items()}
    out = solver_for(d, c).lift(fam)
    return out[0] if single else out
