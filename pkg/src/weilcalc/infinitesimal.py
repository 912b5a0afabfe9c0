"""Infinitesimal objects presented by monomial nilpotency ideals, and the
polynomial maps between them.

An object in ``n`` variables is the formal dual of
``Q[X1..Xn] / (X_i^{c_i}, relations)``.  Simplicial objects ``D^n{p}`` are
the case where every cap is 2 and every relation is squarefree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

from .poly import Monomial, Poly, coerce_poly, divides, grlex_key, var_names


class IllDefinedMap(ValueError):
    """A putative map does not respect the target's nilpotency ideal."""

    def __init__(self, generator: Monomial, residue: Poly, source: "InfinitesimalObject",
                 target: "InfinitesimalObject"):
        self.generator = generator
        self.residue = residue
        names = var_names("X", len(generator))
        gen = Poly.monomial(generator).format(names)
        res = residue.format(var_names("X", residue.nvars))
        super().__init__(f"generator {gen} of {target} pulls back to {res} != 0 in W_{source}")


class NonzeroConstantTerm(ValueError):
    pass


class NotSimplicial(ValueError):
    pass


class MapMismatch(ValueError):
    pass


@dataclass(frozen=True)
class InfinitesimalObject:
    """Normalized presentation: caps per variable, minimal relation monomials."""

    n: int
    caps: tuple[int, ...]
    relations: tuple[Monomial, ...]

    def __post_init__(self):
        if len(self.caps) != self.n:
            raise ValueError(f"need {self.n} caps, got {len(self.caps)}")
        if any(c < 2 for c in self.caps):
            raise ValueError(f"exponent caps must be >= 2, got {self.caps}")

    @classmethod
    def from_monomials(cls, n: int, caps: Sequence[int], monomials: Iterable[Sequence[int]]
                       ) -> InfinitesimalObject:
        caps = tuple(int(c) for c in caps)
        if len(caps) != n:
            raise ValueError(f"need {n} caps, got {len(caps)}")
        if any(c < 2 for c in caps):
            raise ValueError(f"exponent caps must be >= 2, got {caps}")
        mons = set()
        for m in monomials:
            m = tuple(int(e) for e in m)
            if len(m) != n:
                raise ValueError(f"relation {m} does not have {n} exponents")
            if any(e < 0 for e in m) or not any(m):
                raise ValueError(f"relation {m} must be a nonconstant monomial")
            if any(e >= c for e, c in zip(m, caps)):
                continue  # already killed by a cap power
            mons.add(m)
        minimal = [m for m in mons
                   if not any(o != m and divides(o, m) for o in mons)]
        minimal.sort(key=grlex_key)
        return cls(n, caps, tuple(minimal))

    # -- structure ----------------------------------------------------------

    @property
    def is_simplicial(self) -> bool:
        return all(c == 2 for c in self.caps)

    @property
    def is_power(self) -> bool:
        """True for the full powers D^n (no relations beyond the caps)."""
        return self.is_simplicial and not self.relations

    def generators(self) -> list[Monomial]:
        """Generators of the nilpotency ideal: cap powers, then relations."""
        gens = []
        for i, c in enumerate(self.caps):
            gens.append(tuple(c if j == i else 0 for j in range(self.n)))
        gens.extend(self.relations)
        return gens

    def kills(self, mono: Monomial) -> bool:
        """True when the monomial lies in the ideal."""
        if any(e >= c for e, c in zip(mono, self.caps)):
            return True
        return any(divides(r, mono) for r in self.relations)

    def keeps(self, mono: Monomial) -> bool:
        return not self.kills(mono)

    def reduce(self, p: Poly) -> Poly:
        return p.truncate(self.keeps)

    def variable_names(self) -> list[str]:
        return var_names("d", self.n)

    def simplicial_sequences(self) -> list[tuple[int, ...]]:
        """Relations as 1-based increasing index sequences (simplicial only)."""
        return [tuple(i + 1 for i, e in enumerate(r) if e) for r in self.relations]

    def __str__(self) -> str:
        if self.n == 0:
            return "1"
        if self.is_simplicial:
            if not self.relations:
                return "D" if self.n == 1 else f"D^{self.n}"
            if self == D_n(self.n):
                return f"D({self.n})"
            seqs = "".join("(" + ",".join(map(str, s)) + ")" for s in self.simplicial_sequences())
            return f"D^{self.n}{{{seqs}}}"
        if self.n == 1 and not self.relations:
            return f"D_{self.caps[0] - 1}"
        rels = ", ".join(Poly.monomial(r).format(var_names("d", self.n)) for r in self.relations)
        caps = ",".join(map(str, self.caps))
        return f"Inf(n={self.n}, caps=[{caps}]" + (f", rel=[{rels}])" if rels else ")")


def make_object(n: int, caps: Sequence[int] | None = None,
                relations: Iterable[Sequence[int]] = ()) -> InfinitesimalObject:
    """Build an object from 1-based increasing index sequences.

    A sequence ``(i1, ..., ik)`` stands for the product ``d_i1 ... d_ik``.
    ``caps`` defaults to all 2 (simplicial).
    """
    if n < 0:
        raise ValueError("variable count must be nonnegative")
    caps = [2] * n if caps is None else list(caps)
    monomials = []
    for seq in relations:
        seq = tuple(seq)
        if not seq:
            raise ValueError("empty relation sequence")
        for i in seq:
            if not 1 <= i <= n:
                raise ValueError(f"index {i} out of range 1..{n} in relation {seq}")
        if any(a >= b for a, b in zip(seq, seq[1:])):
            raise ValueError(f"relation {seq} is not strictly increasing")
        monomials.append(tuple(1 if j + 1 in seq else 0 for j in range(n)))
    return InfinitesimalObject.from_monomials(n, caps, monomials)


def normalize(obj: InfinitesimalObject) -> InfinitesimalObject:
    return InfinitesimalObject.from_monomials(obj.n, obj.caps, obj.relations)


ONE = make_object(0)
D = make_object(1)


def D_power(n: int) -> InfinitesimalObject:
    """D^n."""
    return make_object(n)


def D_n(n: int) -> InfinitesimalObject:
    """D(n): all pairwise products vanish."""
    return make_object(n, relations=combinations(range(1, n + 1), 2))


def D_order(k: int) -> InfinitesimalObject:
    """D_k = {d | d^(k+1) = 0}."""
    return make_object(1, [k + 1])


def simplicial(n: int, p: Iterable[Sequence[int]] = ()) -> InfinitesimalObject:
    """D^n{p}."""
    return make_object(n, relations=p)


def _oplus2(a: InfinitesimalObject, b: InfinitesimalObject) -> InfinitesimalObject:
    if not (a.is_simplicial and b.is_simplicial):
        raise NotSimplicial(f"oplus needs simplicial operands, got {a} and {b}")
    m, n = a.n, b.n
    rels = [r + (0,) * n for r in a.relations]
    rels += [(0,) * m + r for r in b.relations]
    for i in range(m):
        for j in range(n):
            mono = [0] * (m + n)
            mono[i] = 1
            mono[m + j] = 1
            rels.append(tuple(mono))
    return InfinitesimalObject.from_monomials(m + n, [2] * (m + n), rels)


def oplus(*objects: InfinitesimalObject) -> InfinitesimalObject:
    """The ⊕ of simplicial objects: concatenate, killing every cross product."""
    if not objects:
        return ONE
    return reduce(_oplus2, objects)


# -- maps ---------------------------------------------------------------------


@dataclass(frozen=True)
class InfinitesimalMap:
    """A well-defined polynomial map ``source -> target``.

    ``components[j]`` is the j-th target coordinate as a polynomial in the
    source variables, reduced modulo the source ideal.  Build instances with
    :func:`make_map`, which checks well-definedness.
    """

    source: InfinitesimalObject
    target: InfinitesimalObject
    components: tuple[Poly, ...]

    def __str__(self) -> str:
        names = self.source.variable_names() if self.source.n != 1 else ["d"]
        comps = ", ".join(c.format(names) for c in self.components)
        return f"({', '.join(names)}) ∈ {self.source} ↦ ({comps}) ∈ {self.target}"


def _check_well_defined(source: InfinitesimalObject, target: InfinitesimalObject,
                        comps: Sequence[Poly]) -> None:
    for gen in target.generators():
        residue = Poly.monomial(gen).substitute(comps, source.n, source.keeps)
        if residue:
            raise IllDefinedMap(gen, residue, source, target)


def make_map(source: InfinitesimalObject, target: InfinitesimalObject,
             components: Sequence, check: bool = True) -> InfinitesimalMap:
    """Build a map from component polynomials (Poly, number or expression).

    Expressions use ``d1..dm`` for the source variables (``d`` also works
    when the source has one variable).
    """
    if len(components) != target.n:
        raise MapMismatch(f"{target} needs {target.n} components, got {len(components)}")
    names = source.variable_names()
    aliases = {"d": 0} if source.n == 1 else None
    comps = tuple(source.reduce(coerce_poly(c, names, aliases)) for c in components)
    for j, c in enumerate(comps):
        if c.constant_term():
            raise NonzeroConstantTerm(f"component {j + 1} has constant term {c.constant_term()}")
    if check:
        _check_well_defined(source, target, comps)
    return InfinitesimalMap(source, target, comps)


def identity_map(obj: InfinitesimalObject) -> InfinitesimalMap:
    return InfinitesimalMap(obj, obj, tuple(Poly.var(i, obj.n) for i in range(obj.n)))


def zero_map(source: InfinitesimalObject, target: InfinitesimalObject) -> InfinitesimalMap:
    return InfinitesimalMap(source, target, tuple(Poly.zero(source.n) for _ in range(target.n)))


def compose_maps(f: InfinitesimalMap, g: InfinitesimalMap) -> InfinitesimalMap:
    """``f`` then ``g``: the map ``g ∘ f``."""
    if f.target != g.source:
        raise MapMismatch(f"cannot compose: {f.target} is not {g.source}")
    src = f.source
    comps = tuple(c.substitute(f.components, src.n, src.keeps) for c in g.components)
    return make_map(src, g.target, comps)


def combine_maps(maps: Sequence[InfinitesimalMap]) -> InfinitesimalMap:
    """The unique map out of the ⊕ of the sources restricting to each operand."""
    if not maps:
        raise ValueError("need at least one map")
    target = maps[0].target
    for f in maps:
        if f.target != target:
            raise MapMismatch(f"mismatched targets {f.target} and {target}")
        if not f.source.is_simplicial:
            raise NotSimplicial(f"source {f.source} is not simplicial")
    source = oplus(*(f.source for f in maps))
    comps = [Poly.zero(source.n) for _ in range(target.n)]
    offset = 0
    for f in maps:
        for j, c in enumerate(f.components):
            comps[j] = comps[j] + c.shift(offset, source.n)
        offset += f.source.n
    return make_map(source, target, comps)


def block_embedding(objects: Sequence[InfinitesimalObject], index: int) -> InfinitesimalMap:
    """Inclusion of the ``index``-th operand into ``oplus(*objects)``."""
    total = oplus(*objects)
    offset = sum(o.n for o in objects[:index])
    part = objects[index]
    comps = [Poly.zero(part.n) for _ in range(total.n)]
    for i in range(part.n):
        comps[offset + i] = Poly.var(i, part.n)
    return make_map(part, total, comps)
