"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` lives in a fixed number of variables and stores a mapping
from exponent tuples to :class:`fractions.Fraction` coefficients.  Zero
coefficients are never stored, so structural equality is polynomial
equality.  The same class serves two roles in the package: components of
maps between infinitesimal objects (variables ``d1..dm``) and coefficients
of flows on the coordinate model (variables ``x1..xk``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def add_monomials(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    """True when the monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def grlex_key(m: Monomial):
    # degree first, then X1 > X2 > ... lexicographically
    return (sum(m), tuple(-e for e in m))


class Poly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono) != nvars:
                    raise ValueError(f"monomial {mono} does not have {nvars} exponents")
                c = as_fraction(coeff)
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Monomial, Fraction]) -> Poly:
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, value, nvars: int) -> Poly:
        c = as_fraction(value)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, index: int, nvars: int) -> Poly:
        """The variable with 0-based ``index``."""
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls._raw(nvars, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, mono: Monomial, coeff=1) -> Poly:
        return cls(len(mono), {tuple(mono): coeff})

    # -- queries -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def coeff(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return Poly.constant(other, self.nvars)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in o.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Poly._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, factor) -> Poly:
        f = as_fraction(factor)
        if not f:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {m: c * f for m, c in self.terms.items()})

    def mul(self, other: Poly, keep: Callable[[Monomial], bool] | None = None) -> Poly:
        """Product, optionally dropping monomials for which ``keep`` is false."""
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                if keep is not None and not keep(m):
                    continue
                s = terms.get(m, 0) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        return Poly._raw(self.nvars, terms)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return self.mul(other)
        if isinstance(other, (int, Fraction, Rational)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.constant(1, self.nvars)
        for _ in range(n):
            result = result * self
        return result

    def truncate(self, keep: Callable[[Monomial], bool]) -> Poly:
        return Poly._raw(self.nvars, {m: c for m, c in self.terms.items() if keep(m)})

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, Rational)):
            return self.terms == Poly.constant(other, self.nvars).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- substitution ------------------------------------------------------

    def evaluate(self, values: Sequence, one=None):
        """Substitute ``values[i]`` for variable ``i``.

        ``values`` may be numbers, polynomials or any ring elements that
        support ``+`` and ``*`` (Weil elements in particular).  ``one`` is
        the multiplicative identity of the target ring; it defaults to 1.
        """
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        if one is None:
            one = Fraction(1)
        powers: dict[tuple[int, int], object] = {}

        def power(i: int, e: int):
            key = (i, e)
            if key not in powers:
                powers[key] = values[i] if e == 1 else power(i, e - 1) * values[i]
            return powers[key]

        total = None
        for mono, c in self.terms.items():
            term = None
            for i, e in enumerate(mono):
                if e:
                    term = power(i, e) if term is None else term * power(i, e)
            term = one * c if term is None else term * c
            total = term if total is None else total + term
        if total is None:
            return one * 0
        return total

    def substitute(self, values: Sequence[Poly], nvars: int,
                   keep: Callable[[Monomial], bool] | None = None) -> Poly:
        """Substitute polynomials in ``nvars`` variables, truncating with ``keep``."""
        total = Poly.zero(nvars)
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in cache:
                cache[key] = values[i] if e == 1 else power(i, e - 1).mul(values[i], keep)
            return cache[key]

        for mono, c in self.terms.items():
            term = Poly.constant(c, nvars)
            for i, e in enumerate(mono):
                if e:
                    term = term.mul(power(i, e), keep)
                    if not term:
                        break
            total = total + term
        return total

    def shift(self, offset: int, nvars: int) -> Poly:
        """Re-embed into ``nvars`` variables, moving variable i to i + offset."""
        if offset + self.nvars > nvars:
            raise ValueError("shifted polynomial does not fit")
        pad_after = nvars - offset - self.nvars
        return Poly._raw(nvars, {(0,) * offset + m + (0,) * pad_after: c
                                 for m, c in self.terms.items()})

    def derivative(self, index: int) -> Poly:
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[index]
            if e:
                mm = m[:index] + (e - 1,) + m[index + 1:]
                terms[mm] = terms.get(mm, 0) + c * e
        return Poly(self.nvars, terms)

    # -- printing ----------------------------------------------------------

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            pieces.append(("-" if c < 0 else "+", body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.format()})"


class PolySyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_poly(text: str, names: Sequence[str], aliases: Mapping[str, int] | None = None) -> Poly:
    """Parse a polynomial expression over the variables ``names``.

    Grammar: sums and differences of products of factors, where a factor is
    an integer, a rational ``p/q``, a variable, a parenthesised expression,
    and may carry a power ``^n``.  Juxtaposition is not multiplication.
    """
    index = {name: i for i, name in enumerate(names)}
    if aliases:
        index.update(aliases)
    n = len(names)
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def take():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        return tok

    def expr() -> Poly:
        sign = 1
        if peek()[1] in "+-" and peek()[0] == "op":
            sign = -1 if take()[1] == "-" else 1
        acc = term().scale(sign)
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term() -> Poly:
        acc = power()
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            acc = acc * power()
        return acc

    def power() -> Poly:
        base = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            kind, val, col = take()
            if kind != "int":
                raise PolySyntaxError("expected integer exponent", col + 1)
            base = base ** int(val)
        return base

    def atom() -> Poly:
        kind, val, col = take()
        if kind == "int":
            num = int(val)
            if peek()[0] == "op" and peek()[1] == "/":
                take()
                k2, v2, c2 = take()
                if k2 != "int":
                    raise PolySyntaxError("expected integer denominator", c2 + 1)
                if int(v2) == 0:
                    raise PolySyntaxError("zero denominator", c2 + 1)
                return Poly.constant(Fraction(num, int(v2)), n)
            return Poly.constant(num, n)
        if kind == "name":
            if val not in index:
                raise PolySyntaxError(f"unknown variable {val!r}", col + 1)
            return Poly.var(index[val], n)
        if kind == "op" and val == "(":
            inner = expr()
            k2, v2, c2 = take()
            if v2 != ")":
                raise PolySyntaxError("expected ')'", c2 + 1)
            return inner
        if kind == "op" and val == "-":
            return -atom()
        raise PolySyntaxError(f"unexpected {val or 'end of input'!r}", col + 1)

    result = expr()
    kind, val, col = peek()
    if kind != "end":
        raise PolySyntaxError(f"unexpected {val!r}", col + 1)
    return result


def var_names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def coerce_poly(value, names: Sequence[str], aliases: Mapping[str, int] | None = None) -> Poly:
    """Accept a Poly, a number or an expression string."""
    if isinstance(value, Poly):
        if value.nvars != len(names):
            raise ValueError(f"polynomial has {value.nvars} variables, expected {len(names)}")
        return value
    if isinstance(value, str):
        return parse_poly(value, names, aliases)
    return Poly.constant(value, len(names))


def polys(values: Iterable, names: Sequence[str]) -> tuple[Poly, ...]:
    return tuple(coerce_poly(v, names) for v in values)
