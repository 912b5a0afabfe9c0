"""The ``.weil`` script format: parsing, canonical printing, running checks.

A script is a sequence of declarations and checks::

    obj Dpair = D(2)
    map plus : D -> Dpair := d1, d1
    diagram wedge {
      node left : D
      node top : D
      node base : pt          # obj pt = D^0, the one-point object
      arrow l : left -> base := W[origin]
      ...
    }
    cone c : wedge apex Dpair leg left : W[i1] leg top : W[i2]
    field X on 2 := x2, -x1
    check limit c
    check bracket X Y

``W[f]`` names the algebra map induced by the putative map ``f``; since that
is contravariant, an arrow ``a -> b := W[f]`` needs ``f : obj(b) -> obj(a)``.
Statements end at the end of a line; a line ending in ``,`` or ``:=`` and the
body of a ``diagram { ... }`` block continue onto following lines.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .infinitesimal import (
    D, D_n, D_order, IllDefinedMap, InfinitesimalObject, MapMismatch, NonzeroConstantTerm,
    NotSimplicial, make_map, make_object, oplus,
)
from .limits import MalformedCone, WeilDiagram, Arrow, complete_cone, verify_cone
from .poly import Poly, PolySyntaxError, parse_poly, var_names
from .report import ERROR, FAIL, PASS, CheckRecord, Report
from .weil import algebra_of, induced_hom


class ScriptError(ValueError):
    """A syntax or reference error, with a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


# -- syntax tree -------------------------------------------------------------------

Pos = tuple[int, int]


@dataclass(frozen=True)
class ObjD:
    pass


@dataclass(frozen=True)
class ObjPower:
    n: int
    seqs: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class ObjWedge:
    n: int


@dataclass(frozen=True)
class ObjOrder:
    k: int


@dataclass(frozen=True)
class ObjSum:
    left: str
    right: str


ObjExpr = ObjD | ObjPower | ObjWedge | ObjOrder | ObjSum


@dataclass(frozen=True)
class ObjDecl:
    name: str
    expr: ObjExpr
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    comps: tuple[Poly, ...]
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class DiagramDecl:
    name: str
    nodes: tuple[tuple[str, str], ...]
    arrows: tuple[tuple[str, str, str, str], ...]  # (name, source node, target node, map)
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ConeDecl:
    name: str
    diagram: str
    apex: str
    legs: tuple[tuple[str, str], ...]  # (node, map)
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class FieldDecl:
    name: str
    k: int
    comps: tuple[Poly, ...]
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class CheckStmt:
    kind: str  # limit | map | bracket | jacobi
    args: tuple[str, ...]
    apex: Optional[str] = None
    legs: tuple[tuple[str, str], ...] = ()
    pos: Pos = field(default=(0, 0), compare=False)


Stmt = ObjDecl | MapDecl | DiagramDecl | ConeDecl | FieldDecl | CheckStmt

_KIND_OF = {ObjDecl: "obj", MapDecl: "map", DiagramDecl: "diagram", ConeDecl: "cone", FieldDecl: "field"}


@dataclass(frozen=True)
class Script:
    statements: tuple[Stmt, ...]

    def declarations(self, kind: str) -> dict[str, Stmt]:
        return {s.name: s for s in self.statements if _KIND_OF.get(type(s)) == kind}

    @property
    def checks(self) -> list[CheckStmt]:
        return [s for s in self.statements if isinstance(s, CheckStmt)]


# -- lexer ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9']*)
  | (?P<op>\(\+\)|:=|->|[{}()\[\],:=^*/+\-])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # int | name | op | nl | end
    value: str
    line: int
    col: int
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ScriptError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            toks.append(Token("nl", "\n", line, pos - line_start + 1, pos, m.end()))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Token(kind, m.group(), line, pos - line_start + 1, pos, m.end()))
        pos = m.end()
    toks.append(Token("end", "", line, pos - line_start + 1, pos, pos))
    return toks


# -- parser ----------------------------------------------------------------------------

# names usable without a declaration
BUILTIN_OBJECTS = {"D": D}

_STATEMENT_WORDS = ("obj", "map", "diagram", "cone", "field", "check")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.names: dict[str, dict[str, Stmt]] = {k: {} for k in _KIND_OF.values()}
        self.names["obj"].update({n: None for n in BUILTIN_OBJECTS})
        self.obj_vars: dict[str, int] = {n: o.n for n, o in BUILTIN_OBJECTS.items()}

    # token helpers
    def peek(self, skip_nl: bool = False) -> Token:
        j = self.i
        while skip_nl and self.toks[j].kind == "nl":
            j += 1
        return self.toks[j]

    def skip_nl(self) -> None:
        while self.toks[self.i].kind == "nl":
            self.i += 1

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ScriptError(msg, tok.line, tok.col)

    def expect(self, value: str, skip_nl: bool = False) -> Token:
        if skip_nl:
            self.skip_nl()
        t = self.peek()
        if t.value != value or t.kind not in ("op", "name"):
            self.error(f"expected {value!r}, found {_describe(t)}")
        return self.take()

    def expect_name(self, what: str = "name", skip_nl: bool = False) -> Token:
        if skip_nl:
            self.skip_nl()
        t = self.peek()
        if t.kind != "name":
            self.error(f"expected {what}, found {_describe(t)}")
        return self.take()

    def expect_int(self) -> int:
        t = self.peek()
        if t.kind != "int":
            self.error(f"expected an integer, found {_describe(t)}")
        return int(self.take().value)

    def end_statement(self) -> None:
        t = self.peek()
        if t.kind not in ("nl", "end"):
            self.error(f"unexpected {_describe(t)} after statement")

    # references
    def declare(self, kind: str, tok: Token, stmt: Stmt) -> None:
        if tok.value in self.names[kind]:
            raise ScriptError(f"duplicate {kind} name {tok.value!r}", tok.line, tok.col)
        self.names[kind][tok.value] = stmt

    def resolve(self, kind: str, tok: Token) -> str:
        if tok.value not in self.names[kind]:
            raise ScriptError(f"unknown {kind} {tok.value!r}", tok.line, tok.col)
        return tok.value

    # statements
    def parse(self) -> Script:
        out = []
        while True:
            self.skip_nl()
            t = self.peek()
            if t.kind == "end":
                return Script(tuple(out))
            if t.kind != "name" or t.value not in _STATEMENT_WORDS:
                self.error(f"expected a statement keyword, found {_describe(t)}")
            out.append(getattr(self, "stmt_" + t.value)())
            self.end_statement()

    def stmt_obj(self) -> ObjDecl:
        kw = self.take()
        name = self.expect_name("object name")
        self.expect("=")
        expr, nvars = self.obj_expr()
        stmt = ObjDecl(name.value, expr, (kw.line, kw.col))
        self.declare("obj", name, stmt)
        self.obj_vars[name.value] = nvars
        return stmt

    def obj_expr(self) -> tuple[ObjExpr, int]:
        t = self.expect_name("an object expression")
        m = re.fullmatch(r"D_(\d+)", t.value)
        if m:
            k = int(m.group(1))
            if k < 1:
                self.error("D_k needs k >= 1", t)
            return ObjOrder(k), 1
        if t.value == "D":
            nxt = self.peek()
            if nxt.value == "^":
                self.take()
                n = self.expect_int()
                seqs = []
                if self.peek().value == "{":
                    self.take()
                    while self.peek(True).value == "(":
                        self.skip_nl()
                        seqs.append(self.seq(n))
                        if self.peek().value == ",":
                            self.take()
                    self.expect("}", skip_nl=True)
                    if not seqs:
                        self.error("empty relation list", t)
                return ObjPower(n, tuple(seqs)), n
            if nxt.value == "(" and nxt.start == t.end:
                self.take()
                n = self.expect_int()
                self.expect(")")
                return ObjWedge(n), n
            return ObjD(), 1
        left = self.resolve("obj", t)
        self.expect("(+)")
        right = self.resolve("obj", self.expect_name("object name"))
        return ObjSum(left, right), self.obj_vars[left] + self.obj_vars[right]

    def seq(self, n: int) -> tuple[int, ...]:
        start = self.expect("(")
        vals = [self.expect_int()]
        while self.peek().value == ",":
            self.take()
            vals.append(self.expect_int())
        self.expect(")")
        if len(vals) < 2:
            self.error("a relation needs at least two indices", start)
        for v in vals:
            if not 1 <= v <= n:
                self.error(f"index {v} out of range 1..{n}", start)
        if any(a >= b for a, b in zip(vals, vals[1:])):
            self.error(f"relation {tuple(vals)} is not strictly increasing", start)
        return tuple(vals)

    def poly_list(self, names: list[str], aliases: dict | None) -> tuple[Poly, ...]:
        """Comma-separated polynomials up to the end of the statement."""
        comps = []
        while True:
            self.skip_nl()
            first = self.peek()
            depth, last = 0, None
            while True:
                t = self.peek()
                if t.kind in ("nl", "end") or (t.value == "," and depth == 0 and t.kind == "op"):
                    break
                if t.value == "(":
                    depth += 1
                elif t.value == ")":
                    depth -= 1
                last = self.take()
            if last is None:
                self.error("expected a polynomial", first)
            src = self.text[first.start:last.end]
            try:
                comps.append(parse_poly(src, names, aliases))
            except PolySyntaxError as exc:
                msg = str(exc).rsplit(" at column", 1)[0]
                raise ScriptError(msg, first.line, first.col + exc.column - 1) from None
            if self.peek().value == ",":
                self.take()
                continue
            return tuple(comps)

    def stmt_map(self) -> MapDecl:
        kw = self.take()
        name = self.expect_name("map name")
        self.expect(":")
        src = self.resolve("obj", self.expect_name("source object"))
        self.expect("->")
        tgt = self.resolve("obj", self.expect_name("target object"))
        self.expect(":=")
        m = self.obj_vars[src]
        comps = self.poly_list(var_names("d", m), {"d": 0} if m == 1 else None)
        stmt = MapDecl(name.value, src, tgt, comps, (kw.line, kw.col))
        self.declare("map", name, stmt)
        return stmt

    def stmt_field(self) -> FieldDecl:
        kw = self.take()
        name = self.expect_name("field name")
        self.expect("on")
        k = self.expect_int()
        if k < 1:
            self.error("model dimension must be at least 1", kw)
        self.expect(":=")
        comps = self.poly_list(var_names("x", k), {"x": 0} if k == 1 else None)
        stmt = FieldDecl(name.value, k, comps, (kw.line, kw.col))
        self.declare("field", name, stmt)
        return stmt

    def stmt_diagram(self) -> DiagramDecl:
        kw = self.take()
        name = self.expect_name("diagram name")
        self.expect("{")
        nodes: dict[str, str] = {}
        arrows: list = []
        arrow_names = set()
        while True:
            t = self.peek(True)
            if t.value == "}":
                self.skip_nl()
                self.take()
                break
            self.skip_nl()
            if t.value == "node":
                self.take()
                nt = self.expect_name("node name")
                if nt.value in nodes:
                    self.error(f"duplicate node {nt.value!r}", nt)
                self.expect(":")
                nodes[nt.value] = self.resolve("obj", self.expect_name("object name"))
            elif t.value == "arrow":
                self.take()
                at = self.expect_name("arrow name")
                if at.value in arrow_names:
                    self.error(f"duplicate arrow {at.value!r}", at)
                arrow_names.add(at.value)
                self.expect(":")
                s = self.node_ref(nodes)
                self.expect("->")
                d = self.node_ref(nodes)
                self.expect(":=")
                f = self.induced_ref()
                arrows.append((at.value, s, d, f))
            else:
                self.error(f"expected 'node', 'arrow' or '}}', found {_describe(t)}")
            if self.peek().kind not in ("nl",) and self.peek().value != "}":
                self.error(f"unexpected {_describe(self.peek())}")
        if not nodes:
            self.error("a diagram needs at least one node", kw)
        stmt = DiagramDecl(name.value, tuple(nodes.items()), tuple(arrows), (kw.line, kw.col))
        self.declare("diagram", name, stmt)
        return stmt

    def node_ref(self, nodes: dict) -> str:
        t = self.expect_name("node name")
        if t.value not in nodes:
            self.error(f"unknown node {t.value!r}", t)
        return t.value

    def induced_ref(self) -> str:
        w = self.expect_name("W[...]")
        if w.value != "W":
            self.error(f"expected 'W[', found {_describe(w)}", w)
        self.expect("[")
        f = self.resolve("map", self.expect_name("map name"))
        self.expect("]")
        return f

    def legs(self, diagram: str) -> tuple[tuple[str, str], ...]:
        nodes = dict(self.names["diagram"][diagram].nodes)
        out = []
        while self.peek(True).value == "leg":
            self.skip_nl()
            self.take()
            n = self.node_ref(nodes)
            if any(n == o for o, _ in out):
                self.error(f"second leg for node {n!r}")
            self.expect(":")
            out.append((n, self.induced_ref()))
        if not out:
            self.error("expected at least one 'leg'")
        return tuple(out)

    def stmt_cone(self) -> ConeDecl:
        kw = self.take()
        name = self.expect_name("cone name")
        self.expect(":")
        diag = self.resolve("diagram", self.expect_name("diagram name"))
        self.expect("apex")
        apex = self.resolve("obj", self.expect_name("apex object"))
        legs = self.legs(diag)
        stmt = ConeDecl(name.value, diag, apex, legs, (kw.line, kw.col))
        self.declare("cone", name, stmt)
        return stmt

    def stmt_check(self) -> CheckStmt:
        kw = self.take()
        what = self.expect_name("check kind")
        pos = (kw.line, kw.col)
        if what.value == "limit":
            t = self.expect_name("diagram or cone name")
            if self.peek().value == "apex":
                diag = self.resolve("diagram", t)
                self.take()
                apex = self.resolve("obj", self.expect_name("apex object"))
                return CheckStmt("limit", (diag,), apex, self.legs(diag), pos)
            return CheckStmt("limit", (self.resolve("cone", t),), None, (), pos)
        if what.value == "map":
            return CheckStmt("map", (self.resolve("map", self.expect_name("map name")),), pos=pos)
        if what.value in ("bracket", "jacobi"):
            count = 2 if what.value == "bracket" else 3
            args = tuple(self.resolve("field", self.expect_name("field name")) for _ in range(count))
            return CheckStmt(what.value, args, pos=pos)
        self.error(f"unknown check {what.value!r} (expected limit, map, bracket or jacobi)", what)


def _describe(t: Token) -> str:
    if t.kind == "end":
        return "end of input"
    if t.kind == "nl":
        return "end of line"
    return repr(t.value)


def parse_script(text: str) -> Script:
    return _Parser(text).parse()


# -- canonical printer --------------------------------------------------------------------


def format_obj_expr(e: ObjExpr) -> str:
    if isinstance(e, ObjD):
        return "D"
    if isinstance(e, ObjPower):
        if not e.seqs:
            return f"D^{e.n}"
        return f"D^{e.n}{{" + "".join("(" + ",".join(map(str, s)) + ")" for s in e.seqs) + "}"
    if isinstance(e, ObjWedge):
        return f"D({e.n})"
    if isinstance(e, ObjOrder):
        return f"D_{e.k}"
    return f"{e.left} (+) {e.right}"


def _format_polys(comps, names) -> str:
    return ", ".join(c.format(names) for c in comps)


def format_script(s: Script) -> str:
    """Canonical text: one statement per line, diagrams as indented blocks."""
    nvars: dict[str, int] = {n: o.n for n, o in BUILTIN_OBJECTS.items()}
    lines = []
    for st in s.statements:
        if isinstance(st, ObjDecl):
            nvars[st.name] = _static_nvars(st.expr, nvars)
            lines.append(f"obj {st.name} = {format_obj_expr(st.expr)}")
        elif isinstance(st, MapDecl):
            names = var_names("d", nvars[st.source])
            lines.append(f"map {st.name} : {st.source} -> {st.target} := {_format_polys(st.comps, names)}")
        elif isinstance(st, FieldDecl):
            lines.append(f"field {st.name} on {st.k} := {_format_polys(st.comps, var_names('x', st.k))}")
        elif isinstance(st, DiagramDecl):
            lines.append(f"diagram {st.name} {{")
            lines.extend(f"  node {n} : {o}" for n, o in st.nodes)
            lines.extend(f"  arrow {a} : {x} -> {y} := W[{f}]" for a, x, y, f in st.arrows)
            lines.append("}")
        elif isinstance(st, ConeDecl):
            legs = " ".join(f"leg {n} : W[{f}]" for n, f in st.legs)
            lines.append(f"cone {st.name} : {st.diagram} apex {st.apex} {legs}")
        elif isinstance(st, CheckStmt):
            if st.kind == "limit" and st.apex is not None:
                legs = " ".join(f"leg {n} : W[{f}]" for n, f in st.legs)
                lines.append(f"check limit {st.args[0]} apex {st.apex} {legs}")
            else:
                lines.append(f"check {st.kind} " + " ".join(st.args))
    return "\n".join(lines) + ("\n" if lines else "")


def _static_nvars(e: ObjExpr, known: dict[str, int]) -> int:
    if isinstance(e, (ObjD, ObjOrder)):
        return 1
    if isinstance(e, (ObjPower, ObjWedge)):
        return e.n
    return known[e.left] + known[e.right]


# -- elaboration and checks --------------------------------------------------------------------


class DeclarationError(Exception):
    def __init__(self, name: str, error: str, message: str, details: dict | None = None):
        super().__init__(message)
        self.name = name
        self.error = error
        self.message = message
        self.details = details or {}


def build_object(e: ObjExpr, env: dict[str, InfinitesimalObject]) -> InfinitesimalObject:
    if isinstance(e, ObjD):
        return D
    if isinstance(e, ObjPower):
        return make_object(e.n, relations=e.seqs)
    if isinstance(e, ObjWedge):
        return D_n(e.n)
    if isinstance(e, ObjOrder):
        return D_order(e.k)
    return oplus(env[e.left], env[e.right])


@dataclass
class Environment:
    objects: dict = field(default_factory=lambda: dict(BUILTIN_OBJECTS))
    maps: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)
    cones: dict = field(default_factory=dict)
    fields: dict = field(default_factory=dict)
    failed: dict[tuple[str, str], DeclarationError] = field(default_factory=dict)


def _ill_defined_details(exc: IllDefinedMap) -> dict:
    return {"error": "IllDefinedMap", "message": str(exc)}


def _need(env: Environment, kind: str, name: str, owner: str):
    if (kind, name) in env.failed:
        raise DeclarationError(owner, "DependencyFailed", f"{kind} {name!r} failed to elaborate")
    return getattr(env, kind + ("s" if kind != "obj" else "ects"))[name]


def _elaborate(st: Stmt, env: Environment) -> None:
    from .tangent import VectorField

    if isinstance(st, ObjDecl):
        if isinstance(st.expr, ObjSum):
            left = _need(env, "obj", st.expr.left, st.name)
            right = _need(env, "obj", st.expr.right, st.name)
            try:
                env.objects[st.name] = oplus(left, right)
            except NotSimplicial as exc:
                raise DeclarationError(st.name, "NotSimplicial", str(exc))
        else:
            env.objects[st.name] = build_object(st.expr, env.objects)
    elif isinstance(st, MapDecl):
        src = _need(env, "obj", st.source, st.name)
        tgt = _need(env, "obj", st.target, st.name)
        try:
            env.maps[st.name] = make_map(src, tgt, st.comps)
        except IllDefinedMap as exc:
            raise DeclarationError(st.name, "IllDefinedMap", str(exc),
                                   {"generator": _mono(exc.generator, tgt),
                                    "residue": exc.residue.format(var_names("X", src.n))})
        except (NonzeroConstantTerm, MapMismatch) as exc:
            raise DeclarationError(st.name, type(exc).__name__, str(exc))
    elif isinstance(st, DiagramDecl):
        nodes = {n: algebra_of(_need(env, "obj", o, st.name)) for n, o in st.nodes}
        arrows = []
        for a, x, y, f in st.arrows:
            phi = _need(env, "map", f, st.name)
            arrows.append(Arrow(a, x, y, induced_hom(phi)))
        try:
            env.diagrams[st.name] = WeilDiagram(st.name, nodes, arrows)
        except ValueError as exc:
            raise DeclarationError(st.name, "MalformedDiagram", str(exc))
    elif isinstance(st, ConeDecl):
        env.cones[st.name] = _build_cone(env, st.name, st.diagram, st.apex, st.legs)
    elif isinstance(st, FieldDecl):
        env.fields[st.name] = VectorField(st.k, st.comps)


def _mono(mono, obj) -> str:
    return Poly.monomial(tuple(mono)).format(var_names("X", obj.n))


def _build_cone(env: Environment, owner: str, diagram: str, apex: str, legs) -> tuple:
    d = _need(env, "diagram", diagram, owner)
    apex_obj = _need(env, "obj", apex, owner)
    apex_alg = algebra_of(apex_obj)
    homs = {}
    for node, f in legs:
        h = induced_hom(_need(env, "map", f, owner))
        if h.domain != apex_alg or h.codomain != d.nodes[node]:
            raise DeclarationError(owner, "MalformedCone",
                                   f"leg {node!r} is {h.domain} → {h.codomain}, "
                                   f"expected {apex_alg} → {d.nodes[node]}")
        homs[node] = h
    try:
        return d, complete_cone(d, apex_alg, homs)
    except MalformedCone as exc:
        raise DeclarationError(owner, "MalformedCone", str(exc))


def _check_name(st: CheckStmt) -> str:
    return f"{st.kind} " + " ".join(st.args)


def _anchor(st: CheckStmt, source: str) -> str:
    return f"{source}:{st.pos[0]}"


def _run_check(st: CheckStmt, env: Environment) -> tuple[str, dict]:
    from .jacobi import bracket_via_strong_diff, field_jacobi_expressions, general_jacobi_check, \
        jacobi_witness_from_fields
    from .tangent import FactorizationFailure, classical_bracket, lie_bracket

    if st.kind == "limit":
        if st.apex is None:
            d, cone = _need(env, "cone", st.args[0], _check_name(st))
        else:
            d, cone = _build_cone(env, _check_name(st), st.args[0], st.apex, st.legs)
        v = verify_cone(d, cone)
        details = {"diagram": d.name, "apex_dim": v.apex_dim, "limit_dim": v.limit_dim,
                   "commutes": v.commutes, "bijective": v.bijective}
        if v.failed_arrows:
            details["failed_arrows"] = list(v.failed_arrows)
        return (PASS if v.ok else FAIL), details
    if st.kind == "map":
        phi = _need(env, "map", st.args[0], _check_name(st))
        h = induced_hom(phi)
        return PASS, {"source": str(phi.source), "target": str(phi.target),
                      "induced": f"{h.domain} → {h.codomain}", "well_defined": True}
    fields = [_need(env, "field", a, _check_name(st)) for a in st.args]
    ks = {F.k for F in fields}
    if len(ks) != 1:
        raise DeclarationError(_check_name(st), "DimensionMismatch",
                               f"fields live on different model dimensions {sorted(ks)}")
    if st.kind == "bracket":
        X, Y = fields
        try:
            b = lie_bracket(X, Y)
        except FactorizationFailure as exc:
            return FAIL, {"factorization": "failed", "message": str(exc)}
        classical = b == classical_bracket(X, Y)
        via_diff = b == bracket_via_strong_diff(X, Y)
        status = PASS if classical and via_diff else FAIL
        return status, {"bracket": b.format(), "matches_jacobian_formula": classical,
                        "matches_strong_difference": via_diff}
    X, Y, Z = fields
    verdict = general_jacobi_check(jacobi_witness_from_fields(X, Y, Z))
    expr = field_jacobi_expressions(X, Y, Z)
    nested = [lie_bracket(X, lie_bracket(Y, Z)), lie_bracket(Y, lie_bracket(Z, X)),
              lie_bracket(Z, lie_bracket(X, Y))]
    bridges = [a == b for a, b in zip(expr, nested)]
    ok = verdict.ok and all(bridges)
    return (PASS if ok else FAIL), {
        "sum_is_zero": verdict.zero, "encoding_cross_check": verdict.cross_check,
        "expressions_match_nested_brackets": bridges,
        "expressions": [e.format() for e in expr],
    }


def run_checks(script: Script, source: str = "script",
               on_record: Callable[[CheckRecord], None] | None = None) -> Report:
    """Elaborate declarations in order and run every check.

    A declaration that fails to elaborate yields an ``error`` record of kind
    ``declaration``; checks that depend on it are reported as errors too.
    """
    env = Environment()
    report = Report()

    def emit(rec: CheckRecord):
        report.add(rec)
        if on_record:
            on_record(rec)

    for st in script.statements:
        t0 = time.perf_counter()
        if isinstance(st, CheckStmt):
            try:
                status, details = _run_check(st, env)
            except DeclarationError as exc:
                status, details = ERROR, {"error": exc.error, "message": exc.message, **exc.details}
            emit(CheckRecord(_check_name(st), st.kind, status, _anchor(st, source), details,
                             time.perf_counter() - t0))
            continue
        kind = _KIND_OF[type(st)]
        try:
            _elaborate(st, env)
        except DeclarationError as exc:
            env.failed[(kind, st.name)] = exc
            emit(CheckRecord(f"{kind} {st.name}", "declaration", ERROR, f"{source}:{st.pos[0]}",
                             {"error": exc.error, "message": exc.message, **exc.details},
                             time.perf_counter() - t0))
    return report
