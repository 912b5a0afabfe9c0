"""Catalog of the named objects, maps and limit diagrams used by the tangent
calculus and the Jacobi machinery.

Every diagram comes with its candidate limiting cone.  Maps that are
defined as composites (the ``iota`` family) are built by composition rather
than transcribed, so the catalog cannot drift from its definitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .infinitesimal import (
    D, ONE, D_n, D_power, InfinitesimalMap, InfinitesimalObject, combine_maps,
    compose_maps, make_map, oplus, simplicial,
)
from .limits import Arrow, Cone, WeilDiagram, complete_cone
from .weil import algebra_of, induced_hom

AXES = (1, 2, 3)


def W(phi: InfinitesimalMap):
    return induced_hom(phi)


def A(obj: InfinitesimalObject):
    return algebra_of(obj)


@dataclass(eq=False)
class CatalogEntry:
    key: str
    title: str
    diagram: WeilDiagram
    cone: Cone


# -- objects ------------------------------------------------------------------

D2 = D_power(2)
D3 = D_power(3)
DD2 = D_n(2)
E = simplicial(4, [(1, 3), (2, 3), (1, 4), (2, 4), (3, 4)])
SQUARE_ENCODING = simplicial(3, [(1, 3), (2, 3)])
D3_PLUS_D3 = oplus(D3, D3)

# the D^3 subobject on which two microcubes must agree for the i-th difference
AXIS_FACE = {1: simplicial(3, [(2, 3)]), 2: simplicial(3, [(1, 3)]), 3: simplicial(3, [(1, 2)])}
# the D^4 object encoding a pair of microcubes for the i-th difference
CUBE_ENCODING = {
    1: simplicial(4, [(2, 4), (3, 4)]),
    2: simplicial(4, [(1, 4), (3, 4)]),
    3: simplicial(4, [(1, 4), (2, 4)]),
}
_E_PAIRS_COMMON = [(1, 7), (2, 7), (3, 7), (4, 7), (5, 7), (6, 7)]
E_AXIS = {
    1: simplicial(7, [(2, 6), (3, 6), (4, 6), (5, 6), (2, 4), (2, 5), (3, 4), (3, 5)] + _E_PAIRS_COMMON),
    2: simplicial(7, [(1, 6), (3, 6), (4, 6), (5, 6), (1, 4), (1, 5), (3, 4), (3, 5)] + _E_PAIRS_COMMON),
    3: simplicial(7, [(1, 6), (2, 6), (4, 6), (5, 6), (1, 4), (1, 5), (2, 4), (2, 5)] + _E_PAIRS_COMMON),
}
G = simplicial(8, [(2, 4), (3, 4), (1, 5), (3, 5), (1, 6), (2, 6), (4, 5), (4, 6), (5, 6),
                   (1, 7), (2, 7), (3, 7), (4, 7), (5, 7), (6, 7),
                   (1, 8), (2, 8), (3, 8), (4, 8), (5, 8), (6, 8), (7, 8)])


# -- maps ---------------------------------------------------------------------

def inclusion(sub: InfinitesimalObject, whole: InfinitesimalObject) -> InfinitesimalMap:
    """The identity-on-variables inclusion of a subobject."""
    return make_map(sub, whole, [f"d{i + 1}" for i in range(whole.n)])


I_DD2_D2 = inclusion(DD2, D2)

# microsquare pair encoding
SQ_PHI = make_map(D2, SQUARE_ENCODING, ["d1", "d2", "0"])
SQ_PSI = make_map(D2, SQUARE_ENCODING, ["d1", "d2", "d1*d2"])
SQ_EXTRACT = make_map(D, SQUARE_ENCODING, ["0", "0", "d"])

# microsquare triple encoding
L_MAPS = (
    make_map(D2, E, ["d1", "d2", "0", "0"]),
    make_map(D2, E, ["d1", "d2", "d1*d2", "0"]),
    make_map(D2, E, ["d1", "d2", "0", "d1*d2"]),
)

# microcube pair encodings, one per axis
_CUBE_EXTRA = {1: "d2*d3", 2: "d1*d3", 3: "d1*d2"}
CUBE_PHI = {i: make_map(D3, CUBE_ENCODING[i], ["d1", "d2", "d3", "0"]) for i in AXES}
CUBE_PSI = {i: make_map(D3, CUBE_ENCODING[i], ["d1", "d2", "d3", _CUBE_EXTRA[i]]) for i in AXES}
_CUBE_EXTRACT = {1: ["d1", "0", "0", "d2"], 2: ["0", "d1", "0", "d2"], 3: ["0", "0", "d1", "d2"]}
CUBE_EXTRACT = {i: make_map(D2, CUBE_ENCODING[i], _CUBE_EXTRACT[i]) for i in AXES}
FACE_INCLUSION = {i: inclusion(AXIS_FACE[i], D3) for i in AXES}
# D(2) into the axis encoding along the two directions that survive extraction
AXIS_WEDGE = {i: make_map(DD2, CUBE_ENCODING[i], _CUBE_EXTRACT[i]) for i in AXES}

# For axis 2 the d3/d1 order in slots 4-5 is the one for which the sextuple
# hexagon commutes (it also reproduces iota[2][2], iota[2][3] as used there).
_ETA2 = {
    1: ["d1", "0", "0", "d2", "d3", "d4", "d1*d4"],
    2: ["0", "d2", "0", "d3", "d1", "d4", "d2*d4"],
    3: ["0", "0", "d3", "d1", "d2", "d4", "d3*d4"],
}
ETA1 = {i: make_map(CUBE_ENCODING[i], E_AXIS[i], ["d1", "d2", "d3", "0", "0", "d4", "0"]) for i in AXES}
ETA2 = {i: make_map(CUBE_ENCODING[i], E_AXIS[i], _ETA2[i]) for i in AXES}

# iota[i][j-1] for j = 1..4: the four microcubes encoded by an element of W_{E[i]}
IOTA = {
    i: (
        compose_maps(CUBE_PHI[i], ETA1[i]),
        compose_maps(CUBE_PSI[i], ETA1[i]),
        compose_maps(CUBE_PHI[i], ETA2[i]),
        compose_maps(CUBE_PSI[i], ETA2[i]),
    )
    for i in AXES
}

# (D^3 ⊕ D^3) -> E[i]; keys name the pair of E nodes an arrow joins
H_MAPS = {
    (1, "12"): combine_maps([IOTA[1][1], IOTA[1][2]]),
    (2, "12"): combine_maps([IOTA[2][3], IOTA[2][0]]),
    (2, "23"): combine_maps([IOTA[2][1], IOTA[2][2]]),
    (3, "23"): combine_maps([IOTA[3][3], IOTA[3][0]]),
    (3, "31"): combine_maps([IOTA[3][1], IOTA[3][2]]),
    (1, "31"): combine_maps([IOTA[1][3], IOTA[1][0]]),
}

K_MAPS = {
    1: make_map(E_AXIS[1], G, [
        "d1", "d2 + d4", "d3 + d5", "d6 - d2*d3 - d4*d5", "-d1*d5", "d1*d4",
        "d7 + d1*d2*d3", "d1*d2*d3"]),
    2: make_map(E_AXIS[2], G, [
        "d1 + d5", "d2", "d3 + d4", "-d2*d3", "d6 - d1*d3 - d4*d5", "d1*d2",
        "d2*d4*d5", "d7"]),
    # slots 4 and 7 are the unique choice making both hexagon squares at e3
    # commute given k1 and k2; see tests/test_diagrams.py
    3: make_map(E_AXIS[3], G, [
        "d1 + d4", "d2 + d5", "d3", "-d3*d5", "-d1*d3", "d6",
        "-d7 + d1*d2*d3 + d3*d4*d5", "-d7 + d3*d4*d5"]),
}

# extraction of the double difference from E[i] and of the three Jacobi terms from G
DOUBLE_EXTRACT = {i: make_map(D, E_AXIS[i], ["0"] * 6 + ["d"]) for i in AXES}
G_EXTRACT = tuple(compose_maps(DOUBLE_EXTRACT[i], K_MAPS[i]) for i in AXES)

# bracket factorization
BRACKET_LOOP = make_map(D2, D_power(4), ["d1", "d2", "-d1", "-d2"])
PRODUCT_TO_D = make_map(D2, D, ["d1*d2"])
I1_D2 = make_map(D, D2, ["d", "0"])
I2_D2 = make_map(D, D2, ["0", "d"])
ZERO_D_D2 = make_map(D, D2, ["0", "0"])
SWAP_D2 = make_map(D2, D2, ["d2", "d1"])


def wedge_injection(n: int, j: int) -> InfinitesimalMap:
    """i_j : D -> D(n), d ↦ d in slot j (1-based)."""
    return make_map(D, D_n(n), ["d" if k == j else "0" for k in range(1, n + 1)])


def base_point(obj: InfinitesimalObject) -> InfinitesimalMap:
    """1 -> obj, the origin; it induces the augmentation of W_obj."""
    return make_map(ONE, obj, ["0"] * obj.n)


# -- diagrams -----------------------------------------------------------------

def _diagram(name: str, nodes: dict, arrows: list[tuple[str, str, str, InfinitesimalMap]]):
    return WeilDiagram(
        name,
        {k: A(v) for k, v in nodes.items()},
        [Arrow(a, s, t, W(phi)) for a, s, t, phi in arrows],
    )


@lru_cache(maxsize=None)
def wedge_diagram(n: int) -> CatalogEntry:
    """n copies of W_D over W_1; the limit is W_{D(n)}."""
    nodes = {f"t{j}": D for j in range(1, n + 1)}
    nodes["base"] = ONE
    arrows = [(f"aug{j}", f"t{j}", "base", base_point(D)) for j in range(1, n + 1)]
    d = _diagram(f"{n}-fold tangent wedge", nodes, arrows)
    legs = {f"t{j}": W(wedge_injection(n, j)) for j in range(1, n + 1)}
    cone = complete_cone(d, A(D_n(n)), legs)
    return CatalogEntry(f"wedge{n}", f"{n} tangent vectors at a point", d, cone)


@lru_cache(maxsize=None)
def tangent_pair_pullback() -> CatalogEntry:
    """W_{D(2)} as the pullback of W_D -> W_1 <- W_D."""
    left = make_map(D, DD2, ["d", "0"])
    top = make_map(D, DD2, ["0", "d"])
    d = _diagram("tangent pair pullback", {"left": D, "top": D, "base": ONE}, [
        ("left_aug", "left", "base", base_point(D)),
        ("top_aug", "top", "base", base_point(D)),
    ])
    cone = complete_cone(d, A(DD2), {"left": W(left), "top": W(top)})
    return CatalogEntry("tangent-pair", "tangent pair pullback", d, cone)


@lru_cache(maxsize=None)
def bracket_equalizer() -> CatalogEntry:
    """Three parallel arrows W_{D²} -> W_D; apex W_D via (d1,d2) ↦ d1d2."""
    d = _diagram("bracket equalizer", {"square": D2, "line": D}, [
        ("axis1", "square", "line", I1_D2),
        ("axis2", "square", "line", I2_D2),
        ("origin", "square", "line", ZERO_D_D2),
    ])
    cone = complete_cone(d, A(D), {"square": W(PRODUCT_TO_D)})
    return CatalogEntry("bracket-equalizer", "bracket factorization", d, cone)


@lru_cache(maxsize=None)
def microsquare_pullback() -> CatalogEntry:
    d = _diagram("microsquare pair pullback", {"first": D2, "second": D2, "wedge": DD2}, [
        ("first_restrict", "first", "wedge", I_DD2_D2),
        ("second_restrict", "second", "wedge", I_DD2_D2),
    ])
    cone = complete_cone(d, A(SQUARE_ENCODING), {"first": W(SQ_PHI), "second": W(SQ_PSI)})
    return CatalogEntry("microsquare-pair", "microsquare pair pullback", d, cone)


@lru_cache(maxsize=None)
def microsquare_hexagon() -> CatalogEntry:
    """Three microsquares agreeing pairwise on D(2); apex W_E."""
    nodes = {"sq1": D2, "sq2": D2, "sq3": D2, "w12": DD2, "w23": DD2, "w31": DD2}
    d = _diagram("microsquare triple hexagon", nodes, [
        ("sq1_w12", "sq1", "w12", I_DD2_D2),
        ("sq2_w12", "sq2", "w12", I_DD2_D2),
        ("sq2_w23", "sq2", "w23", I_DD2_D2),
        ("sq3_w23", "sq3", "w23", I_DD2_D2),
        ("sq3_w31", "sq3", "w31", I_DD2_D2),
        ("sq1_w31", "sq1", "w31", I_DD2_D2),
    ])
    legs = {f"sq{i + 1}": W(L_MAPS[i]) for i in range(3)}
    cone = complete_cone(d, A(E), legs)
    return CatalogEntry("microsquare-triple", "microsquare triple hexagon", d, cone)


@lru_cache(maxsize=None)
def microcube_pullback(axis: int) -> CatalogEntry:
    face = FACE_INCLUSION[axis]
    d = _diagram(f"microcube pair pullback (axis {axis})",
                 {"first": D3, "second": D3, "face": AXIS_FACE[axis]}, [
                     ("first_restrict", "first", "face", face),
                     ("second_restrict", "second", "face", face),
                 ])
    cone = complete_cone(d, A(CUBE_ENCODING[axis]),
                         {"first": W(CUBE_PHI[axis]), "second": W(CUBE_PSI[axis])})
    return CatalogEntry(f"microcube-pair-{axis}", f"microcube pair pullback, axis {axis}", d, cone)


@lru_cache(maxsize=None)
def double_difference_pullback(axis: int) -> CatalogEntry:
    enc = CUBE_ENCODING[axis]
    wedge = AXIS_WEDGE[axis]
    d = _diagram(f"double difference pullback (axis {axis})",
                 {"first": enc, "second": enc, "wedge": DD2}, [
                     ("first_restrict", "first", "wedge", wedge),
                     ("second_restrict", "second", "wedge", wedge),
                 ])
    cone = complete_cone(d, A(E_AXIS[axis]),
                         {"first": W(ETA1[axis]), "second": W(ETA2[axis])})
    return CatalogEntry(f"double-difference-{axis}", f"double difference pullback, axis {axis}",
                        d, cone)


@lru_cache(maxsize=None)
def microcube_hexagon() -> CatalogEntry:
    """E[1], E[2], E[3] glued pairwise over W_{D³⊕D³}; apex W_G."""
    nodes = {"e1": E_AXIS[1], "e2": E_AXIS[2], "e3": E_AXIS[3],
             "n12": D3_PLUS_D3, "n23": D3_PLUS_D3, "n31": D3_PLUS_D3}
    arrows = []
    for (i, pair), h in H_MAPS.items():
        arrows.append((f"h{i}_{pair}", f"e{i}", f"n{pair}", h))
    d = _diagram("microcube sextuple hexagon", nodes, arrows)
    cone = complete_cone(d, A(G), {f"e{i}": W(K_MAPS[i]) for i in AXES})
    return CatalogEntry("microcube-sextuple", "microcube sextuple hexagon", d, cone)


def all_entries() -> list[CatalogEntry]:
    """Every catalogued limit diagram, in a fixed order."""
    return [
        tangent_pair_pullback(),
        microsquare_pullback(),
        microsquare_hexagon(),
        *(microcube_pullback(i) for i in AXES),
        *(double_difference_pullback(i) for i in AXES),
        microcube_hexagon(),
        bracket_equalizer(),
    ]
