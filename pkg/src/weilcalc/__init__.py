"""Exact calculus over Weil algebras.

The core is limits of diagrams of Weil algebras, computed with exact
rationals.  On top of it sit microflows on the coordinate model R^k, whose
block composition yields the Lie bracket of vector fields.
"""

from .infinitesimal import (
    D, ONE, D_n, D_power, IllDefinedMap, InfinitesimalMap, InfinitesimalObject, MapMismatch,
    NonzeroConstantTerm, NotSimplicial, compose_maps, make_map, make_object, oplus, simplicial,
)
from .jacobi import (
    bracket_via_strong_diff, general_jacobi_check, jacobi_witness_from_fields,
    primordial_jacobi_check, strong_diff, strong_diff_axis,
)
from .limits import (
    Arrow, Cone, ConeVerdict, WeilDiagram, complete_cone, compute_limit, lift_through_limit,
    verify_cone,
)
from .poly import Poly, parse_poly
from .report import CheckRecord, Report
from .tangent import (
    FlowElement, TangentVector, VectorField, classical_bracket, compose, field_to_flow,
    flow_to_field, lie_bracket, star, star_all,
)
from .weil import AlgebraHom, WeilAlgebra, WeilElement, algebra_of, induced_hom

__version__ = "0.1.0"

__all__ = [
    "D", "ONE", "D_n", "D_power", "IllDefinedMap", "InfinitesimalMap", "InfinitesimalObject",
    "MapMismatch", "NonzeroConstantTerm", "NotSimplicial", "compose_maps", "make_map",
    "make_object", "oplus", "simplicial",
    "bracket_via_strong_diff", "general_jacobi_check", "jacobi_witness_from_fields",
    "primordial_jacobi_check", "strong_diff", "strong_diff_axis",
    "Arrow", "Cone", "ConeVerdict", "WeilDiagram", "complete_cone", "compute_limit",
    "lift_through_limit", "verify_cone",
    "Poly", "parse_poly", "CheckRecord", "Report",
    "FlowElement", "TangentVector", "VectorField", "classical_bracket", "compose",
    "field_to_flow", "flow_to_field", "lie_bracket", "star", "star_all",
    "AlgebraHom", "WeilAlgebra", "WeilElement", "algebra_of", "induced_hom",
]
