"""Walk through the bracket of two planar fields.

Prints the composite Y∗X over D², the commutator loop and the factored
bracket, then compares it with the Jacobian formula and with the strong
difference of Y∗X and the swapped X∗Y.

    python demos/brackets.py
"""

from weilcalc import diagrams as dg
from weilcalc.jacobi import bracket_via_strong_diff
from weilcalc.tangent import (
    VectorField, along, classical_bracket, field_to_flow, lie_bracket, star, star_all,
)

X = VectorField.parse(2, ["-x2", "x1"])       # rotation
Y = VectorField.parse(2, ["x1*x2", "1/2*x1^2"])

fx, fy = field_to_flow(X), field_to_flow(Y)
print("X         =", X.format())
print("Y         =", Y.format())
print("Y*X       =", star(fx, fy).format())

loop = along(dg.BRACKET_LOOP, star_all(fx, fy, fx, fy))
print("loop      =", loop.format())  # only the d1*d2 parts survive

b = lie_bracket(X, Y)
print("[X,Y]     =", b.format())
print("Jacobian  :", b == classical_bracket(X, Y))
print("difference:", b == bracket_via_strong_diff(X, Y))
