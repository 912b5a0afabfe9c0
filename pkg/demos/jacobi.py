"""Jacobi identities, from scalar microsquares up to vector fields.

    python demos/jacobi.py [seed]
"""

import random
import sys

from weilcalc.jacobi import (
    general_jacobi_check, jacobi_witness_from_fields, primordial_jacobi_check,
    random_compatible_sextuple, random_field, random_microsquare_triple,
)
from weilcalc.tangent import flow_to_field, lie_bracket

rng = random.Random(int(sys.argv[1]) if len(sys.argv) > 1 else 0)

# three microsquares on R^1 that agree on D(2)
g = random_microsquare_triple(rng, 1, degree=1)
v = primordial_jacobi_check(*g)
print("microsquares:")
for t in v.terms:
    print("   ", t.format())
print("  sum is zero:", v.zero, " encoding agrees:", v.cross_check)

# six microcubes satisfying every agreement the double differences need
cubes = random_compatible_sextuple(rng, 1, degree=1)
v = general_jacobi_check(cubes)
print("\nmicrocubes:")
for t in v.terms:
    print("   ", t.format())
print("  sum is zero:", v.zero, " encoding agrees:", v.cross_check)

# vector fields: the three terms are the nested brackets
X, Y, Z = (random_field(rng, 2, 1) for _ in range(3))
v = general_jacobi_check(jacobi_witness_from_fields(X, Y, Z), cross_check=False)
nested = [lie_bracket(X, lie_bracket(Y, Z)), lie_bracket(Y, lie_bracket(Z, X)),
          lie_bracket(Z, lie_bracket(X, Y))]
print("\nvector fields:")
for t, n in zip(v.terms, nested):
    f = flow_to_field(t)
    print("   ", f.format(), " matches nested bracket:", f == n)
print("  sum is zero:", v.zero)
