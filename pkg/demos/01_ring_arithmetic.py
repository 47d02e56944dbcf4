"""Arithmetic in the ring that hosts the degree invariants.

Elements carry one integer for the full circle group and one integer per
rotation subgroup Z_k.  Addition is coordinatewise; the product twists the
higher coordinates through the leading one, which is exactly why the
scalar shadow (the leading coordinate alone) can vanish while the element
does not.
"""

import numpy as np

from equideg import (ONE, ZERO, TomDieckElement, add, deg_id_minus_LA,
                     lin_deg, minus_id_data, product, star)
from equideg.eqdeg import LinearBlockData
from equideg.reps import RepDecomposition

a = TomDieckElement(2, {1: 3, 4: -1})
b = TomDieckElement(-1, {1: 1, 2: -4})

print("a          =", a)
print("b          =", b)
print("a + b      =", add(a, b))
print("a * b      =", star(a, b))
print("3 * a      =", 3 * a)
print("units      :", ONE, "and zero", ZERO)
print("fold       =", product([a, b, ONE]))

# The product annihilates higher coordinates whenever both leading
# coordinates vanish: such elements are outside the reach of any scalar
# degree, yet they are nonzero.
blind = TomDieckElement(0, {2: 1})
print("\nblind      =", blind)
print("blind^2    =", star(blind, blind), " (nilpotent, scalar shadow 0)")

# Closed-form degree of x -> x - L_A x on loop space for a diagonal A:
# each eigenvalue above k^2 contributes to the Z_k coordinate.
A = np.diag([4.5, 2.0, 2.0, 2.0])
print("\ndeg(Id - L_A) for A = diag(4.5, 2, 2, 2):", deg_id_minus_LA(A))

# Degrees of block-diagonal linear maps multiply, and the map -Id has an
# explicit degree determined by the block multiplicities alone.
rep = RepDecomposition(((2, 0), (3, 5)))
print("deg(-Id) on R^2 + 3 copies of mode 5:", lin_deg(minus_id_data(rep)))
d1 = LinearBlockData(RepDecomposition(((1, 2),)), (2,))
d2 = LinearBlockData(RepDecomposition(((2, 0),)), (1,))
print("product law:", star(lin_deg(d1), lin_deg(d2)))
