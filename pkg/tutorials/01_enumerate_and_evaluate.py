"""Enumerate low-order trees and evaluate one of them on a polynomial field.

Run with:  python3 tutorials/01_enumerate_and_evaluate.py
"""

from fractions import Fraction

from eatrees.canonical import symmetry_coefficient
from eatrees.elementary import elementary_differential, parse_symbolic, symbolic_form
from eatrees.enumeration import enumerate_by_order
from eatrees.polyfield import PolyVectorField

for n in (1, 2, 3):
    trees = enumerate_by_order(n)
    print(f"order {n}: {len(trees)} trees")

print("\norder 2 in detail")
for t in enumerate_by_order(2):
    fl = t.classify()
    print(f"  {str(symbolic_form(t)):<22} symmetry={symmetry_coefficient(t)} exotic={fl.is_exotic_tree} "
          f"butcher={fl.is_butcher_tree}")

# A tree with one stolon: the index i is shared between the root arrow and a leaf.
t = parse_symbolic("f^i f^j_{jk} f^k ∂_i")
f = PolyVectorField.parse("f1 = x1*x2^2; f2 = x1^3 - x2")
x = (Fraction(1), Fraction(1, 2))
print(f"\n{symbolic_form(t)} at {x}: {elementary_differential(t, f, x)}")
