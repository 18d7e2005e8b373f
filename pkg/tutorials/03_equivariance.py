"""Check which trees commute with affine and orthogonal changes of variables.

Run with:  python3 tutorials/03_equivariance.py   (about 20 seconds)
"""

from eatrees.elementary import symbolic_form
from eatrees.equivariance import PROPERTIES, classification_matrix

m = classification_matrix(2)
print(f"{'tree':<22}" + "".join(f"{p:>12}" for p in PROPERTIES))
for row in m.rows:
    print(f"{str(symbolic_form(row.tree)):<22}" + "".join(f"{str(row.verdict(p)):>12}" for p in PROPERTIES))

# Every failed property comes with an exact counterexample.
row = next(r for r in m.rows if not r.verdict("affine"))
w = row.reports["affine"].witness
print(f"\naffine witness for {symbolic_form(row.tree)}: lhs={w.lhs} rhs={w.rhs}")
