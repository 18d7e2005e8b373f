"""Pair trees through their dual fields, then collapse gradient-equivalent ones.

Run with:  python3 tutorials/02_duality_and_rewriting.py
"""

from eatrees.duality import dual_field, pairing
from eatrees.elementary import parse_symbolic, symbolic_form
from eatrees.gradrewrite import all_classes, exotic_normal_form

t = parse_symbolic("f^j_i f^j_{kk} ∂_i")
print("dual field:", dual_field(t))
print("self pairing:", pairing(t, t))

aroma, rooted = parse_symbolic("f^j_k f^j_k"), parse_symbolic("f^i_j f^j ∂_i")
print("aroma against tree:", pairing(aroma, rooted), "theta-free:", pairing(aroma, rooted, theta=False))

print("\ngradient classes of order 2")
for cls in all_classes(2):
    members = ", ".join(str(symbolic_form(m)) for m in cls)
    # Normal forms are defined for connected trees; aroma products are just listed.
    head = symbolic_form(exotic_normal_form(cls[0])) if cls[0].num_components == 1 else "(with aromas)"
    print(f"  {head}  <-  {members}")
