"""Hypothesis strategies for random trees and fields."""

import random

from hypothesis import strategies as st

from eatrees.polyfield import random_field, random_point
from eatrees.tree import ExoticAromaticTree


@st.composite
def trees(draw, max_vertices=4, max_arrows=4, rooted=None):
    """Arbitrary valid trees (not canonicalised); about 2*order-1 <= 7 elements."""
    is_rooted = draw(st.booleans()) if rooted is None else rooted
    n_v = draw(st.integers(1, max_vertices))
    n_a = draw(st.integers(0, max_arrows))
    total = n_v + n_a + (1 if is_rooted else 0)
    if total % 2:
        n_a += 1 if n_a < max_arrows else -1
    tau = tuple(draw(st.lists(st.integers(1, n_v), min_size=n_a, max_size=n_a)))
    elems = list(range(0 if is_rooted else 1, n_a + n_v + 1))
    perm = draw(st.permutations(elems))
    partner = [-1] * (n_a + n_v + 1)
    for x, y in zip(perm[::2], perm[1::2]):
        partner[x], partner[y] = y, x
    return ExoticAromaticTree(n_v, tau, tuple(partner), is_rooted)


@st.composite
def relabelings(draw, t):
    """``t`` with arrows and vertices renumbered (ghost arrow fixed)."""
    n_a, n_v = t.num_arrows, t.num_vertices
    pa = draw(st.permutations(range(1, n_a + 1)))
    pv = draw(st.permutations(range(1, n_v + 1)))
    emap = {0: 0}
    emap.update({a: pa[a - 1] for a in range(1, n_a + 1)})
    emap.update({n_a + v: n_a + pv[v - 1] for v in range(1, n_v + 1)})
    tau = [0] * n_a
    for a in range(1, n_a + 1):
        tau[emap[a] - 1] = pv[t.tau[a - 1] - 1]
    partner = [-1] * t.size
    for e in t.elements:
        partner[emap[e]] = emap[t.partner[e]]
    return ExoticAromaticTree(n_v, tuple(tau), tuple(partner), t.rooted)


@st.composite
def fields(draw, d, degree=3):
    seed = draw(st.integers(0, 10**6))
    rng = random.Random(seed)
    return random_field(rng, d, degree), random_point(rng, d)
