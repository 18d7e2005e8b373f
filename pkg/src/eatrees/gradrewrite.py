"""Rewriting of trees that agree on gradient fields.

For ``f = grad V`` every derivative ``f^i_{j1..jq}`` is symmetric in all of
its indices, so the upper index of a vertex may be exchanged with any lower
index.  On the graph this is one local move at a vertex ``v`` and an arrow
``a`` with ``tau(a) = v``: the partners ``p = sigma(v)`` and ``q = sigma(a)``
are swapped.  Depending on whether ``p`` and ``q`` are arrows or vertices the
move inverts an edge against a liana, inverts an edge against a stolon, or
trades an edge pair for a stolon-liana pair.  It keeps the composition and
the connected components.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from eatrees.canonical import canonical_form
from eatrees.elementary import elementary_differential
from eatrees.enumeration import enumerate_by_order, standard_form
from eatrees.polyfield import Polynomial, PolyVectorField, gradient_field, random_point, random_polynomial
from eatrees.tree import ExoticAromaticTree


class NoExoticRepresentative(RuntimeError):
    pass


class NonUniqueRepresentative(RuntimeError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    kind: str  # edge_liana_inversion | edge_stolon_inversion | stolon_liana_simplification
    vertex: int
    arrow: int
    partners: tuple[int, int]  # sigma(vertex), sigma(arrow) before the move


def _rule_kind(t: ExoticAromaticTree, p: int, q: int) -> str:
    p_vertex, q_vertex = t.is_vertex(p), t.is_vertex(q)
    if p_vertex and q_vertex:
        return "edge_stolon_inversion"
    if not p_vertex and not q_vertex:
        return "edge_liana_inversion"
    return "stolon_liana_simplification"


def rewrite_sites(t: ExoticAromaticTree) -> list[tuple[RewriteRule, ExoticAromaticTree]]:
    """Every single move on ``t`` with the (uncanonicalised) result."""
    out = []
    for v in t.vertex_elements:
        p = t.partner[v]
        for a in t.in_arrows[v]:
            q = t.partner[a]
            if p == a:
                continue
            partner = list(t.partner)
            partner[v], partner[q] = q, v
            partner[a], partner[p] = p, a
            new = ExoticAromaticTree(t.num_vertices, t.tau, tuple(partner), t.rooted)
            out.append((RewriteRule(_rule_kind(t, p, q), v, a, (p, q)), new))
    return out


def rewrite_neighbors(t: ExoticAromaticTree) -> list[ExoticAromaticTree]:
    """Trees one move away from ``t`` up to isomorphism (``t``'s own class excluded).

    Results use the standard labelling of the enumeration and are sorted by
    canonical encoding.
    """
    own = canonical_form(t)
    seen: dict[bytes, ExoticAromaticTree] = {}
    for _, new in rewrite_sites(t):
        key = canonical_form(new)
        if key != own:
            seen.setdefault(key, standard_form(new))
    return [seen[k] for k in sorted(seen)]


def equivalence_class(t: ExoticAromaticTree) -> list[ExoticAromaticTree]:
    """Closure of :func:`rewrite_neighbors`, members sorted by canonical encoding."""
    start = standard_form(t)
    seen = {canonical_form(start): start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nb in rewrite_neighbors(cur):
            key = canonical_form(nb)
            if key not in seen:
                seen[key] = nb
                queue.append(nb)
    return [seen[k] for k in sorted(seen)]


def exotic_normal_form(t: ExoticAromaticTree) -> ExoticAromaticTree:
    """The exotic tree equivalent to a connected tree ``t``."""
    if t.num_components != 1:
        raise ValueError("exotic normal forms exist for connected trees only")
    reps = [m for m in equivalence_class(t) if m.classify().is_exotic_tree]
    if not reps:
        raise NoExoticRepresentative(f"no exotic tree equivalent to {t}")
    if len(reps) > 1:
        raise NonUniqueRepresentative(f"{len(reps)} exotic trees equivalent to {t}")
    return reps[0]


def all_classes(order: int) -> list[list[ExoticAromaticTree]]:
    """Partition of the trees of the given order into equivalence classes."""
    remaining = {canonical_form(t): t for t in enumerate_by_order(order)}
    classes = []
    for key in sorted(remaining):
        if key not in remaining:
            continue
        cls = equivalence_class(remaining[key])
        for m in cls:
            remaining.pop(canonical_form(m), None)
        classes.append(cls)
    return classes


@dataclass
class GradientReport:
    trials: int
    gradient_equal: bool
    nongradient_differs: bool
    gradient_mismatch: tuple | None = None  # (field, point, lhs, rhs)
    nongradient_witness: tuple | None = None


def _max_in_degree(*trees: ExoticAromaticTree) -> int:
    return max([0] + [t.in_degree(v) for t in trees for v in t.vertex_elements])


def check_gradient_agreement(
    g1: ExoticAromaticTree,
    g2: ExoticAromaticTree,
    trials: int = 5,
    *,
    dims: Sequence[int] = (2, 3),
    seed: int = 0,
) -> GradientReport:
    """Compare ``F(g1)`` and ``F(g2)`` exactly on random gradient fields.

    Potentials have degree two above the largest in-degree so that every
    derivative the trees use is generically nonzero.  The same comparison on
    ``f = (x2, 0, ...)`` and on random non-gradient fields reports whether
    the two trees can be told apart once the Jacobian is not symmetric.
    """
    rng = random.Random(f"grad/{seed}")
    deg = _max_in_degree(g1, g2) + 2
    equal = True
    mismatch = None
    count = 0
    for d in dims:
        for _ in range(trials):
            pot = random_polynomial(rng, d, deg, 0.7)
            f = gradient_field(pot)
            x = random_point(rng, d)
            lhs, rhs = elementary_differential(g1, f, x), elementary_differential(g2, f, x)
            count += 1
            if lhs != rhs and mismatch is None:
                equal = False
                mismatch = (f, x, lhs, rhs)

    witness = None
    for d in dims:
        shear = PolyVectorField((Polynomial.variable(d, 1),) + tuple(Polynomial(d) for _ in range(d - 1)))
        candidates = [shear] + [
            PolyVectorField(tuple(random_polynomial(rng, d, deg - 1, 0.7) for _ in range(d))) for _ in range(trials)
        ]
        for f in candidates:
            x = random_point(rng, d)
            lhs, rhs = elementary_differential(g1, f, x), elementary_differential(g2, f, x)
            if lhs != rhs:
                witness = (f, x, lhs, rhs)
                break
        if witness:
            break
    return GradientReport(count, equal, witness is not None, mismatch, witness)


def gradient_difference_at_zero(g1: ExoticAromaticTree, g2: ExoticAromaticTree, f: PolyVectorField) -> tuple:
    """``F(g1)(f)(0) - F(g2)(f)(0)``, componentwise."""
    z = (Fraction(0),) * f.dimension
    a, b = elementary_differential(g1, f, z), elementary_differential(g2, f, z)
    if not g1.rooted:
        return (a - b,)
    return tuple(u - v for u, v in zip(a, b))
