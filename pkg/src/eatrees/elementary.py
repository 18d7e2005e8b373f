"""Elementary differentials of exotic aromatic trees.

The value of ``F_d(gamma)(f)(x)`` is the sum, over all assignments of an index
in ``1..d`` to each sigma pair, of the product over vertices of
``d_{lower indices} f^{upper index}(x)``; the index of the ghost arrow's pair
selects the output component.  :func:`contract` runs that sum over any
commutative ring whose zero is falsy, so the same loop serves rationals,
floats, polynomials and the truncated theta algebra of the duality module.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from eatrees.canonical import canonical_form, canonical_position
from eatrees.polyfield import (
    DimensionMismatch,
    JetCache,
    Polynomial,
    PolyVectorField,
    exact_rank,
    random_field,
    random_point,
)
from eatrees.tree import ExoticAromaticTree, InvalidTree


def _contraction_plan(t: ExoticAromaticTree):
    cls = {}
    for k, (a, b) in enumerate(t.sigma_pairs):
        cls[a] = cls[b] = k
    needs = {v: (cls[v], tuple(cls[a] for a in t.in_arrows[v])) for v in t.vertex_elements}
    # greedy order: start at the root's factor, then keep the most classes shared
    order: list[int] = []
    known: set[int] = set()
    if t.rooted:
        known.add(cls[0])
    remaining = set(needs)
    while remaining:
        best = max(
            sorted(remaining),
            key=lambda v: (len(known & {needs[v][0], *needs[v][1]}), -len({needs[v][0], *needs[v][1]})),
        )
        order.append(best)
        remaining.discard(best)
        known |= {needs[best][0], *needs[best][1]}
    root_cls = cls[0] if t.rooted else None
    return len(t.sigma_pairs), [needs[v] for v in order], root_cls


def contract(t: ExoticAromaticTree, d: int, value: Callable, one, zero):
    """Index contraction of ``t`` in dimension ``d``.

    ``value(i, alpha)`` must return ``d_alpha f^i`` (0-based component, sorted
    0-based multi-index) as a ring element.  Returns a list of ``d`` ring
    elements for rooted trees and a single element for multi-aromas.
    """
    n_cls, needs, root_cls = _contraction_plan(t)
    assign = [-1] * n_cls
    out = [zero] * d
    total = [zero]

    def rec(k, acc):
        if k == len(needs):
            if root_cls is None:
                total[0] = total[0] + acc
            else:
                i = assign[root_cls]
                out[i] = out[i] + acc
            return
        up, lows = needs[k]
        fresh = []
        for c in (up, *lows):
            if assign[c] < 0 and c not in fresh:
                fresh.append(c)
        for combo in product(range(d), repeat=len(fresh)):
            for c, i in zip(fresh, combo):
                assign[c] = i
            factor = value(assign[up], tuple(sorted(assign[c] for c in lows)))
            if factor:
                rec(k + 1, acc * factor)
        for c in fresh:
            assign[c] = -1

    rec(0, one)
    return total[0] if root_cls is None else out


def elementary_differential(t: ExoticAromaticTree, f: PolyVectorField, x: Sequence):
    """Exact ``F_d(t)(f)(x)``: a tuple of length d, or a scalar for multi-aromas."""
    d = f.dimension
    if len(x) != d:
        raise DimensionMismatch(f"point has {len(x)} coordinates, field dimension is {d}")
    jets = JetCache(f, x)
    zero = 0.0 if not all(c.is_exact() for c in f.components) or any(isinstance(v, float) for v in x) else Fraction(0)
    one = zero + 1
    res = contract(t, d, jets, one, zero)
    return res if not t.rooted else tuple(res)


def elementary_field(t: ExoticAromaticTree, f: PolyVectorField):
    """``F_d(t)(f)`` as polynomials (a field, or one polynomial for multi-aromas)."""
    d = f.dimension
    cache: dict = {}

    def value(i, alpha):
        key = (i, alpha)
        if key not in cache:
            cache[key] = f.components[i].derivative(*alpha)
        return cache[key]

    one = Polynomial.constant(d, Fraction(1))
    res = contract(t, d, value, one, Polynomial(d))
    return res if not t.rooted else PolyVectorField(tuple(res))


# -- symbolic form -----------------------------------------------------------

_SYMBOLS = "ijklmnpqrstuvwabcdeghoyz"


@dataclass(frozen=True)
class Factor:
    vertex: int
    upper: str
    lowers: tuple[str, ...]


@dataclass(frozen=True)
class IndexExpression:
    factors: tuple[Factor, ...]
    output: str | None  # None for multi-aromas

    def symbols(self) -> list[str]:
        out = []
        for fac in self.factors:
            out.append(fac.upper)
            out.extend(fac.lowers)
        if self.output is not None:
            out.append(self.output)
        return out

    def render(self, style: str = "plain") -> str:
        parts = []
        for fac in self.factors:
            low = "".join(fac.lowers)
            if style == "latex":
                parts.append(f"f^{{{fac.upper}}}" + (f"_{{{low}}}" if low else ""))
            else:
                parts.append(f"f^{fac.upper}" + (f"_{low}" if low else ""))
        if self.output is not None:
            parts.append(f"\\partial_{{{self.output}}}" if style == "latex" else f"∂_{self.output}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "factors": [{"vertex": f.vertex, "upper": f.upper, "lowers": list(f.lowers)} for f in self.factors],
            "output": self.output,
        }

    def __str__(self):
        return self.render()


def _factor_order(t: ExoticAromaticTree, pos: dict[int, int]) -> list[int]:
    """Depth-first walk from the root: stolon partner, sources of in-arrows, then successor."""
    seen: list[int] = []

    def neighbours(v):
        out = []
        p = t.partner[v]
        if t.is_vertex(p):
            out.append(p)
        for a in sorted(t.in_arrows[v], key=pos.get):
            q = t.partner[a]
            if q == 0:
                continue
            out.append(q if t.is_vertex(q) else t.target(q))
        if 1 <= p <= t.num_arrows:
            out.append(t.target(p))
        return out

    def visit(v):
        if v in seen:
            return
        seen.append(v)
        for w in neighbours(v):
            visit(w)

    if t.rooted:
        p = t.partner[0]
        visit(p if t.is_vertex(p) else t.target(p))
    for v in sorted(t.vertex_elements, key=pos.get):
        visit(v)
    return seen


def symbolic_form(t: ExoticAromaticTree) -> IndexExpression:
    """Index notation with ``i`` on the root pair and ``j, k, l, ...`` after it."""
    pos = canonical_position(t)
    cls = {}
    for k, (a, b) in enumerate(t.sigma_pairs):
        cls[a] = cls[b] = k
    names: dict[int, str] = {}
    pool = iter(_SYMBOLS if not t.rooted else _SYMBOLS[1:])
    if t.rooted:
        names[cls[0]] = "i"

    def name(c):
        if c not in names:
            names[c] = next(pool)
        return names[c]

    factors = []
    for v in _factor_order(t, pos):
        upper = name(cls[v])
        lows = [name(cls[a]) for a in sorted(t.in_arrows[v], key=pos.get)]
        factors.append(Factor(t.element_vertex(v), upper, tuple(sorted(lows, key=_SYMBOLS.index))))
    return IndexExpression(tuple(factors), "i" if t.rooted else None)


def render_symbolic(t: ExoticAromaticTree, style: str = "plain") -> str:
    return symbolic_form(t).render(style)


_FACTOR_RE = re.compile(r"f\^\{?([a-z])\}?(?:_\{?([a-z]+)\}?)?")
_ROOT_RE = re.compile(r"(?:∂|\\partial|d)_\{?([a-z])\}?")


def parse_symbolic(text: str) -> ExoticAromaticTree:
    """Read index notation such as ``f^i_j f^j_kk ∂_i`` back into a tree.

    Every index must occur exactly twice; the two slots it occupies form a
    sigma pair (upper slot = the vertex, lower slot = a fresh arrow into that
    factor, ``∂`` slot = the ghost arrow).
    """
    text = text.strip()
    spans = []
    for m in _FACTOR_RE.finditer(text):
        spans.append(("f", m))
    for m in _ROOT_RE.finditer(text):
        spans.append(("d", m))
    spans.sort(key=lambda s: s[1].start())
    leftover = text
    for _, m in spans:
        leftover = leftover.replace(m.group(0), " ", 1)
    if leftover.strip():
        raise InvalidTree(f"unrecognised text {leftover.strip()!r} in {text!r}")
    occurrences: dict[str, list] = {}
    tau: list[int] = []
    rooted = False
    n_v = 0
    for kind, m in spans:
        if kind == "d":
            if rooted:
                raise InvalidTree("more than one output index")
            rooted = True
            occurrences.setdefault(m.group(1), []).append("a0")
            continue
        n_v += 1
        occurrences.setdefault(m.group(1), []).append(n_v)
        for s in m.group(2) or "":
            tau.append(n_v)
            occurrences.setdefault(s, []).append(f"a{len(tau)}")
    bad = {s: len(o) for s, o in occurrences.items() if len(o) != 2}
    if bad:
        raise InvalidTree(f"indices must appear exactly twice, got {bad}")
    return ExoticAromaticTree.from_sigma(n_v, tau, list(occurrences.values()), rooted=rooted)


# -- truncated series --------------------------------------------------------


@dataclass
class TruncatedSeries:
    """Finitely supported coefficient map on trees, keyed by canonical encoding."""

    coefficients: dict[bytes, Fraction] = field(default_factory=dict)
    trees: dict[bytes, ExoticAromaticTree] = field(default_factory=dict)
    node_bound: int | None = None

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[ExoticAromaticTree, object]], node_bound: int | None = None):
        s = cls(node_bound=node_bound)
        for t, c in terms:
            s.add(t, c)
        return s

    def add(self, t: ExoticAromaticTree, coefficient) -> None:
        if self.node_bound is not None and t.num_vertices > self.node_bound:
            raise ValueError(f"tree with {t.num_vertices} nodes exceeds node_bound={self.node_bound}")
        key = canonical_form(t)
        self.trees.setdefault(key, t)
        self.coefficients[key] = self.coefficients.get(key, Fraction(0)) + Fraction(coefficient)

    def graded(self, by: str = "nodes") -> dict[int, list[tuple[ExoticAromaticTree, Fraction]]]:
        """Group terms by node count (default) or by order."""
        out: dict[int, list] = {}
        for key, c in sorted(self.coefficients.items()):
            t = self.trees[key]
            grade = t.num_vertices if by == "nodes" else t.order
            out.setdefault(grade, []).append((t, c))
        return out

    def evaluate(self, f: PolyVectorField, x: Sequence, h=None) -> tuple:
        return series_evaluate(self, f, x, h)


def series_evaluate(b: TruncatedSeries, f: PolyVectorField, x: Sequence, h=None) -> tuple:
    """``sum_gamma b(gamma) F_d(gamma)(f)(x)``, terms weighted by ``h**order`` if ``h`` is given."""
    d = f.dimension
    if len(x) != d:
        raise DimensionMismatch(f"point has {len(x)} coordinates, field dimension is {d}")
    total = [Fraction(0)] * d
    for key in sorted(b.coefficients):
        c = b.coefficients[key]
        if c == 0:
            continue
        t = b.trees[key]
        if not t.rooted:
            raise InvalidTree("series terms must be rooted trees")
        if h is not None:
            c = c * Fraction(h) ** t.order
        val = elementary_differential(t, f, x)
        total = [s + c * v for s, v in zip(total, val)]
    return tuple(total)


# -- injectivity on a span of trees -----------------------------------------


def evaluation_matrix(trees: Sequence[ExoticAromaticTree], d: int, samples: int, rng: random.Random) -> list[list]:
    """One row per tree: its values on ``samples`` random (field, point) pairs.

    Field degree is at least the largest in-degree so no tree vanishes
    identically for a trivial reason.
    """
    degree = max([2] + [t.in_degree(v) + 1 for t in trees for v in t.vertex_elements])
    rows: list[list] = [[] for _ in trees]
    for _ in range(samples):
        f = random_field(rng, d, degree, 0.6)
        x = random_point(rng, d)
        for row, t in zip(rows, trees):
            val = elementary_differential(t, f, x)
            row.extend(val if t.rooted else (val,))
    return rows


def span_rank(trees: Sequence[ExoticAromaticTree], d: int, *, extra: int = 4, seed: int = 0, retries: int = 3) -> int:
    """Exact rank of ``F_d`` restricted to ``trees``, sampled with ``len(trees) + extra`` columns.

    A deficient sample is retried with fresh seeds; the best rank seen is
    returned, so a deficiency that survives every retry is structural.
    """
    best = 0
    for attempt in range(retries):
        rng = random.Random(f"rank/{seed}/{d}/{attempt}")
        best = max(best, exact_rank(evaluation_matrix(trees, d, len(trees) + extra, rng)))
        if best == len(trees):
            break
    return best
