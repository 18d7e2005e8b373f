"""Theta-parametrised dual vector fields and the duality pairing.

A host graph gets one coordinate per sigma pair (root pair first).  Its dual
field has one theta per plain vertex, one per stolon endpoint and one per
non-ghost liana arrow.  Pairing a tree ``gamma`` with a host means: evaluate
``F(gamma)`` on the host's dual field, keep the first component at ``x = 0``,
and read off the coefficient of the product of the thetas that ``gamma``
itself would carry.  That coefficient is extracted exactly, never by
numerical differentiation.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from eatrees.canonical import canonical_form, canonical_tree
from eatrees.elementary import contract
from eatrees.polyfield import Polynomial, PolyVectorField, exact_rank, factorial_of_multi_index
from eatrees.tree import ExoticAromaticTree, connected_components


@dataclass(frozen=True, order=True)
class ThetaIndex:
    kind: str  # "V" plain vertex, "S" stolon endpoint, "L" liana arrow
    index: int

    def __str__(self):
        return f"θ{self.kind}{self.index}"


_KIND_ORDER = {"V": 0, "S": 1, "L": 2}


@dataclass(frozen=True)
class OrderedHost:
    """A host graph with an explicit order on its aromas (rooted part first)."""

    rooted: ExoticAromaticTree | None
    aromas: tuple[ExoticAromaticTree, ...]

    @classmethod
    def of(cls, t: ExoticAromaticTree) -> "OrderedHost":
        """Split ``t``; aromas are ordered by canonical encoding."""
        rooted, aromas = connected_components(t)
        return cls(rooted, aromas)

    def blocks(self) -> list[ExoticAromaticTree]:
        return ([self.rooted] if self.rooted is not None else []) + list(self.aromas)


Host = Union[ExoticAromaticTree, OrderedHost]


def attach(gamma: ExoticAromaticTree, mu: ExoticAromaticTree) -> OrderedHost:
    """The host ``mu gamma`` with gamma's aromas numbered before mu's."""
    base = OrderedHost.of(gamma)
    extra = OrderedHost.of(mu)
    if extra.rooted is not None:
        raise ValueError("mu must be a multi-aroma")
    return OrderedHost(base.rooted, base.aromas + extra.aromas)


@dataclass(frozen=True)
class DualTerm:
    thetas: tuple[ThetaIndex, ...]
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class DualField:
    """Dual field: each component is a sum of ``prod(theta) * x^exponents`` terms."""

    dimension: int
    components: tuple[tuple[DualTerm, ...], ...]
    coordinates: tuple[tuple[str, int], ...]  # (kind, block); kind in root/node/loop/stolon/liana
    parameters: tuple[ThetaIndex, ...]

    def specialize(self, values: Mapping[ThetaIndex, object] | None = None, default=1) -> PolyVectorField:
        """Fix every theta (missing ones take ``default``) and return an exact field."""
        values = values or {}
        d = self.dimension
        comps = []
        for terms in self.components:
            poly: dict[tuple[int, ...], Fraction] = {}
            for term in terms:
                c = Fraction(1)
                for th in term.thetas:
                    c *= Fraction(values.get(th, default))
                poly[term.exponents] = poly.get(term.exponents, Fraction(0)) + c
            comps.append(Polynomial(d, poly))
        return PolyVectorField(tuple(comps))

    def component_string(self, i: int) -> str:
        terms = self.components[i]
        if not terms:
            return "0"
        pieces = []
        for term in terms:
            mono = [str(th) for th in term.thetas]
            mono += [f"x{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(term.exponents) if e]
            pieces.append("*".join(mono) or "1")
        return " + ".join(pieces)

    def __str__(self):
        return "(" + ", ".join(self.component_string(i) for i in range(self.dimension)) + ")"


def _block_classes(t: ExoticAromaticTree):
    """Sigma pairs of a canonical component in coordinate order."""
    root, nodes, stolons, lianas = [], [], [], []
    for a, b in t.sigma_pairs:
        if t.rooted and a == 0:
            root.append((a, b))
        elif t.is_vertex(a):
            stolons.append((a, b))
        elif t.is_vertex(b):
            nodes.append((b, a))  # (vertex, arrow), ordered by vertex
        else:
            lianas.append((a, b))
    nodes.sort()
    return root, nodes, stolons, lianas


def dual_field(host: Host) -> DualField:
    """Dual vector field of a tree or multi-aroma.

    Components are numbered block by block (rooted component, then aromas in
    the host's order).  Inside a block the root pair comes first, then plain
    vertices, stolons and lianas, each by canonical position.  Liana
    coordinates carry the zero component.
    """
    oh = host if isinstance(host, OrderedHost) else OrderedHost.of(host)
    blocks = [canonical_tree(b) for b in oh.blocks()]

    coords: list[tuple[str, int]] = []
    cls_of: list[dict[int, int]] = []
    layout = []
    for bi, t in enumerate(blocks):
        root, nodes, stolons, lianas = _block_classes(t)
        mapping: dict[int, int] = {}
        entries = []
        for pair in root:
            kind = "root"
            entries.append((kind, pair))
        entries += [("loop" if p[0] in t.loop_vertices else "node", p) for p in nodes]
        entries += [("stolon", p) for p in stolons]
        entries += [("liana", p) for p in lianas]
        for kind, pair in entries:
            idx = len(coords)
            coords.append((kind, bi))
            mapping[pair[0]] = mapping[pair[1]] = idx
        cls_of.append(mapping)
        layout.append(entries)

    # theta numbering per kind, in coordinate order across all blocks
    counters = {"V": 0, "S": 0, "L": 0}
    theta_v: list[dict[int, ThetaIndex]] = []
    theta_s: list[dict[int, ThetaIndex]] = []
    theta_l: list[dict[int, ThetaIndex]] = []
    params: list[ThetaIndex] = []

    def fresh(kind):
        counters[kind] += 1
        th = ThetaIndex(kind, counters[kind])
        params.append(th)
        return th

    for t, entries in zip(blocks, layout):
        tv, ts, tl = {}, {}, {}
        for kind, (x, y) in entries:
            if kind == "root":
                if t.is_vertex(y):
                    tv[y] = fresh("V")
                else:
                    tl[y] = fresh("L")
            elif kind in ("node", "loop"):
                tv[x] = fresh("V")
            elif kind == "stolon":
                ts[x] = fresh("S")
                ts[y] = fresh("S")
            else:
                tl[x] = fresh("L")
                tl[y] = fresh("L")
        theta_v.append(tv)
        theta_s.append(ts)
        theta_l.append(tl)

    d = len(coords)
    comps: list[tuple[DualTerm, ...]] = [() for _ in range(d)]

    def term_for(bi, t, v, lead):
        thetas = [lead]
        exps = [0] * d
        for a in t.in_arrows[v]:
            exps[cls_of[bi][a]] += 1
            if a in theta_l[bi]:
                thetas.append(theta_l[bi][a])
        return DualTerm(tuple(sorted(thetas, key=lambda th: (_KIND_ORDER[th.kind], th.index))), tuple(exps))

    for bi, (t, entries) in enumerate(zip(blocks, layout)):
        for kind, (x, y) in entries:
            idx = cls_of[bi][x]
            if kind == "root" and t.is_vertex(y):
                comps[idx] = (term_for(bi, t, y, theta_v[bi][y]),)
            elif kind in ("node", "loop"):
                comps[idx] = (term_for(bi, t, x, theta_v[bi][x]),)
            elif kind == "stolon":
                comps[idx] = (term_for(bi, t, x, theta_s[bi][x]), term_for(bi, t, y, theta_s[bi][y]))
    return DualField(d, tuple(comps), tuple(coords), tuple(params))


def theta_signature(gamma: Host) -> tuple[int, int, int]:
    """Number of (plain-vertex, stolon-endpoint, liana-arrow) thetas of ``gamma``."""
    t = gamma if isinstance(gamma, ExoticAromaticTree) else _flatten(gamma)
    n_s = 2 * len(t.stolons)
    n_l = sum(2 - (a == 0) for a, _ in t.lianas)
    return t.num_vertices - n_s, n_s, n_l


def _flatten(host: OrderedHost) -> ExoticAromaticTree:
    from eatrees.tree import join

    return join(host.blocks())


class _Multilinear:
    """Polynomials in a fixed set of thetas, truncated to square-free monomials.

    Monomials are bitmasks over the tracked thetas.  A product that would
    repeat a theta is dropped: it cannot contribute to the coefficient of the
    full square-free monomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return _Multilinear(out)

    def __mul__(self, other):
        out: dict[int, Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                if not k1 & k2:
                    k = k1 | k2
                    out[k] = out.get(k, 0) + v1 * v2
        return _Multilinear(out)


def _first_component(gamma: ExoticAromaticTree, result):
    return result if not gamma.rooted else result[0]


def pairing(gamma: ExoticAromaticTree, hat: Host, *, theta: bool = True) -> Fraction:
    """Coefficient of ``prod(theta^gamma)`` in ``F(gamma)(dual_field(hat))^1`` at ``x = 0``.

    With ``theta=False`` every theta is set to 1 and the plain value
    ``F(gamma)(f^(1))^1(0)`` is returned instead.  When ``gamma`` needs more
    thetas of some kind than ``hat`` provides, the coefficient is 0.
    """
    field = dual_field(hat)
    d = field.dimension
    if not theta:
        from eatrees.elementary import elementary_differential

        val = elementary_differential(gamma, field.specialize(), (Fraction(0),) * d)
        return Fraction(_first_component(gamma, val))

    n_v, n_s, n_l = theta_signature(gamma)
    needed = [ThetaIndex("V", k) for k in range(1, n_v + 1)]
    needed += [ThetaIndex("S", k) for k in range(1, n_s + 1)]
    needed += [ThetaIndex("L", k) for k in range(1, n_l + 1)]
    available = set(field.parameters)
    if any(th not in available for th in needed):
        return Fraction(0)
    bit = {th: 1 << i for i, th in enumerate(needed)}
    full = (1 << len(needed)) - 1

    cache: dict = {}

    def value(i, alpha):
        key = (i, alpha)
        if key in cache:
            return cache[key]
        exps = [0] * d
        for a in alpha:
            exps[a] += 1
        exps = tuple(exps)
        out: dict[int, Fraction] = {}
        for term in field.components[i]:
            if term.exponents != exps:
                continue
            if any(th not in bit for th in term.thetas):
                continue
            mask = 0
            for th in term.thetas:
                mask |= bit[th]
            out[mask] = out.get(mask, 0) + Fraction(factorial_of_multi_index(alpha))
        cache[key] = _Multilinear(out)
        return cache[key]

    res = contract(gamma, d, value, _Multilinear({0: Fraction(1)}), _Multilinear())
    return _first_component(gamma, res).terms.get(full, Fraction(0))


def dual_value(gamma: ExoticAromaticTree, hat: Host) -> tuple[Polynomial, list[ThetaIndex]]:
    """Full theta-polynomial ``F(gamma)(dual_field(hat))^1(0)`` with its variable list."""
    field = dual_field(hat)
    d = field.dimension
    names = list(field.parameters)
    pos = {th: i for i, th in enumerate(names)}
    nv = len(names)

    def value(i, alpha):
        exps = [0] * d
        for a in alpha:
            exps[a] += 1
        exps = tuple(exps)
        out: dict[tuple[int, ...], Fraction] = {}
        for term in field.components[i]:
            if term.exponents == exps:
                key = [0] * nv
                for th in term.thetas:
                    key[pos[th]] += 1
                key = tuple(key)
                out[key] = out.get(key, 0) + Fraction(factorial_of_multi_index(alpha))
        return Polynomial(nv, out)

    res = contract(gamma, d, value, Polynomial.constant(nv, Fraction(1)), Polynomial(nv))
    return _first_component(gamma, res), names


def format_theta_polynomial(p: Polynomial, names: Sequence[ThetaIndex]) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for k in sorted(p.terms):
        c = p.terms[k]
        mono = "*".join(f"{names[i]}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(k) if e)
        coef = "" if c == 1 and mono else f"{c}" + ("*" if mono else "")
        pieces.append(coef + mono)
    return " + ".join(pieces)


def _pair_entry(args):
    g, h = args
    return pairing(g, h)


def pairing_matrix(trees: Sequence[ExoticAromaticTree], workers: int | None = None) -> list[list[Fraction]]:
    """``M[i][j] = pairing(trees[i], trees[j])``; entries run in parallel when ``workers > 1``."""
    jobs = [(g, h) for g in trees for h in trees]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_pair_entry, jobs, chunksize=16))
    else:
        flat = [_pair_entry(j) for j in jobs]
    n = len(trees)
    return [flat[i * n:(i + 1) * n] for i in range(n)]


@dataclass(frozen=True)
class IndependenceCertificate:
    trees: tuple[ExoticAromaticTree, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    rank: int
    diagonal: bool
    upper_triangular: bool

    @property
    def independent(self) -> bool:
        return self.rank == len(self.trees)

    @property
    def diagonal_entries(self) -> tuple[Fraction, ...]:
        return tuple(self.matrix[i][i] for i in range(len(self.trees)))


def independence_certificate(trees: Sequence[ExoticAromaticTree], workers: int | None = None) -> IndependenceCertificate:
    """Pairing matrix of distinct trees, rows/columns sorted by (order, encoding).

    A nonzero entry (i, j) needs tree j to be tree i times a multi-aroma, so
    the sorted matrix is upper triangular; connected trees give a diagonal
    matrix of symmetry coefficients.
    """
    keys = [canonical_form(t) for t in trees]
    if len(set(keys)) != len(keys):
        raise ValueError("trees must be pairwise non-isomorphic")
    ordered = sorted(trees, key=lambda t: (t.order, canonical_form(t)))
    m = pairing_matrix(ordered, workers)
    n = len(ordered)
    diag = all(m[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    upper = all(m[i][j] == 0 for i in range(n) for j in range(i))
    diag_ok = all(m[i][i] != 0 for i in range(n))
    rank = n if (upper and diag_ok) else exact_rank(m)
    return IndependenceCertificate(tuple(ordered), tuple(map(tuple, m)), rank, diag, upper)

