"""Exotic aromatic trees as (V, A0, sigma, tau) graphs.

A tree is stored on a flat element index:

* ``0`` is the ghost arrow (only present when ``rooted``),
* ``1 .. num_arrows`` are the ordinary arrows,
* ``num_arrows + 1 .. num_arrows + num_vertices`` are the vertices.

``partner`` is the source involution on that index set and ``tau`` holds the
target vertex (1-based) of every ordinary arrow.  Multi-aromas are the same
structure with ``rooted=False``; slot 0 is then unused and ``partner[0] == -1``.

Outside of this module elements are written the way the literature writes
them: vertices as positive ints and arrows as strings ``"a0"``, ``"a1"``, ...
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

Label = Union[int, str]


class InvalidTree(ValueError):
    """Base class for structural errors raised by :func:`validate`."""


class FixedPointInSigma(InvalidTree):
    pass


class NonInvolutiveSigma(InvalidTree):
    pass


class UncoveredElement(InvalidTree):
    pass


class TauOutOfRange(InvalidTree):
    pass


class TauDefinedOnArrowZero(InvalidTree):
    pass


def parse_label(label: Label) -> tuple[str, int]:
    """Return ``("v", k)`` or ``("a", k)`` for a vertex int or an arrow string."""
    if isinstance(label, bool):
        raise InvalidTree(f"bad element label {label!r}")
    if isinstance(label, int):
        if label < 1:
            raise InvalidTree(f"vertex labels start at 1, got {label}")
        return ("v", label)
    if isinstance(label, str):
        s = label.strip()
        if s.startswith("a") and s[1:].isdigit():
            return ("a", int(s[1:]))
        if s.isdigit():
            return parse_label(int(s))
    raise InvalidTree(f"bad element label {label!r}")


def format_label(kind: str, index: int) -> Label:
    return index if kind == "v" else f"a{index}"


@dataclass(frozen=True)
class Composition:
    """Finite-support map ``j -> kappa(j)``, stored without trailing zeros."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError("composition entries must be non-negative")
        while counts and counts[-1] == 0:
            counts = counts[:-1]
        object.__setattr__(self, "counts", counts)

    @classmethod
    def parse(cls, text: str) -> "Composition":
        text = text.strip().strip("()")
        return cls(tuple(int(p) for p in text.split(",") if p.strip()))

    def __getitem__(self, j: int) -> int:
        return self.counts[j] if 0 <= j < len(self.counts) else 0

    @property
    def size(self) -> int:
        """``|kappa|``, the number of vertices."""
        return sum(self.counts)

    @property
    def derived(self) -> tuple[int, ...]:
        """``kappa'(j) = j * kappa(j)``."""
        return tuple(j * c for j, c in enumerate(self.counts))

    @property
    def derived_size(self) -> int:
        """``|kappa'|``, the number of ordinary arrows."""
        return sum(self.derived)

    @property
    def order(self) -> int | None:
        """Order of every tree with this composition, or None on odd parity."""
        total = self.size + self.derived_size + 1
        return total // 2 if total % 2 == 0 else None

    def in_degrees(self) -> list[int]:
        """In-degrees of the vertices in non-increasing order."""
        degs: list[int] = []
        for j in range(len(self.counts) - 1, -1, -1):
            degs.extend([j] * self.counts[j])
        return degs

    def standard_tau(self) -> tuple[int, ...]:
        """Target map with vertices by non-increasing in-degree, arrows consecutive."""
        tau: list[int] = []
        for v, deg in enumerate(self.in_degrees(), start=1):
            tau.extend([v] * deg)
        return tuple(tau)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in (self.counts or (0,))) + ")"


@dataclass(frozen=True)
class ClassificationFlags:
    is_aromatic: bool
    is_connected: bool
    is_exotic_tree: bool
    is_butcher_tree: bool
    has_liana: bool
    has_stolon: bool
    has_loop: bool


@dataclass(frozen=True)
class ExoticAromaticTree:
    """An exotic aromatic tree (``rooted=True``) or a multi-aroma.

    Construct through :meth:`from_sigma`, :func:`validate` or
    :func:`eatrees.elementary.parse_symbolic`; the raw constructor trusts its
    input.
    """

    num_vertices: int
    tau: tuple[int, ...]
    partner: tuple[int, ...]
    rooted: bool = True

    @classmethod
    def from_sigma(
        cls,
        num_vertices: int,
        tau: Sequence[int],
        sigma: Iterable[Sequence[Label]],
        rooted: bool = True,
    ) -> "ExoticAromaticTree":
        """Build and validate a tree from labelled sigma pairs.

        >>> t = ExoticAromaticTree.from_sigma(1, (1, 1), [("a0", 1), ("a1", "a2")])
        >>> t.order
        2
        """
        num_arrows = len(tau)
        raw = {
            "vertices": num_vertices,
            "arrows": num_arrows + 1 if rooted else num_arrows,
            "tau": list(tau),
            "sigma": [list(p) for p in sigma],
            "rooted": rooted,
        }
        return validate(raw)

    # -- element bookkeeping -------------------------------------------------

    @property
    def num_arrows(self) -> int:
        """Number of ordinary arrows ``|A|`` (the ghost arrow excluded)."""
        return len(self.tau)

    @property
    def size(self) -> int:
        return len(self.partner)

    @property
    def elements(self) -> range:
        return range(0 if self.rooted else 1, self.size)

    def is_vertex(self, e: int) -> bool:
        return e > self.num_arrows

    def is_arrow(self, e: int) -> bool:
        return e <= self.num_arrows

    def vertex_element(self, v: int) -> int:
        return self.num_arrows + v

    def element_vertex(self, e: int) -> int:
        return e - self.num_arrows

    def target(self, a: int) -> int:
        """Flat index of the target vertex of ordinary arrow ``a``."""
        return self.num_arrows + self.tau[a - 1]

    def label(self, e: int) -> Label:
        if self.is_vertex(e):
            return self.element_vertex(e)
        return f"a{e}"

    @property
    def vertex_elements(self) -> range:
        return range(self.num_arrows + 1, self.size)

    @cached_property
    def in_arrows(self) -> dict[int, tuple[int, ...]]:
        """Map vertex element -> ordinary arrows pointing at it."""
        table: dict[int, list[int]] = {v: [] for v in self.vertex_elements}
        for a in range(1, self.num_arrows + 1):
            table[self.target(a)].append(a)
        return {v: tuple(arrs) for v, arrs in table.items()}

    @cached_property
    def sigma_pairs(self) -> tuple[tuple[int, int], ...]:
        """Sigma pairs on flat indices, each as (smaller, larger), sorted."""
        return tuple(sorted((e, p) for e in self.elements if (p := self.partner[e]) > e))

    def sigma_labels(self) -> list[tuple[Label, Label]]:
        return [(self.label(a), self.label(b)) for a, b in self.sigma_pairs]

    def in_degree(self, v: int) -> int:
        return len(self.in_arrows[v])

    # -- structure -----------------------------------------------------------

    @property
    def composition(self) -> Composition:
        degs = [self.in_degree(v) for v in self.vertex_elements]
        counts = [0] * (max(degs, default=0) + 1)
        for d in degs:
            counts[d] += 1
        return Composition(tuple(counts))

    @cached_property
    def stolons(self) -> tuple[tuple[int, int], ...]:
        return tuple(p for p in self.sigma_pairs if self.is_vertex(p[0]))

    @cached_property
    def lianas(self) -> tuple[tuple[int, int], ...]:
        """Arrow-arrow pairs, the ghost liana included."""
        return tuple(p for p in self.sigma_pairs if self.is_arrow(p[1]))

    @property
    def order(self) -> int:
        return self.num_vertices + len(self.lianas) - len(self.stolons)

    @property
    def root(self) -> int | None:
        """Flat index of the root vertex, None for ghost lianas and aromas."""
        if not self.rooted:
            return None
        p = self.partner[0]
        return p if self.is_vertex(p) else None

    @cached_property
    def successor(self) -> dict[int, int]:
        """Standard edges ``v -> tau(sigma(v))`` for vertices paired with an ordinary arrow."""
        succ = {}
        for v in self.vertex_elements:
            a = self.partner[v]
            if 1 <= a <= self.num_arrows:
                succ[v] = self.target(a)
        return succ

    @cached_property
    def loop_vertices(self) -> frozenset[int]:
        """Vertices lying on a directed cycle of standard edges (1-loops included)."""
        on_loop: set[int] = set()
        for start in self.vertex_elements:
            seen = []
            v = start
            while v in self.successor and v not in seen:
                seen.append(v)
                v = self.successor[v]
            if v in seen:
                on_loop.update(seen[seen.index(v):])
        return frozenset(on_loop)

    @cached_property
    def component_of(self) -> dict[int, int]:
        """Connected component id per element (ids ordered by smallest element)."""
        parent = {e: e for e in self.elements}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        for e in self.elements:
            union(e, self.partner[e])
        for a in range(1, self.num_arrows + 1):
            union(a, self.target(a))
        roots = sorted({find(e) for e in self.elements})
        ids = {r: i for i, r in enumerate(roots)}
        return {e: ids[find(e)] for e in self.elements}

    @property
    def num_components(self) -> int:
        return len(set(self.component_of.values()))

    def classify(self) -> ClassificationFlags:
        has_liana = bool(self.lianas)
        has_stolon = bool(self.stolons)
        has_loop = bool(self.loop_vertices)
        connected = self.num_components <= 1
        exotic = self.rooted and self.root is not None and not has_stolon and not has_loop
        return ClassificationFlags(
            is_aromatic=not has_liana and not has_stolon,
            is_connected=connected,
            is_exotic_tree=exotic,
            is_butcher_tree=exotic and not has_liana,
            has_liana=has_liana,
            has_stolon=has_stolon,
            has_loop=has_loop,
        )

    def subgraph(self, elements: Iterable[int]) -> "ExoticAromaticTree":
        """Restrict to a sigma/tau-closed element set, renumbering contiguously."""
        keep = set(elements)
        rooted = 0 in keep
        arrows = sorted(e for e in keep if 1 <= e <= self.num_arrows)
        vertices = sorted(e for e in keep if self.is_vertex(e))
        new: dict[int, int] = {0: 0} if rooted else {}
        for i, a in enumerate(arrows, start=1):
            new[a] = i
        for i, v in enumerate(vertices, start=1):
            new[v] = len(arrows) + i
        tau = tuple(new[self.target(a)] - len(arrows) for a in arrows)
        partner = [-1] * (len(arrows) + len(vertices) + 1)
        for e in keep:
            partner[new[e]] = new[self.partner[e]]
        return ExoticAromaticTree(len(vertices), tau, tuple(partner), rooted)

    def components(self) -> list["ExoticAromaticTree"]:
        """Connected components, the rooted one (if any) first."""
        groups: dict[int, list[int]] = {}
        for e, c in self.component_of.items():
            groups.setdefault(c, []).append(e)
        return [self.subgraph(groups[c]) for c in sorted(groups)]

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": self.num_vertices,
            "arrows": self.num_arrows + 1 if self.rooted else self.num_arrows,
            "tau": list(self.tau),
            "sigma": [list(p) for p in self.sigma_labels()],
            **({} if self.rooted else {"rooted": False}),
        }

    def sigma_string(self) -> str:
        """Cycle notation as used in the tables, e.g. ``(a0,1)(a1,a2)``."""
        return "".join(f"({a},{b})" for a, b in _display_pairs(self))

    def tau_string(self) -> str:
        return "(" + ",".join(str(t) for t in self.tau) + ")" if self.tau else ""

    def __str__(self) -> str:
        kind = "Tree" if self.rooted else "MultiAroma"
        return f"{kind}(V={self.num_vertices}, tau={self.tau_string() or '()'}, sigma={self.sigma_string()})"


def _display_pairs(t: ExoticAromaticTree) -> list[tuple[Label, Label]]:
    # arrows before vertices inside a pair; pairs ordered by their first entry
    out = []
    for a, b in t.sigma_pairs:
        out.append((t.label(a), t.label(b)))
    return out


def validate(raw: dict) -> ExoticAromaticTree:
    """Validate a JSON-style tree encoding and return the tree.

    ``raw`` holds ``vertices`` (|V|), ``arrows`` (number of arrow labels:
    |A0| for rooted trees, |A| for multi-aromas with ``"rooted": false``),
    ``tau`` (targets of arrows 1..|A|, as a list or as a label->vertex dict)
    and ``sigma`` (a list of pairs of labels).
    """
    rooted = bool(raw.get("rooted", True))
    n_v = int(raw["vertices"])
    n_labels = int(raw["arrows"])
    if n_v < 0 or n_labels < (1 if rooted else 0):
        raise InvalidTree("negative sizes or missing ghost arrow")
    n_a = n_labels - 1 if rooted else n_labels

    tau_raw = raw.get("tau", [])
    if isinstance(tau_raw, dict):
        tau_list = [None] * n_a
        for key, target in tau_raw.items():
            kind, k = parse_label(key)
            if kind != "a":
                raise InvalidTree(f"tau key {key!r} is not an arrow")
            if k == 0:
                raise TauDefinedOnArrowZero("the ghost arrow has no target")
            if k > n_a:
                raise TauOutOfRange(f"arrow a{k} does not exist")
            tau_list[k - 1] = target
        if any(t is None for t in tau_list):
            missing = [f"a{k + 1}" for k, t in enumerate(tau_list) if t is None]
            raise UncoveredElement(f"tau undefined on {missing}")
    else:
        tau_list = list(tau_raw)
        if rooted and len(tau_list) == n_a + 1:
            raise TauDefinedOnArrowZero("tau lists |A0| targets; arrow a0 carries none")
        if len(tau_list) != n_a:
            raise InvalidTree(f"tau must list {n_a} targets, got {len(tau_list)}")
    tau = []
    for t in tau_list:
        if isinstance(t, bool) or not isinstance(t, int) or not 1 <= t <= n_v:
            raise TauOutOfRange(f"target {t!r} outside vertices 1..{n_v}")
        tau.append(t)

    def flat(label: Label) -> int:
        kind, k = parse_label(label)
        if kind == "v":
            if k > n_v:
                raise UncoveredElement(f"vertex {k} exceeds |V|={n_v}")
            return n_a + k
        if k == 0 and not rooted:
            raise InvalidTree("multi-aromas have no arrow a0")
        if k > n_a:
            raise UncoveredElement(f"arrow a{k} exceeds the arrow count")
        return k

    size = n_a + n_v + 1
    partner = [-1] * size
    for pair in raw.get("sigma", []):
        if len(pair) != 2:
            raise InvalidTree(f"sigma entry {pair!r} is not a pair")
        x, y = flat(pair[0]), flat(pair[1])
        if x == y:
            raise FixedPointInSigma(f"sigma fixes {pair[0]!r}")
        for e in (x, y):
            if partner[e] != -1:
                raise NonInvolutiveSigma(f"element {_label(e, n_a)!r} appears in two sigma pairs")
        partner[x], partner[y] = y, x
    start = 0 if rooted else 1
    uncovered = [e for e in range(start, size) if partner[e] == -1]
    if uncovered:
        raise UncoveredElement(f"sigma leaves {[_label(e, n_a) for e in uncovered]} unmatched")
    return ExoticAromaticTree(n_v, tuple(tau), tuple(partner), rooted)


def _label(e: int, n_a: int) -> Label:
    return e - n_a if e > n_a else f"a{e}"


def composition(t: ExoticAromaticTree) -> Composition:
    return t.composition


def order(t: ExoticAromaticTree) -> int:
    return t.order


def classify(t: ExoticAromaticTree) -> ClassificationFlags:
    return t.classify()


def connected_components(t: ExoticAromaticTree):
    """Split into the rooted component and the sorted tuple of its aromas.

    The rooted part is None for a multi-aroma input.  Aromas are returned in
    canonical order (sorted by canonical encoding).
    """
    from eatrees.canonical import canonical_form

    parts = t.components()
    rooted = None
    aromas = []
    for p in parts:
        if p.rooted:
            rooted = p
        else:
            aromas.append(p)
    aromas.sort(key=canonical_form)
    return rooted, tuple(aromas)


def join(parts: Sequence[ExoticAromaticTree]) -> ExoticAromaticTree:
    """Disjoint union of at most one rooted tree and any number of aromas."""
    rooted_parts = [p for p in parts if p.rooted]
    if len(rooted_parts) > 1:
        raise InvalidTree("at most one component may carry the ghost arrow")
    ordered = rooted_parts + [p for p in parts if not p.rooted]
    n_a = sum(p.num_arrows for p in ordered)
    n_v = sum(p.num_vertices for p in ordered)
    rooted = bool(rooted_parts)
    partner = [-1] * (n_a + n_v + 1)
    tau: list[int] = []
    a_off = v_off = 0
    for p in ordered:
        def move(e, p=p, a_off=a_off, v_off=v_off):
            if e == 0:
                return 0
            if p.is_vertex(e):
                return n_a + v_off + p.element_vertex(e)
            return a_off + e

        for e in p.elements:
            partner[move(e)] = move(p.partner[e])
        tau.extend(v_off + t for t in p.tau)
        a_off += p.num_arrows
        v_off += p.num_vertices
    return ExoticAromaticTree(n_v, tuple(tau), tuple(partner), rooted)
