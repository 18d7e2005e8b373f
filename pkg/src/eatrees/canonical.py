"""Canonical labelling, isomorphism and automorphism counts.

Individualisation-refinement over ordered partitions of the element set.  The
search is never pruned, so every leaf carrying the minimal certificate is the
image of the canonical labelling under exactly one automorphism; counting
those leaves gives the symmetry coefficient.  Graphs stay below ~12 elements
through order 4, which keeps the full search cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from eatrees.tree import ExoticAromaticTree


@dataclass(frozen=True)
class Labelling:
    certificate: tuple
    order: tuple[int, ...]   # elements listed in canonical position
    automorphisms: int


def _partner_kind(t: ExoticAromaticTree, e: int) -> int:
    p = t.partner[e]
    if p == 0:
        return 0
    return 2 if t.is_vertex(p) else 1


def _initial_keys(t: ExoticAromaticTree) -> dict[int, tuple]:
    keys = {}
    for e in t.elements:
        if e == 0:
            keys[e] = (0,)
        elif t.is_arrow(e):
            keys[e] = (1, _partner_kind(t, e))
        else:
            keys[e] = (2, t.in_degree(e), _partner_kind(t, e))
    return keys


def _cells_from_keys(keys: dict[int, tuple]) -> list[list[int]]:
    groups: dict[tuple, list[int]] = {}
    for e, k in keys.items():
        groups.setdefault(k, []).append(e)
    return [sorted(groups[k]) for k in sorted(groups)]


def _refine(t: ExoticAromaticTree, cells: list[list[int]]) -> list[list[int]]:
    while True:
        cell_of = {e: i for i, c in enumerate(cells) for e in c}
        keys = {}
        for e in cell_of:
            p = t.partner[e]
            if t.is_vertex(e):
                extra = tuple(sorted(cell_of[a] for a in t.in_arrows[e]))
            elif e == 0:
                extra = ()
            else:
                extra = (cell_of[t.target(e)],)
            keys[e] = (cell_of[e], cell_of[p], extra)
        new_cells = _cells_from_keys(keys)
        if len(new_cells) == len(cells):
            return cells
        cells = new_cells


def _certificate(t: ExoticAromaticTree, order: list[int]) -> tuple:
    pos = {e: i for i, e in enumerate(order)}
    return tuple(
        (pos[t.partner[e]], pos[t.target(e)] if 1 <= e <= t.num_arrows else -1) for e in order
    )


def _search(t: ExoticAromaticTree) -> Labelling:
    best_cert = None
    best_order: list[int] = []
    count = 0

    def visit(cells):
        nonlocal best_cert, best_order, count
        cells = _refine(t, cells)
        split = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if split is None:
            order = [c[0] for c in cells]
            cert = _certificate(t, order)
            if best_cert is None or cert < best_cert:
                best_cert, best_order, count = cert, order, 1
            elif cert == best_cert:
                count += 1
            return
        cell = cells[split]
        for x in cell:
            rest = [y for y in cell if y != x]
            visit(cells[:split] + [[x], rest] + cells[split + 1:])

    visit(_cells_from_keys(_initial_keys(t)))
    header = (t.rooted, t.num_vertices, t.num_arrows)
    return Labelling((header, best_cert), tuple(best_order), count)


@lru_cache(maxsize=1 << 16)
def labelling(t: ExoticAromaticTree) -> Labelling:
    return _search(t)


def canonical_tree(t: ExoticAromaticTree) -> ExoticAromaticTree:
    """The isomorphic copy of ``t`` numbered by canonical position."""
    lab = labelling(t)
    offset = 0 if t.rooted else 1
    pos = {e: i + offset for i, e in enumerate(lab.order)}
    partner = [-1] * t.size
    for e in t.elements:
        partner[pos[e]] = pos[t.partner[e]]
    tau = [0] * t.num_arrows
    for a in range(1, t.num_arrows + 1):
        tau[pos[a] - 1] = pos[t.target(a)] - t.num_arrows
    return ExoticAromaticTree(t.num_vertices, tuple(tau), tuple(partner), t.rooted)


@lru_cache(maxsize=1 << 16)
def canonical_form(t: ExoticAromaticTree) -> bytes:
    """Deterministic byte encoding; equal exactly for isomorphic graphs.

    Isomorphisms map vertices to vertices and arrows to arrows, commute with
    sigma and tau and fix the ghost arrow.
    """
    c = canonical_tree(t)
    head = "T" if c.rooted else "M"
    tau = ",".join(map(str, c.tau))
    partner = ",".join(str(p) for p in c.partner[(0 if c.rooted else 1):])
    return f"{head}{c.num_vertices}.{c.num_arrows}|{tau}|{partner}".encode("ascii")


def is_isomorphic(s: ExoticAromaticTree, t: ExoticAromaticTree) -> bool:
    return canonical_form(s) == canonical_form(t)


def symmetry_coefficient(t: ExoticAromaticTree) -> int:
    """Number of structure-preserving bijections (ghost arrow fixed)."""
    return labelling(t).automorphisms


def canonical_position(t: ExoticAromaticTree) -> dict[int, int]:
    """Element -> canonical position for one labelling attaining the certificate."""
    return {e: i for i, e in enumerate(labelling(t).order)}
