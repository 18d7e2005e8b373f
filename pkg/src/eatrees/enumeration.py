"""Enumeration of exotic aromatic trees by composition, order or node count."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from eatrees.canonical import canonical_form
from eatrees.tree import Composition, ExoticAromaticTree


class OddParity(ValueError):
    pass


class MissingOrderBound(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationQuery:
    mode: str  # "by_composition" | "by_order" | "by_nodes"
    composition: Composition | None = None
    order: int | None = None
    nodes: int | None = None
    max_order: int | None = None

    def __post_init__(self):
        if self.mode == "by_nodes" and self.max_order is None:
            raise MissingOrderBound("node-count enumeration needs a max_order bound")

    def run(self) -> list[ExoticAromaticTree]:
        if self.mode == "by_composition":
            return enumerate_by_composition(self.composition)
        if self.mode == "by_order":
            return enumerate_by_order(self.order)
        if self.mode == "by_nodes":
            return enumerate_by_nodes(self.nodes, self.max_order)
        raise ValueError(f"unknown mode {self.mode!r}")


def _partitions(total: int, largest: int) -> Iterator[list[int]]:
    if total == 0:
        yield []
        return
    for part in range(min(total, largest), 0, -1):
        for rest in _partitions(total - part, part):
            yield [part] + rest


def compositions_of_order(n: int) -> list[Composition]:
    """All compositions with ``|kappa| + |kappa'| + 1 = 2n``, sorted lexicographically.

    A vertex of in-degree j contributes ``j + 1`` to ``|kappa| + |kappa'|``, so
    these are the integer partitions of ``2n - 1``.
    """
    if n < 1:
        raise ValueError("order must be positive")
    out = []
    for parts in _partitions(2 * n - 1, 2 * n - 1):
        counts = [0] * max(parts)
        for p in parts:
            counts[p - 1] += 1
        out.append(Composition(tuple(counts)))
    return sorted(out, key=lambda c: c.counts)


def perfect_matchings(elements: list[int]) -> Iterator[list[tuple[int, int]]]:
    """Fixed-point-free involutions on ``elements``, pairing the smallest first."""
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for i, other in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for m in perfect_matchings(remaining):
            yield [(first, other)] + m


def _from_matching(n_v, tau, matching, rooted):
    partner = [-1] * (len(tau) + n_v + 1)
    for x, y in matching:
        partner[x], partner[y] = y, x
    return ExoticAromaticTree(n_v, tau, tuple(partner), rooted)


def enumerate_by_composition(kappa: Composition, rooted: bool = True) -> list[ExoticAromaticTree]:
    """One representative per isomorphism class of trees with composition ``kappa``.

    Representatives keep the standard target map and are sorted by canonical
    encoding.  Odd parity yields an empty list (``rooted=False`` enumerates
    multi-aromas, whose parity condition is ``|kappa| + |kappa'|`` even).
    """
    tau = kappa.standard_tau()
    n_v = kappa.size
    start = 0 if rooted else 1
    elements = list(range(start, len(tau) + n_v + 1))
    if len(elements) % 2:
        return []
    seen: dict[bytes, ExoticAromaticTree] = {}
    for m in perfect_matchings(elements):
        t = _from_matching(n_v, tau, m, rooted)
        seen.setdefault(canonical_form(t), t)
    return [seen[k] for k in sorted(seen)]


def check_parity(kappa: Composition) -> None:
    if kappa.order is None:
        raise OddParity(f"|kappa|+|kappa'|+1 is odd for {kappa}")


def enumerate_by_order(n: int) -> list[ExoticAromaticTree]:
    out = []
    for kappa in compositions_of_order(n):
        out.extend(enumerate_by_composition(kappa))
    return out


def enumerate_up_to_order(n: int) -> list[ExoticAromaticTree]:
    out = []
    for k in range(1, n + 1):
        out.extend(enumerate_by_order(k))
    return out


def enumerate_by_nodes(m: int, max_order: int | None) -> list[ExoticAromaticTree]:
    """Trees with ``m`` vertices and order at most ``max_order``.

    There are infinitely many trees with a given node count (lianas can be
    added freely), so the order bound is mandatory.
    """
    if max_order is None:
        raise MissingOrderBound("node-count enumeration needs a max_order bound")
    out = []
    for n in range(1, max_order + 1):
        for kappa in compositions_of_order(n):
            if kappa.size == m:
                out.extend(enumerate_by_composition(kappa))
    return out


def enumerate_multi_aromas(n: int) -> list[ExoticAromaticTree]:
    """Multi-aromas of order ``n`` (``|kappa| + |kappa'| = 2n``)."""
    out = []
    for parts in _partitions(2 * n, 2 * n):
        counts = [0] * max(parts)
        for p in parts:
            counts[p - 1] += 1
        out.extend(enumerate_by_composition(Composition(tuple(counts)), rooted=False))
    return out


@lru_cache(maxsize=None)
def _representatives(kappa: Composition, rooted: bool) -> dict[bytes, ExoticAromaticTree]:
    return {canonical_form(t): t for t in enumerate_by_composition(kappa, rooted)}


def standard_form(t: ExoticAromaticTree) -> ExoticAromaticTree:
    """The enumerated representative isomorphic to ``t`` (standard target map)."""
    return _representatives(t.composition, t.rooted)[canonical_form(t)]
