"""Gradient rewriting: moves, classes, exotic normal forms."""

import random
from fractions import Fraction as F

import pytest

from eatrees.canonical import canonical_form as C
from eatrees.elementary import elementary_differential, parse_symbolic as P
from eatrees.enumeration import enumerate_by_order, enumerate_up_to_order
from eatrees.gradrewrite import (
    NoExoticRepresentative,
    all_classes,
    check_gradient_agreement,
    equivalence_class,
    exotic_normal_form,
    gradient_difference_at_zero,
    rewrite_neighbors,
    rewrite_sites,
)
from eatrees.polyfield import Polynomial, PolyVectorField, gradient_field
from eatrees.tree import ExoticAromaticTree as T
from reference_catalog import ROWS

ALL3 = enumerate_up_to_order(3)
NODE = P("f^i ∂_i")

CHAINS = [
    (3, (1, 1), [[("a0", "a1"), ("a2", 2), (1, 3)], [("a0", 1), ("a1", 2), ("a2", 3)]]),
    (3, (1, 2), [[("a0", "a1"), ("a2", 1), (2, 3)], [("a0", 1), ("a1", "a2"), (2, 3)], [("a0", 1), ("a1", 2), ("a2", 3)]]),
    (2, (1, 1, 1), [[("a0", "a1"), ("a2", "a3"), (1, 2)], [("a0", "a1"), ("a2", 1), ("a3", 2)],
                    [("a0", 1), ("a1", 2), ("a2", "a3")]]),
]


def chain_trees(chain):
    n_v, tau, sigmas = chain
    return [T.from_sigma(n_v, tau, s) for s in sigmas]


@pytest.mark.parametrize("chain", CHAINS, ids=["first", "second", "third"])
def test_published_chains(chain):
    ts = chain_trees(chain)
    for a, b in zip(ts, ts[1:]):
        assert C(b) in {C(n) for n in rewrite_neighbors(a)}
    assert [t.classify().is_exotic_tree for t in ts] == [False] * (len(ts) - 1) + [True]
    assert C(exotic_normal_form(ts[0])) == C(ts[-1])
    cls = {C(m) for m in equivalence_class(ts[0])}
    assert {C(t) for t in ts} <= cls


def test_second_chain_contains_butcher_tree():
    ts = chain_trees(CHAINS[1])
    assert ts[-1].classify().is_butcher_tree
    assert C(ts[-1]) == C(P("f^i_j f^j_k f^k ∂_i"))


def test_third_chain_endpoint():
    assert C(chain_trees(CHAINS[2])[-1]) == C(P("f^i_{jkk} f^j ∂_i"))


def test_first_chain_symbolic():
    a, b = chain_trees(CHAINS[0])
    assert C(a) == C(P("f^j_{ik} f^j f^k ∂_i"))
    assert C(b) == C(P("f^i_{jk} f^j f^k ∂_i"))


def test_single_node():
    assert rewrite_neighbors(NODE) == []
    assert [C(t) for t in equivalence_class(NODE)] == [C(NODE)]
    assert C(exotic_normal_form(NODE)) == C(NODE)


def test_exotic_input_is_fixed_point():
    for t in ALL3:
        if t.classify().is_exotic_tree:
            assert C(exotic_normal_form(t)) == C(t)


def test_butcher_tree_neighbors_need_edges():
    bt = P("f^i_j f^j_k f^k ∂_i")
    # with no stolon or liana to consume, every move creates one of each
    kinds = {r.kind for r, _ in rewrite_sites(bt)}
    assert kinds == {"stolon_liana_simplification"}
    for n in rewrite_neighbors(bt):
        fl = n.classify()
        assert fl.has_stolon and fl.has_liana


@pytest.mark.parametrize("t", ALL3, ids=lambda t: t.sigma_string())
def test_kappa_and_components_preserved(t):
    for _, n in rewrite_sites(t):
        assert n.composition == t.composition
        assert n.num_components == t.num_components


def test_rule_kinds_all_occur():
    kinds = {r.kind for t in ALL3 for r, _ in rewrite_sites(t)}
    assert kinds == {"edge_liana_inversion", "edge_stolon_inversion", "stolon_liana_simplification"}


def test_moves_are_involutive():
    # undoing the swap at the same site returns the original labelled tree
    for t in ALL3:
        for rule, n in rewrite_sites(t):
            back = [m for r, m in rewrite_sites(n) if (r.vertex, r.arrow) == (rule.vertex, rule.arrow)]
            assert t in back


@pytest.mark.parametrize("n", [1, 2, 3])
def test_connected_classes_have_one_exotic_tree(n):
    for cls in all_classes(n):
        if cls[0].num_components == 1:
            assert sum(m.classify().is_exotic_tree for m in cls) == 1
            assert all(C(exotic_normal_form(m)) == C(exotic_normal_form(cls[0])) for m in cls)


def test_classes_partition_order_3():
    classes = all_classes(3)
    members = [C(m) for cls in classes for m in cls]
    assert sorted(members) == sorted(C(t) for t in enumerate_by_order(3))


def test_class_count_order_2():
    assert len(all_classes(2)) == 4


def test_catalog_adjacency_on_connected_rows():
    trees = [T.from_sigma(sum(r[1]), r[3], r[4]) for r in ROWS]
    label = {}
    for t in trees:
        if C(t) not in label:
            for m in equivalence_class(t):
                label[C(m)] = len(label)
    connected = [label[C(t)] for t in trees if t.num_components == 1]
    runs = [k for i, k in enumerate(connected) if i == 0 or connected[i - 1] != k]
    assert len(runs) == len(set(runs))


def test_disconnected_has_no_normal_form():
    with pytest.raises(ValueError):
        exotic_normal_form(P("f^i f^j_j ∂_i"))
    assert issubclass(NoExoticRepresentative, RuntimeError)


def test_first_chain_on_given_potential():
    a, b = chain_trees(CHAINS[0])
    f = gradient_field(Polynomial.parse("x1^2*x2", 2))
    rng = random.Random(0)
    for _ in range(5):
        x = (F(rng.randint(-4, 4)), F(rng.randint(-4, 4)))
        assert elementary_differential(a, f, x) == elementary_differential(b, f, x)


def test_tree_agrees_with_itself():
    rep = check_gradient_agreement(NODE, NODE)
    assert rep.gradient_equal and not rep.nongradient_differs


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gradient_soundness(n):
    for cls in all_classes(n):
        for m in cls[1:]:
            rep = check_gradient_agreement(cls[0], m, trials=5, dims=(2, 3))
            assert rep.gradient_equal, rep.gradient_mismatch
            assert rep.trials == 10


def test_nongradient_shear_difference():
    # J f = ((0,1),(0,0)) for f = (x2, 1): J f f = (1, 0) but J^T f = (0, x2)
    a, b = P("f^i_j f^j ∂_i"), P("f^j f^j_i ∂_i")
    assert C(b) in {C(m) for m in equivalence_class(a)}
    f = PolyVectorField((Polynomial.parse("x2", 2), Polynomial.parse("1", 2)))
    assert gradient_difference_at_zero(a, b, f) == (1, 0)
    rep = check_gradient_agreement(a, b)
    assert rep.nongradient_differs
    f, x, lhs, rhs = rep.nongradient_witness
    assert lhs != rhs and lhs == elementary_differential(a, f, x)
