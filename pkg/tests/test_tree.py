"""Validation, bookkeeping and classification of single trees."""

import json

import pytest
from hypothesis import given, settings

from eatrees.canonical import canonical_form
from eatrees.elementary import parse_symbolic
from eatrees.tree import (
    Composition,
    ExoticAromaticTree,
    FixedPointInSigma,
    NonInvolutiveSigma,
    TauDefinedOnArrowZero,
    TauOutOfRange,
    UncoveredElement,
    connected_components,
    join,
    validate,
)
from strategies import trees


def node():
    return ExoticAromaticTree.from_sigma(1, (), [("a0", 1)])


def test_single_node():
    t = node()
    assert t.order == 1
    assert t.composition == Composition((1,))
    assert t.root == t.vertex_element(1)
    assert t.sigma_string() == "(a0,1)"
    assert t.classify().is_butcher_tree


@pytest.mark.parametrize(
    "raw, exc",
    [
        ({"vertices": 1, "arrows": 1, "tau": [], "sigma": [["a0", "a0"]]}, FixedPointInSigma),
        ({"vertices": 2, "arrows": 1, "tau": [], "sigma": [["a0", 1], [1, 2]]}, NonInvolutiveSigma),
        ({"vertices": 3, "arrows": 1, "tau": [], "sigma": [["a0", 1], [2, 3], [2, 1]]}, NonInvolutiveSigma),
        ({"vertices": 3, "arrows": 1, "tau": [], "sigma": [["a0", 1]]}, UncoveredElement),
        ({"vertices": 1, "arrows": 2, "tau": [3], "sigma": [["a0", 1], ["a1", 1]]}, TauOutOfRange),
        ({"vertices": 1, "arrows": 3, "tau": {"a0": 1, "a1": 1, "a2": 1}, "sigma": []}, TauDefinedOnArrowZero),
        ({"vertices": 1, "arrows": 3, "tau": [1, 1, 1], "sigma": []}, TauDefinedOnArrowZero),
        ({"vertices": 2, "arrows": 1, "tau": [], "sigma": [["a0", 1], [2, 5]]}, UncoveredElement),
    ],
)
def test_validation_errors(raw, exc):
    with pytest.raises(exc):
        validate(raw)


def test_tau_as_dict():
    t = validate({"vertices": 1, "arrows": 3, "tau": {"a1": 1, "a2": 1}, "sigma": [["a0", 1], ["a1", "a2"]]})
    assert t.tau == (1, 1)
    assert t.composition.counts == (0, 0, 1)


def test_orders_of_known_shapes():
    t = parse_symbolic("f^j f^j_i ∂_i")
    assert t.order == 2
    assert t.composition.derived == (0, 1)
    assert parse_symbolic("f^i f^j f^j f^k f^k ∂_i").order == 3


@pytest.mark.parametrize(
    "text, aromatic, exotic, butcher, connected",
    [
        ("f^i ∂_i", True, True, True, True),
        ("f^i_j f^j ∂_i", True, True, True, True),
        ("f^j_j f^i ∂_i", True, False, False, False),
        ("f^i_{jj} ∂_i", False, True, False, True),
        ("f^j_{ij} ∂_i", False, False, False, True),
        ("f^j f^j_i ∂_i", False, False, False, True),
        ("f^i f^j f^j ∂_i", False, False, False, False),
        ("f^i_j f^j_k f^k ∂_i", True, True, True, True),
        ("f^j_i f^k_j f^k ∂_i", False, False, False, True),
    ],
)
def test_classification(text, aromatic, exotic, butcher, connected):
    fl = parse_symbolic(text).classify()
    assert (fl.is_aromatic, fl.is_exotic_tree, fl.is_butcher_tree, fl.is_connected) == (
        aromatic, exotic, butcher, connected)


def test_loop_vertex_is_not_exotic():
    # f^j_i f^i_j cycles through the root arrow: a loop without any stolon
    t = parse_symbolic("f^j_{ik} f^k_j ∂_i")
    fl = t.classify()
    assert fl.has_loop and not fl.has_stolon
    assert not fl.is_exotic_tree


def test_components_and_join():
    t = parse_symbolic("f^i f^j_j f^k_k ∂_i")
    rooted, aromas = connected_components(t)
    assert rooted.order == 1
    assert [a.rooted for a in aromas] == [False, False]
    assert canonical_form(join([rooted, *aromas])) == canonical_form(t)


def test_join_rejects_two_roots():
    with pytest.raises(ValueError):
        join([node(), node()])


def test_json_round_trip_literal():
    t = parse_symbolic("f^j_{ik} f^j f^k ∂_i")
    raw = json.loads(json.dumps(t.to_json()))
    assert validate(raw) == t
    assert raw["arrows"] == t.num_arrows + 1


@settings(max_examples=200, deadline=None)
@given(trees())
def test_json_round_trip(t):
    assert validate(json.loads(json.dumps(t.to_json()))) == t


@settings(max_examples=200, deadline=None)
@given(trees())
def test_order_counts(t):
    kappa = t.composition
    ghost = 1 if t.rooted else 0
    assert kappa.size + kappa.derived_size + ghost == 2 * t.order
    assert kappa.size == t.num_vertices
    assert kappa.derived_size == t.num_arrows
    assert t.order == t.num_vertices + len(t.lianas) - len(t.stolons)


@settings(max_examples=200, deadline=None)
@given(trees())
def test_components_partition(t):
    parts = t.components()
    assert sum(p.num_vertices for p in parts) == t.num_vertices
    assert sum(p.num_arrows for p in parts) == t.num_arrows
    assert sum(p.rooted for p in parts) == int(t.rooted)
    assert all(p.num_components == 1 for p in parts)
    assert canonical_form(join(parts)) == canonical_form(t)


@settings(max_examples=200, deadline=None)
@given(trees())
def test_flag_implications(t):
    fl = t.classify()
    if fl.is_butcher_tree:
        assert fl.is_exotic_tree and fl.is_aromatic
    if fl.is_exotic_tree:
        assert t.rooted and not fl.has_stolon and not fl.has_loop
