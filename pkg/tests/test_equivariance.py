"""Equivariance checks, transforms and the classification matrix."""

import itertools
import random
from fractions import Fraction as F

import pytest

from eatrees.elementary import elementary_differential, parse_symbolic as P
from eatrees.enumeration import enumerate_up_to_order
from eatrees.equivariance import (
    PROPERTIES,
    BadDimensions,
    Disagreement,
    TransformKind,
    check_decoupling,
    check_gl_equivariance,
    check_orthogonal_equivariance,
    check_strong_equivariance,
    classification_matrix,
    expected_verdict,
    make_transform,
    summary_table,
)
from eatrees.polyfield import (
    AffineMap,
    Polynomial,
    PolyVectorField,
    affine_pushforward,
    identity,
    mat_mul,
    mat_vec,
    random_field,
    random_point,
    transpose,
)

ALL3 = enumerate_up_to_order(3)
NODE = P("f^i ∂_i")
LAPLACIAN = P("f^i_{jj} ∂_i")
STOLON = P("f^i f^j f^j ∂_i")


def _signed_permutations(d):
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((-1, 1), repeat=d):
            a = [[F(0)] * d for _ in range(d)]
            for j, i in enumerate(perm):
                a[i][j] = F(signs[j])
            yield tuple(map(tuple, a))


def _rich_field(rng, d):
    # dense low degree part plus a quintic monomial per component so every
    # order-3 tree (in-degree up to 4) sees a nonzero derivative
    f = random_field(rng, d, 3, 0.4)
    comps = []
    for c in f.components:
        e = [0] * d
        for _ in range(5):
            e[rng.randrange(d)] += 1
        comps.append(c + Polynomial(d, {tuple(e): F(rng.choice((-2, -1, 1, 2)))}))
    return PolyVectorField(tuple(comps))


def test_hyperoctahedral_sizes():
    assert [len(list(_signed_permutations(d))) for d in (1, 2, 3)] == [2, 8, 48]


@pytest.mark.parametrize("d", [2, 3, 4])
def test_full_signed_permutation_group(d):
    rng = random.Random(d)
    x = random_point(rng, d)
    f = _rich_field(rng, d)
    base = {id(t): elementary_differential(t, f, x) for t in ALL3}
    for a in _signed_permutations(d):
        g = AffineMap(a, random_point(rng, d))
        gf = affine_pushforward(g, f)
        gx = g(x)
        for t in ALL3:
            assert elementary_differential(t, gf, gx) == mat_vec(a, base[id(t)])


def test_make_transform_shapes():
    sp = make_transform(TransformKind("signed_permutation", 2, seed=3))
    assert sp.matrix in set(_signed_permutations(2))
    st = make_transform(TransformKind("stiefel", 1, 2, seed=1))
    assert st.d_in == 1 and st.d_out == 2 and st.left_orthogonal()
    assert sorted(abs(r[0]) for r in st.matrix) == [0, 1]
    gr = make_transform(TransformKind("grassmann", 2, 1, seed=1))
    assert gr.d_in == 2 and gr.d_out == 1 and gr.right_orthogonal()
    gl = make_transform(TransformKind("general_linear", 3, seed=2))
    assert gl.inverse().compose(gl).matrix == identity(3)
    q = make_transform(TransformKind("orthogonal", 4, seed=5))
    import numpy as np

    m = np.array(q.matrix)
    assert np.allclose(m.T @ m, np.eye(4))
    af = make_transform(TransformKind("affine", 2, 3, seed=0))
    assert (af.d_in, af.d_out) == (2, 3)


def test_make_transform_deterministic():
    k = TransformKind("general_linear", 3, seed=9)
    assert make_transform(k) == make_transform(k)


@pytest.mark.parametrize("k", [
    TransformKind("stiefel", 3, 2),
    TransformKind("grassmann", 1, 2),
    TransformKind("signed_permutation", 2, 3),
    TransformKind("orthogonal", 0),
    TransformKind("shear", 2),
])
def test_make_transform_errors(k):
    with pytest.raises(BadDimensions):
        make_transform(k)


@pytest.mark.parametrize("t", ALL3, ids=lambda t: t.sigma_string())
def test_orthogonal_checks(t):
    rep = check_orthogonal_equivariance(t, float_trials=3)
    assert rep.holds and rep.witness is None
    assert rep.float_trials == 12 and rep.max_residual < 1e-8


def test_orthogonal_float_twenty_trials():
    rep = check_orthogonal_equivariance(P("f^i_{jk} f^j f^k ∂_i"))
    assert rep.float_trials == 80 and rep.max_residual < 1e-8


def test_node_is_affine_equivariant():
    for kind in ("stiefel", "grassmann", "affine"):
        assert check_strong_equivariance(NODE, kind).holds
    assert check_gl_equivariance(NODE).holds


def test_laplacian_gl_ratio():
    g = AffineMap.linear(((F(2),),))
    f = PolyVectorField.parse("f1 = x1^3 - x1^2 + 5", 1)
    for x in (F(1), F(-3, 2)):
        lhs = elementary_differential(LAPLACIAN, affine_pushforward(g, f), g((x,)))
        rhs = mat_vec(g.matrix, elementary_differential(LAPLACIAN, f, (x,)))
        assert lhs[0] == F(1, 4) * rhs[0] != 0
    rep = check_gl_equivariance(LAPLACIAN)
    assert not rep.holds
    w = rep.witness
    assert w.lhs != w.rhs and all(isinstance(v, F) for v in w.lhs + w.rhs)


def test_stolon_stiefel_exact_generator():
    a = make_transform(TransformKind("stiefel", 2, 3, seed=4))
    assert a.left_orthogonal()
    rng = random.Random(0)
    f1 = random_field(rng, 2)
    # zero-extended partner: f2(y) = A f1(A^T (y - b)) satisfies f2(a(x)) = A f1(x)
    at = transpose(a.matrix)
    shift = AffineMap(at, tuple(-v for v in mat_vec(at, a.offset)))
    from eatrees.polyfield import apply_linear, pullback

    f2 = PolyVectorField(apply_linear(a.matrix, pullback(f1, shift)))
    x = random_point(rng, 2)
    assert f2(a(x)) == mat_vec(a.matrix, f1(x))
    lhs = elementary_differential(STOLON, f2, a(x))
    assert lhs == mat_vec(a.matrix, elementary_differential(STOLON, f1, x))
    assert check_strong_equivariance(STOLON, "stiefel").holds


def test_laplacian_grassmann_pass():
    a = make_transform(TransformKind("grassmann", 3, 2, seed=2))
    assert a.right_orthogonal()
    assert check_strong_equivariance(LAPLACIAN, "grassmann").holds
    assert not check_strong_equivariance(LAPLACIAN, "stiefel").holds


def test_stolon_grassmann_refutation():
    import eatrees.equivariance as eq

    assert not check_strong_equivariance(STOLON, "grassmann").holds
    # the dual-field projection alone already refutes
    rep = eq.EquivarianceReport("grassmann", STOLON)
    eq._grassmann_refutation(rep, STOLON, random.Random(0))
    assert not rep.holds
    w = rep.witness
    assert "projection" in w.construction
    assert all(v == 0 for v in w.point)
    f1, f2 = w.fields
    assert w.lhs != w.rhs
    # premise holds exactly for the witness pair
    a = w.transform
    x = w.point
    assert f2(a(x)) == mat_vec(a.matrix, f1(x))
    assert mat_mul(a.matrix, transpose(a.matrix)) == identity(a.d_out)


def test_strong_kind_rejected():
    with pytest.raises(ValueError):
        check_strong_equivariance(NODE, "orthogonal")


@pytest.mark.parametrize("t", [t for t in ALL3 if t.num_components == 1], ids=lambda t: t.sigma_string())
def test_connected_trees_decouple(t):
    assert check_decoupling(t).holds


@pytest.mark.parametrize("t", ALL3, ids=lambda t: t.sigma_string())
def test_trivially_decoupling(t):
    assert check_decoupling(t, trivially=True).holds


def test_aroma_tree_decoupling_refuted():
    gamma1 = P("f^i f^j_j ∂_i")
    rep = check_decoupling(gamma1)
    assert not rep.holds and rep.witness.lhs != rep.witness.rhs
    # dual field of the rooted part on block one, of the aroma on block two
    from eatrees.duality import dual_field
    from eatrees.polyfield import direct_sum
    from eatrees.tree import connected_components

    rooted, (aroma,) = connected_components(gamma1)
    f1, f2 = dual_field(rooted).specialize(), dual_field(aroma).specialize()
    z = (F(0),) * (f1.dimension + f2.dimension)
    lhs = elementary_differential(gamma1, direct_sum(f1, f2), z)
    rhs = elementary_differential(gamma1, f1, z[:f1.dimension]) + elementary_differential(gamma1, f2, z[f1.dimension:])
    assert lhs == (1, 0) and rhs == (0, 0)
    with pytest.raises(ValueError):
        check_decoupling(P("f^j_j"))


def test_classification_order_1():
    m = classification_matrix(1)
    assert len(m.rows) == 1 and all(m.rows[0].verdict(p) for p in PROPERTIES)


def test_classification_order_2():
    m = classification_matrix(2, seed=3)
    assert len(m.rows) == 7
    for row in m.rows:
        for p in PROPERTIES:
            assert row.verdict(p) == expected_verdict(row.tree, p)
            if not row.verdict(p):
                assert row.reports[p].witness is not None
    assert "GL-equivariance" in summary_table(m)
    assert m.render().splitlines()[0].split() == ["tree", *PROPERTIES]


def test_disagreement_raised():
    # feeding an aroma-bearing tree as "connected" must be caught
    import eatrees.equivariance as eq

    original = eq.expected_verdict
    try:
        eq.expected_verdict = lambda t, p: True
        with pytest.raises(Disagreement) as info:
            classification_matrix(2, ("decoupling",))
        assert info.value.property == "decoupling"
    finally:
        eq.expected_verdict = original


def test_semi_orthogonal_is_butcher():
    for t in ALL3:
        st = check_strong_equivariance(t, "stiefel").holds
        gr = check_strong_equivariance(t, "grassmann").holds
        assert (st and gr) == t.classify().is_butcher_tree == check_strong_equivariance(t, "affine").holds


def test_report_json():
    rep = check_gl_equivariance(LAPLACIAN)
    obj = rep.to_json()
    assert obj["holds"] is False and obj["witness"]["lhs"] != obj["witness"]["rhs"]
    assert obj["symbolic"] == "f^i_jj ∂_i"
