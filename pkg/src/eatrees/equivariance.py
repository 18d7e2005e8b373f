"""Equivariance and decoupling checks for elementary differentials.

Each check runs exact trials on structured transformations and, where a
property can fail, one targeted refutation built from the tree's own dual
field and a coordinate embedding or projection.  Any mismatch is recorded as
an exact rational witness.  Float trials with generic orthogonal matrices are
advisory only: they report a residual and never decide a verdict.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from eatrees.duality import OrderedHost, dual_field
from eatrees.elementary import elementary_differential, render_symbolic
from eatrees.enumeration import enumerate_up_to_order
from eatrees.polyfield import (
    AffineMap,
    Polynomial,
    PolyVectorField,
    affine_pushforward,
    apply_linear,
    direct_sum,
    exact_rank,
    identity,
    mat_inv,
    mat_mul,
    mat_vec,
    pullback,
    random_field,
    random_point,
    random_polynomial,
    transpose,
)
from eatrees.tree import ExoticAromaticTree, connected_components

PROPERTIES = ("orthogonal", "gl", "stiefel", "grassmann", "affine", "decoupling")


class BadDimensions(ValueError):
    pass


class Disagreement(AssertionError):
    def __init__(self, tree: ExoticAromaticTree, prop: str, expected: bool, report: "EquivarianceReport"):
        self.tree, self.property, self.expected, self.report = tree, prop, expected, report
        super().__init__(
            f"{prop}: {render_symbolic(tree)} expected {'pass' if expected else 'fail'}, "
            f"got {'pass' if report.holds else 'fail'}"
        )


@dataclass(frozen=True)
class TransformKind:
    kind: str  # orthogonal | signed_permutation | general_linear | stiefel | grassmann | affine
    d_in: int
    d_out: int | None = None
    seed: int = 0


def _rational_offset(rng: random.Random, d: int) -> tuple[Fraction, ...]:
    return random_point(rng, d)


def _signed_permutation(rng: random.Random, d: int):
    perm = list(range(d))
    rng.shuffle(perm)
    a = [[Fraction(0)] * d for _ in range(d)]
    for j, i in enumerate(perm):
        a[i][j] = Fraction(rng.choice((-1, 1)))
    return tuple(map(tuple, a))


def _full_rank_matrix(rng: random.Random, rows: int, cols: int, span: int = 3):
    while True:
        a = tuple(tuple(Fraction(rng.randint(-span, span)) for _ in range(cols)) for _ in range(rows))
        if exact_rank(a) == min(rows, cols):
            return a


def make_transform(k: TransformKind) -> AffineMap:
    """Affine map ``x -> A x + b`` of the requested kind, deterministic in ``k.seed``.

    Stiefel maps go from R^d_in to R^d_out with ``d_in <= d_out`` and
    ``A^T A = I``; Grassmann maps need ``d_in >= d_out`` and ``A A^T = I``.
    Both use signed standard basis vectors, so the identities hold exactly.
    """
    rng = random.Random(k.seed)
    d1 = k.d_in
    d2 = d1 if k.d_out is None else k.d_out
    if d1 < 1 or d2 < 1:
        raise BadDimensions("dimensions must be positive")
    square = {"orthogonal", "signed_permutation", "general_linear"}
    if k.kind in square and d1 != d2:
        raise BadDimensions(f"{k.kind} maps are square")
    if k.kind == "orthogonal":
        import numpy as np

        gen = np.random.default_rng(k.seed)
        q, r = np.linalg.qr(gen.standard_normal((d1, d1)))
        q = q * np.sign(np.diag(r))
        b = gen.standard_normal(d1)
        return AffineMap(tuple(map(tuple, q.tolist())), tuple(b.tolist()))
    if k.kind == "signed_permutation":
        return AffineMap(_signed_permutation(rng, d1), _rational_offset(rng, d1))
    if k.kind == "general_linear":
        return AffineMap(_full_rank_matrix(rng, d1, d1), _rational_offset(rng, d1))
    if k.kind in ("stiefel", "grassmann"):
        big, small = max(d1, d2), min(d1, d2)
        if (k.kind == "stiefel" and d1 > d2) or (k.kind == "grassmann" and d1 < d2):
            raise BadDimensions(f"{k.kind}({d1},{d2}) has the wrong shape")
        cols = rng.sample(range(big), small)
        emb = [[Fraction(0)] * small for _ in range(big)]
        for j, i in enumerate(cols):
            emb[i][j] = Fraction(rng.choice((-1, 1)))
        a = tuple(map(tuple, emb)) if k.kind == "stiefel" else transpose(emb)
        return AffineMap(a, _rational_offset(rng, d2))
    if k.kind == "affine":
        return AffineMap(_full_rank_matrix(rng, d2, d1), _rational_offset(rng, d2))
    raise BadDimensions(f"unknown transform kind {k.kind!r}")


@dataclass(frozen=True)
class Witness:
    construction: str
    transform: AffineMap
    fields: tuple[PolyVectorField, ...]
    point: tuple
    lhs: tuple
    rhs: tuple

    def to_json(self) -> dict:
        return {
            "construction": self.construction,
            "matrix": [[str(v) for v in row] for row in self.transform.matrix],
            "offset": [str(v) for v in self.transform.offset],
            "fields": [f.to_text() for f in self.fields],
            "point": [str(v) for v in self.point],
            "lhs": [str(v) for v in self.lhs],
            "rhs": [str(v) for v in self.rhs],
        }


@dataclass
class EquivarianceReport:
    property: str
    tree: ExoticAromaticTree
    trials: int = 0
    exact_passed: int = 0
    exact_failed: int = 0
    float_trials: int = 0
    max_residual: float = 0.0
    witness: Witness | None = None

    @property
    def holds(self) -> bool:
        return self.exact_failed == 0

    def record(self, construction, transform, fields, point, lhs, rhs) -> bool:
        self.trials += 1
        if lhs == rhs:
            self.exact_passed += 1
            return True
        self.exact_failed += 1
        if self.witness is None:
            self.witness = Witness(construction, transform, tuple(fields), tuple(point), tuple(lhs), tuple(rhs))
        return False

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "tree": self.tree.sigma_string(),
            "tau": self.tree.tau_string(),
            "symbolic": render_symbolic(self.tree),
            "holds": self.holds,
            "trials": self.trials,
            "exact_passed": self.exact_passed,
            "exact_failed": self.exact_failed,
            "float_trials": self.float_trials,
            "max_residual": self.max_residual,
            "witness": self.witness.to_json() if self.witness else None,
        }


# -- helpers ---------------------------------------------------------------------


def _value(t: ExoticAromaticTree, f: PolyVectorField, x) -> tuple:
    r = elementary_differential(t, f, x)
    return tuple(r) if t.rooted else (r,)


def _transport(t: ExoticAromaticTree, a, v: tuple) -> tuple:
    return mat_vec(a, v) if t.rooted else v


def _degree(t: ExoticAromaticTree) -> int:
    return max([2] + [t.in_degree(v) for v in t.vertex_elements])


def _theta_field(host, rng: random.Random) -> PolyVectorField:
    df = dual_field(host)
    return df.specialize({th: rng.randint(1, 9) for th in df.parameters})


def _check_premise(a: AffineMap, f1: PolyVectorField, f2: PolyVectorField) -> None:
    """``f2(a(x)) == A f1(x)`` as a polynomial identity."""
    left = pullback(f2, a)
    right = apply_linear(a.matrix, f1.components)
    if tuple(left) != tuple(right):
        raise AssertionError("premise f2(a(x)) = A f1(x) violated by construction")


def _linear_forms(matrix, offset, nvars: int) -> list[Polynomial]:
    """Components of ``M (y - offset)`` as polynomials in ``y``."""
    out = []
    for row in matrix:
        p = Polynomial.constant(nvars, -sum((c * b for c, b in zip(row, offset)), Fraction(0)))
        for j, c in enumerate(row):
            if c != 0:
                p = p + Polynomial.variable(nvars, j) * c
        out.append(p)
    return out


def _vanishing_perturbation(rng, forms: list[Polynomial], d_out: int, degree: int) -> list[Polynomial]:
    """Random combination ``sum_k r_ik(y) z_k(y)`` of the given forms (zero where all forms vanish)."""
    nv = forms[0].nvars if forms else 0
    out = []
    for _ in range(d_out):
        p = Polynomial(nv)
        for z in forms:
            if z:
                p = p + random_polynomial(rng, nv, max(degree - 1, 0), 0.5) * z
        out.append(p)
    return out


def _stiefel_pair(rng, a: AffineMap, f1: PolyVectorField, perturb: bool, degree: int) -> PolyVectorField:
    """``f2(y) = A f1(A^T (y - b))`` plus a term vanishing on the image of ``a``."""
    d2 = a.d_out
    at = transpose(a.matrix)
    inner = AffineMap(at, tuple(-v for v in mat_vec(at, a.offset)))
    comps = list(apply_linear(a.matrix, pullback(f1, inner)))
    if perturb:
        proj = tuple(
            tuple(identity(d2)[i][j] - v for j, v in enumerate(row)) for i, row in enumerate(mat_mul(a.matrix, at))
        )
        extra = _vanishing_perturbation(rng, _linear_forms(proj, a.offset, d2), d2, degree)
        comps = [c + e for c, e in zip(comps, extra)]
    return PolyVectorField(tuple(comps))


def _grassmann_pair(rng, a: AffineMap, f2: PolyVectorField, perturb: bool, degree: int) -> PolyVectorField:
    """``f1(x) = A^T f2(a(x))`` plus a kernel-valued term."""
    d1 = a.d_in
    at = transpose(a.matrix)
    comps = list(apply_linear(at, pullback(f2, a)))
    if perturb:
        ker = tuple(
            tuple(identity(d1)[i][j] - v for j, v in enumerate(row)) for i, row in enumerate(mat_mul(at, a.matrix))
        )
        r = random_field(rng, d1, max(degree - 1, 1), 0.5)
        comps = [c + e for c, e in zip(comps, apply_linear(ker, r.components))]
    return PolyVectorField(tuple(comps))


def _affine_pair(rng, a: AffineMap, f: PolyVectorField, degree: int, perturb: bool):
    """Premise-satisfying pair for a general full-rank ``a``.

    Injective ``A`` uses the left inverse ``L`` (``f2 = A f(L(y - b))`` plus a
    term vanishing on the image); surjective ``A`` uses the right inverse ``R``
    (``f1 = R f(a(x)) + (I - R A) r``).  Returns ``(f1, f2)``.
    """
    m = a.matrix
    mt = transpose(m)
    if a.d_in <= a.d_out:
        left = mat_mul(mat_inv(mat_mul(mt, m)), mt)
        inner = AffineMap(left, tuple(-v for v in mat_vec(left, a.offset)))
        comps = list(apply_linear(m, pullback(f, inner)))
        if perturb:
            d2 = a.d_out
            proj = tuple(
                tuple(identity(d2)[i][j] - v for j, v in enumerate(row)) for i, row in enumerate(mat_mul(m, left))
            )
            extra = _vanishing_perturbation(rng, _linear_forms(proj, a.offset, d2), d2, degree)
            comps = [c + e for c, e in zip(comps, extra)]
        return f, PolyVectorField(tuple(comps))
    right = mat_mul(mt, mat_inv(mat_mul(m, mt)))
    comps = list(apply_linear(right, pullback(f, a)))
    if perturb:
        d1 = a.d_in
        ker = tuple(
            tuple(identity(d1)[i][j] - v for j, v in enumerate(row)) for i, row in enumerate(mat_mul(right, m))
        )
        r = random_field(rng, d1, max(degree - 1, 1), 0.5)
        comps = [c + e for c, e in zip(comps, apply_linear(ker, r.components))]
    return PolyVectorField(tuple(comps)), f


def _strong_trial(report, t, construction, a, f1, f2, x) -> bool:
    _check_premise(a, f1, f2)
    lhs = _value(t, f2, a(x))
    rhs = _transport(t, a.matrix, _value(t, f1, x))
    return report.record(construction, a, (f1, f2), x, lhs, rhs)


# -- group trials (cached: a trial does not depend on the tree) ------------------------


@lru_cache(maxsize=None)
def _group_trial(kind: str, seed: int, d: int, k: int, degree: int):
    rng = random.Random(f"{kind}/{seed}/{d}/{k}/{degree}")
    g = make_transform(TransformKind(kind, d, seed=rng.randrange(1 << 30)))
    if kind == "orthogonal":
        f = random_field(rng, d, degree, 0.6)
        f = PolyVectorField(tuple(Polynomial(d, {e: float(c) for e, c in p.terms.items()}) for p in f.components))
        x = tuple(float(v) for v in random_point(rng, d))
    else:
        f = random_field(rng, d, degree, 0.6)
        x = random_point(rng, d)
    return g, f, affine_pushforward(g, f), x


def _group_check(report, t, g, f, gf, x, construction) -> bool:
    lhs = _value(t, gf, g(x))
    rhs = _transport(t, g.matrix, _value(t, f, x))
    return report.record(construction, g, (f, gf), x, lhs, rhs)


def check_orthogonal_equivariance(
    t: ExoticAromaticTree,
    trials: int = 2,
    tol: float = 1e-8,
    *,
    dims: Sequence[int] = (2, 3, 4),
    float_dims: Sequence[int] = (2, 3, 4, 5),
    float_trials: int = 20,
    exact_only: bool = False,
    seed: int = 0,
) -> EquivarianceReport:
    """``F(g.f)(g x) = A F(f)(x)`` for signed permutations (exact) and generic orthogonals (float)."""
    rep = EquivarianceReport("orthogonal", t)
    deg = _degree(t)
    for d in dims:
        for k in range(trials):
            g, f, gf, x = _group_trial("signed_permutation", seed, d, k, deg)
            _group_check(rep, t, g, f, gf, x, "signed permutation")
    if not exact_only:
        for d in float_dims:
            for k in range(float_trials):
                g, f, gf, x = _group_trial("orthogonal", seed, d, k, deg)
                lhs = _value(t, gf, g(x))
                rhs = _transport(t, g.matrix, _value(t, f, x))
                scale = max(1.0, max(abs(v) for v in rhs))
                res = max(abs(u - v) for u, v in zip(lhs, rhs)) / scale
                rep.float_trials += 1
                rep.max_residual = max(rep.max_residual, res)
    if rep.max_residual > tol:
        raise AssertionError(f"float orthogonal residual {rep.max_residual:g} above {tol:g}")
    return rep


def check_gl_equivariance(
    t: ExoticAromaticTree, trials: int = 3, *, dims: Sequence[int] = (1, 2, 3), seed: int = 0
) -> EquivarianceReport:
    """Exact trials with random invertible rational matrices.

    Random fields of degree at least the largest in-degree are used, together
    with the tree's dual field specialised at random integer parameters.
    """
    rep = EquivarianceReport("gl", t)
    deg = _degree(t)
    for d in dims:
        for k in range(trials):
            g, f, gf, x = _group_trial("general_linear", seed, d, k, deg)
            _group_check(rep, t, g, f, gf, x, "general linear, random field")
    rng = random.Random(f"gl-dual/{seed}")
    host = t
    n = dual_field(host).dimension
    for k in range(trials):
        g = make_transform(TransformKind("general_linear", n, seed=rng.randrange(1 << 30)))
        f = _theta_field(host, rng)
        x = random_point(rng, n)
        _group_check(rep, t, g, f, affine_pushforward(g, f), x, "general linear, dual field")
    return rep


def _coordinate_kinds(host) -> list[str]:
    return [kind for kind, _ in dual_field(host).coordinates]


def _stiefel_refutation(rep, t, rng, attempts: int = 8) -> None:
    """Embed the coordinates that are neither lianas nor loop nodes.

    ``f2`` is the dual field of ``t`` plus one spare zero coordinate, so the
    embedded space is never empty; ``f1(y) = A^T f2(A y)``.  At the origin the
    two sides differ whenever the product of all parameters survives on the
    left only, which random integer parameters detect.
    """
    kinds = _coordinate_kinds(t)
    n = len(kinds)
    keep = [i for i, k in enumerate(kinds) if k not in ("liana", "loop")]
    if len(keep) == n:
        return
    keep.append(n)
    emb = [[Fraction(0)] * len(keep) for _ in range(n + 1)]
    for j, i in enumerate(keep):
        emb[i][j] = Fraction(1)
    a = AffineMap(tuple(map(tuple, emb)), (Fraction(0),) * (n + 1))
    at = transpose(a.matrix)
    for _ in range(attempts):
        base = _theta_field(t, rng)
        f2 = PolyVectorField(tuple(c.embed(n + 1, range(n)) for c in base.components) + (Polynomial(n + 1),))
        f1 = PolyVectorField(apply_linear(at, pullback(f2, a)))
        x = (Fraction(0),) * len(keep)
        if not _strong_trial(rep, t, "stiefel embedding, dual field", a, f1, f2, x):
            return


def _grassmann_refutation(rep, t, rng, attempts: int = 8) -> None:
    """Project away stolon and loop-node coordinates of the dual field."""
    kinds = _coordinate_kinds(t)
    n = len(kinds)
    keep = [i for i, k in enumerate(kinds) if k not in ("stolon", "loop")]
    if len(keep) == n or not keep:
        return
    proj = [[Fraction(int(i == j)) for j in range(n)] for i in keep]
    a = AffineMap(tuple(map(tuple, proj)), (Fraction(0),) * len(keep))
    lift = AffineMap(transpose(a.matrix), (Fraction(0),) * n)
    for _ in range(attempts):
        f1 = _theta_field(t, rng)
        f2 = PolyVectorField(apply_linear(a.matrix, pullback(f1, lift)))
        x = (Fraction(0),) * n
        if not _strong_trial(rep, t, "grassmann projection, dual field", a, f1, f2, x):
            return


def check_strong_equivariance(
    t: ExoticAromaticTree, kind: str, trials: int = 2, *, seed: int = 0
) -> EquivarianceReport:
    """Stiefel, Grassmann or affine equivariance: ``f2(a(x)) = A f1(x)`` implies
    ``F(f2)(a(x)) = A F(f1)(x)``.

    Random trials build premise-satisfying pairs (including terms that the
    premise leaves free); the targeted trial uses the dual field.
    """
    if kind not in ("stiefel", "grassmann", "affine"):
        raise ValueError(f"unknown strong equivariance kind {kind!r}")
    rep = EquivarianceReport(kind, t)
    rng = random.Random(f"{kind}/{seed}/{t.sigma_string()}/{t.tau_string()}")
    deg = _degree(t)
    shapes = {"stiefel": [(1, 2), (2, 3), (1, 3)], "grassmann": [(2, 1), (3, 2), (3, 1)], "affine": [(1, 2), (2, 3), (2, 1), (3, 2), (2, 2)]}
    for d1, d2 in shapes[kind]:
        for k in range(trials):
            a = make_transform(TransformKind(kind, d1, d2, seed=rng.randrange(1 << 30)))
            perturb = k > 0
            if kind == "stiefel":
                f1 = random_field(rng, d1, deg, 0.6)
                f2 = _stiefel_pair(rng, a, f1, perturb, deg)
            elif kind == "grassmann":
                f2 = random_field(rng, d2, deg, 0.6)
                f1 = _grassmann_pair(rng, a, f2, perturb, deg)
            else:
                f1, f2 = _affine_pair(rng, a, random_field(rng, min(d1, d2) if d1 <= d2 else d2, deg, 0.6), deg, perturb)
            _strong_trial(rep, t, f"{kind}({d1},{d2}) random", a, f1, f2, random_point(rng, d1))
    if kind in ("stiefel", "affine"):
        _stiefel_refutation(rep, t, rng)
    if kind in ("grassmann", "affine") and rep.holds:
        _grassmann_refutation(rep, t, rng)
    return rep


def check_decoupling(
    t: ExoticAromaticTree, trivially: bool = False, trials: int = 3, *, seed: int = 0
) -> EquivarianceReport:
    """``F(f1 + f2)`` on a block point against the blocks ``F(f1)``, ``F(f2)``.

    ``trivially=True`` fixes ``f2 = 0``.  Otherwise a disconnected tree is also
    tested with ``f1`` the dual field of its rooted part and ``f2`` the dual
    field of its aromas.
    """
    if not t.rooted:
        raise ValueError("decoupling is defined for rooted trees")
    rep = EquivarianceReport("trivially_decoupling" if trivially else "decoupling", t)
    rng = random.Random(f"decoupling/{seed}/{trivially}/{t.sigma_string()}/{t.tau_string()}")
    deg = _degree(t)

    def trial(f1, f2, x1, x2, construction):
        f = direct_sum(f1, f2)
        lhs = _value(t, f, x1 + x2)
        rhs = _value(t, f1, x1) + _value(t, f2, x2)
        d1, d2 = f1.dimension, f2.dimension
        ident = AffineMap(identity(d1 + d2), (Fraction(0),) * (d1 + d2))
        return rep.record(construction, ident, (f1, f2), x1 + x2, lhs, rhs)

    for d1, d2 in ((1, 1), (1, 2), (2, 2)):
        for _ in range(trials):
            f1 = random_field(rng, d1, deg, 0.6)
            f2 = PolyVectorField.zero(d2) if trivially else random_field(rng, d2, deg, 0.6)
            trial(f1, f2, random_point(rng, d1), random_point(rng, d2), "random blocks")
    if not trivially:
        rooted, aromas = connected_components(t)
        if rooted is not None and aromas:
            for _ in range(8):
                f1 = _theta_field(rooted, rng)
                f2 = _theta_field(OrderedHost(None, aromas), rng)
                z1, z2 = (Fraction(0),) * f1.dimension, (Fraction(0),) * f2.dimension
                if not trial(f1, f2, z1, z2, "dual fields of rooted part and aromas"):
                    break
    return rep


# -- classification ------------------------------------------------------------------


def expected_verdict(t: ExoticAromaticTree, prop: str) -> bool:
    fl = t.classify()
    return {
        "orthogonal": True,
        "gl": fl.is_aromatic,
        "stiefel": not fl.has_liana and not fl.has_loop,
        "grassmann": fl.is_exotic_tree,
        "affine": fl.is_butcher_tree,
        "decoupling": fl.is_connected,
    }[prop]


def run_check(t: ExoticAromaticTree, prop: str, *, seed: int = 0, exact_only: bool = False) -> EquivarianceReport:
    if prop == "orthogonal":
        return check_orthogonal_equivariance(t, exact_only=exact_only, seed=seed)
    if prop == "gl":
        return check_gl_equivariance(t, seed=seed)
    if prop in ("stiefel", "grassmann", "affine"):
        return check_strong_equivariance(t, prop, seed=seed)
    if prop == "decoupling":
        return check_decoupling(t, seed=seed)
    raise ValueError(f"unknown property {prop!r}")


@dataclass
class ClassificationRow:
    tree: ExoticAromaticTree
    reports: dict[str, EquivarianceReport] = field(default_factory=dict)

    def verdict(self, prop: str) -> bool:
        return self.reports[prop].holds


@dataclass
class ClassificationMatrix:
    properties: tuple[str, ...]
    rows: list[ClassificationRow]

    def render(self) -> str:
        head = ["tree"] + list(self.properties)
        lines = []
        body = [
            [render_symbolic(r.tree)] + ["yes" if r.verdict(p) else "no" for p in self.properties] for r in self.rows
        ]
        widths = [max(len(str(row[i])) for row in [head] + body) for i in range(len(head))]
        for row in [head] + body:
            lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
        return "\n".join(lines)

    def to_json(self) -> list[dict]:
        return [{p: r.reports[p].to_json() for p in self.properties} for r in self.rows]


def classification_matrix(
    order: int,
    properties: Sequence[str] = PROPERTIES,
    *,
    seed: int = 0,
    exact_only: bool = False,
    trees: Sequence[ExoticAromaticTree] | None = None,
) -> ClassificationMatrix:
    """Run every check on every tree of order at most ``order``.

    Raises :class:`Disagreement` as soon as a verdict differs from the class
    predicate, or when a failing verdict lacks an exact witness.
    """
    trees = list(trees) if trees is not None else enumerate_up_to_order(order)
    rows = []
    for t in trees:
        row = ClassificationRow(t)
        for p in properties:
            rep = run_check(t, p, seed=seed, exact_only=exact_only)
            row.reports[p] = rep
            want = expected_verdict(t, p)
            if rep.holds != want or (not rep.holds and rep.witness is None):
                raise Disagreement(t, p, want, rep)
        rows.append(row)
    return ClassificationMatrix(tuple(properties), rows)


TABLE_2 = (
    ("orthogonal-equivariance", "exotic aromatic B-series"),
    ("GL-equivariance", "aromatic B-series"),
    ("Stiefel-equivariance", "B-series with stolons"),
    ("Grassmann-equivariance", "exotic B-series"),
    ("affine/semi-orthogonal-equivariance", "B-series"),
)


def summary_table(m: ClassificationMatrix) -> str:
    """Property -> class of trees that passed, with per-property pass counts."""
    col = {"orthogonal": 0, "gl": 1, "stiefel": 2, "grassmann": 3, "affine": 4}
    lines = []
    for p in m.properties:
        n_pass = sum(r.verdict(p) for r in m.rows)
        label = TABLE_2[col[p]] if p in col else ("decoupling", "connected exotic aromatic B-series")
        lines.append(f"{label[0]:<38} {label[1]:<36} {n_pass}/{len(m.rows)} trees")
    return "\n".join(lines)
