"""Exact polynomial vector fields over the rationals.

Polynomials are sparse maps from exponent tuples to coefficients.  The core
keeps :class:`fractions.Fraction` coefficients; floats are accepted so that
the same code can push a field through a floating-point orthogonal matrix.
Variables are 0-based internally and printed as ``x1 .. xd``.
"""

from __future__ import annotations

import ast
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

Number = Fraction | int | float


class IndexOutOfRange(IndexError):
    pass


class SingularMatrix(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class Polynomial:
    """Sparse multivariate polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], Number] | None = None):
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def constant(cls, nvars: int, c: Number) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexOutOfRange(f"variable x{i + 1} outside 1..{nvars}")
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def parse(cls, text: str, nvars: int) -> "Polynomial":
        """Parse ``2*x2^2 - x1*x3 + 1/3`` style input."""
        return _PolyParser(nvars).parse(text)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionMismatch("polynomials live in different variable sets")
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(self.nvars, {k: v * other for k, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple[int, ...], Number] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Polynomial.constant(self.nvars, Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        return self == Polynomial.constant(self.nvars, other)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- calculus ------------------------------------------------------------

    def derivative(self, *variables: int) -> "Polynomial":
        """Partial derivative along each listed 0-based variable in turn."""
        p = self
        for i in variables:
            if not 0 <= i < self.nvars:
                raise IndexOutOfRange(f"variable x{i + 1} outside 1..{self.nvars}")
            out = {}
            for k, v in p.terms.items():
                if k[i]:
                    nk = k[:i] + (k[i] - 1,) + k[i + 1:]
                    out[nk] = out.get(nk, 0) + v * k[i]
            p = Polynomial(self.nvars, out)
        return p

    def __call__(self, point: Sequence[Number]):
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = 0
        for k, v in self.terms.items():
            term = v
            for x, e in zip(point, k):
                if e:
                    term = term * x**e
            total = total + term
        return total if self.terms else Fraction(0)

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``x_i -> subs[i]``; the result lives in ``subs``' variables."""
        if len(subs) != self.nvars:
            raise DimensionMismatch("need one substitution per variable")
        m = subs[0].nvars if subs else 0
        result = Polynomial(m)
        powers: dict[tuple[int, int], Polynomial] = {}
        for k, v in self.terms.items():
            term = Polynomial.constant(m, v)
            for i, e in enumerate(k):
                if e:
                    if (i, e) not in powers:
                        powers[(i, e)] = subs[i] ** e
                    term = term * powers[(i, e)]
            result = result + term
        return result

    def embed(self, nvars: int, positions: Sequence[int]) -> "Polynomial":
        """Rename variable ``i`` to ``positions[i]`` inside ``nvars`` variables."""
        out = {}
        for k, v in self.terms.items():
            nk = [0] * nvars
            for i, e in enumerate(k):
                nk[positions[i]] += e
            out[tuple(nk)] = v
        return Polynomial(nvars, out)

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def is_exact(self) -> bool:
        return all(isinstance(v, (Fraction, int)) for v in self.terms.values())

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for k in sorted(self.terms, key=lambda k: (-sum(k), [-e for e in k])):
            v = self.terms[k]
            mono = "*".join(
                f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(k) if e
            )
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if mono:
                coef = "" if mag == 1 else f"{mag}*"
                pieces.append((sign, coef + mono))
            else:
                pieces.append((sign, str(mag)))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self})"


class _PolyParser:
    _allowed = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name,
                ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd, ast.Load)

    def __init__(self, nvars: int):
        self.nvars = nvars

    def parse(self, text: str) -> Polynomial:
        src = text.replace("^", "**")
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
        for node in ast.walk(tree):
            if not isinstance(node, self._allowed):
                raise ValueError(f"unsupported syntax in {text!r}")
        value = self._eval(tree.body)
        return value if isinstance(value, Polynomial) else Polynomial.constant(self.nvars, value)

    def _eval(self, node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                raise ValueError(f"bad literal {node.value!r}")
            return as_fraction(repr(node.value)) if isinstance(node.value, float) else Fraction(node.value)
        if isinstance(node, ast.Name):
            m = re.fullmatch(r"x(\d+)", node.id)
            if not m:
                raise ValueError(f"unknown variable {node.id!r}")
            return Polynomial.variable(self.nvars, int(m.group(1)) - 1)
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        left, right = self._eval(node.left), self._eval(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if isinstance(right, Polynomial):
                if right.degree > 0:
                    raise ValueError("division by a non-constant polynomial")
                right = right.terms.get((0,) * self.nvars, Fraction(0))
            if right == 0:
                raise ZeroDivisionError("division by zero in polynomial literal")
            return left * (Fraction(1) / right)
        if isinstance(node.op, ast.Pow):
            if isinstance(right, Polynomial):
                right = right.terms.get((0,) * self.nvars, Fraction(0)) if right.degree <= 0 else None
            if right is None or right != int(right) or right < 0:
                raise ValueError("exponents must be non-negative integers")
            return left ** int(right)
        raise ValueError("unsupported operator")


@dataclass(frozen=True)
class PolyVectorField:
    """A vector field on R^d with polynomial components."""

    components: tuple[Polynomial, ...]

    def __post_init__(self):
        d = len(self.components)
        for c in self.components:
            if c.nvars != d:
                raise DimensionMismatch("component variables must match the dimension")

    @property
    def dimension(self) -> int:
        return len(self.components)

    @classmethod
    def zero(cls, d: int) -> "PolyVectorField":
        return cls(tuple(Polynomial(d) for _ in range(d)))

    @classmethod
    def parse(cls, text: str, dimension: int | None = None) -> "PolyVectorField":
        """Parse ``f1 = ...`` lines (newline or ``;`` separated).

        Missing components are zero; the dimension defaults to the largest
        component or variable index mentioned.
        """
        entries = [e.strip() for e in re.split(r"[;\n]", text) if e.strip() and not e.strip().startswith("#")]
        named: dict[int, str] = {}
        for e in entries:
            m = re.fullmatch(r"f(\d+)\s*=\s*(.+)", e)
            if not m:
                raise ValueError(f"expected 'fK = polynomial', got {e!r}")
            named[int(m.group(1))] = m.group(2)
        if dimension is None:
            idx = [int(v) for body in named.values() for v in re.findall(r"x(\d+)", body)]
            dimension = max([*named, *idx], default=1)
        if any(k < 1 or k > dimension for k in named):
            raise IndexOutOfRange("component index outside 1..d")
        comps = tuple(
            Polynomial.parse(named[i + 1], dimension) if i + 1 in named else Polynomial(dimension)
            for i in range(dimension)
        )
        return cls(comps)

    def __call__(self, x: Sequence[Number]) -> tuple:
        return tuple(c(x) for c in self.components)

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField(tuple(a - b for a, b in zip(self.components, other.components)))

    def __eq__(self, other):
        return isinstance(other, PolyVectorField) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def jacobian(self) -> list[list[Polynomial]]:
        return [[c.derivative(j) for j in range(self.dimension)] for c in self.components]

    def to_text(self) -> str:
        return "\n".join(f"f{i + 1} = {c}" for i, c in enumerate(self.components))

    def __str__(self):
        return "; ".join(f"f{i + 1} = {c}" for i, c in enumerate(self.components))


def partial_derivative(f: PolyVectorField, component: int, alpha: Sequence[int]) -> Polynomial:
    """``d_alpha f^component`` with 1-based component and coordinate indices."""
    if not 1 <= component <= f.dimension:
        raise IndexOutOfRange(f"component {component} outside 1..{f.dimension}")
    if any(not 1 <= a <= f.dimension for a in alpha):
        raise IndexOutOfRange("derivative index outside 1..d")
    return f.components[component - 1].derivative(*(a - 1 for a in alpha))


@dataclass(frozen=True)
class Jet:
    """Derivatives ``d_alpha f^i(x)`` for all sorted multi-indices ``|alpha| <= k``."""

    point: tuple
    max_order: int
    values: dict  # (i, alpha) -> number, 0-based, alpha a sorted tuple

    def __getitem__(self, key):
        i, alpha = key
        return self.values[(i, tuple(sorted(alpha)))]


def jet(f: PolyVectorField, x: Sequence[Number], k: int) -> Jet:
    d = f.dimension
    values = {}
    for i, comp in enumerate(f.components):
        for order in range(k + 1):
            for alpha in combinations_with_replacement(range(d), order):
                values[(i, alpha)] = comp.derivative(*alpha)(x)
    return Jet(tuple(x), k, values)


class JetCache:
    """Lazily computed derivatives of a field at a fixed point."""

    def __init__(self, f: PolyVectorField, x: Sequence[Number]):
        if len(x) != f.dimension:
            raise DimensionMismatch(f"point has {len(x)} coordinates, field dimension {f.dimension}")
        self.f = f
        self.x = tuple(x)
        self._polys: dict[tuple[int, tuple[int, ...]], Polynomial] = {}
        self._vals: dict[tuple[int, tuple[int, ...]], Number] = {}

    def _poly(self, i: int, alpha: tuple[int, ...]) -> Polynomial:
        key = (i, alpha)
        if key not in self._polys:
            if not alpha:
                self._polys[key] = self.f.components[i]
            else:
                self._polys[key] = self._poly(i, alpha[:-1]).derivative(alpha[-1])
        return self._polys[key]

    def __call__(self, i: int, alpha: tuple[int, ...]):
        key = (i, alpha)
        if key not in self._vals:
            self._vals[key] = self._poly(i, alpha)(self.x)
        return self._vals[key]


# -- linear algebra over the rationals ----------------------------------------

Matrix = tuple[tuple[Number, ...], ...]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0])))
        for i in range(len(a))
    )


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum((row[k] * v[k] for k in range(len(v))), Fraction(0)) for row in a)


def transpose(a: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def identity(d: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))


def mat_inv(a: Sequence[Sequence]) -> Matrix:
    """Gauss-Jordan inverse over the rationals."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise SingularMatrix("only square matrices are invertible")
    m = [[as_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-exact Gaussian elimination."""
    m = [[as_fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    rank = 0
    ncols = len(m[0])
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, len(m)):
            if m[r][col] != 0:
                factor = m[r][col] / m[rank][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


@dataclass(frozen=True)
class AffineMap:
    """``a(x) = A x + b`` from R^{d1} to R^{d2}; ``matrix`` is d2 x d1."""

    matrix: Matrix
    offset: tuple

    def __post_init__(self):
        rows = len(self.matrix)
        if rows != len(self.offset):
            raise DimensionMismatch("offset length must equal the number of rows")
        if len({len(r) for r in self.matrix}) > 1:
            raise DimensionMismatch("ragged matrix")

    @classmethod
    def linear(cls, matrix: Sequence[Sequence]) -> "AffineMap":
        m = tuple(tuple(r) for r in matrix)
        return cls(m, tuple(Fraction(0) for _ in m))

    @property
    def d_in(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def d_out(self) -> int:
        return len(self.matrix)

    def __call__(self, x: Sequence) -> tuple:
        return tuple(v + b for v, b in zip(mat_vec(self.matrix, x), self.offset))

    @cached_property
    def is_exact(self) -> bool:
        return all(isinstance(v, (Fraction, int)) for r in self.matrix for v in r) and all(
            isinstance(v, (Fraction, int)) for v in self.offset
        )

    def left_orthogonal(self) -> bool:
        """Exact check of ``A^T A = I`` (Stiefel)."""
        return mat_mul(transpose(self.matrix), self.matrix) == identity(self.d_in)

    def right_orthogonal(self) -> bool:
        """Exact check of ``A A^T = I`` (Grassmann)."""
        return mat_mul(self.matrix, transpose(self.matrix)) == identity(self.d_out)

    def inverse(self) -> "AffineMap":
        inv = mat_inv(self.matrix)
        return AffineMap(inv, tuple(-v for v in mat_vec(inv, self.offset)))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other``."""
        return AffineMap(mat_mul(self.matrix, other.matrix), self(other.offset))

    def as_polynomials(self, nvars: int | None = None) -> list[Polynomial]:
        """Components of ``a`` as degree-1 polynomials in the input variables."""
        n = self.d_in if nvars is None else nvars
        xs = [Polynomial.variable(n, j) for j in range(self.d_in)]
        out = []
        for row, b in zip(self.matrix, self.offset):
            p = Polynomial.constant(n, b)
            for c, xv in zip(row, xs):
                if c != 0:
                    p = p + xv * c
            out.append(p)
        return out


def apply_linear(matrix: Sequence[Sequence], polys: Sequence[Polynomial]) -> tuple[Polynomial, ...]:
    """``A @ polys`` for a matrix with len(polys) columns."""
    nv = polys[0].nvars if polys else 0
    out = []
    for row in matrix:
        p = Polynomial(nv)
        for c, q in zip(row, polys):
            if c != 0:
                p = p + q * c
        out.append(p)
    return tuple(out)


def pullback(f: PolyVectorField, a: AffineMap) -> tuple[Polynomial, ...]:
    """Components of ``x -> f(a(x))`` as polynomials in ``a``'s input variables."""
    subs = a.as_polynomials()
    return tuple(c.compose(subs) for c in f.components)


def affine_pushforward(g: AffineMap, f: PolyVectorField) -> PolyVectorField:
    """``(g . f)(x) = A f(A^{-1}(x - b))``."""
    if g.d_in != g.d_out or g.d_in != f.dimension:
        raise DimensionMismatch("the group action needs a square map of the field's dimension")
    if g.is_exact:
        ginv = g.inverse()
    else:
        import numpy as np

        inv = np.linalg.inv(np.array(g.matrix, dtype=float))
        if not np.all(np.isfinite(inv)):
            raise SingularMatrix("matrix is singular")
        ginv = AffineMap(tuple(map(tuple, inv.tolist())), tuple((-inv @ np.array(g.offset, dtype=float)).tolist()))
    inner = pullback(f, ginv)
    return PolyVectorField(apply_linear(g.matrix, inner))


def direct_sum(f1: PolyVectorField, f2: PolyVectorField) -> PolyVectorField:
    """``(f1 + f2)(x, y) = (f1(x), f2(y))`` on disjoint variables."""
    d1, d2 = f1.dimension, f2.dimension
    d = d1 + d2
    first = [c.embed(d, range(d1)) for c in f1.components]
    second = [c.embed(d, range(d1, d)) for c in f2.components]
    return PolyVectorField(tuple(first + second))


def gradient_field(potential: Polynomial) -> PolyVectorField:
    """``f^i = d_i V``."""
    return PolyVectorField(tuple(potential.derivative(i) for i in range(potential.nvars)))


def has_symmetric_jacobian(f: PolyVectorField) -> bool:
    jac = f.jacobian()
    d = f.dimension
    return all(jac[i][j] == jac[j][i] for i in range(d) for j in range(i + 1, d))


def random_polynomial(
    rng: random.Random, nvars: int, degree: int = 3, density: float = 0.5, coeff_range: int = 3
) -> Polynomial:
    """Random polynomial with integer coefficients in ``[-coeff_range, coeff_range]``."""
    terms = {}
    for total in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), total):
            if rng.random() < density:
                exp = [0] * nvars
                for i in combo:
                    exp[i] += 1
                terms[tuple(exp)] = Fraction(rng.randint(-coeff_range, coeff_range))
    return Polynomial(nvars, terms)


def random_field(
    rng: random.Random, d: int, degree: int = 3, density: float = 0.5, coeff_range: int = 3
) -> PolyVectorField:
    return PolyVectorField(tuple(random_polynomial(rng, d, degree, density, coeff_range) for _ in range(d)))


def random_point(rng: random.Random, d: int, span: int = 3) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(d))


def factorial_of_multi_index(alpha: Iterable[int]) -> int:
    counts: dict[int, int] = {}
    for a in alpha:
        counts[a] = counts.get(a, 0) + 1
    return math.prod(math.factorial(c) for c in counts.values())
