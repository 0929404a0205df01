"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a positive
denominator).  Matrices are immutable row-major grids of scalars; subspaces are
stored as a canonical basis so that equality is plain structural equality.

Canonical form of a subspace: the spanning vectors are written as rows,
row-reduced to RREF, zero rows are dropped and the result is transposed.  The
basis columns are therefore in reduced column-echelon form with unit pivots.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import sympy

from conifold.errors import (
    DimensionError,
    NotNilpotentError,
    NotSquareError,
    NotUnipotentError,
    SingularMatrixError,
)

logger = logging.getLogger(__name__)

Scalar = Fraction


def scalar(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError(f"not a scalar: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"not an exact scalar: {value!r}")


# ---------------------------------------------------------------------------
# Matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError(f"negative matrix shape {self.rows}x{self.cols}")
        grid = tuple(tuple(scalar(x) for x in row) for row in self.entries)
        if len(grid) != self.rows or any(len(row) != self.cols for row in grid):
            raise DimensionError(
                f"entry grid does not match declared shape {self.rows}x{self.cols}"
            )
        object.__setattr__(self, "entries", grid)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("column count is required for a matrix without rows")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(tuple(r) for r in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = [list(c) for c in columns]
        return cls(rows, len(columns), tuple(
            tuple(c[i] for c in columns) for i in range(rows)
        ))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(n, n, tuple(
            tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n)
        ))

    @classmethod
    def block(cls, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every block row must share a height and
        every block column a width."""
        heights = [row[0].rows for row in grid]
        widths = [m.cols for m in grid[0]] if grid else []
        for i, row in enumerate(grid):
            if len(row) != len(widths):
                raise DimensionError("ragged block grid")
            for j, m in enumerate(row):
                if m.rows != heights[i] or m.cols != widths[j]:
                    raise DimensionError(
                        f"block ({i},{j}) has shape {m.shape}, expected {heights[i]}x{widths[j]}"
                    )
        out = []
        for i, row in enumerate(grid):
            for r in range(heights[i]):
                line: list[Fraction] = []
                for m in row:
                    line.extend(m.entries[r])
                out.append(line)
        return cls.from_rows(out, sum(widths))

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)
        ))

    # -- arithmetic ---------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot compose {self.shape} with {other.shape}")
        ocols = other.columns()
        return Matrix(self.rows, other.cols, tuple(
            tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in ocols)
            for row in self.entries
        ))

    def apply(self, vector: Sequence) -> tuple[Fraction, ...]:
        if len(vector) != self.cols:
            raise DimensionError(f"vector of length {len(vector)} for {self.shape} matrix")
        v = [scalar(x) for x in vector]
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.entries)

    def _zip(self, other: "Matrix", op) -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.rows, self.cols, tuple(
            tuple(op(a, b) for a, b in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)
        ))

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = scalar(c)
        return Matrix(self.rows, self.cols, tuple(tuple(c * x for x in row) for row in self.entries))

    def power(self, k: int) -> "Matrix":
        if not self.is_square:
            raise NotSquareError(f"power of non-square {self.shape} matrix")
        result = Matrix.identity(self.rows)
        base = self
        while k > 0:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def det(self) -> Fraction:
        if not self.is_square:
            raise NotSquareError(f"determinant of non-square {self.shape} matrix")
        a = [list(row) for row in self.entries]
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise NotSquareError(f"inverse of non-square {self.shape} matrix")
        n = self.rows
        aug = Matrix.block([[self, Matrix.identity(n)]])
        reduced, _ = rref(aug)
        left = Matrix.from_rows([row[:n] for row in reduced.entries], n)
        if left != Matrix.identity(n):
            raise SingularMatrixError(f"matrix of shape {self.shape} is singular")
        return Matrix.from_rows([row[n:] for row in reduced.entries], n)

    def to_sympy(self) -> sympy.Matrix:
        return sympy.Matrix(self.rows, self.cols, [
            sympy.Rational(x.numerator, x.denominator) for row in self.entries for x in row
        ])

    @classmethod
    def from_sympy(cls, m: sympy.Matrix) -> "Matrix":
        return cls(m.rows, m.cols, tuple(
            tuple(scalar(sympy.Rational(m[i, j])) for j in range(m.cols)) for i in range(m.rows)
        ))


# ---------------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------------

def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form and rank."""
    rows, pivots = _rref_rows([list(r) for r in m.entries], m.cols)
    return Matrix.from_rows(rows, m.cols), len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[1]


# ---------------------------------------------------------------------------
# Subspace
# ---------------------------------------------------------------------------

def _canonical_basis(vectors: Iterable[Sequence], ambient_dim: int) -> Matrix:
    rows = [[scalar(x) for x in v] for v in vectors]
    for v in rows:
        if len(v) != ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
    reduced, pivots = _rref_rows(rows, ambient_dim)
    return Matrix.from_columns(reduced[:len(pivots)], ambient_dim)


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim; ``basis`` columns are canonical."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise DimensionError(
                f"basis has {self.basis.rows} rows in ambient dimension {self.ambient_dim}"
            )
        object.__setattr__(self, "basis", _canonical_basis(self.basis.columns(), self.ambient_dim))

    @classmethod
    def _canonical(cls, ambient_dim: int, basis: Matrix) -> "Subspace":
        """Wrap a basis that is already canonical without reducing it again."""
        s = object.__new__(cls)
        object.__setattr__(s, "ambient_dim", ambient_dim)
        object.__setattr__(s, "basis", basis)
        return s

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        return cls._canonical(ambient_dim, _canonical_basis(vectors, ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls._canonical(ambient_dim, Matrix.zeros(ambient_dim, 0))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls._canonical(ambient_dim, Matrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return self.basis.columns()

    def __le__(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return subspace_sum(self, other).dim == other.dim


def _check_ambient(s1: Subspace, s2: Subspace) -> None:
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}")


def kernel(m: Matrix) -> Subspace:
    rows, pivots = _rref_rows([list(r) for r in m.entries], m.cols)
    free = [c for c in range(m.cols) if c not in pivots]
    vectors = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        vectors.append(v)
    return Subspace.span(vectors, m.cols)


def image(m: Matrix) -> Subspace:
    return Subspace(m.rows, m)


def _zassenhaus(s1: Subspace, s2: Subspace) -> tuple[Subspace, Subspace]:
    _check_ambient(s1, s2)
    n = s1.ambient_dim
    rows = [list(v) + list(v) for v in s1.vectors()]
    rows += [list(v) + [Fraction(0)] * n for v in s2.vectors()]
    reduced, pivots = _rref_rows(rows, 2 * n)
    reduced = reduced[:len(pivots)]
    total = [r[:n] for r in reduced if any(x != 0 for x in r[:n])]
    meet = [r[n:] for r in reduced if all(x == 0 for x in r[:n])]
    return Subspace.span(total, n), Subspace.span(meet, n)


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    return _zassenhaus(s1, s2)[0]


def subspace_intersect(s1: Subspace, s2: Subspace) -> Subspace:
    return _zassenhaus(s1, s2)[1]


def apply_to(m: Matrix, s: Subspace) -> Subspace:
    """Image of the subspace ``s`` under ``m``."""
    if m.cols != s.ambient_dim:
        raise DimensionError(f"{m.shape} matrix applied to subspace of Q^{s.ambient_dim}")
    return image(m @ s.basis)


def annihilator(s: Subspace) -> Matrix:
    """Rows spanning the linear forms that vanish on ``s``; its kernel is ``s``."""
    ann = kernel(s.basis.T)
    return ann.basis.T


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """{x : m x in s}."""
    if m.rows != s.ambient_dim:
        raise DimensionError(f"{m.shape} matrix pulled back along subspace of Q^{s.ambient_dim}")
    forms = annihilator(s)
    return kernel(forms @ m)


# ---------------------------------------------------------------------------
# Filtration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Filtration:
    """Increasing filtration; indices outside ``steps`` extend by zero below and
    by the full space above."""

    ambient_dim: int
    center: int
    steps: tuple[tuple[int, Subspace], ...]

    def __post_init__(self):
        steps = tuple(sorted(((int(i), s) for i, s in dict(self.steps).items()), key=lambda p: p[0]))
        if not steps:
            raise DimensionError("a filtration needs at least one step")
        indices = [i for i, _ in steps]
        if indices != list(range(indices[0], indices[-1] + 1)):
            raise DimensionError(f"filtration indices must be contiguous, got {indices}")
        for i, s in steps:
            if s.ambient_dim != self.ambient_dim:
                raise DimensionError(f"step {i} lives in Q^{s.ambient_dim}, not Q^{self.ambient_dim}")
        for (i, lo), (_, hi) in zip(steps, steps[1:]):
            if not lo <= hi:
                raise DimensionError(f"filtration is not increasing at index {i}")
        if steps[0][1].dim != 0:
            raise DimensionError("bottom step of a filtration must be zero")
        if steps[-1][1].dim != self.ambient_dim:
            raise DimensionError("top step of a filtration must be the full space")
        object.__setattr__(self, "steps", steps)

    @property
    def indices(self) -> range:
        return range(self.steps[0][0], self.steps[-1][0] + 1)

    def step(self, index: int) -> Subspace:
        lo, hi = self.steps[0][0], self.steps[-1][0]
        if index < lo:
            return Subspace.zero(self.ambient_dim)
        if index > hi:
            return Subspace.full(self.ambient_dim)
        return self.steps[index - lo][1]

    def graded_dim(self, index: int) -> int:
        return self.step(index).dim - self.step(index - 1).dim

    def graded_dims(self) -> dict[int, int]:
        dims = {i: self.graded_dim(i) for i in self.indices}
        return {i: d for i, d in dims.items() if d}

    def shifted(self, by: int) -> "Filtration":
        """Same chain of subspaces, reindexed ``W'_l = W_{l-by}`` (center kept)."""
        return Filtration(self.ambient_dim, self.center, tuple((i + by, s) for i, s in self.steps))

    def with_step(self, index: int, subspace: Subspace) -> "Filtration":
        steps = dict(self.steps)
        if index not in steps:
            raise DimensionError(f"index {index} is not a stored step")
        steps[index] = subspace
        return Filtration(self.ambient_dim, self.center, tuple(steps.items()))


# ---------------------------------------------------------------------------
# Nilpotent / unipotent calculus
# ---------------------------------------------------------------------------

def _require_square(m: Matrix, what: str) -> None:
    if not m.is_square:
        raise NotSquareError(f"{what} needs a square matrix, got {m.shape}")


def is_nilpotent(n: Matrix) -> bool:
    _require_square(n, "nilpotence test")
    return n.power(n.rows).is_zero()


def nilpotency_index(n: Matrix) -> int:
    """Least m >= 1 with n^m = 0."""
    _require_square(n, "nilpotency index")
    p = n
    for m in range(1, max(n.rows, 1) + 1):
        if p.is_zero():
            return m
        p = p @ n
    raise NotNilpotentError(f"matrix of size {n.rows} is not nilpotent")


def is_unipotent(t: Matrix) -> bool:
    _require_square(t, "unipotence test")
    return is_nilpotent(t - Matrix.identity(t.rows))


def log_unipotent(t: Matrix) -> Matrix:
    """N = log T = (T - id) - (T - id)^2/2 + (T - id)^3/3 - ...; the series is finite."""
    _require_square(t, "log_unipotent")
    x = t - Matrix.identity(t.rows)
    if not x.power(t.rows).is_zero():
        raise NotUnipotentError(f"matrix of size {t.rows} is not unipotent")
    out = Matrix.zeros(t.rows, t.cols)
    term = x
    i = 1
    while not term.is_zero():
        out = out + term.scale(Fraction((-1) ** (i + 1), i))
        term = term @ x
        i += 1
    return out


def exp_nilpotent(n: Matrix) -> Matrix:
    _require_square(n, "exp_nilpotent")
    if not is_nilpotent(n):
        raise NotNilpotentError(f"matrix of size {n.rows} is not nilpotent")
    out = Matrix.identity(n.rows)
    term = Matrix.identity(n.rows)
    i = 1
    while True:
        term = (term @ n).scale(Fraction(1, i))
        if term.is_zero():
            return out
        out = out + term
        i += 1


class QuasiUnipotence(NamedTuple):
    flag: bool
    order: int | None


def _cyclotomic_index(factor: sympy.Poly, x: sympy.Symbol) -> int | None:
    degree = factor.degree()
    monic = factor.monic()
    for n in range(1, 2 * degree * degree + 3):
        if sympy.totient(n) == degree and monic == sympy.Poly(sympy.cyclotomic_poly(n, x), x, domain="QQ"):
            return n
    return None


def is_quasi_unipotent(t: Matrix) -> QuasiUnipotence:
    """Decide whether every eigenvalue of ``t`` is a root of unity.

    The characteristic polynomial is factored over Q and each irreducible
    factor is matched against the cyclotomic polynomials of the same degree.
    ``order`` is the lcm of the matched indices, i.e. the least m with t^m
    unipotent.
    """
    _require_square(t, "is_quasi_unipotent")
    if t.det() == 0:
        raise SingularMatrixError("quasi-unipotence needs an invertible matrix")
    if t.rows == 0:
        return QuasiUnipotence(True, 1)
    x = sympy.Symbol("x")
    charpoly = t.to_sympy().charpoly(x).as_expr()
    _, factors = sympy.factor_list(charpoly, x)
    order = 1
    for f, _mult in factors:
        n = _cyclotomic_index(sympy.Poly(f, x), x)
        if n is None:
            logger.debug("factor %s is not cyclotomic", f)
            return QuasiUnipotence(False, None)
        order = math.lcm(order, n)
    if not is_unipotent(t.power(order)):
        raise AssertionError(f"t^{order} is not unipotent although every factor is cyclotomic")
    return QuasiUnipotence(True, order)


def base_change(t: Matrix) -> tuple[Matrix, int]:
    """Replace a quasi-unipotent ``t`` by its unipotent power ``t^m``."""
    flag, order = is_quasi_unipotent(t)
    if not flag:
        raise NotUnipotentError("matrix is not quasi-unipotent; no finite base change helps")
    return t.power(order), order
