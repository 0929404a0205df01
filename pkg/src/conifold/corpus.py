"""Seeded random generators and shipped example corpora.

Every generator takes a ``numpy.random.Generator``; numbers it draws are turned
into Python ints before they touch exact arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from conifold.degeneration import LESWitness
from conifold.monodromy import GluingDatum, Lattice, VanishingConfig, canonical_gluing
from conifold.qlinalg import Matrix, image, kernel, rank
from conifold.zigzag import ZigZag, build


def _ints(rng: np.random.Generator, low: int, high: int, size: int) -> list[int]:
    return [int(x) for x in rng.integers(low, high + 1, size=size)]


def random_invertible(n: int, rng: np.random.Generator, spread: int = 2) -> Matrix:
    """Integer matrix of determinant 1, a product of unit triangular factors."""
    lower = [[1 if i == j else (_ints(rng, -spread, spread, 1)[0] if i > j else 0)
              for j in range(n)] for i in range(n)]
    upper = [[1 if i == j else (_ints(rng, -spread, spread, 1)[0] if i < j else 0)
              for j in range(n)] for i in range(n)]
    return Matrix.from_rows(lower, n) @ Matrix.from_rows(upper, n)


def _standard_map(rows: int, cols: int, src: int, dst: int, width: int) -> Matrix:
    """0/1 matrix sending basis vectors src..src+width-1 to dst..dst+width-1."""
    grid = [[0] * cols for _ in range(rows)]
    for t in range(width):
        grid[dst + t][src + t] = 1
    return Matrix.from_rows(grid, cols)


# ---------------------------------------------------------------------------
# Zig-zags
# ---------------------------------------------------------------------------

def random_zigzag(rng: np.random.Generator, max_dim: int = 3) -> ZigZag:
    """Exact zig-zag in a random basis.

    In adapted coordinates A = im(alpha) + C and B = beta(C) + D with beta
    injective on C and gamma injective on D; each space then gets a random
    change of basis.
    """
    hm, h0 = _ints(rng, 0, max_dim, 2)
    k = _ints(rng, 0, hm, 1)[0]
    c = _ints(rng, 0, max_dim, 1)[0]
    d = _ints(rng, 0, h0, 1)[0]
    a, b = k + c, c + d
    alpha = _standard_map(a, hm, 0, 0, k)
    beta = _standard_map(b, a, k, 0, c)
    gamma = _standard_map(h0, b, c, 0, d)
    p_hm, p_a, p_b, p_h0 = (random_invertible(n, rng) for n in (hm, a, b, h0))
    return build(
        hm, h0, a, b,
        p_a @ alpha @ p_hm.inverse(),
        p_b @ beta @ p_a.inverse(),
        p_h0 @ gamma @ p_b.inverse(),
        label="L",
    )


def zigzag_corpus(size: int, seed: int = 0, max_dim: int = 3) -> list[ZigZag]:
    rng = np.random.default_rng(seed)
    return [random_zigzag(rng, max_dim) for _ in range(size)]


# ---------------------------------------------------------------------------
# Unipotent and nilpotent matrices
# ---------------------------------------------------------------------------

def random_unipotent_upper(n: int, rng: np.random.Generator, spread: int = 3) -> Matrix:
    return Matrix.from_rows([
        [1 if i == j else (_ints(rng, -spread, spread, 1)[0] if j > i else 0) for j in range(n)]
        for i in range(n)
    ], n)


def random_partition(n: int, rng: np.random.Generator) -> list[int]:
    parts, left = [], n
    while left:
        s = _ints(rng, 1, left, 1)[0]
        parts.append(s)
        left -= s
    return sorted(parts, reverse=True)


def jordan_nilpotent(sizes: list[int]) -> Matrix:
    """Block-diagonal nilpotent Jordan matrix with the given block sizes."""
    n = sum(sizes)
    grid = [[0] * n for _ in range(n)]
    start = 0
    for s in sizes:
        for t in range(s - 1):
            grid[start + t][start + t + 1] = 1
        start += s
    return Matrix.from_rows(grid, n)


def random_nilpotent(n: int, rng: np.random.Generator) -> Matrix:
    """P J P^{-1} for a random Jordan type J and random integer P."""
    j = jordan_nilpotent(random_partition(n, rng))
    p = random_invertible(n, rng)
    return p @ j @ p.inverse()


def nilpotent_corpus(size: int, seed: int = 0, max_size: int = 6) -> list[Matrix]:
    rng = np.random.default_rng(seed)
    return [random_nilpotent(_ints(rng, 1, max_size, 1)[0], rng) for _ in range(size)]


def unipotent_corpus(size: int, seed: int = 0, max_size: int = 4) -> list[Matrix]:
    rng = np.random.default_rng(seed)
    return [random_unipotent_upper(_ints(rng, 1, max_size, 1)[0], rng) for _ in range(size)]


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

def random_vanishing_config(rng: np.random.Generator, max_rank: int = 4,
                            symmetry: str = "skew") -> VanishingConfig:
    n = _ints(rng, 1, max_rank, 1)[0]
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            x = _ints(rng, -2, 2, 1)[0]
            if symmetry == "skew":
                if i != j:
                    grid[i][j], grid[j][i] = x, -x
            else:
                grid[i][j] = grid[j][i] = x
    r = _ints(rng, 1, 3, 1)[0]
    cycles = tuple(tuple(_ints(rng, -2, 2, n)) for _ in range(r))
    return VanishingConfig(Lattice(n, Matrix.from_rows(grid, n), symmetry), cycles)


def hyperbolic_lattice(pairs: int) -> Lattice:
    """Skew lattice of ``pairs`` orthogonal hyperbolic planes, e_{2i-1}.e_{2i} = 1."""
    n = 2 * pairs
    grid = [[0] * n for _ in range(n)]
    for p in range(pairs):
        grid[2 * p][2 * p + 1] = 1
        grid[2 * p + 1][2 * p] = -1
    return Lattice(n, Matrix.from_rows(grid, n), "skew")


# ---------------------------------------------------------------------------
# Exact complexes for the LES bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExactComplex:
    """C_0 -> C_1 -> ... -> C_{L-1}, exact at every inner term; term 3m is the
    special fiber, 3m+1 psi and 3m+2 phi in degree m."""

    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]

    def is_exact(self) -> bool:
        for i in range(1, len(self.maps)):
            if image(self.maps[i - 1]) != kernel(self.maps[i]):
                return False
        return True

    def witness(self) -> LESWitness:
        degrees = len(self.dims) // 3
        terms = ({}, {}, {})
        ranks = ({}, {})
        for m in range(degrees):
            for t in range(3):
                if self.dims[3 * m + t]:
                    terms[t][m] = self.dims[3 * m + t]
            for t in range(2):
                rk = rank(self.maps[3 * m + t])
                if rk:
                    ranks[t][m] = rk
        return LESWitness(terms[0], terms[1], terms[2], ranks[0], ranks[1])


def random_exact_complex(rng: np.random.Generator, degrees: int = 3, max_rank: int = 2) -> ExactComplex:
    """Three-periodic exact complex built from actual matrices.

    Map i has rank r_i and C_i = r_{i-1} + r_i; the first incoming and last
    outgoing maps are zero so the sequence is exact at both ends.
    """
    length = 3 * degrees
    ranks = _ints(rng, 0, max_rank, length - 1) + [0]
    dims = tuple((ranks[i - 1] if i else 0) + ranks[i] for i in range(length))
    bases = [random_invertible(d, rng) for d in dims]
    maps = []
    for i in range(length - 1):
        src = ranks[i - 1] if i else 0
        std = _standard_map(dims[i + 1], dims[i], src, 0, ranks[i])
        maps.append(bases[i + 1] @ std @ bases[i].inverse())
    maps.append(Matrix.zeros(0, dims[-1]))
    complex_ = ExactComplex(dims, tuple(maps))
    if not complex_.is_exact():
        raise AssertionError("generated complex is not exact")
    return complex_


def perturb_witness(w: LESWitness, rng: np.random.Generator) -> LESWitness:
    """Raise one randomly chosen dimension by one."""
    term = _ints(rng, 0, 2, 1)[0]
    seqs = [dict(w.h_special), dict(w.h_psi), dict(w.h_phi)]
    window = w.window()
    degrees = list(window) or [0]
    m = degrees[_ints(rng, 0, len(degrees) - 1, 1)[0]]
    seqs[term][m] = seqs[term].get(m, 0) + 1
    return LESWitness(seqs[0], seqs[1], seqs[2], w.rank_special_psi, w.rank_psi_phi)


# ---------------------------------------------------------------------------
# Shipped corpora
# ---------------------------------------------------------------------------

def quasi_unipotent_corpus() -> list[tuple[str, Matrix, bool, int | None]]:
    """(name, matrix, expected flag, expected order)."""
    m = Matrix.from_rows
    return [
        ("identity", Matrix.identity(2), True, 1),
        ("unipotent", m([[1, 1], [0, 1]]), True, 1),
        ("negated_unipotent", m([[-1, 1], [0, -1]]), True, 2),
        ("order_3", m([[0, -1], [1, -1]]), True, 3),
        ("rotation", m([[0, -1], [1, 0]]), True, 4),
        ("order_6", m([[1, -1], [1, 0]]), True, 6),
        ("mixed_orders", Matrix.diag([-1, 1, 1]) @ m([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), True, 2),
        ("diag_2_1", Matrix.diag([2, 1]), False, None),
        ("cat_map", m([[2, 1], [1, 1]]), False, None),
        ("half", Matrix.diag([Fraction(1, 2), 2]), False, None),
    ]


def gluing_corpus() -> list[tuple[str, GluingDatum, bool]]:
    """(name, datum, expected verdict)."""
    m = Matrix.from_rows
    two_block = m([[0, 1], [0, 0]])
    return [
        ("zero", GluingDatum(1, 1, m([[0]]), m([[0]]), m([[0]])), True),
        ("scalar_lambda", GluingDatum(1, 1, m([[1]]), m([[3]]), m([[3]])), True),
        ("scalar_mismatch", GluingDatum(1, 1, m([[1]]), m([[3]]), m([[2]])), False),
        ("u1_v1_n0", GluingDatum(1, 1, m([[1]]), m([[1]]), m([[0]])), False),
        ("canonical_two_block", canonical_gluing(two_block), True),
        ("wrong_order", GluingDatum(2, 1, m([[1, 0]]), m([[0], [1]]), two_block), False),
        ("factorized", GluingDatum(2, 1, m([[0, 1]]), m([[1], [0]]), two_block), True),
    ]
