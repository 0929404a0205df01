"""Vanishing-cycle lattices, Picard-Lefschetz monodromy and weight filtrations.

Conventions
-----------
* The pairing is ``<x, y> = x^T @ gram @ y``.
* ``pl_transvection`` implements T(a) = a + <a, delta> delta exactly as written;
  no dimension-dependent sign is inserted, signs come from the gram matrix.
* ``total_monodromy`` composes in cycle-list order, T_r @ ... @ T_1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from conifold.errors import DimensionError, NotNilpotentError
from conifold.qlinalg import (
    Filtration,
    Matrix,
    Subspace,
    apply_to,
    image,
    is_nilpotent,
    is_quasi_unipotent,
    is_unipotent,
    log_unipotent,
    nilpotency_index,
    preimage,
    rank,
    subspace_intersect,
    subspace_sum,
)

logger = logging.getLogger(__name__)

SYMMETRIES = ("symmetric", "skew")


# ---------------------------------------------------------------------------
# Lattices and vanishing cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    rank: int
    gram: Matrix
    symmetry: str = "skew"

    def __post_init__(self):
        if self.symmetry not in SYMMETRIES:
            raise ValueError(f"symmetry must be one of {SYMMETRIES}, got {self.symmetry!r}")
        if self.gram.shape != (self.rank, self.rank):
            raise DimensionError(f"gram has shape {self.gram.shape} for a rank-{self.rank} lattice")
        if any(x.denominator != 1 for row in self.gram.entries for x in row):
            raise ValueError("gram matrix must be integral")
        expected = self.gram if self.symmetry == "symmetric" else -self.gram
        if self.gram.T != expected:
            raise ValueError(f"gram matrix is not {self.symmetry}")

    def pairing(self, x: Sequence, y: Sequence) -> Fraction:
        """<x, y> = x^T gram y."""
        gy = self.gram.apply(y)
        if len(x) != self.rank:
            raise DimensionError(f"vector of length {len(x)} in a rank-{self.rank} lattice")
        return sum((Fraction(a) * b for a, b in zip(x, gy)), Fraction(0))


@dataclass(frozen=True)
class VanishingConfig:
    lattice: Lattice
    cycles: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        cycles = tuple(tuple(int(x) for x in c) for c in self.cycles)
        for k, c in enumerate(cycles, start=1):
            if len(c) != self.lattice.rank:
                raise DimensionError(
                    f"cycle {k} has length {len(c)}, lattice rank is {self.lattice.rank}"
                )
        object.__setattr__(self, "cycles", cycles)

    @property
    def r(self) -> int:
        return len(self.cycles)


def pl_transvection(cfg: VanishingConfig, index: int) -> Matrix:
    """T = id + delta (gram delta)^T for the 1-based cycle ``index``."""
    if not 1 <= index <= cfg.r:
        raise IndexError(f"cycle index {index} outside 1..{cfg.r}")
    delta = cfg.cycles[index - 1]
    n = cfg.lattice.rank
    g_delta = cfg.lattice.gram.apply(delta)
    outer = Matrix.from_rows([[d * x for x in g_delta] for d in delta], n)
    return Matrix.identity(n) + outer


def total_monodromy(cfg: VanishingConfig) -> Matrix:
    if cfg.r == 0:
        raise ValueError("total monodromy needs at least one vanishing cycle")
    t = Matrix.identity(cfg.lattice.rank)
    for k in range(1, cfg.r + 1):
        t = pl_transvection(cfg, k) @ t
    return t


def vanishing_span_rank(cfg: VanishingConfig) -> int:
    """Rank of the span of the vanishing cycles."""
    if cfg.r == 0:
        return 0
    return rank(Matrix.from_columns(cfg.cycles, cfg.lattice.rank))


@dataclass(frozen=True)
class MonodromyReport:
    total: Matrix
    quasi_unipotent: bool
    order: int | None
    unipotent: bool
    power: int
    log: Matrix | None
    log_rank: int | None
    span_rank: int

    @property
    def ok(self) -> bool:
        """Log exists, is nilpotent and has rank bounded by the span of the cycles."""
        return (self.log is not None
                and is_nilpotent(self.log)
                and self.log_rank <= self.span_rank)


def analyze_monodromy(cfg: VanishingConfig, base_change: bool = False) -> MonodromyReport:
    """Total monodromy, its quasi-unipotence and N = log T.

    With ``base_change`` a quasi-unipotent but non-unipotent T is replaced by
    T^order before taking the logarithm; ``power`` records the exponent used.
    """
    t = total_monodromy(cfg)
    flag, order = is_quasi_unipotent(t)
    unipotent = is_unipotent(t)
    power = 1
    if not unipotent and base_change and flag:
        power = order
    effective = t.power(power)
    n = log_unipotent(effective) if is_unipotent(effective) else None
    report = MonodromyReport(
        total=t,
        quasi_unipotent=flag,
        order=order,
        unipotent=unipotent,
        power=power,
        log=n,
        log_rank=rank(n) if n is not None else None,
        span_rank=vanishing_span_rank(cfg),
    )
    logger.debug("monodromy of %d cycles: unipotent=%s order=%s", cfg.r, unipotent, order)
    return report


# ---------------------------------------------------------------------------
# Weight filtration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightFiltration:
    filtration: Filtration
    operator: Matrix

    @property
    def center(self) -> int:
        return self.filtration.center

    def step(self, index: int) -> Subspace:
        return self.filtration.step(index)

    def graded_dims(self) -> dict[int, int]:
        return self.filtration.graded_dims()


def _require_nilpotent(n: Matrix) -> None:
    if not n.is_square or not is_nilpotent(n):
        raise NotNilpotentError(f"weight filtration needs a nilpotent operator, got {n.shape}")


def weight_filtration(n: Matrix, center: int) -> WeightFiltration:
    """Recursive kernel/image construction of W(N) centered at ``center``.

    With nilpotency index m and L = m - 1, W_{k+L} = V and W_{k-L-1} = 0; the
    next pair is ker N^L and im N^L, and the construction repeats on the middle
    subquotient with L - 1, carrying the subquotient as a pair (U, I) of
    subspaces of V.

    The result is not re-checked here; :func:`check_weight_conditions` and
    :func:`check_hard_lefschetz` verify it independently.
    """
    _require_nilpotent(n)
    dim = n.rows
    k = center
    big_l = nilpotency_index(n) - 1
    upper, lower = Subspace.full(dim), Subspace.zero(dim)
    steps = {k + big_l: upper, k - big_l - 1: lower}
    while big_l > 0:
        power = n.power(big_l)
        upper = subspace_intersect(upper, preimage(power, lower))
        lower = subspace_sum(apply_to(power, steps[k + big_l]), lower)
        steps[k + big_l - 1] = upper
        steps[k - big_l] = lower
        big_l -= 1
    return WeightFiltration(Filtration(dim, k, tuple(steps.items())), n)


def _jordan_chains(n: Matrix) -> list[list[tuple[Fraction, ...]]]:
    """Jordan chains of ``n`` as lists of columns, eigenvector first."""
    p, j = n.to_sympy().jordan_form()
    basis = Matrix.from_sympy(p)
    chains: list[list[tuple[Fraction, ...]]] = []
    c = 0
    while c < n.rows:
        s = 1
        while c + s < n.rows and j[c + s - 1, c + s] == 1:
            s += 1
        chains.append([basis.column(c + t) for t in range(s)])
        c += s
    return chains


def jordan_weight_oracle(n: Matrix, center: int) -> WeightFiltration:
    """W(N) read off a Jordan basis: a block of size s puts its chain vectors at
    weights center - s + 1, center - s + 3, ..., center + s - 1."""
    _require_nilpotent(n)
    dim = n.rows
    m = nilpotency_index(n)
    weighted: list[tuple[int, tuple[Fraction, ...]]] = []
    if dim:
        for chain in _jordan_chains(n):
            s = len(chain)
            for t, v in enumerate(chain):
                weighted.append((center - s + 1 + 2 * t, v))
    steps = tuple(
        (ell, Subspace.span([v for w, v in weighted if w <= ell], dim))
        for ell in range(center - m, center + m)
    )
    return WeightFiltration(Filtration(dim, center, steps), n)


def check_weight_conditions(w: WeightFiltration) -> bool:
    """N W_l is contained in W_{l-2} for every stored index l."""
    n = w.operator
    return all(apply_to(n, w.step(ell)) <= w.step(ell - 2) for ell in w.filtration.indices)


@dataclass(frozen=True)
class LefschetzStep:
    j: int
    dims_match: bool
    maps_into: bool
    injective: bool

    @property
    def ok(self) -> bool:
        return self.dims_match and self.maps_into and self.injective


@dataclass(frozen=True)
class HardLefschetzReport:
    center: int
    steps: tuple[LefschetzStep, ...]

    @property
    def failures(self) -> list[int]:
        return [s.j for s in self.steps if not s.ok]

    @property
    def ok(self) -> bool:
        return not self.failures


def _lefschetz_steps(w: WeightFiltration) -> Iterator[LefschetzStep]:
    n, k = w.operator, w.center
    reach = max(abs(ell - k) for ell in w.filtration.indices) + 1
    nj = Matrix.identity(n.rows)
    for j in range(1, reach + 1):
        nj = nj @ n
        top = w.step(k + j)
        kernel_part = subspace_intersect(preimage(nj, w.step(k - j - 1)), top)
        yield LefschetzStep(
            j=j,
            dims_match=w.filtration.graded_dim(k + j) == w.filtration.graded_dim(k - j),
            maps_into=apply_to(nj, top) <= w.step(k - j),
            injective=kernel_part == w.step(k + j - 1),
        )


def check_hard_lefschetz(w: WeightFiltration) -> HardLefschetzReport:
    """For each j >= 1 decide whether N^j induces Gr_{k+j} -> Gr_{k-j} bijectively.

    The induced map is well defined and injective iff the preimage of
    W_{k-j-1} inside W_{k+j} is exactly W_{k+j-1}; with equal graded
    dimensions that makes it an isomorphism.
    """
    report = HardLefschetzReport(w.center, tuple(_lefschetz_steps(w)))
    if not report.ok:
        logger.debug("hard Lefschetz fails at j in %s", report.failures)
    return report


def perturbations(w: WeightFiltration) -> list[WeightFiltration]:
    """Every filtration obtained by replacing one interior step with a distinct
    neighbouring step."""
    out = []
    f = w.filtration
    interior = list(f.indices)[1:-1]
    for ell in interior:
        current = f.step(ell)
        for neighbour in (f.step(ell - 1), f.step(ell + 1)):
            if neighbour != current:
                out.append(WeightFiltration(f.with_step(ell, neighbour), w.operator))
    return out


def is_weight_filtration(w: WeightFiltration) -> bool:
    """Both characterizing conditions; stops at the first failing Lefschetz step."""
    return check_weight_conditions(w) and all(s.ok for s in _lefschetz_steps(w))


# ---------------------------------------------------------------------------
# Gluing data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GluingDatum:
    """(M', M'', u, v) with u : M' -> M'', v : M'' -> M' and n on M'."""

    mprime_dim: int
    mdprime_dim: int
    u: Matrix
    v: Matrix
    n: Matrix


def validate_gluing(g: GluingDatum) -> bool:
    expected = {
        "u": (g.u, (g.mdprime_dim, g.mprime_dim)),
        "v": (g.v, (g.mprime_dim, g.mdprime_dim)),
        "n": (g.n, (g.mprime_dim, g.mprime_dim)),
    }
    for name, (m, shape) in expected.items():
        if m.shape != shape:
            raise DimensionError(f"{name} has shape {m.shape}, expected {shape[0]}x{shape[1]}")
    return g.v @ g.u == g.n


def canonical_gluing(n: Matrix) -> GluingDatum:
    """psi = V, phi = im N, can = N corestricted to im N, var = the inclusion."""
    if not n.is_square:
        raise DimensionError(f"gluing operator must be square, got {n.shape}")
    im = image(n)
    pivots = [next(i for i, x in enumerate(col) if x != 0) for col in im.vectors()]
    can = Matrix.from_rows([n.entries[p] for p in pivots], n.cols)
    return GluingDatum(n.rows, im.dim, can, im.basis, n)
