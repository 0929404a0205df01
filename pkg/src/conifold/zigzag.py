"""Zig-zag tuple calculus for a perverse sheaf with one isolated singular stratum.

A zig-zag is the exact sequence

    H^{-1}(i^*Rj_*L) --alpha--> A --beta--> B --gamma--> H^0(i^*Rj_*L)

stored as dimensions plus three exact rational matrices acting on column
vectors.  The open-stratum local system L is carried only as an inert label
together with the two stalk dimensions ``hm_dim`` and ``h0_dim``.

Extension data that the compressed tuple forgets is kept in
:class:`ExtensionPresentation`: a sub/quot pair, the off-diagonal gluing blocks
and one class parameter per rank-one point summand.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from conifold.errors import (
    DimensionError,
    InvalidMorphismError,
    InvalidZigZagError,
    PresentationError,
)
from conifold.qlinalg import Matrix, image, kernel, scalar

logger = logging.getLogger(__name__)

IC_LABEL = "Q_U[3]"
POINT_LABEL = "0"

# Names used in reports for the four checked positions.
POS_BETA_ALPHA = "A→B"
POS_GAMMA_BETA = "B→H0"
POS_EXACT_A = "A"
POS_EXACT_B = "B"


# ---------------------------------------------------------------------------
# Tuples and validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RawZigZag:
    """Unchecked tuple data, usable with :func:`validate`."""

    hm_dim: int
    h0_dim: int
    a_dim: int
    b_dim: int
    alpha: Matrix
    beta: Matrix
    gamma: Matrix
    label: str = ""

    @property
    def dims(self) -> tuple[int, int, int, int]:
        """Dimension vector in sequence order (hm, A, B, h0)."""
        return (self.hm_dim, self.a_dim, self.b_dim, self.h0_dim)

    @property
    def maps(self) -> tuple[Matrix, Matrix, Matrix]:
        return (self.alpha, self.beta, self.gamma)


@dataclass(frozen=True)
class ValidationReport:
    beta_alpha_zero: bool
    gamma_beta_zero: bool
    exact_at_a: bool
    exact_at_b: bool

    @property
    def failures(self) -> list[str]:
        checks = [
            (POS_BETA_ALPHA, self.beta_alpha_zero),
            (POS_GAMMA_BETA, self.gamma_beta_zero),
            (POS_EXACT_A, self.exact_at_a),
            (POS_EXACT_B, self.exact_at_b),
        ]
        return [name for name, ok in checks if not ok]

    @property
    def is_complex(self) -> bool:
        return self.beta_alpha_zero and self.gamma_beta_zero

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "complex": {POS_BETA_ALPHA: self.beta_alpha_zero, POS_GAMMA_BETA: self.gamma_beta_zero},
            "exact": {POS_EXACT_A: self.exact_at_a, POS_EXACT_B: self.exact_at_b},
            "failures": self.failures,
            "valid": self.ok,
        }


def _check_shapes(z: RawZigZag) -> None:
    expected = {
        "alpha": (z.alpha, (z.a_dim, z.hm_dim)),
        "beta": (z.beta, (z.b_dim, z.a_dim)),
        "gamma": (z.gamma, (z.h0_dim, z.b_dim)),
    }
    for name, (m, shape) in expected.items():
        if m.shape != shape:
            raise DimensionError(f"{name} has shape {m.shape}, expected {shape[0]}x{shape[1]}")


def validate(z: RawZigZag) -> ValidationReport:
    """Check the complex relations and exactness at A and B separately."""
    _check_shapes(z)
    return ValidationReport(
        beta_alpha_zero=(z.beta @ z.alpha).is_zero(),
        gamma_beta_zero=(z.gamma @ z.beta).is_zero(),
        exact_at_a=image(z.alpha) == kernel(z.beta),
        exact_at_b=image(z.beta) == kernel(z.gamma),
    )


@dataclass(frozen=True)
class ZigZag(RawZigZag):
    """A tuple that passed :func:`validate`; construction raises otherwise."""

    def __post_init__(self):
        report = validate(self)
        if not report.ok:
            raise InvalidZigZagError(report)

    @classmethod
    def from_raw(cls, raw: RawZigZag) -> "ZigZag":
        return cls(raw.hm_dim, raw.h0_dim, raw.a_dim, raw.b_dim,
                   raw.alpha, raw.beta, raw.gamma, raw.label)


def build(hm_dim: int, h0_dim: int, a_dim: int, b_dim: int,
          alpha, beta, gamma, label: str = "") -> ZigZag:
    """Checked constructor taking nested lists or matrices for the maps."""
    return ZigZag(
        hm_dim, h0_dim, a_dim, b_dim,
        _as_matrix(alpha, a_dim, hm_dim),
        _as_matrix(beta, b_dim, a_dim),
        _as_matrix(gamma, h0_dim, b_dim),
        label,
    )


def _as_matrix(m, rows: int, cols: int) -> Matrix:
    if isinstance(m, Matrix):
        return m
    if m is None or (isinstance(m, int) and m == 0):
        return Matrix.zeros(rows, cols)
    return Matrix.from_rows(m, cols)


# ---------------------------------------------------------------------------
# Standard objects
# ---------------------------------------------------------------------------

def zero_zigzag() -> ZigZag:
    return build(0, 0, 0, 0, None, None, None)


def mu_ic(hm_dim: int, h0_dim: int, label: str = IC_LABEL) -> ZigZag:
    """Minimal extension: no point terms, all maps zero."""
    return build(hm_dim, h0_dim, 0, 0, None, None, None, label)


def mu_skyscraper(mult: int) -> ZigZag:
    """``mult`` copies of the point-supported rank-one object (0, Q, Q, 0, id, 0)."""
    if mult < 1:
        raise ValueError(f"skyscraper multiplicity must be >= 1, got {mult}")
    return build(0, 0, mult, mult, None, Matrix.identity(mult), None, POINT_LABEL)


def jstar_shape() -> ZigZag:
    """(hm=1, h0=1, A=0, B=Q, 0, 0, gamma=id)."""
    return build(1, 1, 0, 1, None, None, [[1]], IC_LABEL)


def jshriek_shape() -> ZigZag:
    """(hm=1, h0=1, A=Q, B=0, alpha=id, 0, 0)."""
    return build(1, 1, 1, 0, [[1]], None, None, IC_LABEL)


def _sum_label(l1: str, l2: str) -> str:
    parts = [l for l in (l1, l2) if l not in ("", POINT_LABEL)]
    if parts:
        return "+".join(parts)
    return POINT_LABEL if POINT_LABEL in (l1, l2) else ""


def _block_diag(m1: Matrix, m2: Matrix) -> Matrix:
    return Matrix.block([
        [m1, Matrix.zeros(m1.rows, m2.cols)],
        [Matrix.zeros(m2.rows, m1.cols), m2],
    ])


def direct_sum(z1: ZigZag, z2: ZigZag) -> ZigZag:
    return ZigZag(
        z1.hm_dim + z2.hm_dim,
        z1.h0_dim + z2.h0_dim,
        z1.a_dim + z2.a_dim,
        z1.b_dim + z2.b_dim,
        _block_diag(z1.alpha, z2.alpha),
        _block_diag(z1.beta, z2.beta),
        _block_diag(z1.gamma, z2.gamma),
        _sum_label(z1.label, z2.label),
    )


def direct_sum_all(zs: Sequence[ZigZag]) -> ZigZag:
    out = zero_zigzag()
    for z in zs:
        out = direct_sum(out, z)
    return out


def dual(z: ZigZag) -> ZigZag:
    """D(hm, h0, A, B, a, b, g) = (h0*, hm*, B*, A*, g^T, b^T, a^T).

    The label is inert and carried over unchanged.
    """
    return ZigZag(z.h0_dim, z.hm_dim, z.b_dim, z.a_dim, z.gamma.T, z.beta.T, z.alpha.T, z.label)


def mu_corrected(r: int) -> tuple[ZigZag, "ExtensionPresentation"]:
    """The corrected object for r nodes and its presentation over the r-fold skyscraper."""
    if r < 1:
        raise ValueError(f"the corrected object needs r >= 1 nodes, got {r}")
    tuple_ = build(1, 1, r, r, None, Matrix.identity(r), None, IC_LABEL)
    return tuple_, skyscraper_extension(r, [1] * r)


# ---------------------------------------------------------------------------
# Morphisms and isomorphism testing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZigZagMorphism:
    """Commuting quadruple (f_hm, f_a, f_b, f_h0) from ``source`` to ``target``."""

    source: ZigZag
    target: ZigZag
    f_hm: Matrix
    f_a: Matrix
    f_b: Matrix
    f_h0: Matrix

    def __post_init__(self):
        for f, s, t, name in zip(self.slots, self.source.dims, self.target.dims,
                                 ("f_hm", "f_a", "f_b", "f_h0")):
            if f.shape != (t, s):
                raise DimensionError(f"{name} has shape {f.shape}, expected {t}x{s}")
        s, t = self.source, self.target
        squares = [
            ("alpha", self.f_a @ s.alpha, t.alpha @ self.f_hm),
            ("beta", self.f_b @ s.beta, t.beta @ self.f_a),
            ("gamma", self.f_h0 @ s.gamma, t.gamma @ self.f_b),
        ]
        for name, left, right in squares:
            if left != right:
                raise InvalidMorphismError(f"square at {name} does not commute")

    @property
    def slots(self) -> tuple[Matrix, Matrix, Matrix, Matrix]:
        return (self.f_hm, self.f_a, self.f_b, self.f_h0)

    @classmethod
    def identity(cls, z: ZigZag) -> "ZigZagMorphism":
        return cls(z, z, *(Matrix.identity(d) for d in z.dims))

    def compose(self, other: "ZigZagMorphism") -> "ZigZagMorphism":
        """``self`` after ``other``."""
        if other.target != self.source:
            raise DimensionError("morphisms are not composable")
        return ZigZagMorphism(other.source, self.target,
                              *(f @ g for f, g in zip(self.slots, other.slots)))

    def is_injective(self) -> bool:
        return all(kernel(f).dim == 0 for f in self.slots)

    def is_surjective(self) -> bool:
        return all(image(f).dim == f.rows for f in self.slots)

    def is_invertible(self) -> bool:
        return all(f.is_square and f.det() != 0 for f in self.slots)

    def inverse(self) -> "ZigZagMorphism":
        return ZigZagMorphism(self.target, self.source, *(f.inverse() for f in self.slots))


def _square_equations(rows: list[list[Fraction]], n_unknowns: int,
                      left: tuple[int, int, int], src: Matrix,
                      tgt: Matrix, right: tuple[int, int, int]) -> None:
    """Append the equations X_left @ src = tgt @ X_right.

    ``left``/``right`` are (offset, rows, cols) of the unknown blocks inside the
    row-major unknown vector.
    """
    l_off, l_rows, l_cols = left
    r_off, r_rows, r_cols = right
    for i in range(l_rows):
        for j in range(src.cols):
            eq = [Fraction(0)] * n_unknowns
            for k in range(l_cols):
                eq[l_off + i * l_cols + k] += src[k, j]
            for k in range(r_rows):
                eq[r_off + k * r_cols + j] -= tgt[i, k]
            rows.append(eq)


def hom_space(z1: ZigZag, z2: ZigZag) -> list[tuple[Matrix, Matrix, Matrix, Matrix]]:
    """Basis of the space of commuting quadruples z1 -> z2."""
    shapes = [(t, s) for s, t in zip(z1.dims, z2.dims)]
    offsets = list(itertools.accumulate([r * c for r, c in shapes], initial=0))
    n = offsets[-1]
    blocks = [(offsets[i], shapes[i][0], shapes[i][1]) for i in range(4)]
    hm, a, b, h0 = blocks
    rows: list[list[Fraction]] = []
    _square_equations(rows, n, a, z1.alpha, z2.alpha, hm)
    _square_equations(rows, n, b, z1.beta, z2.beta, a)
    _square_equations(rows, n, h0, z1.gamma, z2.gamma, b)
    solutions = kernel(Matrix.from_rows(rows, n))
    basis = []
    for v in solutions.vectors():
        basis.append(tuple(
            Matrix.from_rows([v[off + i * c: off + (i + 1) * c] for i in range(r)], c)
            for off, r, c in blocks
        ))
    logger.debug("hom space %s -> %s has dimension %d", z1.dims, z2.dims, len(basis))
    return basis


def _combine(basis, coeffs) -> tuple[Matrix, ...]:
    out = [Matrix.zeros(*m.shape) for m in basis[0]]
    for c, quad in zip(coeffs, basis):
        if c:
            out = [o + m.scale(c) for o, m in zip(out, quad)]
    return tuple(out)


def _try_candidate(z1: ZigZag, z2: ZigZag, quad) -> ZigZagMorphism | None:
    if any(m.det() == 0 for m in quad):
        return None
    f = ZigZagMorphism(z1, z2, *quad)
    g = f.inverse()
    if f.compose(g) != ZigZagMorphism.identity(z2) or g.compose(f) != ZigZagMorphism.identity(z1):
        raise AssertionError("exact inverse of an isomorphism candidate failed to verify")
    return f


def _determinant_vanishes(basis) -> bool:
    """True iff every element of the span has a singular slot, certified symbolically."""
    cs = sympy.symbols(f"c0:{len(basis)}")
    for slot in range(4):
        size = basis[0][slot].rows
        if size == 0:
            continue
        generic = sympy.zeros(size, size)
        for c, quad in zip(cs, basis):
            generic += c * quad[slot].to_sympy()
        if sympy.expand(generic.det(method="berkowitz")) == 0:
            return True
    return False


def find_isomorphism(z1: ZigZag, z2: ZigZag, seed: int = 0, trials: int = 8,
                     trial_range: int = 5) -> ZigZagMorphism | None:
    """Return an isomorphism z1 -> z2 or None.

    Random rational points of the Hom space are tried first; a hit is
    confirmed with an exact inverse.  A miss is reported as non-isomorphic only
    after a determinant is shown to vanish identically on the Hom space.
    """
    if z1.dims != z2.dims:
        return None
    if sum(z1.dims) == 0:
        return ZigZagMorphism(z1, z2, *(Matrix.zeros(0, 0) for _ in range(4)))
    basis = hom_space(z1, z2)
    if not basis:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        coeffs = [int(c) for c in rng.integers(-trial_range, trial_range + 1, size=len(basis))]
        found = _try_candidate(z1, z2, _combine(basis, coeffs))
        if found is not None:
            return found
    if _determinant_vanishes(basis):
        return None
    # The generic determinant is a nonzero polynomial: widen the box until a
    # point off its zero set turns up.
    bound = trial_range
    while True:
        bound *= 2
        for _ in range(trials):
            coeffs = [int(c) for c in rng.integers(-bound, bound + 1, size=len(basis))]
            found = _try_candidate(z1, z2, _combine(basis, coeffs))
            if found is not None:
                return found


def is_isomorphic(z1: ZigZag, z2: ZigZag, seed: int = 0, trials: int = 8,
                  trial_range: int = 5) -> bool:
    return find_isomorphism(z1, z2, seed, trials, trial_range) is not None


# ---------------------------------------------------------------------------
# Extension presentations
# ---------------------------------------------------------------------------

def is_point_supported(z: RawZigZag) -> bool:
    return z.hm_dim == 0 and z.h0_dim == 0


@dataclass(frozen=True)
class ExtensionPresentation:
    """Extension of ``quot`` by ``sub`` with off-diagonal gluing blocks.

    u_alpha : quot.hm -> sub.a, u_beta : quot.a -> sub.b, u_gamma : quot.b -> sub.h0.
    """

    sub: ZigZag
    quot: ZigZag
    u_alpha: Matrix
    u_beta: Matrix
    u_gamma: Matrix
    class_params: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "class_params", tuple(scalar(p) for p in self.class_params))
        s, q = self.sub, self.quot
        expected = {
            "u_alpha": (self.u_alpha, (s.a_dim, q.hm_dim)),
            "u_beta": (self.u_beta, (s.b_dim, q.a_dim)),
            "u_gamma": (self.u_gamma, (s.h0_dim, q.b_dim)),
        }
        for name, (m, shape) in expected.items():
            if m.shape != shape:
                raise DimensionError(f"{name} has shape {m.shape}, expected {shape[0]}x{shape[1]}")
        if not (s.beta @ self.u_alpha + self.u_beta @ q.alpha).is_zero():
            raise PresentationError(f"block relation fails at {POS_BETA_ALPHA}")
        if not (s.gamma @ self.u_beta + self.u_gamma @ q.beta).is_zero():
            raise PresentationError(f"block relation fails at {POS_GAMMA_BETA}")
        expected_params = point_summands(s, q)
        if len(self.class_params) != expected_params:
            raise PresentationError(
                f"{len(self.class_params)} class parameters for {expected_params} point summands"
            )

    @property
    def support(self) -> tuple[int, ...]:
        """1-based indices of the point summands with a nonzero class parameter."""
        return tuple(k + 1 for k, p in enumerate(self.class_params) if p != 0)


def point_summands(sub: ZigZag, quot: ZigZag) -> int:
    """Rank-one point summands of the point-supported endpoint (quot first)."""
    if is_point_supported(quot):
        return quot.a_dim
    if is_point_supported(sub):
        return sub.a_dim
    return 0


def split_presentation(sub: ZigZag, quot: ZigZag) -> ExtensionPresentation:
    return ExtensionPresentation(
        sub, quot,
        Matrix.zeros(sub.a_dim, quot.hm_dim),
        Matrix.zeros(sub.b_dim, quot.a_dim),
        Matrix.zeros(sub.h0_dim, quot.b_dim),
        (0,) * point_summands(sub, quot),
    )


def skyscraper_extension(r: int, params: Sequence) -> ExtensionPresentation:
    """Extension of the r-fold skyscraper by mu_ic(1, 1) with the given class parameters."""
    if len(params) != r:
        raise PresentationError(f"{len(params)} class parameters for {r} nodes")
    split = split_presentation(mu_ic(1, 1), mu_skyscraper(r))
    return ExtensionPresentation(split.sub, split.quot, split.u_alpha, split.u_beta,
                                 split.u_gamma, tuple(params))


def general_extension(u=1) -> ExtensionPresentation:
    """Block template with a nonzero off-diagonal u.

    sub is the j_*-shape (its B is one-dimensional with Im beta = 0), quot the
    rank-one skyscraper; the assembled beta is (beta u; 0 1) and gamma is
    forced to (1, -u).
    """
    u = scalar(u)
    sub, quot = jstar_shape(), mu_skyscraper(1)
    return ExtensionPresentation(
        sub, quot,
        Matrix.zeros(0, 0),
        Matrix.from_rows([[u]]),
        Matrix.from_rows([[-u]]),
        (u,),
    )


def jstar_presentation() -> ExtensionPresentation:
    """The j_*-shape as an extension whose gamma carries the gluing."""
    sub = build(0, 1, 0, 1, None, None, [[1]], POINT_LABEL)
    quot = mu_ic(1, 0)
    return split_presentation(sub, quot)


def assemble(e: ExtensionPresentation) -> ZigZag:
    """Upper-triangular block assembly; raises InvalidZigZagError naming the
    non-exact position."""
    s, q = e.sub, e.quot

    def tri(sm: Matrix, u: Matrix, qm: Matrix) -> Matrix:
        return Matrix.block([[sm, u], [Matrix.zeros(qm.rows, sm.cols), qm]])

    raw = RawZigZag(
        s.hm_dim + q.hm_dim,
        s.h0_dim + q.h0_dim,
        s.a_dim + q.a_dim,
        s.b_dim + q.b_dim,
        tri(s.alpha, e.u_alpha, q.alpha),
        tri(s.beta, e.u_beta, q.beta),
        tri(s.gamma, e.u_gamma, q.gamma),
        _sum_label(s.label, q.label),
    )
    return ZigZag.from_raw(raw)


def extension_class(e: ExtensionPresentation) -> list[tuple[Fraction, ...]]:
    """Columns of u_beta reduced modulo Im(sub.beta), one canonical residue per
    column of the quotient's A."""
    im = image(e.sub.beta)
    pivots = []
    for v in im.vectors():
        pivots.append(next(i for i, x in enumerate(v) if x != 0))
    residues = []
    for col in e.u_beta.columns():
        res = list(col)
        for p, v in zip(pivots, im.vectors()):
            c = res[p]
            if c:
                res = [x - c * y for x, y in zip(res, v)]
        residues.append(tuple(res))
    return residues


def dual_presentation(e: ExtensionPresentation) -> ExtensionPresentation:
    """Dual extension: endpoints swap roles and the u-blocks transpose into the
    mirrored slots; class parameters are kept entrywise."""
    return ExtensionPresentation(
        dual(e.quot), dual(e.sub),
        e.u_gamma.T, e.u_beta.T, e.u_alpha.T,
        e.class_params,
    )


def presentations_isomorphic(e1: ExtensionPresentation, e2: ExtensionPresentation,
                             seed: int = 0) -> bool:
    """Endpoint isomorphisms slot for slot plus equal support pattern."""
    return (e1.support == e2.support
            and len(e1.class_params) == len(e2.class_params)
            and is_isomorphic(e1.sub, e2.sub, seed)
            and is_isomorphic(e1.quot, e2.quot, seed))


def is_self_dual_presentation(e: ExtensionPresentation, seed: int = 0) -> bool:
    """The dual matches ``e`` either slot for slot or with sub/quot mirrored."""
    d = dual_presentation(e)
    if presentations_isomorphic(d, e, seed):
        return True
    return (d.support == e.support
            and is_isomorphic(d.sub, e.quot, seed)
            and is_isomorphic(d.quot, e.sub, seed))


# ---------------------------------------------------------------------------
# Class-parameter normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Normalization:
    presentation: ExtensionPresentation
    automorphism: ZigZagMorphism
    scales: tuple[Fraction, ...]


def normalize_class_params(e: ExtensionPresentation) -> Normalization:
    """Scale every point summand with a nonzero parameter lambda by 1/lambda.

    With S = diag(scales) on the point terms of quot, the normalized u-blocks
    are u @ S and the witness diag(id_sub, S) is an isomorphism from the
    assembled normalized presentation onto assemble(e).
    """
    q = e.quot
    if not is_point_supported(q) or q.beta != Matrix.identity(q.a_dim):
        raise PresentationError("normalization needs a skyscraper quotient")
    scales = tuple(Fraction(1) / p if p != 0 else Fraction(1) for p in e.class_params)
    s_mat = Matrix.diag(list(scales))
    normalized = ExtensionPresentation(
        e.sub, q,
        e.u_alpha,
        e.u_beta @ s_mat,
        e.u_gamma @ s_mat,
        tuple(p * s for p, s in zip(e.class_params, scales)),
    )
    sub = e.sub
    phi = ZigZagMorphism(
        assemble(normalized), assemble(e),
        Matrix.identity(sub.hm_dim),
        _block_diag(Matrix.identity(sub.a_dim), s_mat),
        _block_diag(Matrix.identity(sub.b_dim), s_mat),
        Matrix.identity(sub.h0_dim),
    )
    if not phi.is_invertible():
        raise AssertionError("scaling witness is not invertible")
    return Normalization(normalized, phi, scales)


# ---------------------------------------------------------------------------
# Classification of self-dual extensions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Orbit:
    support: tuple[int, ...]
    class_params: tuple[Fraction, ...]
    self_dual: bool
    nontrivial_everywhere: bool

    @property
    def split(self) -> bool:
        return not self.support


@dataclass(frozen=True)
class ClassificationReport:
    node_count: int
    orbits: tuple[Orbit, ...]
    corrected_orbit: Orbit

    @property
    def unique_corrected(self) -> bool:
        return sum(o.nontrivial_everywhere for o in self.orbits) == 1

    @property
    def ok(self) -> bool:
        return (len(self.orbits) == 2 ** self.node_count
                and self.unique_corrected
                and self.corrected_orbit.self_dual)


def classify_self_dual_extensions(r: int, seed: int = 0) -> ClassificationReport:
    """Enumerate extensions of the r-fold skyscraper by mu_ic(1, 1), one per
    support pattern, in lexicographic order of the 0/1 parameter vector."""
    if r < 1:
        raise ValueError(f"classification needs r >= 1 nodes, got {r}")
    orbits: dict[tuple[int, ...], Orbit] = {}
    for params in itertools.product((0, 1), repeat=r):
        e = normalize_class_params(skyscraper_extension(r, params)).presentation
        if e.support in orbits:
            continue
        orbits[e.support] = Orbit(
            support=e.support,
            class_params=e.class_params,
            self_dual=is_self_dual_presentation(e, seed),
            nontrivial_everywhere=len(e.support) == r,
        )
        logger.debug("orbit %s self-dual=%s", e.support, orbits[e.support].self_dual)
    full = tuple(range(1, r + 1))
    return ClassificationReport(r, tuple(orbits.values()), orbits[full])
