"""Degenerations with isolated point strata.

Ties lattice and monodromy data to zig-zag objects: the corrected object and
its short exact sequence over the node skyscrapers, the dimension/rank
bookkeeping of the nearby/vanishing long exact sequence, and the limiting
weight data of the total monodromy.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

from conifold.errors import DimensionError, NotUnipotentError, OutOfScopeError, SchemaError
from conifold.monodromy import (
    VanishingConfig,
    check_hard_lefschetz,
    total_monodromy,
    vanishing_span_rank,
    weight_filtration,
)
from conifold.qlinalg import Matrix, image, is_unipotent, kernel, log_unipotent, rank
from conifold.zigzag import (
    ZigZag,
    ZigZagMorphism,
    direct_sum_all,
    mu_corrected,
    mu_ic,
    mu_skyscraper,
    zero_zigzag,
)

logger = logging.getLogger(__name__)

STRATUM_KINDS = ("node", "point")


@dataclass(frozen=True)
class Stratum:
    label: str
    dim: int = 0
    milnor_rank: int = 1
    kind: str = "node"

    def __post_init__(self):
        if self.kind not in STRATUM_KINDS:
            raise ValueError(f"stratum {self.label!r}: kind must be one of {STRATUM_KINDS}")
        if self.dim < 0 or self.milnor_rank < 0:
            raise ValueError(f"stratum {self.label!r}: negative dimension or Milnor rank")
        if self.kind == "node" and self.milnor_rank != 1:
            raise ValueError(
                f"stratum {self.label!r}: an ordinary double point has Milnor rank 1, "
                f"got {self.milnor_rank}"
            )


@dataclass(frozen=True)
class DegenerationSpec:
    fiber_dim: int = 3
    strata: tuple[Stratum, ...] = field(default=())
    lattice_config: VanishingConfig | None = None
    smooth_betti: tuple[int, ...] | None = None

    def __post_init__(self):
        # One vanishing cycle per unit of Milnor rank at each point stratum.
        if self.lattice_config is None or any(s.dim > 0 for s in self.strata):
            return
        expected = sum(s.milnor_rank for s in self.strata)
        if self.lattice_config.r != expected:
            raise DimensionError(
                f"{self.lattice_config.r} vanishing cycles for point strata "
                f"of total Milnor rank {expected}"
            )

    @property
    def nodes(self) -> int:
        """Number of point strata."""
        return sum(1 for s in self.strata if s.dim == 0)


def _require_point_strata(spec: DegenerationSpec) -> None:
    for s in spec.strata:
        if s.dim > 0:
            raise OutOfScopeError(
                f"stratum {s.label!r} has dimension {s.dim}: "
                "stratified case beyond point strata not implemented"
            )


def vanishing_rank(spec: DegenerationSpec) -> int:
    _require_point_strata(spec)
    return sum(s.milnor_rank for s in spec.strata)


# ---------------------------------------------------------------------------
# Corrected object and its exact sequence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExactSequenceReport:
    sub: ZigZag
    total: ZigZag
    quot: ZigZag
    pointwise_defect: int
    additive: bool
    morphisms_valid: bool
    slotwise_exact: bool
    quotient_is_skyscraper_sum: bool

    @property
    def verdict(self) -> bool:
        return (self.additive and self.morphisms_valid
                and self.slotwise_exact and self.quotient_is_skyscraper_sum)


def _short_exact(inc: ZigZagMorphism, proj: ZigZagMorphism) -> bool:
    """Injective inclusion, surjective projection and im = ker in every slot."""
    if not (inc.is_injective() and proj.is_surjective()):
        return False
    return all(image(i) == kernel(p) for i, p in zip(inc.slots, proj.slots))


def build_corrected(spec: DegenerationSpec) -> ExactSequenceReport:
    """0 -> mu(IC) -> mu(P) -> r-fold skyscraper -> 0 for r nodes."""
    _require_point_strata(spec)
    for s in spec.strata:
        if s.kind != "node":
            raise ValueError(f"stratum {s.label!r} is not an ordinary double point")
    r = spec.nodes
    sub = mu_ic(1, 1)
    if r:
        total, _ = mu_corrected(r)
        quot = direct_sum_all([mu_skyscraper(1)] * r)
        expected_quot = mu_skyscraper(r)
    else:
        total, quot = sub, zero_zigzag()
        expected_quot = zero_zigzag()
    additive = all(t == s + q for t, s, q in zip(total.dims, sub.dims, quot.dims))
    try:
        inc = ZigZagMorphism(
            sub, total,
            Matrix.identity(1), Matrix.zeros(r, 0), Matrix.zeros(r, 0), Matrix.identity(1),
        )
        proj = ZigZagMorphism(
            total, quot,
            Matrix.zeros(0, 1), Matrix.identity(r), Matrix.identity(r), Matrix.zeros(0, 1),
        )
        morphisms_valid = True
        exact = _short_exact(inc, proj)
    except ValueError as exc:
        logger.debug("structure morphisms rejected: %s", exc)
        morphisms_valid, exact = False, False
    report = ExactSequenceReport(
        sub=sub,
        total=total,
        quot=quot,
        pointwise_defect=quot.a_dim,
        additive=additive,
        morphisms_valid=morphisms_valid,
        slotwise_exact=exact,
        quotient_is_skyscraper_sum=quot == expected_quot,
    )
    logger.debug("corrected object for r=%d: verdict %s", r, report.verdict)
    return report


@dataclass(frozen=True)
class StratifiedQuotient:
    multiplicities: tuple[int, ...]
    quot: ZigZag

    @property
    def rank(self) -> int:
        return self.quot.a_dim


def stratified_quotient(spec: DegenerationSpec) -> StratifiedQuotient:
    """V = sum of skyscrapers with multiplicity the Milnor rank of each point."""
    _require_point_strata(spec)
    mults = tuple(s.milnor_rank for s in spec.strata)
    quot = direct_sum_all([mu_skyscraper(m) for m in mults if m > 0])
    return StratifiedQuotient(mults, quot)


# ---------------------------------------------------------------------------
# Long exact sequence bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LESWitness:
    """Dimensions of H^m(X_0, i^*K), H^m(psi K), H^m(phi K) and the ranks of
    special -> psi and psi -> phi, keyed by degree m.  Missing degrees are 0."""

    h_special: Mapping[int, int]
    h_psi: Mapping[int, int]
    h_phi: Mapping[int, int]
    rank_special_psi: Mapping[int, int]
    rank_psi_phi: Mapping[int, int]

    def window(self) -> range:
        degrees = set()
        for seq in (self.h_special, self.h_psi, self.h_phi, self.rank_special_psi, self.rank_psi_phi):
            degrees.update(seq)
        if not degrees:
            return range(0)
        return range(min(degrees), max(degrees) + 1)


@dataclass(frozen=True)
class LESPosition:
    term: str
    degree: int
    ok: bool


@dataclass(frozen=True)
class LESReport:
    positions: tuple[LESPosition, ...]
    alternating_sum: int

    @property
    def first_failure(self) -> LESPosition | None:
        return next((p for p in self.positions if not p.ok), None)

    @property
    def ok(self) -> bool:
        return self.first_failure is None and self.alternating_sum == 0


def _validate_witness(w: LESWitness) -> None:
    for name in ("h_special", "h_psi", "h_phi", "rank_special_psi", "rank_psi_phi"):
        for m, d in getattr(w, name).items():
            if d < 0:
                raise SchemaError(f"negative value {d} in degree {m}", name)
    for m, r in w.rank_special_psi.items():
        if r > min(w.h_special.get(m, 0), w.h_psi.get(m, 0)):
            raise SchemaError(f"rank {r} exceeds adjacent dimensions in degree {m}", "rank_special_psi")
    for m, r in w.rank_psi_phi.items():
        if r > min(w.h_psi.get(m, 0), w.h_phi.get(m, 0)):
            raise SchemaError(f"rank {r} exceeds adjacent dimensions in degree {m}", "rank_psi_phi")


def check_les(w: LESWitness) -> LESReport:
    """Dimension/rank exactness of ... -> S^m -> Psi^m -> Phi^m -> S^{m+1} -> ...

    The connecting map Phi^m -> S^{m+1} is not given; exactness at Phi^m
    forces its rank to dim Phi^m - rank(Psi^m -> Phi^m), which must then fit
    inside S^{m+1}.
    """
    _validate_witness(w)
    window = w.window()
    s, psi, phi = w.h_special, w.h_psi, w.h_phi
    r_sp, r_pp = w.rank_special_psi, w.rank_psi_phi

    def delta(m: int) -> int:
        return phi.get(m, 0) - r_pp.get(m, 0)

    positions = []
    degrees = list(window)
    if degrees:
        degrees.append(degrees[-1] + 1)
    for m in degrees:
        positions.append(LESPosition("special", m, s.get(m, 0) == delta(m - 1) + r_sp.get(m, 0)))
        positions.append(LESPosition("psi", m, psi.get(m, 0) == r_sp.get(m, 0) + r_pp.get(m, 0)))
        positions.append(LESPosition("phi", m, 0 <= delta(m) <= s.get(m + 1, 0)))
    alternating = sum(
        (-1) ** m * (s.get(m, 0) - psi.get(m, 0) + phi.get(m, 0)) for m in window
    )
    report = LESReport(tuple(positions), alternating)
    if not report.ok:
        logger.debug("long exact sequence check failed at %s", report.first_failure)
    return report


def les_from_degeneration(spec: DegenerationSpec) -> LESWitness:
    """Witness for a nodal degeneration from smooth Betti numbers.

    phi is r-dimensional in degree n = fiber_dim and psi -> phi has rank rho,
    the rank of the span of the vanishing cycles (rho = r without a lattice),
    so H^n(X_0) = b_n - rho and H^{n+1}(X_0) = b_{n+1} + r - rho.
    """
    if spec.smooth_betti is None:
        raise ValueError("les_from_degeneration needs smooth_betti")
    n = spec.fiber_dim
    r = vanishing_rank(spec)
    rho = vanishing_span_rank(spec.lattice_config) if spec.lattice_config else r
    betti = dict(enumerate(spec.smooth_betti))
    special = dict(betti)
    special[n] = betti.get(n, 0) - rho
    special[n + 1] = betti.get(n + 1, 0) + r - rho
    rank_sp = dict(betti)
    rank_sp[n] = special[n]
    phi = {n: r} if r else {}
    rank_pp = {n: rho} if r else {}
    return LESWitness(
        h_special={m: d for m, d in special.items() if d},
        h_psi={m: d for m, d in betti.items() if d},
        h_phi=phi,
        rank_special_psi={m: d for m, d in rank_sp.items() if d},
        rank_psi_phi=rank_pp,
    )


# ---------------------------------------------------------------------------
# Limiting weight data
# ---------------------------------------------------------------------------

def limiting_graded_dims(spec: DegenerationSpec, center: int | None = None) -> dict[int, int]:
    """Graded dimensions of W(log T) for the total monodromy T.

    ``center`` defaults to the fiber dimension.
    """
    if spec.lattice_config is None:
        raise ValueError("limiting weight data needs a lattice configuration")
    t = total_monodromy(spec.lattice_config)
    if not is_unipotent(t):
        raise NotUnipotentError("total monodromy is not unipotent; apply a base change first")
    n = log_unipotent(t)
    w = weight_filtration(n, spec.fiber_dim if center is None else center)
    if not check_hard_lefschetz(w).ok:
        raise AssertionError("limiting weight filtration fails hard Lefschetz")
    return w.graded_dims()


@dataclass(frozen=True)
class DefectComparison:
    pointwise_defect: int
    log_rank: int
    vanishing_rank: int

    @property
    def agree(self) -> bool:
        return self.pointwise_defect == self.vanishing_rank == self.log_rank


def compare_defects(spec: DegenerationSpec) -> DefectComparison:
    """pointwise_defect of the zig-zag sequence against rank(N) of the monodromy."""
    if spec.lattice_config is None:
        raise ValueError("defect comparison needs a lattice configuration")
    t = total_monodromy(spec.lattice_config)
    if not is_unipotent(t):
        raise NotUnipotentError("total monodromy is not unipotent; apply a base change first")
    return DefectComparison(
        pointwise_defect=build_corrected(spec).pointwise_defect,
        log_rank=rank(log_unipotent(t)),
        vanishing_rank=vanishing_rank(spec),
    )
