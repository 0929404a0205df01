"""Acceptance suite behind ``conifold check``.

Each step runs one family of checks and appends rows
``(step, check, passed, detail)``; the result is a DataFrame so it can be
rendered as markdown or written to CSV next to the report.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np
import pandas as pd

from conifold import corpus
from conifold.degeneration import (
    DegenerationSpec,
    Stratum,
    build_corrected,
    check_les,
    compare_defects,
    les_from_degeneration,
    limiting_graded_dims,
)
from conifold.errors import SchemaError
from conifold.monodromy import (
    VanishingConfig,
    analyze_monodromy,
    check_hard_lefschetz,
    check_weight_conditions,
    is_weight_filtration,
    jordan_weight_oracle,
    perturbations,
    pl_transvection,
    validate_gluing,
    weight_filtration,
)
from conifold.qlinalg import Matrix, exp_nilpotent, is_quasi_unipotent, log_unipotent, rank
from conifold.report import golden_mismatches
from conifold.zigzag import (
    ZigZagMorphism,
    assemble,
    classify_self_dual_extensions,
    direct_sum,
    dual,
    is_isomorphic,
    jshriek_shape,
    jstar_shape,
    mu_corrected,
    mu_ic,
    mu_skyscraper,
    normalize_class_params,
    presentations_isomorphic,
    skyscraper_extension,
    split_presentation,
)

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    checks: pd.DataFrame
    seed: int

    @property
    def ok(self) -> bool:
        return bool(self.checks["passed"].all())

    def failures(self) -> pd.DataFrame:
        return self.checks[~self.checks["passed"]]


class _Collector:
    def __init__(self, step: str):
        self.step = step
        self.rows: list[dict] = []

    def add(self, check: str, passed: bool, detail: str = "") -> None:
        self.rows.append({"step": self.step, "check": check, "passed": bool(passed), "detail": detail})


# ---------------------------------------------------------------------------
# Steps
# ---------------------------------------------------------------------------

def _tables(c: _Collector, cfg: dict, seed: int) -> None:
    golden_dir = Path(cfg.get("golden_dir", "golden"))
    mismatches = golden_mismatches(golden_dir, cfg.get("table_nodes", 2))
    c.add("golden tables", not mismatches,
          "; ".join(f"{t} row {r}" for t, r in mismatches) or "bit-exact")


def _duality(c: _Collector, cfg: dict, seed: int) -> None:
    search = (cfg.get("iso_trials", 8), cfg.get("iso_trial_range", 5))
    ic, sky = mu_ic(1, 1), mu_skyscraper(1)
    corrected, _ = mu_corrected(1)
    for name, z in (("IC", ic), ("skyscraper", sky), ("corrected", corrected)):
        c.add(f"dual fixes {name}", is_isomorphic(dual(z), z, seed, *search))
    js, jl = jstar_shape(), jshriek_shape()
    c.add("dual exchanges j_* and j_! shapes",
          dual(js) == jl and dual(jl) == js and not is_isomorphic(js, jl, seed, *search))
    size = cfg.get("duality_corpus_size", 50)
    zs = corpus.zigzag_corpus(size, seed, max_dim=2)
    bad = [i for i, z in enumerate(zs) if not is_isomorphic(dual(dual(z)), z, seed, *search)]
    c.add(f"double dual on {size} random tuples", not bad, f"failing {bad}" if bad else "")


def _uniqueness(c: _Collector, cfg: dict, seed: int) -> None:
    rep = classify_self_dual_extensions(1, seed)
    c.add("r=1 has two orbits", len(rep.orbits) == 2)
    c.add("corrected orbit is self-dual and unique", rep.corrected_orbit.self_dual and rep.unique_corrected)
    for lam in (Fraction(5), Fraction(-2), Fraction(1, 3)):
        norm = normalize_class_params(skyscraper_extension(1, [lam]))
        verified = (norm.presentation.class_params == (1,)
                    and isinstance(norm.automorphism, ZigZagMorphism)
                    and norm.automorphism.is_invertible())
        c.add(f"parameter {lam} normalizes to 1", verified)
    for r in range(1, cfg.get("classify_max_nodes", 4) + 1):
        rep = classify_self_dual_extensions(r, seed)
        c.add(f"r={r} has {2 ** r} orbits with one full support", rep.ok,
              f"{len(rep.orbits)} orbits")


def _compressed_shape(c: _Collector, cfg: dict, seed: int) -> None:
    ic, sky = mu_ic(1, 1), mu_skyscraper(1)
    _, corrected = mu_corrected(1)
    split = split_presentation(ic, sky)
    c.add("direct sum equals assembled corrected tuple", direct_sum(ic, sky) == assemble(corrected))
    c.add("split and corrected presentations differ", not presentations_isomorphic(split, corrected, seed))


def _multi_node(c: _Collector, cfg: dict, seed: int) -> None:
    for r in range(1, cfg.get("corrected_max_nodes", 5) + 1):
        spec = DegenerationSpec(strata=tuple(Stratum(f"p{k}") for k in range(1, r + 1)))
        rep = build_corrected(spec)
        c.add(f"r={r} exact sequence", rep.verdict and rep.pointwise_defect == r,
              f"defect {rep.pointwise_defect}")


def _weights(c: _Collector, cfg: dict, seed: int) -> None:
    size = cfg.get("weight_corpus_size", 200)
    center = cfg.get("default_center", 3)
    budget = cfg.get("item_budget_seconds", 1.0)
    ns = corpus.nilpotent_corpus(size, seed, cfg.get("weight_max_size", 6))
    mismatched, failed, surviving = [], [], []
    slowest = 0.0
    for i, n in enumerate(ns):
        started = time.perf_counter()
        w = weight_filtration(n, center)
        if w != jordan_weight_oracle(n, center):
            mismatched.append(i)
        if not (check_weight_conditions(w) and check_hard_lefschetz(w).ok):
            failed.append(i)
        if any(is_weight_filtration(p) for p in perturbations(w)):
            surviving.append(i)
        slowest = max(slowest, time.perf_counter() - started)
    c.add(f"recursion equals Jordan oracle on {size} matrices", not mismatched, str(mismatched or ""))
    c.add("characterizing conditions hold", not failed, str(failed or ""))
    c.add("single-step perturbations break a condition", not surviving, str(surviving or ""))
    c.add(f"every matrix checked within {budget} s", slowest < budget, f"slowest {slowest:.3f} s")


def _monodromy(c: _Collector, cfg: dict, seed: int) -> None:
    rng = np.random.default_rng(seed)
    rank_ok, square_ok = True, True
    for symmetry in ("symmetric", "skew"):
        for _ in range(25):
            vc = corpus.random_vanishing_config(rng, symmetry=symmetry)
            for k in range(1, vc.r + 1):
                x = pl_transvection(vc, k) - Matrix.identity(vc.lattice.rank)
                rank_ok &= rank(x) <= 1
                if symmetry == "skew":
                    square_ok &= (x @ x).is_zero()
    c.add("rank(T - id) <= 1", rank_ok)
    c.add("(T - id)^2 = 0 for skew lattices", square_ok)
    size = cfg.get("exp_log_corpus_size", 100)
    bad = [i for i, t in enumerate(corpus.unipotent_corpus(size, seed))
           if exp_nilpotent(log_unipotent(t)) != t]
    c.add(f"exp(log T) = T on {size} unipotent matrices", not bad, str(bad or ""))
    wrong = [name for name, t, flag, order in corpus.quasi_unipotent_corpus()
             if tuple(is_quasi_unipotent(t)) != (flag, order)]
    c.add("quasi-unipotence corpus", not wrong, ", ".join(wrong))
    cfg2 = VanishingConfig(corpus.hyperbolic_lattice(2), ((1, 0, 0, 0), (0, 0, 1, 0)))
    mono = analyze_monodromy(cfg2)
    c.add("two disjoint cycles give rank-2 log", mono.ok and mono.log_rank == 2)


def _single_node(c: _Collector, cfg: dict, seed: int) -> None:
    center = cfg.get("default_center", 3)
    spec = DegenerationSpec(
        fiber_dim=center,
        strata=(Stratum("p1"),),
        lattice_config=VanishingConfig(corpus.hyperbolic_lattice(1), ((1, 0),)),
    )
    dims = limiting_graded_dims(spec)
    c.add("graded dimensions {2:1, 4:1}", dims == {center - 1: 1, center + 1: 1}, str(dims))
    cmp = compare_defects(spec)
    c.add("pointwise defect equals rank N", cmp.agree and cmp.log_rank == 1,
          f"defect {cmp.pointwise_defect}, rank {cmp.log_rank}")


def _les(c: _Collector, cfg: dict, seed: int) -> None:
    rng = np.random.default_rng(seed)
    size = cfg.get("les_corpus_size", 100)
    rejected_bad, accepted_bad = [], []
    for i in range(size):
        w = corpus.random_exact_complex(rng).witness()
        if not check_les(w).ok:
            rejected_bad.append(i)
        try:
            if check_les(corpus.perturb_witness(w, rng)).ok:
                accepted_bad.append(i)
        except SchemaError:
            pass
    c.add(f"exact complexes accepted ({size})", not rejected_bad, str(rejected_bad or ""))
    c.add("perturbed witnesses rejected", not accepted_bad, str(accepted_bad or ""))
    spec = DegenerationSpec(
        fiber_dim=3,
        strata=(Stratum("p1"),),
        lattice_config=VanishingConfig(corpus.hyperbolic_lattice(2), ((1, 0, 0, 0),)),
        smooth_betti=(1, 0, 1, 4, 1, 0, 1),
    )
    c.add("nodal threefold witness accepted", check_les(les_from_degeneration(spec)).ok)


def _gluing(c: _Collector, cfg: dict, seed: int) -> None:
    wrong = [name for name, g, expected in corpus.gluing_corpus() if validate_gluing(g) != expected]
    c.add("vu = N corpus", not wrong, ", ".join(wrong))


STEPS: list[tuple[str, Callable[[_Collector, dict, int], None]]] = [
    ("table reproduction", _tables),
    ("duality fixed points", _duality),
    ("uniqueness of the corrected extension", _uniqueness),
    ("compressed shape", _compressed_shape),
    ("multi-node structure", _multi_node),
    ("weight filtration", _weights),
    ("monodromy calculus", _monodromy),
    ("single-node limiting data", _single_node),
    ("long exact sequence", _les),
    ("gluing datum", _gluing),
]


def run_suite(cfg: dict, seed: int | None = None) -> SuiteResult:
    """Run every step; ``seed`` overrides ``cfg['seed']``."""
    seed = cfg.get("seed", 0) if seed is None else seed
    rows: list[dict] = []
    for i, (name, step) in enumerate(STEPS, start=1):
        logger.info("[%d/%d] %s", i, len(STEPS), name)
        collector = _Collector(name)
        step(collector, cfg, seed)
        failed = sum(not r["passed"] for r in collector.rows)
        logger.info("  %d checks, %d failed", len(collector.rows), failed)
        rows.extend(collector.rows)
    return SuiteResult(pd.DataFrame(rows, columns=["step", "check", "passed", "detail"]), seed)
