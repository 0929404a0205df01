"""Picard-Lefschetz transvections, total monodromy and gluing data."""
import numpy as np
import pytest

from conifold import corpus
from conifold.errors import DimensionError
from conifold.monodromy import (
    GluingDatum,
    Lattice,
    VanishingConfig,
    analyze_monodromy,
    canonical_gluing,
    pl_transvection,
    total_monodromy,
    validate_gluing,
    vanishing_span_rank,
)
from conifold.qlinalg import Matrix, is_unipotent, log_unipotent, rank

M = Matrix.from_rows
SKEW2 = Lattice(2, M([[0, 1], [-1, 0]]), "skew")


def _identity_minus(t):
    return t - Matrix.identity(t.rows)


# -----------------------------------------------------------------------
# Lattices
# -----------------------------------------------------------------------

def test_lattice_checks_symmetry():
    with pytest.raises(ValueError):
        Lattice(2, M([[0, 1], [1, 0]]), "skew")
    with pytest.raises(ValueError):
        Lattice(2, M([[0, 1], [-1, 0]]), "symmetric")
    with pytest.raises(ValueError):
        Lattice(2, M([[0, 1], [-1, 0]]), "hermitian")
    with pytest.raises(DimensionError):
        Lattice(3, M([[0, 1], [-1, 0]]), "skew")


def test_pairing_is_row_gram_column():
    assert SKEW2.pairing((1, 0), (0, 1)) == 1
    assert SKEW2.pairing((0, 1), (1, 0)) == -1


def test_cycle_length_must_match_rank():
    with pytest.raises(DimensionError):
        VanishingConfig(SKEW2, ((1, 0, 0),))


# -----------------------------------------------------------------------
# Transvections
# -----------------------------------------------------------------------

def test_zero_cycle_gives_identity():
    assert pl_transvection(VanishingConfig(SKEW2, ((0, 0),)), 1) == Matrix.identity(2)


def test_skew_transvection_by_hand():
    t = pl_transvection(VanishingConfig(SKEW2, ((1, 0),)), 1)
    assert t.apply((1, 0)) == (1, 0)
    assert t.apply((0, 1)) == (-1, 1)


def test_transvection_formula():
    lat = corpus.hyperbolic_lattice(2)
    delta = (1, 2, 0, -1)
    t = pl_transvection(VanishingConfig(lat, (delta,)), 1)
    for alpha in ((1, 0, 0, 0), (0, 1, 0, 0), (3, -1, 2, 5)):
        expected = tuple(a + lat.pairing(alpha, delta) * d for a, d in zip(alpha, delta))
        assert t.apply(alpha) == expected


def test_index_out_of_range():
    cfg = VanishingConfig(SKEW2, ((1, 0),))
    with pytest.raises(IndexError):
        pl_transvection(cfg, 0)
    with pytest.raises(IndexError):
        pl_transvection(cfg, 2)


@pytest.mark.parametrize("symmetry", ["symmetric", "skew"])
def test_transvection_rank_at_most_one(symmetry):
    rng = np.random.default_rng(7)
    for _ in range(20):
        cfg = corpus.random_vanishing_config(rng, symmetry=symmetry)
        for k in range(1, cfg.r + 1):
            x = _identity_minus(pl_transvection(cfg, k))
            assert rank(x) <= 1
            if symmetry == "skew":
                assert (x @ x).is_zero()


# -----------------------------------------------------------------------
# Total monodromy
# -----------------------------------------------------------------------

def test_single_cycle_total_is_transvection():
    cfg = VanishingConfig(SKEW2, ((1, 0),))
    assert total_monodromy(cfg) == pl_transvection(cfg, 1)


def test_empty_cycle_list():
    with pytest.raises(ValueError):
        total_monodromy(VanishingConfig(SKEW2, ()))


def test_composition_is_cycle_list_order():
    cfg = VanishingConfig(SKEW2, ((1, 0), (0, 1)))
    assert total_monodromy(cfg) == pl_transvection(cfg, 2) @ pl_transvection(cfg, 1)
    assert total_monodromy(cfg) != pl_transvection(cfg, 1) @ pl_transvection(cfg, 2)


def test_orthogonal_cycles_commute():
    lat = corpus.hyperbolic_lattice(2)
    forward = VanishingConfig(lat, ((1, 0, 0, 0), (0, 0, 1, 0)))
    backward = VanishingConfig(lat, ((0, 0, 1, 0), (1, 0, 0, 0)))
    assert total_monodromy(forward) == total_monodromy(backward)


def test_two_disjoint_hyperbolic_pairs():
    cfg = VanishingConfig(corpus.hyperbolic_lattice(2), ((1, 0, 0, 0), (0, 0, 1, 0)))
    t = total_monodromy(cfg)
    assert is_unipotent(t)
    assert rank(_identity_minus(t)) == 2
    assert t[0, 2] == t[2, 0] == 0


def test_log_rank_bounded_by_cycle_count():
    rng = np.random.default_rng(1)
    for _ in range(20):
        cfg = corpus.random_vanishing_config(rng, symmetry="skew")
        t = total_monodromy(cfg)
        if is_unipotent(t):
            assert rank(log_unipotent(t)) <= min(cfg.r, vanishing_span_rank(cfg))


# -----------------------------------------------------------------------
# analyze_monodromy and base change
# -----------------------------------------------------------------------

def test_analyze_unipotent():
    rep = analyze_monodromy(VanishingConfig(SKEW2, ((1, 0),)))
    assert rep.unipotent and rep.quasi_unipotent and rep.order == 1
    assert rep.log == M([[0, -1], [0, 0]])
    assert rep.log_rank == 1 == rep.span_rank
    assert rep.ok


def test_analyze_order_three_needs_base_change():
    a2 = Lattice(2, M([[-2, 1], [1, -2]]), "symmetric")
    cfg = VanishingConfig(a2, ((1, 0), (0, 1)))
    plain = analyze_monodromy(cfg)
    assert plain.quasi_unipotent and plain.order == 3
    assert not plain.unipotent and plain.log is None
    assert not plain.ok
    changed = analyze_monodromy(cfg, base_change=True)
    assert changed.power == 3
    assert changed.log == Matrix.zeros(2, 2)
    assert changed.ok


# -----------------------------------------------------------------------
# Gluing data
# -----------------------------------------------------------------------

@pytest.mark.parametrize("name, datum, expected", corpus.gluing_corpus(),
                         ids=[name for name, _, _ in corpus.gluing_corpus()])
def test_gluing_corpus(name, datum, expected):
    assert validate_gluing(datum) is expected


@pytest.mark.parametrize("lam, n, expected", [(3, 3, True), (3, 2, False), (0, 0, True)])
def test_scalar_gluing(lam, n, expected):
    assert validate_gluing(GluingDatum(1, 1, M([[1]]), M([[lam]]), M([[n]]))) is expected


def test_gluing_shape_mismatch():
    with pytest.raises(DimensionError):
        validate_gluing(GluingDatum(1, 1, M([[1, 0]]), M([[1]]), M([[1]])))


def test_canonical_gluing_factors_n():
    n = corpus.jordan_nilpotent([3, 1])
    g = canonical_gluing(n)
    assert g.mdprime_dim == rank(n)
    assert validate_gluing(g)
