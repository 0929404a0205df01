"""Self-dual extensions of point skyscrapers by the minimal extension."""
from fractions import Fraction

import pytest

from conifold.errors import PresentationError
from conifold.qlinalg import Matrix
from conifold.zigzag import (
    ZigZagMorphism,
    assemble,
    classify_self_dual_extensions,
    general_extension,
    jstar_presentation,
    normalize_class_params,
    skyscraper_extension,
)


def test_single_node_has_split_and_corrected():
    rep = classify_self_dual_extensions(1)
    assert [o.support for o in rep.orbits] == [(), (1,)]
    assert rep.orbits[0].split
    assert rep.corrected_orbit.support == (1,)
    assert rep.corrected_orbit.self_dual
    assert rep.unique_corrected
    assert rep.ok


def test_two_nodes_orbits_by_support():
    rep = classify_self_dual_extensions(2)
    assert sorted(o.support for o in rep.orbits) == [(), (1,), (1, 2), (2,)]
    assert [o.support for o in rep.orbits if o.nontrivial_everywhere] == [(1, 2)]
    assert rep.corrected_orbit.class_params == (1, 1)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_orbit_count(r):
    rep = classify_self_dual_extensions(r)
    assert len(rep.orbits) == 2 ** r
    assert rep.ok
    assert all(o.self_dual for o in rep.orbits)


def test_classification_needs_a_node():
    with pytest.raises(ValueError):
        classify_self_dual_extensions(0)


# -----------------------------------------------------------------------
# Normalization
# -----------------------------------------------------------------------

@pytest.mark.parametrize("lam", [Fraction(5), Fraction(-2), Fraction(1, 3)])
def test_nonzero_parameter_normalizes_to_one(lam):
    e = skyscraper_extension(1, [lam])
    norm = normalize_class_params(e)
    assert norm.presentation.class_params == (1,)
    assert norm.scales == (1 / lam,)
    assert isinstance(norm.automorphism, ZigZagMorphism)
    assert norm.automorphism.is_invertible()


def test_scaling_witness_is_diag_one_over_lambda():
    norm = normalize_class_params(skyscraper_extension(1, [5]))
    assert norm.automorphism.f_a == Matrix.diag([Fraction(1, 5)])
    assert norm.automorphism.f_b == Matrix.diag([Fraction(1, 5)])


def test_zero_parameters_are_kept():
    norm = normalize_class_params(skyscraper_extension(3, [0, 7, 0]))
    assert norm.presentation.class_params == (0, 1, 0)
    assert norm.presentation.support == (2,)


def test_normalization_rescales_gluing_block():
    e = general_extension(Fraction(3))
    norm = normalize_class_params(e)
    assert norm.presentation.u_beta == Matrix.from_rows([[1]])
    assert norm.presentation.u_gamma == Matrix.from_rows([[-1]])
    assert assemble(norm.presentation) == assemble(general_extension(1))
    assert norm.automorphism.target == assemble(e)


def test_normalization_needs_skyscraper_quotient():
    with pytest.raises(PresentationError):
        normalize_class_params(jstar_presentation())
