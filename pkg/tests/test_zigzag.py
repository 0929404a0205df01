"""Zig-zag tuples: validation, duality, sums, isomorphism and presentations."""
from fractions import Fraction

import numpy as np
import pytest

from conifold import corpus, zigzag
from conifold.errors import DimensionError, InvalidMorphismError, InvalidZigZagError, PresentationError
from conifold.qlinalg import Matrix
from conifold.zigzag import (
    IC_LABEL,
    POS_EXACT_A,
    POS_EXACT_B,
    POS_GAMMA_BETA,
    ExtensionPresentation,
    RawZigZag,
    ZigZag,
    ZigZagMorphism,
    assemble,
    build,
    direct_sum,
    direct_sum_all,
    dual,
    dual_presentation,
    extension_class,
    find_isomorphism,
    general_extension,
    hom_space,
    is_isomorphic,
    is_self_dual_presentation,
    jshriek_shape,
    jstar_presentation,
    jstar_shape,
    mu_corrected,
    mu_ic,
    mu_skyscraper,
    presentations_isomorphic,
    skyscraper_extension,
    split_presentation,
    validate,
    zero_zigzag,
)

M = Matrix.from_rows


def _raw(hm, h0, a, b, alpha, beta, gamma):
    return RawZigZag(hm, h0, a, b, M(alpha, hm), M(beta, a), M(gamma, b))


# -----------------------------------------------------------------------
# Validation
# -----------------------------------------------------------------------

def test_ic_tuple_is_valid():
    assert validate(mu_ic(1, 1)).ok


def test_gamma_beta_failure_is_named():
    rep = validate(_raw(1, 1, 1, 1, [[0]], [[1]], [[1]]))
    assert not rep.gamma_beta_zero
    assert POS_GAMMA_BETA in rep.failures
    assert not rep.is_complex


def test_exactness_at_a_failure():
    rep = validate(_raw(0, 0, 1, 1, [[]], [[0]], []))
    assert rep.is_complex
    assert not rep.exact_at_a
    assert POS_EXACT_A in rep.failures


def test_exactness_at_b_failure():
    rep = validate(_raw(0, 1, 0, 1, [], [[]], [[0]]))
    assert rep.failures == [POS_EXACT_B]


def test_shape_mismatch_raises():
    raw = RawZigZag(1, 1, 1, 1, Matrix.zeros(2, 1), Matrix.zeros(1, 1), Matrix.zeros(1, 1))
    with pytest.raises(DimensionError):
        validate(raw)


def test_checked_constructor_rejects_invalid():
    with pytest.raises(InvalidZigZagError) as info:
        build(1, 1, 1, 1, [[0]], [[1]], [[1]])
    assert POS_GAMMA_BETA in str(info.value)


@pytest.mark.parametrize("hm, h0", [(0, 0), (1, 1), (2, 3)])
def test_mu_ic_valid_for_any_stalks(hm, h0):
    z = mu_ic(hm, h0)
    assert z.dims == (hm, 0, 0, h0)
    assert validate(z).ok


def test_mu_ic_node_label():
    assert mu_ic(1, 1).label == IC_LABEL


def test_skyscraper():
    z = mu_skyscraper(2)
    assert z.dims == (0, 2, 2, 0)
    assert z.beta == Matrix.identity(2)
    with pytest.raises(ValueError):
        mu_skyscraper(0)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_corrected_tuple(r):
    z, e = mu_corrected(r)
    assert z.dims == (1, r, r, 1)
    assert z.beta == Matrix.identity(r)
    assert validate(z).ok
    assert e.class_params == (1,) * r
    assert e.sub == mu_ic(1, 1) and e.quot == mu_skyscraper(r)
    with pytest.raises(ValueError):
        mu_corrected(0)


# -----------------------------------------------------------------------
# Duality and direct sums
# -----------------------------------------------------------------------

def test_dual_fixes_standard_tuples():
    corrected, _ = mu_corrected(1)
    for z in (mu_ic(1, 1), mu_skyscraper(1), corrected):
        assert dual(z) == z


def test_dual_exchanges_jstar_and_jshriek():
    assert dual(jstar_shape()) == jshriek_shape()
    assert dual(jshriek_shape()) == jstar_shape()
    assert not is_isomorphic(jstar_shape(), jshriek_shape())


@pytest.mark.parametrize("m", [1, 2, 3])
def test_dual_of_skyscraper(m):
    assert is_isomorphic(dual(mu_skyscraper(m)), mu_skyscraper(m))


def test_double_dual_on_random_corpus():
    for z in corpus.zigzag_corpus(15, seed=3, max_dim=2):
        assert dual(dual(z)) == z
        assert validate(dual(z)).ok


def test_direct_sum_examples():
    z = mu_corrected(2)[0]
    assert direct_sum(z, zero_zigzag()) == z
    assert direct_sum(mu_skyscraper(1), mu_skyscraper(1)) == mu_skyscraper(2)
    assert direct_sum(mu_ic(1, 1), mu_skyscraper(1)) == mu_corrected(1)[0]
    assert direct_sum_all([]) == zero_zigzag()


def test_direct_sum_commutes_up_to_isomorphism():
    a, b = jstar_shape(), mu_skyscraper(1)
    assert is_isomorphic(direct_sum(a, b), direct_sum(b, a))


# -----------------------------------------------------------------------
# Morphisms and isomorphism
# -----------------------------------------------------------------------

def test_morphism_must_commute():
    z = mu_skyscraper(1)
    with pytest.raises(InvalidMorphismError):
        ZigZagMorphism(z, z, Matrix.zeros(0, 0), M([[1]]), M([[2]]), Matrix.zeros(0, 0))


def test_identity_and_inverse():
    z = mu_corrected(2)[0]
    ident = ZigZagMorphism.identity(z)
    assert ident.is_invertible()
    assert ident.inverse() == ident
    assert ident.compose(ident) == ident


def test_isomorphism_examples():
    z = mu_corrected(1)[0]
    assert is_isomorphic(z, z)
    assert not is_isomorphic(mu_skyscraper(1), mu_ic(1, 1))


def test_non_isomorphic_pair_is_certified(monkeypatch):
    """Every point of the Hom space is singular, so the symbolic determinant decides."""
    calls = []
    original = zigzag._determinant_vanishes

    def counting(basis):
        calls.append(len(basis))
        return original(basis)

    monkeypatch.setattr(zigzag, "_determinant_vanishes", counting)
    corrected = mu_corrected(1)[0]
    other = build(1, 1, 1, 1, [[1]], [[0]], [[1]])
    assert not is_isomorphic(corrected, other)
    assert calls == [2]


def test_determinant_vanishes_on_singular_hom_space():
    corrected = mu_corrected(1)[0]
    other = build(1, 1, 1, 1, [[1]], [[0]], [[1]])
    assert zigzag._determinant_vanishes(hom_space(corrected, other))
    sky = mu_skyscraper(1)
    assert not zigzag._determinant_vanishes(hom_space(sky, sky))


def test_isomorphism_through_basis_change():
    """A tuple and its image under a random change of basis are isomorphic."""
    rng = np.random.default_rng(11)
    for _ in range(5):
        z = corpus.random_zigzag(rng, max_dim=2)
        p = [corpus.random_invertible(d, rng) for d in z.dims]
        moved = build(
            z.hm_dim, z.h0_dim, z.a_dim, z.b_dim,
            p[1] @ z.alpha @ p[0].inverse(),
            p[2] @ z.beta @ p[1].inverse(),
            p[3] @ z.gamma @ p[2].inverse(),
            z.label,
        )
        f = find_isomorphism(z, moved)
        assert f is not None
        assert f.is_invertible()


def test_isomorphism_is_an_equivalence_on_corpus():
    zs = corpus.zigzag_corpus(6, seed=5, max_dim=1)
    for a in zs:
        assert is_isomorphic(a, a)
        for b in zs:
            assert is_isomorphic(a, b) == is_isomorphic(b, a)


def test_hom_space_dimension():
    # End(sky) is the scalars acting on A = B = Q.
    assert len(hom_space(mu_skyscraper(1), mu_skyscraper(1))) == 1
    assert len(hom_space(mu_skyscraper(2), mu_skyscraper(2))) == 4
    assert hom_space(jstar_shape(), jshriek_shape()) == []
    assert len(hom_space(jshriek_shape(), jstar_shape())) == 2


# -----------------------------------------------------------------------
# Presentations
# -----------------------------------------------------------------------

def test_split_assembles_to_direct_sum():
    ic, sky = mu_ic(1, 1), mu_skyscraper(1)
    assert assemble(split_presentation(ic, sky)) == direct_sum(ic, sky)


def test_corrected_assembles_to_corrected_tuple():
    corrected, e = mu_corrected(1)
    assert assemble(e) == corrected


def test_class_params_do_not_change_assembly():
    assert assemble(skyscraper_extension(2, [0, 1])) == assemble(skyscraper_extension(2, [3, 1]))


def test_split_and_corrected_presentations_differ():
    ic, sky = mu_ic(1, 1), mu_skyscraper(1)
    assert not presentations_isomorphic(split_presentation(ic, sky), mu_corrected(1)[1])


def test_general_extension_block_map():
    e = general_extension(Fraction(2))
    z = assemble(e)
    assert z.beta == M([[2], [1]])
    assert z.gamma == M([[1, -2]])
    assert extension_class(e) == [(Fraction(2),)]


def test_extension_class_modulo_image():
    # Im(sub.beta) is all of sub.B here, so every u_beta reduces to zero.
    z = build(0, 0, 1, 1, None, [[1]], None, "0")
    e = ExtensionPresentation(z, mu_skyscraper(1), Matrix.zeros(1, 0), M([[5]]), Matrix.zeros(0, 1), (0,))
    assert extension_class(e) == [(Fraction(0),)]


def test_block_relation_is_enforced():
    sub, quot = jstar_shape(), mu_skyscraper(1)
    with pytest.raises(PresentationError):
        ExtensionPresentation(sub, quot, Matrix.zeros(0, 0), M([[1]]), M([[1]]), (1,))


def test_param_count_is_enforced():
    with pytest.raises(PresentationError):
        skyscraper_extension(2, [1])


def test_self_dual_presentations():
    ic, sky = mu_ic(1, 1), mu_skyscraper(1)
    assert is_self_dual_presentation(split_presentation(ic, sky))
    assert is_self_dual_presentation(mu_corrected(1)[1])


def test_jstar_presentation_dualizes_to_jshriek():
    e = jstar_presentation()
    assert assemble(e) == jstar_shape()
    assert assemble(dual_presentation(e)) == jshriek_shape()
    assert not is_self_dual_presentation(e)


def test_dual_presentation_keeps_params():
    e = skyscraper_extension(2, [1, 0])
    d = dual_presentation(e)
    assert d.class_params == e.class_params
    assert d.sub == dual(e.quot) and d.quot == dual(e.sub)


def test_zigzag_is_frozen():
    z = mu_ic(1, 1)
    assert isinstance(z, ZigZag)
    with pytest.raises(AttributeError):
        z.hm_dim = 2
