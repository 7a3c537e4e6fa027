import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eprbias.errors import InvalidArgument
from eprbias.gaussian import quadrature_variance, sideband_photon_number
from eprbias.metrics import epr_product, ghz_product, maximality_lambda, minimal_photon_number
from eprbias.protocols import (
    GHZ_COEFFICIENTS,
    EprRecipe,
    GhzRecipe,
    ghz_balancing_gain,
    ghz_inputs,
    ghz_maximal_input_variance,
    ghz_network,
    ghz_symmetrizing_gain,
    is_maximal_ghz,
    make_epr_pair,
    make_ghz_triple,
    symmetrize_epr,
    symmetrize_ghz,
    symmetrizing_gain,
)

variances = st.floats(min_value=0.02, max_value=50.0)


@st.composite
def recipes(draw):
    return EprRecipe.from_amplitude(draw(variances), draw(variances))


def test_recipe_rejects_impure():
    with pytest.raises(InvalidArgument):
        EprRecipe(0.5, 3.0, 1.0, 1.0)
    with pytest.raises(InvalidArgument):
        GhzRecipe(0.5, 2.0, 1.0, 1.0, 1.0, 1.1)


def test_recipe_json_roundtrip():
    r = EprRecipe.from_amplitude(0.3, 2.0)
    assert EprRecipe.from_json(r.to_json()) == r
    g = GhzRecipe.maximal(0.4)
    assert GhzRecipe.from_json(g.to_json()) == g
    assert EprRecipe.from_json('{"v1_plus": 0.5, "v2_plus": 1}') == EprRecipe.single_squeezer(0.5)


@pytest.mark.parametrize(
    "recipe, expected",
    [
        (EprRecipe.from_amplitude(1, 1), 1.0),
        (EprRecipe.single_squeezer(0.5), 8 / 9),
        (EprRecipe.two_squeezer(0.5), 0.64),
    ],
)
def test_make_epr_pair_products(recipe, expected):
    assert epr_product(make_epr_pair(recipe), 0, 1).product == pytest.approx(expected, abs=1e-12)


@given(recipes())
@settings(max_examples=100, deadline=None)
def test_make_epr_pair_matches_closed_form(recipe):
    p = epr_product(make_epr_pair(recipe), 0, 1).product
    assert p == pytest.approx(recipe.product_closed_form(), abs=1e-12, rel=1e-12)


def test_symmetrizing_gain_examples():
    assert symmetrizing_gain(2.0, 2.0) == 1.0
    assert symmetrizing_gain(4.0, 1.0) == 2.0
    assert symmetrizing_gain(9.0, 4.0) == 1.5
    with pytest.raises(InvalidArgument):
        symmetrizing_gain(0.0, 1.0)


@pytest.mark.parametrize("s", [0.9, 0.5, 0.25, 0.1])
def test_symmetrized_single_squeezer_equals_two_squeezer(s):
    one = EprRecipe.single_squeezer(s)
    sym = symmetrize_epr(make_epr_pair(one), 0, 1, symmetrizing_gain(one.v1_minus, one.v2_plus))
    ref = make_epr_pair(EprRecipe.two_squeezer(math.sqrt(s)))
    np.testing.assert_allclose(sym.cov, ref.cov, atol=1e-12, rtol=0)


def test_symmetrize_unit_gain_is_identity():
    s = make_epr_pair(EprRecipe.single_squeezer(0.3))
    np.testing.assert_array_equal(symmetrize_epr(s, 0, 1, 1.0).cov, s.cov)


@given(recipes(), st.floats(min_value=0.05, max_value=20))
@settings(max_examples=100, deadline=None)
def test_symmetrize_preserves_product(recipe, g):
    s = make_epr_pair(recipe)
    before = epr_product(s, 0, 1).product
    after = epr_product(symmetrize_epr(s, 0, 1, g), 0, 1).product
    assert after == pytest.approx(before, abs=1e-12, rel=1e-12)


@given(recipes())
@settings(max_examples=100, deadline=None)
def test_symmetrizing_gain_makes_maximal(recipe):
    s = make_epr_pair(recipe)
    g = symmetrizing_gain(recipe.v1_minus, recipe.v2_plus)
    rep = epr_product(symmetrize_epr(s, 0, 1, g), 0, 1)
    scale = max(1.0, rep.vcv_plus)
    assert rep.vcv_plus == pytest.approx(rep.vcv_minus, abs=1e-9 * scale)
    if rep.lambda_ is not None and rep.n_epr_a > 1e-6:
        assert rep.lambda_ == pytest.approx(1.0, abs=1e-9 * max(1.0, 1 / rep.n_epr_a))
    n = minimal_photon_number(rep.vcv_plus, rep.vcv_minus)
    assert rep.n_epr_a == pytest.approx(n, abs=1e-9 * scale)
    assert rep.n_epr_b == pytest.approx(n, abs=1e-9 * scale)


def test_unequal_gains_option():
    s = make_epr_pair(EprRecipe.single_squeezer(0.3))
    t = symmetrize_epr(s, 0, 1, 2.0, gain_b=0.5)
    assert quadrature_variance(t, 1, "plus") == pytest.approx(0.5 * quadrature_variance(s, 1, "plus"))


def test_ghz_coefficients_orthogonal_and_exact():
    c = GHZ_COEFFICIENTS
    np.testing.assert_allclose(c @ c.T, np.eye(3), atol=1e-12)
    assert c[0, 0] == math.sqrt(1 / 3) and c[0, 1] == -math.sqrt(2 / 3) and c[0, 2] == 0
    assert c[1, 1] == math.sqrt(1 / 6) and c[2, 2] == -math.sqrt(1 / 2)


def test_ghz_network_composite_matrix():
    n = ghz_network().matrix
    np.testing.assert_allclose(n, np.kron(GHZ_COEFFICIENTS, np.eye(2)), atol=1e-12, rtol=0)
    assert ghz_network().is_symplectic()


def test_ghz_vacua_stay_vacua():
    s = make_ghz_triple(GhzRecipe.from_amplitude(1, 1, 1))
    np.testing.assert_allclose(s.cov, np.eye(6), atol=1e-12)


@pytest.mark.parametrize("s", [0.8, 0.5, 0.2])
def test_ghz_single_squeezer_marginal(s):
    st_ = make_ghz_triple(GhzRecipe.single_squeezer(s))
    assert quadrature_variance(st_, 0, "plus") == pytest.approx(s / 3 + 2 / 3, abs=1e-12)


def test_ghz_equal_squeezing_violation():
    st_ = make_ghz_triple(GhzRecipe.equal_squeezing(0.5))
    assert ghz_product(st_, 0, 1, 2).product < 1


def test_ghz_maximal_input_variance_values():
    assert ghz_maximal_input_variance(1.0) == 1.0
    assert ghz_maximal_input_variance(0.5) == pytest.approx((0.75 + math.sqrt(0.8125)) / 0.5, abs=1e-12)
    assert ghz_maximal_input_variance(0.5) == pytest.approx(3.30278, abs=1e-5)
    with pytest.raises(InvalidArgument):
        ghz_maximal_input_variance(0.0)


@pytest.mark.parametrize("v", [0.8, 0.5, 0.25, 0.1])
def test_ghz_maximal_recipe_is_unbiased(v):
    st_ = make_ghz_triple(GhzRecipe.maximal(v))
    for t in range(3):
        rep = ghz_product(st_, t, *[m for m in range(3) if m != t])
        assert rep.vcv3_plus == pytest.approx(rep.vcv3_minus, abs=1e-9)
    assert is_maximal_ghz(st_)


@pytest.mark.parametrize("v", [0.8, 0.5, 0.25])
def test_ghz_maximal_formula_other_pairing_is_biased(v):
    # reading the formula as V1+ = f(V2-) with V2- = v leaves the noise biased
    f = ghz_maximal_input_variance(v)
    st_ = make_ghz_triple(GhzRecipe.from_amplitude(f, 1 / v, 1 / v))
    rep = ghz_product(st_, 0, 1, 2)
    assert abs(rep.vcv3_plus - rep.vcv3_minus) > 0.1


def test_ghz_symmetrizing_gain_values():
    assert ghz_symmetrizing_gain(0.25, 4.0) == pytest.approx(math.sqrt(6 / 2.25) / math.sqrt(3), abs=1e-12)
    assert ghz_symmetrizing_gain(0.25, 4.0) == pytest.approx(0.94281, abs=1e-5)
    assert ghz_symmetrizing_gain(1.0, 1.0) == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    with pytest.raises(InvalidArgument):
        ghz_symmetrizing_gain(-1.0, 1.0)


@pytest.mark.parametrize("s", [0.9, 0.5, 0.25, 0.05])
def test_ghz_gains_preserve_product(s):
    st_ = make_ghz_triple(GhzRecipe.single_squeezer(s))
    before = ghz_product(st_, 0, 1, 2).product
    for g in (ghz_symmetrizing_gain(s, 1 / s), ghz_balancing_gain(s, 1 / s)):
        assert ghz_product(symmetrize_ghz(st_, g), 0, 1, 2).product == pytest.approx(before, abs=1e-12)


@pytest.mark.parametrize("s", [0.9, 0.5, 0.25, 0.05])
def test_quoted_ghz_gain_does_not_balance(s):
    st_ = symmetrize_ghz(make_ghz_triple(GhzRecipe.single_squeezer(s)), ghz_symmetrizing_gain(s, 1 / s))
    rep = ghz_product(st_, 0, 1, 2)
    # off by exactly the 1/sqrt3 factor: V_cv3+/V_cv3- = 1/3
    assert rep.vcv3_plus / rep.vcv3_minus == pytest.approx(1 / 3, abs=1e-9)
    assert not is_maximal_ghz(st_)


@pytest.mark.parametrize("s", [0.9, 0.5, 0.25, 0.05])
def test_balancing_gain_gives_maximal_ghz(s):
    g = ghz_balancing_gain(s, 1 / s)
    st_ = symmetrize_ghz(make_ghz_triple(GhzRecipe.single_squeezer(s)), g)
    for t in range(3):
        rep = ghz_product(st_, t, *[m for m in range(3) if m != t])
        assert rep.vcv3_plus == pytest.approx(rep.vcv3_minus, abs=1e-9)
    assert is_maximal_ghz(st_)
    # same state as the three-squeezer maximal construction with V2- = V3- = 1/g
    np.testing.assert_allclose(st_.cov, make_ghz_triple(GhzRecipe.maximal(1 / g)).cov, atol=1e-9)


def test_ghz_maximal_uses_fewer_photons_than_equal_squeezing():
    # match the GHZ strength, then compare photon numbers
    eq = make_ghz_triple(GhzRecipe.equal_squeezing(0.5))
    target = ghz_product(eq, 0, 1, 2).product
    lo, hi = 1e-3, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ghz_product(make_ghz_triple(GhzRecipe.maximal(mid)), 0, 1, 2).product < target:
            lo = mid
        else:
            hi = mid
    mx = make_ghz_triple(GhzRecipe.maximal(lo))
    n_eq = sum(sideband_photon_number(eq, m) for m in range(3))
    n_mx = sum(sideband_photon_number(mx, m) for m in range(3))
    assert n_mx < n_eq


def test_ghz_inputs_roundtrip():
    r = GhzRecipe.from_amplitude(0.3, 2.0, 0.7)
    inputs = ghz_inputs(make_ghz_triple(r)).cov
    np.testing.assert_allclose(np.diag(inputs), [0.3, 1 / 0.3, 2.0, 0.5, 0.7, 1 / 0.7], atol=1e-12)


def test_lambda_after_symmetrization_single_squeezer():
    s = 0.25
    one = EprRecipe.single_squeezer(s)
    st_ = make_epr_pair(one)
    assert maximality_lambda(st_, 0, 1) == pytest.approx(1 / 2.25, abs=1e-9)
    after = symmetrize_epr(st_, 0, 1, symmetrizing_gain(one.v1_minus, one.v2_plus))
    assert maximality_lambda(after, 0, 1) == pytest.approx(1.0, abs=1e-9)
