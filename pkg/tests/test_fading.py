import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special, stats

from kscg import fading
from kscg.fading import nakagami, parse_model, rayleigh, rician, weibull

CATALOG = [rayleigh(), rician(1.0), rician(4.0), nakagami(0.5), nakagami(2.0), weibull(1.0), weibull(4.0)]


# -- closed-form oracles ------------------------------------------------------

def test_rayleigh_row():
    p = fading.class_c_params(rayleigh())
    assert (p.alpha, p.l, p.beta, p.n, p.eta, p.gamma) == (1, 0, 1, 1, 1, 1)
    assert np.all(p.H(np.array([1.0, 10.0])) == 0)


def test_nakagami_half_row():
    m = 0.5
    a = m ** (m - 1) / math.gamma(m)
    p = fading.class_c_params(nakagami(m))
    assert p.alpha == pytest.approx(a, rel=1e-14)
    assert p.eta == pytest.approx(a, rel=1e-14)
    assert (p.l, p.beta, p.n, p.gamma) == (-0.5, 0.5, 1.0, 0.5)


def test_weibull_four_row():
    p = fading.class_c_params(weibull(4.0))
    b = math.gamma(1.5) ** 2
    assert p.beta == pytest.approx(b, rel=1e-14)
    assert p.eta == pytest.approx(b, rel=1e-14)
    assert (p.alpha, p.l, p.n, p.gamma) == (1.0, 0.0, 2.0, 2.0)


def test_rician_row():
    k = 1.0
    p = fading.class_c_params(rician(k))
    assert p.alpha == pytest.approx(1 / (2 * math.sqrt(math.pi) * math.e * 2 ** 0.25), rel=1e-14)
    assert (p.l, p.beta, p.n, p.gamma) == (-0.25, 2.0, 1.0, 1.0)
    assert p.eta == pytest.approx(2 / math.e, rel=1e-14)
    assert p.H(4.0) == pytest.approx(2 * math.sqrt(2 * 4.0), rel=1e-14)


def test_rician_zero_is_rayleigh():
    assert fading.class_c_params(rician(0.0)) == fading.class_c_params(rayleigh())
    x = np.linspace(0.01, 8, 50)
    np.testing.assert_allclose(fading.cdf(rician(0.0), x), fading.cdf(rayleigh(), x), rtol=1e-14)


def test_cdf_examples():
    assert fading.cdf(rayleigh(), math.log(2)) == pytest.approx(0.5, rel=1e-15)
    for m in CATALOG:
        assert fading.cdf(m, 0.0) == 0.0
        assert fading.cdf(m, -1.0) == 0.0
    assert fading.cdf(nakagami(2.0), 1e-3) == pytest.approx(2e-6, rel=0.05)


def test_rician_cdf_against_marcum_series():
    # F(x) = 1 - Q1(sqrt(2K), sqrt(2(K+1)x)); Q1 by its Bessel series
    k = 1.5
    for x in (0.05, 0.4, 1.0, 2.5, 6.0):
        a, b = math.sqrt(2 * k), math.sqrt(2 * (k + 1) * x)
        q1 = math.exp(-(a * a + b * b) / 2) * sum((a / b) ** j * special.iv(j, a * b) for j in range(0, 200))
        assert fading.cdf(rician(k), x) == pytest.approx(1 - q1, abs=1e-8)


def test_moment_examples():
    assert fading.moment(rayleigh(), 1) == pytest.approx(1)
    assert fading.moment(rayleigh(), 2) == pytest.approx(2)
    assert fading.moment(nakagami(0.5), 1) == pytest.approx(1)
    with pytest.raises(ValueError):
        fading.moment(rayleigh(), 0)


@pytest.mark.parametrize("k", [0.5, 1.0, 3.0, 8.0])
@pytest.mark.parametrize("p", [0.5, 1.0, 1.25, 2.0, 3.0])
def test_rician_moment_hypergeometric(k, p):
    exact = math.gamma(1 + p) / (k + 1) ** p * special.hyp1f1(-p, 1, -k)
    assert fading.moment(rician(k), p) == pytest.approx(exact, rel=1e-6)


@pytest.mark.parametrize("model", [nakagami(1.7), weibull(0.7), weibull(3.0)])
def test_closed_moments_match_quadrature(model):
    from scipy import integrate
    for p in (0.5, 1.0, 2.5):
        q, _ = integrate.quad(lambda t: t ** p * fading.pdf(model, t), 0, np.inf, limit=200)
        assert fading.moment(model, p) == pytest.approx(q, rel=1e-6)


def test_moment_finite_at_every_gamma():
    for h in CATALOG:
        for g in CATALOG:
            assert math.isfinite(fading.moment(h, fading.class_c_params(g).gamma))


# -- sampling -------------------------------------------------------------------

@pytest.mark.parametrize("model", CATALOG, ids=str)
def test_unit_mean(model):
    x = fading.sample(model, np.random.default_rng(11), 10 ** 6)
    assert abs(x.mean() - 1) < 0.01
    assert x.min() >= 0


@pytest.mark.parametrize("model", CATALOG, ids=str)
def test_sample_matches_cdf(model):
    x = fading.sample(model, np.random.default_rng(12), 10 ** 5)
    assert stats.kstest(x, lambda t: fading.cdf(model, t)).statistic < 0.01


def test_weibull_two_is_rayleigh_in_law():
    a = fading.sample(weibull(2.0), np.random.default_rng(1), 10 ** 5)
    b = fading.sample(rayleigh(), np.random.default_rng(2), 10 ** 5)
    assert stats.ks_2samp(a, b).statistic < 0.01
    x = np.linspace(0.01, 10, 100)
    np.testing.assert_allclose(fading.cdf(weibull(2.0), x), fading.cdf(rayleigh(), x), rtol=1e-13)


def test_nakagami_one_is_exponential():
    x = fading.sample(nakagami(1.0), np.random.default_rng(3), 10 ** 6)
    assert stats.kstest(x, lambda t: 1 - np.exp(-t)).statistic < 0.005


def test_pdf_integrates_to_cdf():
    from scipy import integrate
    for m in CATALOG:
        for x in (0.3, 1.0, 3.0):
            v, _ = integrate.quad(lambda t: fading.pdf(m, t), 0, x, limit=200)
            assert v == pytest.approx(fading.cdf(m, x), abs=1e-8)


# -- tail and origin behaviour ---------------------------------------------------------

@pytest.mark.parametrize("model", [rayleigh(), nakagami(0.5), nakagami(2.0), weibull(1.0), weibull(4.0)], ids=str)
def test_tail_consistency(model):
    p = fading.class_c_params(model)
    x = np.array([10.0, 20.0, 30.0])
    ratio = fading.sf(model, x) * fading.tail_g(p, x)
    np.testing.assert_allclose(ratio, 1.0, rtol=0.10)


def test_rician_tail_ratio_tends_to_one():
    model = rician(1.0)
    p = fading.class_c_params(model)
    x = np.array([10.0, 40.0, 160.0, 320.0])
    err = np.abs(fading.sf(model, x) * fading.tail_g(p, x) - 1)
    assert np.all(np.diff(err) < 0) and err[-1] < 0.05


@pytest.mark.parametrize("model", CATALOG, ids=str)
def test_origin_consistency(model):
    p = fading.class_c_params(model)
    x = np.array([1e-3, 1e-4, 1e-5])
    np.testing.assert_allclose(fading.cdf(model, x) / (p.eta * x ** p.gamma), 1.0, rtol=0.05)


def test_tail_g_rayleigh_closed_form():
    p = fading.class_c_params(rayleigh())
    assert fading.tail_g(p, 3.0) == pytest.approx(math.exp(3.0), rel=1e-14)
    assert fading.tail_g_inv(p, 1e5) == pytest.approx(math.log(1e5), rel=1e-12)
    assert fading.tail_g_inv(p, fading.tail_g(p, 5.0)) == pytest.approx(5.0, rel=1e-6)


def test_tail_g_weibull_two_matches_rayleigh():
    assert fading.tail_g(fading.class_c_params(weibull(2.0)), 10.0) == pytest.approx(
        fading.tail_g(fading.class_c_params(rayleigh()), 10.0), rel=1e-9)


def test_tail_g_inv_rejects_below_threshold():
    with pytest.raises(ValueError):
        fading.tail_g_inv(fading.class_c_params(rayleigh()), 1.0)
    with pytest.raises(ValueError):
        fading.tail_g(fading.class_c_params(rayleigh()), 0.5)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CATALOG), st.floats(2.0, 50.0))
def test_tail_g_round_trip(model, x):
    p = fading.class_c_params(model)
    assert fading.log_tail_g_inv(p, float(fading.log_tail_g(p, x))) == pytest.approx(x, rel=1e-6)
    with np.errstate(over="ignore"):
        y = float(fading.tail_g(p, x))
    if math.isfinite(y):
        assert fading.tail_g_inv(p, y) == pytest.approx(x, rel=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CATALOG), st.floats(1e-4, 1 - 1e-4))
def test_quantile_inverts_cdf(model, q):
    assert fading.cdf(model, fading.quantile(model, q)) == pytest.approx(q, rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CATALOG), st.floats(0.0, 20.0), st.floats(0.0, 20.0))
def test_cdf_monotone(model, a, b):
    lo, hi = sorted((a, b))
    assert fading.cdf(model, lo) <= fading.cdf(model, hi)


# -- construction ---------------------------------------------------------------

@pytest.mark.parametrize("bad", [("nakagami", 0.4), ("weibull", 0.0), ("rician", -0.1), ("lognormal", 1.0)])
def test_invalid_parameters_rejected(bad):
    with pytest.raises(ValueError):
        fading.FadingModel(*bad)


def test_parse_model():
    assert parse_model("Nakagami(0.5)") == nakagami(0.5)
    assert parse_model("weibull:4") == weibull(4)
    assert parse_model("rayleigh") == rayleigh()
