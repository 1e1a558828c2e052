import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctinfo.baselines import Exponential, Uniform, Weibull
from ctinfo.ct_model import (CTParams, EmptySampleError, InvalidParametersError, MixingProbs, OrderStatComponent,
                             ct_uniform_pdf, g_zero, integral_diverges, make_ct, make_one_param_cubic,
                             make_quadratic, sample_ct)
from ctinfo.parsing import parse_dist
from ctinfo.quadrature import integrate_support


def valid_params():
    return st.tuples(st.floats(0, 1), st.floats(-1, 1)).filter(lambda p: CTParams.is_valid(*p, strict=True))


def test_box_and_validity():
    assert CTParams.is_valid(0.4, 0.6, strict=True)
    assert not CTParams.is_valid(1.5, 0.5, strict=True)
    assert CTParams.is_valid(1.5, 1.0)  # lenient box holds the quadratic family
    with pytest.raises(InvalidParametersError):
        CTParams(0.0, -1.0)  # g(u) = 6u**2 - 2u < 0 on (0, 1/3)
    with pytest.raises(InvalidParametersError):
        CTParams(float("nan"), 0.5)


@settings(max_examples=50, deadline=None)
@given(valid_params())
def test_pdf_nonnegative_and_cdf_endpoints(p):
    u = np.linspace(0, 1, 201)
    assert np.all(ct_uniform_pdf(u, *p) >= -1e-12)
    ct = make_ct(Uniform(), p)
    assert ct.H(0.0) == pytest.approx(0.0, abs=1e-15)
    assert ct.H(1.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("p", [(0.4, 0.6), (1.0, 1.0), (0.0, 0.0), (0.9, -0.5)])
def test_pdf_integrates_over_baselines(p):
    for b in (Exponential(2.0), Weibull(1.5)):
        assert integrate_support(make_ct(b, p).pdf, b).value == pytest.approx(1.0, abs=1e-8)


def test_mixture_weights_and_round_trip():
    ct = make_ct(Uniform(), (0.4, 0.6))
    w = ct.mixture_weights()
    assert sum(w) == pytest.approx(1.0)
    mp = MixingProbs.from_params(CTParams(0.4, 0.6))
    assert mp.to_params().as_tuple() == pytest.approx((0.4, 0.6))
    with pytest.raises(InvalidParametersError):
        MixingProbs(0.5, 0.6, -0.1)


def test_special_families():
    q = make_quadratic(Uniform(), 0.5)
    assert (q.l1, q.l2) == (1.5, 1.0)
    c = make_one_param_cubic(Uniform(), -0.3)
    assert (c.l1, c.l2) == pytest.approx((0.7, 1.3))


def test_order_stat_components():
    u = np.linspace(0.05, 0.95, 19)
    np.testing.assert_allclose(OrderStatComponent("min").cdf(u), 1 - (1 - u) ** 3)
    np.testing.assert_allclose(OrderStatComponent("median").cdf(u), 3 * u**2 - 2 * u**3)
    np.testing.assert_allclose(OrderStatComponent("max").cdf(u), u**3)


def test_sampling_is_seeded():
    mp = MixingProbs(0.2, 0.3, 0.5)
    a = sample_ct(mp, Exponential(1.0), 100, seed=5)
    b = sample_ct(mp, Exponential(1.0), 100, seed=5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, sample_ct(mp, Exponential(1.0), 100, seed=6))
    with pytest.raises(EmptySampleError):
        sample_ct(mp, Uniform(), 0)


def test_pure_components_sample_their_order_statistic():
    x = sample_ct(MixingProbs(0.0, 0.0, 1.0), Uniform(), 20000, seed=1)
    assert np.mean(x) == pytest.approx(0.75, abs=0.01)
    x = sample_ct(MixingProbs(1.0, 0.0, 0.0), Uniform(), 20000, seed=1)
    assert np.mean(x) == pytest.approx(0.25, abs=0.01)


def test_g_zero_orders():
    assert g_zero(0.4, 0.6) is None
    assert g_zero(0.0, 0.6) == (0.0, 1)
    assert g_zero(0.0, 0.0) == (0.0, 2)
    # 1/g diverges at a simple zero; u/g does not
    assert integral_diverges(0.0, 0.6, [1.0])
    assert not integral_diverges(0.0, 0.6, [0.0, 1.0])
    assert integral_diverges(0.0, 0.0, [0.0, 1.0])
    assert not integral_diverges(0.0, 0.0, [0.0, 0.0, 1.0])


@pytest.mark.parametrize("text", ["ct:l1=0.4,l2=0.6@exp:beta=2", "qt:l=0.5@weibull:k=2", "ct1:l=-0.3@uniform"])
def test_spec_string_round_trip(text):
    d = parse_dist(text).dist
    assert parse_dist(d.spec_string()).dist.spec_string() == d.spec_string()
