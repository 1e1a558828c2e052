import pytest

from ctinfo import printed
from ctinfo.baselines import Exponential, Pareto, Power, Uniform, Weibull
from ctinfo.ct_model import make_ct, make_one_param_cubic, make_quadratic
from ctinfo.divergences import component
from ctinfo.gini import (InfiniteMeanError, ctg, ctg_energy_mixture, ctg_via_energy, ctg_weights, energy_distance,
                         gmd, gmd_constants, gmd_ct_decomposed, gmd_power_example, r_star, r_star_power,
                         r_star_quadratic)


def test_baseline_gmd():
    assert gmd(Uniform().cdf, Uniform()).value == pytest.approx(1 / 3, abs=1e-12)
    assert gmd(Exponential(2.0).cdf, Exponential(2.0)).value == pytest.approx(0.5, abs=1e-10)
    assert gmd(Power(2.0, 3.0).cdf, Power(2.0, 3.0)).value == pytest.approx(3 / 7, abs=1e-10)


def test_infinite_mean():
    with pytest.raises(InfiniteMeanError):
        gmd_ct_decomposed(make_ct(Pareto(0.9), (0.4, 0.6)))


def test_uniform_example():
    d = gmd_ct_decomposed(make_ct(Uniform(), (0.5, 0.5)))
    assert d.r_star == pytest.approx(0.175, abs=1e-12)
    assert d.total == pytest.approx(0.3119047619047619, abs=1e-10)
    assert d.bound == "lower"


def test_constants_vanish_at_identity():
    assert gmd_constants(1.0, 1.0) == pytest.approx((0, 0, 0, 0, 0))


@pytest.mark.parametrize("b", [Uniform(), Exponential(1.0), Weibull(2.0), Power(2.0, 3.0), Pareto(3.0)],
                         ids=lambda b: b.spec_string())
@pytest.mark.parametrize("p", [(0.4, 0.6), (0.95, -0.8), (0.0, 0.5)])
def test_decomposition(b, p):
    d = gmd_ct_decomposed(make_ct(b, p))
    assert d.discrepancy < 1e-8
    assert d.to_dict()["total"] == d.total


@pytest.mark.parametrize("p", [(1.0, 1.0), (0.4, 0.6), (0.9, -0.5), (0.0, 0.0)])
def test_power_closed_form(p):
    assert gmd_power_example(2.0, 3.0, p) == pytest.approx(gmd_ct_decomposed(make_ct(Power(2.0, 3.0), p)).total,
                                                          abs=1e-9)
    assert r_star_power(2.0, 3.0, p) == pytest.approx(r_star(p, Power(2.0, 3.0)).value, abs=1e-9)


def test_sign_examples():
    assert r_star_power(2.0, 3.0, (0.4, 0.6)) >= 0
    assert r_star_power(2.0, 3.0, (0.9, -0.5)) <= 0


def test_shared_corner_of_sign_boxes_is_positive():
    # (0.8, 0.2) lies on both stated sign boxes; R* is strictly positive there
    assert r_star_power(2.0, 3.0, (0.8, 0.2)) == pytest.approx(0.000527472527, abs=1e-10)


@pytest.mark.parametrize("lam", [-0.7, 0.4, 1.0])
def test_quadratic_r_star(lam):
    q = make_quadratic(Exponential(1.0), lam)
    assert r_star_quadratic(lam, Exponential(1.0)).value == pytest.approx(
        r_star((q.l1, q.l2), Exponential(1.0)).value, abs=1e-10)


def test_energy_distance():
    U = Uniform()
    assert energy_distance(U.cdf, U.cdf, U).value == 0.0
    assert energy_distance(U.cdf, component("fmax", U).cdf, U).value == pytest.approx(8 / 105, abs=1e-12)


@pytest.mark.parametrize("b", [Uniform(), Exponential(1.0)], ids=lambda b: b.spec_string())
@pytest.mark.parametrize("p", [(0.4, 0.6), (0.2, -0.3), (0.9, 0.9)])
def test_ctg_exact_energy_form(b, p):
    ct = make_ct(b, p)
    assert ctg_energy_mixture(ct).value == pytest.approx(ctg(ct).value, abs=1e-10)
    if ct.mixing_probs() is not None:  # a genuine mixture: the gap is nonnegative
        assert ctg(ct).value >= -1e-12


def test_published_energy_weights_do_not_reproduce_ctg():
    ct = make_ct(Uniform(), (0.4, 0.6))
    assert abs(ctg_via_energy(ct).value - ctg(ct).value) > 1e-3
    with pytest.raises(ZeroDivisionError):
        ctg_weights((0.5, 0.2))


def test_one_param_gmd_uses_corrected_coefficient():
    lam = 0.4
    ct = make_one_param_cubic(Exponential(1.0), lam)
    # the published polynomial leaves a non-integrable 1/(1-u) term over the exponential baseline
    assert gmd_ct_decomposed(ct).discrepancy < 1e-8
    assert printed.gmd_one_param is not None
