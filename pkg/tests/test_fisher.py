import math

import numpy as np
import pytest

from ctinfo import CTParams, Exponential, Pareto, Uniform, Weibull, make_ct
from ctinfo.fisher_inference import (FisherMatrix, SingularFisherError, fisher_matrix, fisher_one_param, mle_fit,
                                     z_quantile)

POINTS = [(0.5, 0.5), (0.2, 0.8), (0.8, 0.2), (0.3, -0.3), (0.9, 0.9), (0.6, 0.1)]


def test_uniform_point_values():
    fm = fisher_matrix(make_ct(Uniform(), CTParams(1.0, 1.0)), method="closed_form")
    assert fm.i11 == pytest.approx(1 / 3, abs=1e-13)
    assert fm.i12 == pytest.approx(1 / 6, abs=1e-13)
    assert fm.i22 == pytest.approx(2 / 15, abs=1e-13)
    assert np.allclose(fm.inverse() @ fm.as_array(), np.eye(2), atol=1e-12)


@pytest.mark.parametrize("p", POINTS)
def test_closed_form_matches_quadrature(p):
    ct = make_ct(Uniform(), CTParams(*p))
    a = fisher_matrix(ct, method="closed_form")
    b = fisher_matrix(ct, method="quadrature")
    for k in ("i11", "i12", "i22"):
        assert getattr(a, k) == pytest.approx(getattr(b, k), abs=1e-9)
    assert a.is_psd() and b.is_psd()


@pytest.mark.parametrize("base", [Exponential(1.0), Pareto(2.0), Weibull(1.5)])
def test_baseline_invariance(base):
    p = CTParams(0.3, 0.6)
    ref = fisher_matrix(make_ct(Uniform(), p), method="closed_form")
    got = fisher_matrix(make_ct(base, p), method="quadrature")
    assert np.allclose(got.as_array(), ref.as_array(), atol=1e-8)


def test_zero_density_gives_infinite_entries():
    fm = fisher_matrix(make_ct(Uniform(), CTParams(0.0, 0.0)), method="closed_form")
    assert not fm.finite
    assert math.isinf(fm.i11)
    with pytest.raises(SingularFisherError):
        fm.inverse()


def test_singular_inverse():
    with pytest.raises(SingularFisherError):
        FisherMatrix(1.0, 1.0, 1.0).inverse()


@pytest.mark.parametrize("lam", [-0.9, -0.5, -0.1, 0.1, 0.5, 0.9])
def test_one_param_methods_agree(lam):
    c = fisher_one_param(lam, method="closed_form")
    assert fisher_one_param(lam, method="identity") == pytest.approx(c, rel=1e-9)
    assert fisher_one_param(lam, method="score") == pytest.approx(c, rel=1e-9)


def test_one_param_limit():
    for m in ("closed_form", "identity", "score"):
        assert fisher_one_param(0.0, method=m) == pytest.approx(2 / 15, abs=1e-15)
    # slope at the origin
    h = 1e-4
    slope = (fisher_one_param(h) - fisher_one_param(-h)) / (2 * h)
    assert slope == pytest.approx(-2 / 35, abs=1e-6)


def test_z_quantile():
    assert z_quantile(0.95) == 1.960
    assert z_quantile(0.90) == 1.645
    assert z_quantile(0.99) == pytest.approx(2.5758293035489, abs=1e-9)
    with pytest.raises(ValueError):
        z_quantile(1.0)


def test_mle_recovers_ct_uniform():
    truth = (0.4, 0.6)
    x = make_ct(Uniform(), CTParams(*truth)).sample(20000, seed=7)
    fit = mle_fit(x, "ct_uniform")
    assert fit.estimates["l1"] == pytest.approx(truth[0], abs=0.06)
    assert fit.estimates["l2"] == pytest.approx(truth[1], abs=0.06)
    assert fit.ci_available
    for lvl in (0.90, 0.95):
        for k in ("l1", "l2"):
            lo, hi = fit.ci[lvl][k]
            assert lo <= fit.estimates[k] <= hi
    w90 = fit.ci[0.90]["l1"][1] - fit.ci[0.90]["l1"][0]
    w95 = fit.ci[0.95]["l1"][1] - fit.ci[0.95]["l1"][0]
    assert w90 < w95
    d = fit.to_dict()
    assert d["model"] == "ct_uniform" and d["n"] == 20000


def test_mle_ct_weibull():
    x = make_ct(Weibull(1.5), CTParams(0.4, 0.6)).sample(3000, seed=11)
    fit = mle_fit(x, "ctw", init={"l1": 0.4, "l2": 0.6, "k": 1.5})
    assert fit.model == "ct_weibull"
    assert fit.estimates["k"] == pytest.approx(1.5, abs=0.15)
    assert fit.information.shape == (3, 3)
    assert fit.fisher.method == "observed"


def test_mle_input_checks():
    with pytest.raises(ValueError, match="30"):
        mle_fit(np.linspace(0.1, 0.9, 10))
    with pytest.raises(ValueError):
        mle_fit(np.linspace(0.1, 1.5, 50))
    with pytest.raises(ValueError):
        mle_fit(np.linspace(0.1, 0.9, 50), model="gamma")
    with pytest.raises(ValueError):
        mle_fit(np.linspace(-1, 1, 50), model="ct_weibull")
