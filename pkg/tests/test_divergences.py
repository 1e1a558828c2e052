import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctinfo.baselines import Exponential, Pareto, Uniform, Weibull
from ctinfo.ct_model import CTParams, make_ct
from ctinfo.divergences import (CHI2_FORMS, CHI2_PAIRS, KL_FORMS, KL_PAIRS, chi_square, chi_square_closed_forms,
                                chi_square_reduction_check, component, jeffreys, kl, kl_closed_forms,
                                kl_mixture_ct, kl_reduction_check, mixture_dist, symmetric_chi_square)
from ctinfo.parsing import parse_dist

U = Uniform()


def test_known_values():
    a, b = parse_dist("beta31").dist, parse_dist("uniform").dist
    assert kl(a, b, U).value == pytest.approx(math.log(3) - 2 / 3, abs=1e-10)
    assert kl_closed_forms("f", (0.4, 0.6)).value == pytest.approx(math.log(2), abs=1e-15)
    assert kl(b, b, U).value == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("which", sorted(KL_FORMS))
@pytest.mark.parametrize("p", [(0.4, 0.6), (0.9, -0.5), (0.2, 0.9), (0.6, 0.3)])
def test_kl_closed_forms_match_quadrature(which, p):
    r = kl_closed_forms(which, p)
    pair = dict(zip("abcdefg", [("f", "ct"), ("ct", "f"), ("f23", "ct"), ("ct", "fmax"), ("fmax", "ct"),
                                ("f23", "fmax"), ("fmax", "f")]))[which]
    q = kl(component(pair[0], U, p), component(pair[1], U, p), U)
    assert r.method == "closed_form"
    assert r.value == pytest.approx(q.value, abs=1e-8)


@pytest.mark.parametrize("which", sorted(CHI2_FORMS))
def test_chi2_closed_forms_match_quadrature(which):
    p = (0.3, 0.4)
    pair = {"a": ("ct", "f"), "b": ("f", "ct"), "c": ("fmax", "ct")}[which]
    q = chi_square(component(pair[0], U, p), component(pair[1], U, p), U)
    assert chi_square_closed_forms(which, p).value == pytest.approx(q.value, abs=1e-9)


def test_l2_equal_one_falls_back_to_quadrature():
    r = kl_closed_forms("a", (0.5, 1.0))
    assert r.method == "quadrature" and r.converged


@pytest.mark.parametrize("pair", KL_PAIRS)
def test_kl_reduces_to_uniform(pair):
    for b in (Exponential(3.0), Weibull(0.8), Pareto(1.5)):
        x, u = kl_reduction_check(pair, b, (0.3, 0.2))
        assert x.value == pytest.approx(u.value, abs=1e-8)


@pytest.mark.parametrize("pair", CHI2_PAIRS)
def test_chi2_reduces_to_uniform(pair):
    x, u = chi_square_reduction_check(pair, Exponential(0.5), (0.7, -0.2))
    assert x.value == pytest.approx(u.value, abs=1e-8)


def test_symmetrised_measures_are_sums():
    f, g = component("f", U), make_ct(U, (0.4, 0.6))
    assert jeffreys(f, g, U).value == pytest.approx(kl(f, g, U).value + kl(g, f, U).value, abs=1e-12)
    assert symmetric_chi_square(f, g, U).value == pytest.approx(
        chi_square(f, g, U).value + chi_square(g, f, U).value, abs=1e-12)


def test_divergent_cases_are_reported():
    # g has a simple zero at 0: -int log g stays finite, int 1/g does not
    g = make_ct(U, (0.0, 0.6))
    assert math.isfinite(kl(component("f", U), g, U).value)
    for base in (U, Exponential(1.0)):
        r = chi_square(component("f", base), make_ct(base, (0.0, 0.6)), base)
        assert r.value == math.inf and r.divergent
    assert chi_square_closed_forms("b", (0.0, 0.6)).value == math.inf


@pytest.mark.parametrize("direction", ["mix_ct", "ct_mix"])
def test_mixture_kl_closed_form_matches_quadrature(direction):
    for v in (0.0, 0.3, 1.0):
        c = kl_mixture_ct(v, (0.4, 0.6), direction)
        q = kl_mixture_ct(v, (0.4, 0.6), direction, method="quadrature", baseline=Exponential(1.0))
        assert c.value == pytest.approx(q.value, abs=1e-9)


def test_mixture_dist_endpoints():
    assert mixture_dist(1.0, U).pdf(0.3) == pytest.approx(1.0)
    assert mixture_dist(0.0, U).pdf(0.5) == pytest.approx(3 * 0.25)


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.floats(0.05, 1), st.floats(-0.9, 0.95)).filter(lambda p: CTParams.is_valid(*p, strict=True)))
def test_kl_nonnegative_and_closed_form_consistent(p):
    v = kl_closed_forms("b", p).value
    assert v >= -1e-12
    assert v == pytest.approx(kl(make_ct(U, p), component("f", U), U).value, abs=1e-7)
