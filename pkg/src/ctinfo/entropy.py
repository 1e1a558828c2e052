"""Shannon, weighted and CT Shannon entropy.

The CT entropy splits as

    H(f_CT) = l1 H(f) + (1 - l2) H(f_max) + 2 (l2 - l1) H^F(f) + theta,
    theta   = H(g) - (1 - l2) H(f_W),

where ``H^F`` is the entropy weighted by the baseline CDF and ``theta``
depends on the parameters only. :func:`ct_entropy_decomposed` evaluates
each term on its own and the total directly, so the identity can be
checked rather than assumed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Literal, Sequence

import numpy as np

from . import closed_forms as cf
from .baselines import Baseline, Exponential, Pareto, Uniform
from .ct_model import CTDistribution, CTParams, PolyTransform, make_ct, make_one_param_cubic, make_quadratic
from .divergences import component, kl
from .quadrature import DEFAULT_SPEC, Estimate, QuadratureSpec, combine, integrate_domain
from .roots import DegenerateParametersError

__all__ = [
    "shannon_entropy",
    "weighted_entropy",
    "theta_closed_form",
    "theta_quadrature",
    "EntropyDecomposition",
    "ct_entropy_decomposed",
    "ct_shannon_entropy",
    "js_entropy",
    "SpecialCaseIdentity",
    "entropy_special_cases",
    "baseline_entropy_terms",
    "ct_entropy_closed_form",
]

log = logging.getLogger(__name__)


def _pdf(obj) -> Callable:
    return obj.pdf if hasattr(obj, "pdf") else obj


def _neg_xlogx(p):
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0.0, -p * np.log(p), 0.0)


def shannon_entropy(pdf, domain=None, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """``-int f log f`` over a baseline's support or a finite interval.

    >>> round(float(shannon_entropy(lambda u: 3 * u**2)), 9)
    -0.431945622
    """
    p = _pdf(pdf)
    return integrate_domain(lambda x: _neg_xlogx(p(x)), Uniform() if domain is None else domain, spec)


def weighted_entropy(pdf, weight, domain=None, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """``-int psi f log f`` for a nonnegative weight ``psi``."""
    p = _pdf(pdf)
    return integrate_domain(lambda x: np.asarray(weight(x), dtype=float) * _neg_xlogx(p(x)),
                            Uniform() if domain is None else domain, spec)


def _params(params) -> CTParams:
    return params if isinstance(params, CTParams) else CTParams(*params)


def theta_quadrature(params, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """``theta`` from two unit-interval entropies."""
    p = _params(params)
    h_g = shannon_entropy(make_ct(Uniform(), p), None, spec)
    h_w = shannon_entropy(lambda u: 3.0 * u * u, None, spec)
    return combine([(1.0, h_g), (-(1.0 - p.l2), h_w)])


def theta_closed_form(params, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``theta = H(g) - (1 - l2) H(f_W)`` in closed form.

    Raises :class:`~ctinfo.roots.DegenerateParametersError` at ``l2 = 1``.
    If the complex-branch evaluation leaves an imaginary residue the value
    falls back to quadrature (logged at INFO level).
    """
    p = _params(params)
    try:
        return cf.theta(p.l1, p.l2)
    except cf.ComplexResidueError:
        log.info("theta closed form left an imaginary residue at %s; using quadrature", p.as_tuple())
        return float(theta_quadrature(p, spec))


@dataclass(frozen=True)
class EntropyDecomposition:
    """The five-term split of ``H(f_CT)``.

    ``total`` is the direct ``-int f_CT log f_CT``; ``decomposed`` the sum of
    the five terms. Each term already carries its coefficient.
    """

    total: float
    term_lambda1_Hf: float
    term_Hfmax: float
    term_weighted: float
    term_HfW: float
    term_HfUCT: float
    theta: float
    decomposed: float
    error_bound: float
    converged: bool

    @property
    def discrepancy(self) -> float:
        return abs(self.total - self.decomposed)

    def to_dict(self) -> dict:
        return asdict(self)


def ct_entropy_decomposed(ct: CTDistribution, spec: QuadratureSpec = DEFAULT_SPEC) -> EntropyDecomposition:
    """Entropy of a CT law, directly and term by term."""
    b = ct.baseline
    l1, l2 = ct.l1, ct.l2
    direct = shannon_entropy(ct, b, spec)
    h_f = shannon_entropy(b, b, spec)
    h_max = shannon_entropy(component("fmax", b), b, spec)
    h_weighted = weighted_entropy(b, b.cdf, b, spec)
    h_w = shannon_entropy(lambda u: 3.0 * u * u, None, spec)
    h_g = shannon_entropy(make_ct(Uniform(), ct.params), None, spec)
    terms = [(l1, h_f), (1.0 - l2, h_max), (2.0 * (l2 - l1), h_weighted), (-(1.0 - l2), h_w), (1.0, h_g)]
    total_terms = combine(terms)
    return EntropyDecomposition(
        total=direct.value,
        term_lambda1_Hf=l1 * h_f.value,
        term_Hfmax=(1.0 - l2) * h_max.value,
        term_weighted=2.0 * (l2 - l1) * h_weighted.value,
        term_HfW=-(1.0 - l2) * h_w.value,
        term_HfUCT=h_g.value,
        theta=h_g.value - (1.0 - l2) * h_w.value,
        decomposed=total_terms.value,
        error_bound=direct.error_bound + total_terms.error_bound,
        converged=direct.converged and total_terms.converged,
    )


def js_entropy(pdfs: Sequence, weights: Sequence[float], domain=None,
               spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """Jensen-Shannon gap ``H(sum w_i f_i) - sum w_i H(f_i)``.

    Weights may be negative (the gap is then no longer a divergence), which
    is what the CT family produces when ``l2 < l1``.
    """
    if len(pdfs) != len(weights):
        raise ValueError("pdfs and weights must have equal length")
    fs = [_pdf(p) for p in pdfs]
    mix = lambda x: sum(w * f(x) for w, f in zip(weights, fs))
    h_mix = shannon_entropy(mix, domain, spec)
    parts = [(-w, shannon_entropy(f, domain, spec)) for w, f in zip(weights, fs)]
    return combine([(1.0, h_mix)] + parts)


Method = Literal["definition", "kl", "closed_form"]


def ct_shannon_entropy(params, baseline: Baseline | None = None, spec: QuadratureSpec = DEFAULT_SPEC,
                       method: Method = "definition") -> Estimate:
    """CT Shannon entropy: the Jensen gap of the CT mixture over its components.

    ``definition``
        ``H(f_CT) - l1 H(f) - (l2 - l1)/3 H(f_23) - (3 - l2 - 2 l1)/3 H(f_max)``
        by quadrature over ``baseline``.
    ``kl``
        ``(1 - l2) KL(f_max, f) + (l2 - l1)/3 KL(f_23, f_max) - KL(f_CT, f)
        + (log 3 - 1)(l2 - l1)`` by quadrature over ``baseline``.
    ``closed_form``
        The same combination with the parameter-free closed forms; does not
        depend on the baseline.

    ``l2 = 1`` is outside the definition's range and is rejected.
    """
    p = _params(params)
    if p.l2 >= 1.0:
        raise DegenerateParametersError("CT Shannon entropy is defined for lambda2 < 1")
    l1, l2 = p.as_tuple()
    b = Uniform() if baseline is None else baseline
    c_star = (math.log(3.0) - 1.0) * (l2 - l1)
    if method == "closed_form":
        value = (1.0 - l2) * cf.kl_w_u() + (l2 - l1) / 3.0 * cf.kl_u23_w() - cf.kl_uct_u(l1, l2) + c_star
        return Estimate(value, 0.0, 0, True)
    f, f23, fmax, ct = (component(n, b, p) for n in ("f", "f23", "fmax", "ct"))
    if method == "definition":
        w = make_ct(b, p).mixture_weights()
        return js_entropy([f, f23, fmax], w, b, spec)
    if method == "kl":
        terms = [
            (1.0 - l2, _kl_est(fmax, f, b, spec)),
            ((l2 - l1) / 3.0, _kl_est(f23, fmax, b, spec)),
            (-1.0, _kl_est(ct, f, b, spec)),
        ]
        est = combine(terms)
        return Estimate(est.value + c_star, est.error_bound, est.evaluations, est.converged)
    raise ValueError(f"unknown method {method!r}")


def _kl_est(f1, f2, domain, spec) -> Estimate:
    r = kl(f1, f2, domain, spec)
    return Estimate(r.value, r.error_bound, 0, r.converged, r.divergent)


@dataclass(frozen=True)
class SpecialCaseIdentity:
    """Both sides of a reduced entropy identity with the terms used."""

    case: str
    lam: float
    lhs: float
    rhs: float
    terms: dict

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs - self.rhs)


def entropy_special_cases(lam: float, baseline: Baseline | None = None,
                          case: Literal["quadratic", "one_param"] = "quadratic",
                          spec: QuadratureSpec = DEFAULT_SPEC) -> SpecialCaseIdentity:
    """Entropy identities of the one-parameter reductions.

    ``quadratic`` (``l1 = 1 + lam``, ``l2 = 1``)::

        H(f_T) = (1 + lam) H(f) - lam H(f_{2:2}) + lam H(f_V) + H(g_T)

    where ``f_{2:2} = 2 f F`` is the larger of two draws and ``V ~ Beta(2, 1)``;
    ``terms["weighted_form"]`` also reports ``(1 + lam) H(f) + H(g_T) - 2 lam H^F(f)``.

    ``one_param`` (``l1 = 1 + lam``, ``l2 = 1 - lam``)::

        H(f*) = (1 + lam) H(f) + lam H(f_max) - 4 lam H^F(f) - lam H(f_W) + H(g*)
    """
    b = Uniform() if baseline is None else baseline
    h_f = float(shannon_entropy(b, b, spec))
    h_weighted = float(weighted_entropy(b, b.cdf, b, spec))
    if case == "quadratic":
        dist = make_quadratic(b, lam)
        lhs = float(shannon_entropy(dist, b, spec))
        h_22 = float(shannon_entropy(PolyTransform(b, [0.0, 0.0, 1.0]), b, spec))
        h_v = float(shannon_entropy(lambda u: 2.0 * u, None, spec))
        h_g = float(shannon_entropy(make_quadratic(Uniform(), lam), None, spec))
        rhs = (1.0 + lam) * h_f - lam * h_22 + lam * h_v + h_g
        terms = {"H_f": h_f, "H_f22": h_22, "H_V": h_v, "H_gT": h_g, "H_F_weighted": h_weighted,
                 "weighted_form": (1.0 + lam) * h_f + h_g - 2.0 * lam * h_weighted}
    elif case == "one_param":
        dist = make_one_param_cubic(b, lam)
        lhs = float(shannon_entropy(dist, b, spec))
        h_max = float(shannon_entropy(component("fmax", b), b, spec))
        h_w = float(shannon_entropy(lambda u: 3.0 * u * u, None, spec))
        h_g = float(shannon_entropy(make_one_param_cubic(Uniform(), lam), None, spec))
        rhs = (1.0 + lam) * h_f + lam * h_max - 4.0 * lam * h_weighted - lam * h_w + h_g
        terms = {"H_f": h_f, "H_fmax": h_max, "H_F_weighted": h_weighted, "H_W": h_w, "H_gstar": h_g}
    else:
        raise ValueError(f"unknown case {case!r}")
    return SpecialCaseIdentity(case, float(lam), lhs, rhs, terms)


def _log_daq_coefficients(baseline: Baseline) -> tuple[float, float]:
    # log f(F^-1(u)) = a + c log(1 - u)
    if isinstance(baseline, Uniform):
        return 0.0, 0.0
    if isinstance(baseline, Exponential):
        return math.log(baseline.beta), 1.0
    if isinstance(baseline, Pareto):
        return math.log(baseline.alpha), (baseline.alpha + 1.0) / baseline.alpha
    raise NotImplementedError(f"no closed-form entropy terms for {baseline.name}")


def baseline_entropy_terms(baseline: Baseline) -> dict[str, float]:
    """``H(f)``, ``H(f_max)`` and ``H^F(f)`` in closed form.

    Available for the uniform, exponential and Pareto baselines, where
    ``log f(F^-1(u)) = a + c log(1 - u)``; the expectations then follow from
    ``E log(1 - U) = -1``, ``int u log(1 - u) du = -3/4`` and the Beta(3, 1)
    moments ``E log U = -1/3``, ``E log(1 - U) = -11/6``.

    >>> t = baseline_entropy_terms(Exponential(2.0))
    >>> abs(t["H_fmax"] - (2.5 - math.log(6.0))) < 1e-14
    True
    """
    a, c = _log_daq_coefficients(baseline)
    return {
        "H_f": c - a,
        "H_fmax": -math.log(3.0) - a + 11.0 * c / 6.0 + 2.0 / 3.0,
        "H_F_weighted": -a / 2.0 + 3.0 * c / 4.0,
    }


def ct_entropy_closed_form(baseline: Baseline, params) -> float:
    """Closed-form ``H(f_CT)`` for the baselines of :func:`baseline_entropy_terms`."""
    p = _params(params)
    l1, l2 = p.as_tuple()
    t = baseline_entropy_terms(baseline)
    return (l1 * t["H_f"] + (1.0 - l2) * t["H_fmax"] + 2.0 * (l2 - l1) * t["H_F_weighted"]
            + theta_closed_form(p))
