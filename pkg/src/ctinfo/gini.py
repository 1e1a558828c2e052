"""Gini's mean difference, energy distance and CT Gini's mean difference.

For a CT law with CDF ``H(F)``

    GMD(F_CT) = l1**2 GMD(F) + (1 - l2)**2 GMD(F_max) + R*,
    R* = 2 int (A u + B u**2 + C u**3 + D u**4 + E u**5) / f(F^-1(u)) du,

with the constants of :class:`GmdDecomposition`. All GMDs are evaluated as
``2 int u (1 - u) / f(F^-1(u)) du`` (the substitution ``u = F(x)``).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from . import printed
from .baselines import Baseline, Pareto, Uniform
from .ct_model import CTDistribution, CTParams, PolyTransform
from .divergences import component
from .quadrature import DEFAULT_SPEC, Estimate, QuadratureSpec, combine, integrate_domain

__all__ = [
    "InfiniteMeanError",
    "gmd",
    "gmd_constants",
    "GmdDecomposition",
    "gmd_ct_decomposed",
    "r_star",
    "r_star_poly",
    "r_star_quadratic",
    "gmd_power_example",
    "r_star_power",
    "energy_distance",
    "CtgWeights",
    "ctg_weights",
    "ctg",
    "ctg_via_energy",
    "ctg_energy_mixture",
]


class InfiniteMeanError(ValueError):
    """The baseline has no finite mean, so its GMD is infinite."""


def _cdf(obj) -> Callable:
    return obj.cdf if hasattr(obj, "cdf") else obj


def _check_finite_mean(domain) -> None:
    if isinstance(domain, Pareto) and domain.alpha <= 1.0:
        raise InfiniteMeanError(f"Pareto baseline with alpha={domain.alpha} has an infinite mean")


def gmd(cdf, domain=None, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """``2 int F (1 - F) dx``.

    >>> round(float(gmd(lambda u: u)), 12)
    0.333333333333
    """
    domain = Uniform() if domain is None else domain
    _check_finite_mean(domain)
    F = _cdf(cdf)

    def integrand(x):
        p = np.asarray(F(x), dtype=float)
        return 2.0 * p * (1.0 - p)

    return integrate_domain(integrand, domain, spec)


def _params(params) -> CTParams:
    return params if isinstance(params, CTParams) else CTParams(*params)


def gmd_constants(l1: float, l2: float) -> tuple[float, float, float, float, float]:
    """``(A, B, C, D, E)``, the coefficients of ``u .. u**5`` in ``R*``."""
    A = l1 * (1.0 - l1)
    B = l2 - l1
    C = l2 * (1.0 - l2) - 2.0 * l1 * (l2 - l1)
    D = -((l2 - l1) ** 2 + 2.0 * l1 * (1.0 - l2))
    E = -2.0 * (1.0 - l2) * (l2 - l1)
    return A, B, C, D, E


def r_star_poly(coefs: Sequence[float], baseline: Baseline, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """``2 int P(u) / f(F^-1(u)) du`` with ``P = sum coefs[k] u**k``."""
    _check_finite_mean(baseline)
    P = np.polynomial.Polynomial(np.asarray(coefs, dtype=float))
    return integrate_domain(lambda x: 2.0 * P(baseline.cdf(x)), baseline, spec)


def r_star(params, baseline: Baseline | None = None, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """The correction term ``R*`` of the GMD decomposition."""
    p = _params(params)
    return r_star_poly((0.0,) + gmd_constants(*p.as_tuple()), Uniform() if baseline is None else baseline, spec)


@dataclass(frozen=True)
class GmdDecomposition:
    """``GMD(F_CT)`` directly (``total``) and as ``term_f + term_fmax + r_star``."""

    total: float
    term_f: float
    term_fmax: float
    r_star: float
    A: float
    B: float
    C: float
    D: float
    E: float
    error_bound: float
    converged: bool

    @property
    def decomposed(self) -> float:
        return self.term_f + self.term_fmax + self.r_star

    @property
    def discrepancy(self) -> float:
        return abs(self.total - self.decomposed)

    @property
    def bound(self) -> str:
        """``"lower"`` if the two leading terms bound the GMD from below, else ``"upper"``."""
        return "lower" if self.r_star >= 0.0 else "upper"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["decomposed"] = self.decomposed
        d["bound"] = self.bound
        return d


def gmd_ct_decomposed(ct: CTDistribution, spec: QuadratureSpec = DEFAULT_SPEC) -> GmdDecomposition:
    """Direct GMD of a CT law and its three-term decomposition."""
    b = ct.baseline
    l1, l2 = ct.l1, ct.l2
    direct = gmd(ct, b, spec)
    g_f = gmd(b, b, spec)
    g_max = gmd(component("fmax", b), b, spec)
    consts = gmd_constants(l1, l2)
    rs = r_star_poly((0.0,) + consts, b, spec)
    parts = combine([(l1 * l1, g_f), ((1.0 - l2) ** 2, g_max), (1.0, rs)])
    return GmdDecomposition(
        total=direct.value,
        term_f=l1 * l1 * g_f.value,
        term_fmax=(1.0 - l2) ** 2 * g_max.value,
        r_star=rs.value,
        A=consts[0], B=consts[1], C=consts[2], D=consts[3], E=consts[4],
        error_bound=direct.error_bound + parts.error_bound,
        converged=direct.converged and parts.converged,
    )


def r_star_quadratic(lam: float, baseline: Baseline | None = None,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """``R*`` of the quadratic case (``l1 = 1 + lam``, ``l2 = 1``) in reduced form.

    ``lam**2 GMD(F**2) - 2 lam (1 + lam) int u (1 - u)(1 + 2u) / f(F^-1(u)) du``,
    where ``GMD(F**2)`` is the GMD of the larger of two draws.
    """
    b = Uniform() if baseline is None else baseline
    g22 = gmd(PolyTransform(b, [0.0, 0.0, 1.0]), b, spec)
    # r_star_poly carries a factor 2, the second term needs 2 lam (1 + lam) int
    w = r_star_poly([0.0, 1.0, 1.0, -2.0], b, spec)
    return combine([(lam * lam, g22), (-lam * (1.0 + lam), w)])


def _power_moment(b: float, c: float, k: int) -> float:
    # int u**k / f(F^-1(u)) du for F(x) = (x / b)**c
    return b / (c * k + 1.0)


def r_star_power(b: float, c: float, params) -> float:
    """``R*`` for the power baseline ``F(x) = (x/b)**c`` in closed form."""
    p = _params(params)
    consts = gmd_constants(*p.as_tuple())
    return 2.0 * math.fsum(a * _power_moment(b, c, k) for k, a in enumerate(consts, start=1))


def gmd_power_example(b: float, c: float, params) -> float:
    """GMD of the CT law over the power baseline ``F(x) = (x/b)**c``, closed form.

    >>> round(gmd_power_example(2.0, 3.0, (1.0, 1.0)), 12) == round(3 / 7, 12)
    True
    """
    p = _params(params)
    l1, l2 = p.as_tuple()
    g_f = 2.0 * b * c / ((c + 1.0) * (2.0 * c + 1.0))
    g_max = 2.0 * b * (1.0 / (3.0 * c + 1.0) - 1.0 / (6.0 * c + 1.0))
    return l1 * l1 * g_f + (1.0 - l2) ** 2 * g_max + r_star_power(b, c, p)


def energy_distance(F1, F2, domain=None, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """``int (F1 - F2)**2 dx``."""
    a, b = _cdf(F1), _cdf(F2)
    domain = Uniform() if domain is None else domain

    def integrand(x):
        d = np.asarray(a(x), dtype=float) - np.asarray(b(x), dtype=float)
        return d * d

    return integrate_domain(integrand, domain, spec)


@dataclass(frozen=True)
class CtgWeights:
    """Weights of the energy-distance form of the CT GMD as published."""

    eta1: float
    eta2: float

    @property
    def eta3(self) -> float:
        return 1.0 - self.eta1 - self.eta2


def ctg_weights(params) -> CtgWeights:
    """Published ``(eta1, eta2)``; undefined for ``l1 = 1/2`` or ``l2 = 3/2``."""
    l1, l2 = _params(params).as_tuple()
    if l1 == 0.5 or l2 == 1.5:
        raise ZeroDivisionError("energy-distance weights are undefined for lambda1 = 1/2 or lambda2 = 3/2")
    return CtgWeights(*printed.ctg_weights(l1, l2))


def _components(ct: CTDistribution):
    b = ct.baseline
    return [component(n, b) for n in ("f", "f23", "fmax")]


def ctg(ct: CTDistribution, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """CT GMD: ``GMD(F_CT)`` minus the mixture of the component GMDs."""
    b = ct.baseline
    w = ct.mixture_weights()
    terms = [(1.0, gmd(ct, b, spec))]
    terms += [(-wi, gmd(c, b, spec)) for wi, c in zip(w, _components(ct))]
    return combine(terms)


def ctg_via_energy(ct: CTDistribution, spec: QuadratureSpec = DEFAULT_SPEC,
                   weights: CtgWeights | None = None) -> Estimate:
    """``eta1 CD(F, F_CT) + eta2 CD(F_max, F_CT) + (1 - eta1 - eta2) CD(F_23, F_CT)``.

    Uses the published weights unless ``weights`` is given. Whether this
    reproduces :func:`ctg` is checked, not assumed; :func:`ctg_energy_mixture`
    is the exact representation.
    """
    w = ctg_weights(ct.params) if weights is None else weights
    b = ct.baseline
    f, f23, fmax = _components(ct)
    return combine([(w.eta1, energy_distance(f, ct, b, spec)),
                    (w.eta2, energy_distance(fmax, ct, b, spec)),
                    (w.eta3, energy_distance(f23, ct, b, spec))])


def ctg_energy_mixture(ct: CTDistribution, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """Exact energy-distance form ``2 sum_i w_i CD(F_i, F_CT)``.

    For any mixture ``F_CT = sum w_i F_i`` one has
    ``F_CT (1 - F_CT) - sum w_i F_i (1 - F_i) = sum w_i (F_i - F_CT)**2``,
    so the weights are twice the mixture weights and sum to 2.
    """
    b = ct.baseline
    w = ct.mixture_weights()
    return combine([(2.0 * wi, energy_distance(c, ct, b, spec)) for wi, c in zip(w, _components(ct))])
