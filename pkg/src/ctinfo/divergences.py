"""KL, Jeffreys, chi-square and symmetric chi-square divergences.

Generic evaluators take two densities (callables, or objects with a
``pdf`` method) and a domain: a :class:`~ctinfo.baselines.Baseline`, whose
support is integrated through ``u = F(x)``, or a finite interval. The CT
closed forms are exposed through :func:`kl_closed_forms` and
:func:`chi_square_closed_forms`, which fall back to quadrature where a form
is undefined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from . import closed_forms as cf
from .baselines import Baseline, Uniform
from .ct_model import CTParams, OrderStatComponent, PolyTransform, make_ct
from .quadrature import DEFAULT_SPEC, Estimate, QuadratureSpec, integrate_domain
from .roots import DegenerateParametersError

__all__ = [
    "DivergenceResult",
    "kl",
    "jeffreys",
    "chi_square",
    "symmetric_chi_square",
    "kl_closed_forms",
    "chi_square_closed_forms",
    "kl_reduction_check",
    "chi_square_reduction_check",
    "kl_mixture_ct",
    "mixture_dist",
    "component",
    "KL_FORMS",
    "CHI2_FORMS",
    "KL_PAIRS",
    "CHI2_PAIRS",
]

Method = Literal["closed_form", "quadrature", "monte_carlo"]


@dataclass(frozen=True)
class DivergenceResult:
    """A divergence value with provenance.

    Roundoff negatives no larger than the error bound (or ``1e-12``) are
    reported as zero. ``divergent`` marks a ``+inf`` value.
    """

    value: float
    method: Method
    error_bound: float = 0.0
    converged: bool = True
    divergent: bool = False

    def __post_init__(self):
        if -max(1e-12, self.error_bound) <= self.value < 0.0:
            object.__setattr__(self, "value", 0.0)

    def __float__(self):
        return float(self.value)

    @classmethod
    def from_estimate(cls, est: Estimate, method: Method = "quadrature") -> "DivergenceResult":
        value = est.value
        divergent = est.divergent or value == math.inf
        if divergent:
            value = math.inf
        return cls(value, method, est.error_bound, est.converged, divergent)

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method, "error_bound": self.error_bound,
                "converged": self.converged, "divergent": self.divergent}


def _pdf(obj) -> Callable:
    return obj.pdf if hasattr(obj, "pdf") else obj


def _integrate(integrand, domain, spec) -> DivergenceResult:
    def safe(x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return integrand(x)

    return DivergenceResult.from_estimate(integrate_domain(safe, domain, spec))


def kl(f1, f2, domain=None, spec: QuadratureSpec = DEFAULT_SPEC) -> DivergenceResult:
    """``int f1 log(f1 / f2)``; ``+inf`` when ``f2`` vanishes where ``f1`` does not."""
    p1, p2 = _pdf(f1), _pdf(f2)
    domain = Uniform() if domain is None else domain

    def integrand(x):
        a = np.asarray(p1(x), dtype=float)
        b = np.asarray(p2(x), dtype=float)
        return np.where(a > 0.0, a * (np.log(a) - np.log(b)), 0.0)

    return _integrate(integrand, domain, spec)


def jeffreys(f1, f2, domain=None, spec: QuadratureSpec = DEFAULT_SPEC) -> DivergenceResult:
    """``KL(f1, f2) + KL(f2, f1)``."""
    a = kl(f1, f2, domain, spec)
    b = kl(f2, f1, domain, spec)
    return DivergenceResult(a.value + b.value, "quadrature", a.error_bound + b.error_bound,
                            a.converged and b.converged, a.divergent or b.divergent)


def chi_square(f1, f2, domain=None, spec: QuadratureSpec = DEFAULT_SPEC) -> DivergenceResult:
    """``int (f1 - f2)**2 / f2``."""
    p1, p2 = _pdf(f1), _pdf(f2)
    domain = Uniform() if domain is None else domain

    def integrand(x):
        a = np.asarray(p1(x), dtype=float)
        b = np.asarray(p2(x), dtype=float)
        d = a - b
        return np.where(d != 0.0, d * d / b, 0.0)

    return _integrate(integrand, domain, spec)


def symmetric_chi_square(f1, f2, domain=None, spec: QuadratureSpec = DEFAULT_SPEC) -> DivergenceResult:
    """``int (f1 - f2)**2 (f1 + f2) / (f1 f2)``.

    The integrand is symmetric in its arguments, so swapping them gives a
    bit-identical result. It equals ``chi2(f1, f2) + chi2(f2, f1)``.
    """
    p1, p2 = _pdf(f1), _pdf(f2)
    domain = Uniform() if domain is None else domain

    def integrand(x):
        a = np.asarray(p1(x), dtype=float)
        b = np.asarray(p2(x), dtype=float)
        d = a - b
        return np.where(d != 0.0, d * d * (a + b) / (a * b), 0.0)

    return _integrate(integrand, domain, spec)


# ------------------------------------------------------------ components
def component(name: str, baseline: Baseline, params: CTParams | None = None) -> PolyTransform:
    """Resolve ``f``, ``ct``, ``f23``, ``fmax`` or ``fmin`` over ``baseline``."""
    if name == "f":
        return PolyTransform(baseline, [0.0, 1.0])
    if name == "ct":
        if params is None:
            raise ValueError("component 'ct' needs parameters")
        return make_ct(baseline, params)
    which = {"f23": "median", "fmax": "max", "fmin": "min"}.get(name)
    if which is None:
        raise ValueError(f"unknown component {name!r}")
    return OrderStatComponent(which, baseline).dist


def mixture_dist(v: float, baseline: Baseline) -> PolyTransform:
    """``v f + 3 (1 - v) f F**2``: a two-point mixture of ``f`` and ``f_max``."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"mixture weight v must lie in [0, 1], got {v}")
    return PolyTransform(baseline, [0.0, v, 0.0, 1.0 - v])


# ----------------------------------------------------------- closed forms
# which -> (closed form, first argument, second argument)
KL_FORMS: dict[str, tuple[Callable[[float, float], float], str, str]] = {
    "a": (cf.kl_u_uct, "f", "ct"),
    "b": (cf.kl_uct_u, "ct", "f"),
    "c": (cf.kl_u23_uct, "f23", "ct"),
    "d": (cf.kl_uct_w, "ct", "fmax"),
    "e": (cf.kl_w_uct, "fmax", "ct"),
    "f": (cf.kl_u23_w, "f23", "fmax"),
    "g": (cf.kl_w_u, "fmax", "f"),
}

CHI2_FORMS: dict[str, tuple[Callable[[float, float], float], str, str]] = {
    "a": (cf.chi2_uct_u, "ct", "f"),
    "b": (cf.chi2_u_uct, "f", "ct"),
    "c": (cf.chi2_w_uct, "fmax", "ct"),
}


def _closed_or_quadrature(table, which, params, measure, spec) -> DivergenceResult:
    if which not in table:
        raise ValueError(f"unknown closed form {which!r}; choose from {sorted(table)}")
    if not isinstance(params, CTParams):
        params = CTParams(*params)
    fn, n1, n2 = table[which]
    try:
        value = fn(params.l1, params.l2)
    except (DegenerateParametersError, cf.ComplexResidueError, ZeroDivisionError):
        base = Uniform()
        return measure(component(n1, base, params), component(n2, base, params), base, spec)
    return DivergenceResult(value, "closed_form", 0.0, True, value == math.inf)


def kl_closed_forms(which: str, params, spec: QuadratureSpec = DEFAULT_SPEC) -> DivergenceResult:
    """CT-uniform KL divergences in closed form.

    ``a`` KL(f_U, g), ``b`` KL(g, f_U), ``c`` KL(f_23, g), ``d`` KL(g, f_W),
    ``e`` KL(f_W, g), ``f`` KL(f_23, f_W) = log 2, ``g`` KL(f_W, f_U) =
    log 3 - 2/3. When the closed form is undefined (``l2 = 1``) the value
    comes from quadrature and ``method`` says so.

    >>> round(kl_closed_forms("f", (0.4, 0.6)).value, 12)
    0.69314718056
    """
    return _closed_or_quadrature(KL_FORMS, which, params, kl, spec)


def chi_square_closed_forms(which: str, params, spec: QuadratureSpec = DEFAULT_SPEC) -> DivergenceResult:
    """CT-uniform chi-square divergences: ``a`` chi2(g, f_U), ``b`` chi2(f_U, g), ``c`` chi2(f_W, g)."""
    return _closed_or_quadrature(CHI2_FORMS, which, params, chi_square, spec)


# -------------------------------------------------------- reductions
KL_PAIRS = (("f", "ct"), ("ct", "f"), ("f23", "ct"), ("f23", "fmax"),
            ("ct", "fmax"), ("fmax", "ct"), ("fmax", "f"))
CHI2_PAIRS = (("ct", "f"), ("f", "ct"), ("fmax", "ct"))


def _reduction(measure, pair, baseline, params, spec):
    n1, n2 = pair
    if not isinstance(params, CTParams):
        params = CTParams(*params)
    x_val = measure(component(n1, baseline, params), component(n2, baseline, params), baseline, spec)
    u = Uniform()
    u_val = measure(component(n1, u, params), component(n2, u, params), u, spec)
    return x_val, u_val


def kl_reduction_check(pair: tuple[str, str], baseline: Baseline, params,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[DivergenceResult, DivergenceResult]:
    """KL between CT-related densities over ``baseline`` and over the uniform.

    Returns ``(x-space value, u-space value)``; the pair must be one of
    :data:`KL_PAIRS`. Both numbers agree for every baseline.
    """
    if tuple(pair) not in KL_PAIRS:
        raise ValueError(f"pair must be one of {KL_PAIRS}")
    return _reduction(kl, pair, baseline, params, spec)


def chi_square_reduction_check(pair: tuple[str, str], baseline: Baseline, params,
                               spec: QuadratureSpec = DEFAULT_SPEC):
    """Chi-square analogue of :func:`kl_reduction_check` over :data:`CHI2_PAIRS`."""
    if tuple(pair) not in CHI2_PAIRS:
        raise ValueError(f"pair must be one of {CHI2_PAIRS}")
    return _reduction(chi_square, pair, baseline, params, spec)


def kl_mixture_ct(v: float, params, direction: Literal["mix_ct", "ct_mix"] = "mix_ct",
                  spec: QuadratureSpec = DEFAULT_SPEC, method: Literal["closed_form", "quadrature"] = "closed_form",
                  baseline: Baseline | None = None) -> DivergenceResult:
    """KL between ``v f + 3(1 - v) f F**2`` and a CT law, either direction.

    The value does not depend on the baseline; ``baseline`` only matters for
    ``method="quadrature"``.
    """
    if not isinstance(params, CTParams):
        params = CTParams(*params)
    if direction not in ("mix_ct", "ct_mix"):
        raise ValueError("direction must be 'mix_ct' or 'ct_mix'")
    if method == "closed_form":
        fn = cf.kl_mix_uct if direction == "mix_ct" else cf.kl_uct_mix
        try:
            return DivergenceResult(fn(v, params.l1, params.l2), "closed_form")
        except (DegenerateParametersError, cf.ComplexResidueError):
            pass
    base = Uniform() if baseline is None else baseline
    m, ct = mixture_dist(v, base), make_ct(base, params)
    return kl(m, ct, base, spec) if direction == "mix_ct" else kl(ct, m, base, spec)
