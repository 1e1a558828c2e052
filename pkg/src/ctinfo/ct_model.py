"""Cubic transmuted (CT) distributions and their order-statistic components.

A CT distribution over a baseline ``F`` has CDF ``H(F(x))`` with the cubic

    H(u) = l1 u + (l2 - l1) u**2 + (1 - l2) u**3,

so its density is ``f(x) g(F(x))`` where ``g = H'`` is the CT-uniform
density. With ``pi = (l1/3, l2/3, 1 - (l1 + l2)/3)`` the same law is the
mixture ``pi1 F_{1:3} + pi2 F_{2:3} + pi3 F_{3:3}`` of the order statistics
of three i.i.d. baseline draws. The order statistics themselves are
polynomials in ``F`` too, which is why everything here is built on
:class:`PolyTransform`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .baselines import Baseline, Uniform
from ._kernels import backend

__all__ = [
    "CTParams",
    "MixingProbs",
    "PolyTransform",
    "CTDistribution",
    "OrderStatComponent",
    "InvalidParametersError",
    "EmptySampleError",
    "ct_uniform_pdf",
    "make_ct",
    "make_quadratic",
    "make_one_param_cubic",
    "component_pdf",
    "sample_ct",
    "STRICT_BOX",
    "LENIENT_BOX",
]

# (l1 range, l2 range)
STRICT_BOX = ((0.0, 1.0), (-1.0, 1.0))
# wide enough for l1 = 1 + lam (quadratic, lam > 0) and l2 = 1 - lam
# (one-parameter cubic, lam < 0)
LENIENT_BOX = ((0.0, 2.0), (-1.0, 2.0))

_VALIDITY_TOL = 1e-12


class InvalidParametersError(ValueError):
    """CT parameters outside the admissible region.

    Attributes
    ----------
    u : float or None
        Point of the unit interval where the CT-uniform density is negative,
        when that is the reason for the rejection.
    """

    def __init__(self, message: str, u: float | None = None):
        super().__init__(message)
        self.u = u


class EmptySampleError(ValueError):
    """A sample of size zero was requested."""


def ct_uniform_pdf(u, l1: float, l2: float):
    """``g(u) = l1 + 2 (l2 - l1) u + 3 (1 - l2) u**2``."""
    u = np.asarray(u, dtype=float)
    return l1 + u * (2.0 * (l2 - l1) + 3.0 * (1.0 - l2) * u)


def _min_of_g(l1: float, l2: float) -> tuple[float, float]:
    """Minimum of ``g`` on ``[0, 1]`` and where it is attained."""
    cands = [0.0, 1.0]
    if l2 != 1.0:
        ustar = (l1 - l2) / (3.0 * (1.0 - l2))
        if 0.0 < ustar < 1.0:
            cands.append(ustar)
    vals = [float(ct_uniform_pdf(u, l1, l2)) for u in cands]
    i = int(np.argmin(vals))
    return vals[i], cands[i]


def g_zero(l1: float, l2: float, tol: float = 1e-14) -> tuple[float, int] | None:
    """Where ``g`` vanishes on ``[0, 1]`` and the order of the zero, or ``None``."""
    gmin, ustar = _min_of_g(l1, l2)
    if gmin > tol:
        return None
    slope = 2.0 * (l2 - l1) + 6.0 * (1.0 - l2) * ustar
    return ustar, (1 if abs(slope) > 1e-12 else 2)


def integral_diverges(l1: float, l2: float, numerator) -> bool:
    """Whether ``int P(u) / g(u) du`` diverges for a polynomial numerator ``P``.

    ``numerator`` is a coefficient sequence (``coefs[k]`` multiplies
    ``u**k``). The integral diverges when ``g`` has a zero of order ``m`` at
    which ``P`` vanishes to an order below ``m``.
    """
    z = g_zero(l1, l2)
    if z is None:
        return False
    ustar, m = z
    P = np.polynomial.Polynomial(np.asarray(numerator, dtype=float))
    order = 0
    while order < m and abs(P(ustar)) <= 1e-12 and P.degree() > 0:
        P = P.deriv()
        order += 1
    if order < m and P.degree() == 0 and abs(P.coef[0]) <= 1e-12:
        return False
    return order < m


@dataclass(frozen=True)
class CTParams:
    """The pair ``(lambda1, lambda2)``.

    By default only the density must be nonnegative and the pair must lie in
    ``[0, 2] x [-1, 2]``; this admits the quadratic (``l1 = 1 + lam``,
    ``l2 = 1``) and one-parameter (``l1 = 1 + lam``, ``l2 = 1 - lam``)
    reductions. ``strict=True`` enforces ``[0, 1] x [-1, 1]``.
    """

    lambda1: float
    lambda2: float
    strict: bool = field(default=False, compare=False)

    def __post_init__(self):
        l1, l2 = float(self.lambda1), float(self.lambda2)
        if not (math.isfinite(l1) and math.isfinite(l2)):
            raise InvalidParametersError("CT parameters must be finite")
        (a1, b1), (a2, b2) = STRICT_BOX if self.strict else LENIENT_BOX
        if not (a1 <= l1 <= b1 and a2 <= l2 <= b2):
            raise InvalidParametersError(
                f"(lambda1, lambda2) = ({l1}, {l2}) outside [{a1}, {b1}] x [{a2}, {b2}]")
        gmin, umin = _min_of_g(l1, l2)
        if gmin < -_VALIDITY_TOL:
            raise InvalidParametersError(
                f"CT density negative at u = {umin:.17g} (g = {gmin:.3g}) "
                f"for (lambda1, lambda2) = ({l1}, {l2})", u=umin)

    @property
    def l1(self) -> float:
        return float(self.lambda1)

    @property
    def l2(self) -> float:
        return float(self.lambda2)

    def as_tuple(self) -> tuple[float, float]:
        return (self.l1, self.l2)

    @staticmethod
    def is_valid(l1: float, l2: float, strict: bool = False) -> bool:
        try:
            CTParams(l1, l2, strict=strict)
        except InvalidParametersError:
            return False
        return True


@dataclass(frozen=True)
class MixingProbs:
    """Weights of the min, median and max of an i.i.d. triple."""

    pi1: float
    pi2: float
    pi3: float

    def __post_init__(self):
        p = (self.pi1, self.pi2, self.pi3)
        if any(not (0.0 <= x <= 1.0) for x in p):
            raise InvalidParametersError(f"mixing probabilities must lie in [0, 1], got {p}")
        if abs(math.fsum(p) - 1.0) > 1e-12:
            raise InvalidParametersError(f"mixing probabilities must sum to 1, got {math.fsum(p)!r}")

    @classmethod
    def from_params(cls, params: CTParams) -> "MixingProbs":
        """Mixture weights of a CT law; fails when ``l2 < 0``."""
        l1, l2 = params.as_tuple()
        return cls(l1 / 3.0, l2 / 3.0, 1.0 - (l1 + l2) / 3.0)

    def to_params(self) -> CTParams:
        return CTParams(3.0 * self.pi1, 3.0 * self.pi2)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.pi1, self.pi2, self.pi3)


class PolyTransform:
    """Distribution with CDF ``H(F(x))`` for a polynomial ``H`` on ``[0, 1]``.

    ``H(0) = 0``, ``H(1) = 1`` and ``H' >= 0`` on the unit interval are the
    caller's responsibility. ``u_pdf``/``u_cdf`` are the densities of the
    same transform applied to the uniform baseline.
    """

    def __init__(self, baseline: Baseline, coefs: Sequence[float]):
        self.baseline = baseline
        self.H = np.polynomial.Polynomial(np.asarray(coefs, dtype=float))
        self.h = self.H.deriv()

    # unit-interval (uniform-baseline) view
    def u_cdf(self, u):
        return self.H(np.asarray(u, dtype=float))

    def u_pdf(self, u):
        return self.h(np.asarray(u, dtype=float))

    # x-space view
    def cdf(self, x):
        return self.H(self.baseline.cdf(x))

    def pdf(self, x):
        return self.baseline.pdf(x) * self.h(self.baseline.cdf(x))

    def logpdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(x))

    def density_at_quantile(self, u):
        """``f(F^{-1}(u)) h(u)``: this law's density at the baseline's u-quantile."""
        return self.baseline.density_at_quantile(u) * self.u_pdf(u)

    def u_quantile(self, v, iterations: int = 64):
        """Invert ``H`` on ``[0, 1]`` by vectorized bisection."""
        v = np.asarray(v, dtype=float)
        lo = np.zeros_like(v)
        hi = np.ones_like(v)
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            below = self.H(mid) < v
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def quantile(self, v):
        return self.baseline.quantile(self.u_quantile(v))

    def sample(self, n: int, seed=None):
        """Inverse-CDF sampling; valid for every admissible ``H``."""
        if n < 1:
            raise EmptySampleError("sample size must be at least 1")
        rng = np.random.default_rng(seed)
        return self.quantile(rng.random(n))


Kind = Literal["cubic", "quadratic", "one_param_cubic"]


class CTDistribution(PolyTransform):
    """A CT law: baseline, parameters and the construction that produced it.

    ``lam`` is the single parameter of the quadratic and one-parameter
    constructions (``None`` for the general cubic).
    """

    def __init__(self, baseline: Baseline, params: CTParams,
                 kind: Kind = "cubic", lam: float | None = None):
        l1, l2 = params.as_tuple()
        super().__init__(baseline, [0.0, l1, l2 - l1, 1.0 - l2])
        self.params = params
        self.kind = kind
        self.lam = lam

    @property
    def l1(self) -> float:
        return self.params.l1

    @property
    def l2(self) -> float:
        return self.params.l2

    def mixture_weights(self) -> tuple[float, float, float]:
        """Weights of ``f``, ``f_{2:3}`` and ``f_{3:3}`` in the density."""
        l1, l2 = self.params.as_tuple()
        return (l1, (l2 - l1) / 3.0, (3.0 - l2 - 2.0 * l1) / 3.0)

    def mixing_probs(self) -> MixingProbs | None:
        try:
            return MixingProbs.from_params(self.params)
        except InvalidParametersError:
            return None

    def sample(self, n: int, seed=None):
        """Order-statistic selection when the law is a mixture, else inverse CDF."""
        mix = self.mixing_probs()
        if mix is None:
            return super().sample(n, seed)
        return sample_ct(mix, self.baseline, n, seed)

    def spec_string(self) -> str:
        base = self.baseline.spec_string()
        if self.kind == "quadratic":
            return f"qt:l={self.lam:.17g}@{base}"
        if self.kind == "one_param_cubic":
            return f"ct1:l={self.lam:.17g}@{base}"
        return f"ct:l1={self.l1:.17g},l2={self.l2:.17g}@{base}"

    def __repr__(self):
        return f"CTDistribution({self.spec_string()!r})"


Which = Literal["min", "median", "max", "beta21", "beta31"]

_COMPONENT_COEFS: dict[str, tuple[float, ...]] = {
    "min": (0.0, 3.0, -3.0, 1.0),
    "median": (0.0, 0.0, 3.0, -2.0),
    "max": (0.0, 0.0, 0.0, 1.0),
    # largest of two draws; Beta(2, 1) on the uniform scale
    "beta21": (0.0, 0.0, 1.0),
    # largest of three draws; Beta(3, 1) on the uniform scale
    "beta31": (0.0, 0.0, 0.0, 1.0),
}


@dataclass(frozen=True)
class OrderStatComponent:
    """An order statistic of i.i.d. baseline draws.

    ``min``, ``median`` and ``max`` refer to a triple; ``beta21`` is the
    larger of a pair. ``beta31`` coincides with ``max`` and names its
    uniform-scale law.
    """

    which: Which
    baseline: Baseline = field(default_factory=Uniform)

    def __post_init__(self):
        if self.which not in _COMPONENT_COEFS:
            raise ValueError(f"unknown component {self.which!r}")

    @property
    def dist(self) -> PolyTransform:
        return PolyTransform(self.baseline, _COMPONENT_COEFS[self.which])

    def pdf(self, x):
        return self.dist.pdf(x)

    def cdf(self, x):
        return self.dist.cdf(x)

    def u_pdf(self, u):
        return self.dist.u_pdf(u)


def make_ct(baseline: Baseline, params: CTParams | tuple[float, float]) -> CTDistribution:
    """Cubic transmutation of ``baseline``.

    >>> ct = make_ct(Uniform(), CTParams(0.5, 0.5))
    >>> round(float(ct.pdf(1e-12)), 9), round(float(ct.pdf(1 - 1e-12)), 9)
    (0.5, 2.0)
    """
    if not isinstance(params, CTParams):
        params = CTParams(*params)
    return CTDistribution(baseline, params)


def _check_lam(lam: float) -> float:
    lam = float(lam)
    if not -1.0 <= lam <= 1.0:
        raise InvalidParametersError(f"lambda must lie in [-1, 1], got {lam}")
    return lam


def make_quadratic(baseline: Baseline, lam: float) -> CTDistribution:
    """Quadratic transmutation ``(1 + lam) F - lam F**2``.

    Identical to the cubic with ``l1 = 1 + lam`` and ``l2 = 1``.
    """
    lam = _check_lam(lam)
    return CTDistribution(baseline, CTParams(1.0 + lam, 1.0), "quadratic", lam)


def make_one_param_cubic(baseline: Baseline, lam: float) -> CTDistribution:
    """One-parameter cubic ``(1 + lam) F - 2 lam F**2 + lam F**3``.

    Identical to the cubic with ``l1 = 1 + lam`` and ``l2 = 1 - lam``.
    """
    lam = _check_lam(lam)
    return CTDistribution(baseline, CTParams(1.0 + lam, 1.0 - lam), "one_param_cubic", lam)


def component_pdf(c: OrderStatComponent, x):
    """Density of an order-statistic component at ``x``."""
    return c.pdf(x)


def sample_ct(mix: MixingProbs, baseline: Baseline, n: int, seed=None):
    """Draw ``n`` CT variates by order-statistic selection.

    Each draw uses four uniforms from a single stream: a selector ``V`` and
    an i.i.d. triple. The triple is sorted and its minimum, median or maximum
    is kept according to ``V < pi1``, ``V < pi1 + pi2`` or otherwise. Uniform
    order statistics are mapped through the baseline quantile, which is
    monotone, so the result has the baseline's order-statistic laws.
    """
    if n < 1:
        raise EmptySampleError("sample size must be at least 1")
    rng = np.random.default_rng(seed)
    draws = rng.random((n, 4))
    u = backend().select_order_stats(draws, mix.pi1, mix.pi1 + mix.pi2)
    return baseline.quantile(u)
