"""Adaptive quadrature and Monte-Carlo expectation.

This module is the numerical oracle of the package: every closed-form
expression is checked against :func:`integrate_unit` (adaptive Gauss-Kronrod
on the unit interval) and, independently, :func:`mc_expect`.

Integrands must be vectorized: they receive a 1-D float array and return an
array of the same shape.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "QuadratureSpec",
    "Estimate",
    "integrate_unit",
    "integrate_interval",
    "integrate_support",
    "integrate_domain",
    "combine",
    "mc_expect",
    "DEFAULT_SPEC",
]

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])           # 15 ascending nodes
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate_unit`.

    ``endpoint_eps`` clips integrand arguments away from 0 and 1 so that
    integrable endpoint singularities (``u log u``, ``log u``) never see an
    exact endpoint.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000
    endpoint_eps: float = 1e-12

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.max_subdivisions > 0):
            raise ValueError("tolerances and max_subdivisions must be positive")
        if not 0 < self.endpoint_eps < 1e-6:
            raise ValueError("endpoint_eps must lie in (0, 1e-6)")


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class Estimate:
    """A value with an error bound.

    ``divergent`` is set when the integrand looks non-integrable: an end of
    the unit interval carries a ``u**-a`` blow-up with ``a >= 1``, or the
    contribution of the smallest intervals does not shrink under bisection.
    ``value`` is then ``+inf`` or ``-inf``.
    """

    value: float
    error_bound: float
    evaluations: int
    converged: bool
    divergent: bool = False

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "error_bound", float(self.error_bound))
        object.__setattr__(self, "converged", bool(self.converged))

    def __float__(self):
        return float(self.value)


def _gk15(fn, a, b):
    """Kronrod estimate, |K15 - G7| and peak |f|*h over one batch of intervals."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(fn(x.ravel()), dtype=float).reshape(x.shape)
    k = half * (fx @ _KW)
    g = half * (fx @ _GW)
    peak = np.max(np.abs(fx), axis=1) * np.abs(half)
    return k, np.abs(k - g), peak


def integrate_interval(fn: Callable, a: float, b: float,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """Globally adaptive G7/K15 quadrature of ``fn`` over ``[a, b]``.

    The interval with the largest error estimate is bisected until the total
    error drops below ``max(abs_tol, rel_tol * |value|)``. Non-convergence is
    reported through ``Estimate.converged`` rather than raised.
    """
    if a == b:
        return Estimate(0.0, 0.0, 0, True)

    def safe(x):
        with np.errstate(all="ignore"):
            return fn(x)

    k, err, peak = _gk15(safe, np.array([a]), np.array([b]))
    evaluations = 15
    if not (np.isfinite(k[0]) and np.isfinite(err[0])):
        return Estimate(float(k[0]) if np.isnan(k[0]) else math.copysign(math.inf, k[0]),
                        math.inf, evaluations, False, divergent=not np.isnan(k[0]))
    # heap entries: (-err, a, b, value, err, peak)
    heap = [(-err[0], a, b, k[0], err[0], peak[0])]
    total = float(k[0])
    total_err = float(err[0])
    splits = 0
    min_width = 64 * np.finfo(float).eps
    while total_err > max(spec.abs_tol, spec.rel_tol * abs(total)) and splits < spec.max_subdivisions:
        _, lo, hi, val, e, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if hi - lo <= min_width * max(1.0, abs(mid)):
            # cannot bisect further; keep the interval but stop refining it
            heapq.heappush(heap, (math.inf, lo, hi, val, e, 0.0))
            if heap[0][0] == math.inf:
                break
            continue
        kk, ee, pp = _gk15(safe, np.array([lo, mid]), np.array([mid, hi]))
        evaluations += 30
        splits += 1
        if not (np.all(np.isfinite(kk)) and np.all(np.isfinite(ee))):
            bad = kk[~np.isfinite(kk)]
            divergent = bool(bad.size and np.all(np.isinf(bad)))
            value = math.copysign(math.inf, float(bad[0])) if divergent else math.nan
            return Estimate(value, math.inf, evaluations, False, divergent=divergent)
        total += float(kk.sum()) - val
        total_err += float(ee.sum()) - e
        for j in range(2):
            heapq.heappush(heap, (-ee[j], (lo, mid)[j], (mid, hi)[j], kk[j], ee[j], pp[j]))
    # re-sum to remove accumulated cancellation in the running totals
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap)
    tol = max(spec.abs_tol, spec.rel_tol * abs(total))
    converged = total_err <= tol
    divergent = False
    if not converged:
        # a non-integrable singularity keeps the integral over the smallest
        # intervals bounded away from zero instead of shrinking with h
        worst = max(heap, key=lambda item: item[4])
        divergent = bool(worst[2] - worst[1] < 1e-9 and abs(worst[3]) > 1e-2)
        if divergent:
            total = math.copysign(math.inf, total)
    return Estimate(total, total_err, evaluations, converged, divergent)


def _endpoint_divergence(fn: Callable, eps: float, spec: QuadratureSpec) -> float | None:
    """``+-inf`` when an endpoint of ``(0, 1)`` carries a ``u**-a`` blow-up with ``a >= 1``.

    The local exponent is read off ``|f(eps)| / |f(10 eps)|``, which is
    ``10**a`` for a power law and close to 1 for a logarithm. Opposite-signed
    blow-ups at the two ends give ``nan``; no blow-up gives ``None``.
    """
    with np.errstate(all="ignore"):
        near = np.asarray(fn(np.array([eps, 1.0 - eps])), dtype=float)
        far = np.asarray(fn(np.array([10.0 * eps, 1.0 - 10.0 * eps])), dtype=float)
    signs = []
    for f0, f1 in zip(near, far):
        if not (math.isfinite(f0) and math.isfinite(f1)) or f1 == 0.0:
            if math.isinf(f0):
                signs.append(math.copysign(1.0, f0))
            continue
        if abs(f0 / f1) >= 10.0 * (1.0 - 1e-3) and eps * abs(f0) > spec.abs_tol:
            signs.append(math.copysign(1.0, f0))
    if not signs:
        return None
    return math.copysign(math.inf, signs[0]) if len(set(signs)) == 1 else math.nan


# gap left at 1 when the integrand has a power-law blow-up there
_POWER_GAP = 1e-8


def _end_piece(fn: Callable, gap: float, at_one: bool) -> tuple[float, float, bool]:
    """Integral of ``fn`` over the ``gap``-wide piece next to 0 (or 1), an error charge, and a power-law flag.

    With ``d`` the distance to the end, ``f(d) = c d**-a`` near the end gives
    ``10**a = f(gap) / f(10 gap)``. A clean power-law blow-up (``0.2 < a < 1``,
    confirmed by ``f(10 gap) / f(100 gap)``) is integrated exactly as
    ``gap f(gap) / (1 - a)`` and charged the change produced by the second
    exponent estimate. Otherwise the piece is ``gap f(gap)``, charged
    ``2 gap |f(gap) - f(gap / e)|``: twice the residual of a logarithmic end
    and negligible for a bounded one. Next to 1 a charge for the rounding of
    the abscissae is added.
    """
    d = np.array([gap, 10.0 * gap, 100.0 * gap, gap / math.e])
    x = 1.0 - d if at_one else d
    d = 1.0 - x if at_one else d  # exact distances of the rounded points
    gap = float(d[0])
    with np.errstate(all="ignore"):
        f0, f1, f2, fe = np.asarray(fn(x), dtype=float)
    if not math.isfinite(f0):
        return 0.0, math.inf, False
    # abscissae next to 1 are rounded by up to ulp(1)/2, which perturbs the
    # adaptive sum by about that much times f(1 - gap)
    rounding = 2.0 * np.finfo(float).eps * abs(f0) if at_one else 0.0
    if all(math.isfinite(v) and v != 0.0 for v in (f1, f2)) and f0 / f1 > 0 and f1 / f2 > 0:
        a0 = math.log(f0 / f1) / math.log(d[1] / d[0])
        a1 = math.log(f1 / f2) / math.log(d[2] / d[1])
        if 0.2 < a0 < 0.999 and abs(a0 - a1) < 0.05:
            piece = gap * f0 / (1.0 - a0)
            alt = gap * f0 / (1.0 - a1) if a1 < 0.999 else math.inf
            return piece, abs(alt - piece) + 1e-6 * abs(piece) + rounding, True
    charge = 2.0 * gap * abs(f0 - fe) if math.isfinite(fe) else gap * abs(f0)
    return gap * f0, charge + rounding, False


def integrate_unit(fn: Callable, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """Integrate ``fn`` over ``(0, 1)``.

    The adaptive rule runs on ``[eps, 1 - eps]`` (``eps = spec.endpoint_eps``)
    and the neglected end pieces come from :func:`_end_piece`, whose error
    charges are added to the bound. A power-law blow-up at 1 moves the upper
    limit to ``1 - 1e-8``: abscissae closer to 1 are rounded too coarsely for
    the adaptive rule, while the power-law piece stays exact. Ends that blow
    up like ``u**-a`` with ``a >= 1`` make the integral divergent.
    """
    eps = spec.endpoint_eps
    div = _endpoint_divergence(fn, eps, spec)
    if div is not None:
        return Estimate(div, math.inf, 4, False, divergent=not math.isnan(div))
    v0, e0, _ = _end_piece(fn, eps, False)
    v1, e1, power = _end_piece(fn, eps, True)
    hi = 1.0 - eps
    if power:
        w1, c1, still = _end_piece(fn, _POWER_GAP, True)
        if still and c1 <= e1:
            v1, e1, hi = w1, c1, 1.0 - _POWER_GAP

    def clipped(u):
        return fn(np.clip(u, eps, hi))

    tail_value, tail = v0 + v1, e0 + e1
    if not math.isfinite(tail):
        tail_value, tail = 0.0, math.inf
    inner = QuadratureSpec(max(spec.abs_tol - tail, 0.1 * spec.abs_tol) if math.isfinite(tail) else spec.abs_tol,
                           spec.rel_tol, spec.max_subdivisions, spec.endpoint_eps)
    est = integrate_interval(clipped, eps, hi, inner)
    if est.divergent or not math.isfinite(est.value):
        return est
    value = est.value + tail_value
    error = est.error_bound + tail
    tol = max(spec.abs_tol, spec.rel_tol * abs(value))
    return Estimate(value, error, est.evaluations + 12, error <= tol)


def integrate_support(fn: Callable, baseline, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """Integrate ``fn(x) dx`` over the support of ``baseline``.

    Uses ``u = F(x)``: the integrand becomes ``fn(F^{-1}(u)) / f(F^{-1}(u))``.
    """

    def in_u(u):
        x = baseline.quantile(u)
        return fn(x) / baseline.density_at_quantile(u)

    return integrate_unit(in_u, spec)


def integrate_domain(fn: Callable, domain, spec: QuadratureSpec = DEFAULT_SPEC) -> Estimate:
    """Integrate ``fn(x) dx`` over a baseline's support or a finite ``(a, b)``.

    A :class:`~ctinfo.baselines.Baseline` triggers the ``u = F(x)``
    substitution of :func:`integrate_support`; a pair is mapped affinely onto
    the unit interval.
    """
    if isinstance(domain, tuple):
        a, b = (float(t) for t in domain)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("interval domains must be finite; pass a baseline instead")
        width = b - a
        return integrate_unit(lambda u: width * fn(a + width * u), spec)
    return integrate_support(fn, domain, spec)


def combine(terms) -> Estimate:
    """Linear combination ``sum w * est`` of ``(w, Estimate)`` pairs.

    Error bounds add in absolute value; the result converged only if every
    term did.
    """
    value = 0.0
    error = 0.0
    evaluations = 0
    converged = True
    divergent = False
    parts = []
    for w, est in terms:
        if w == 0:
            continue
        parts.append(w * est.value)
        error += abs(w) * est.error_bound
        evaluations += est.evaluations
        converged &= est.converged
        divergent |= est.divergent
    value = math.fsum(parts) if all(math.isfinite(x) for x in parts) else sum(parts)
    return Estimate(value, error, evaluations, converged, divergent)


def mc_expect(fn: Callable, sampler: Callable, n: int, seed=None,
              batch: int = 1_000_000) -> Estimate:
    """Monte-Carlo estimate of ``E[fn(X)]`` with ``X ~ sampler``.

    ``sampler(rng, size)`` must return ``size`` draws. The error bound is three
    standard errors.
    """
    if n < 2:
        raise ValueError("mc_expect needs n >= 2")
    rng = np.random.default_rng(seed)
    s = 0.0
    s2 = 0.0
    done = 0
    while done < n:
        m = min(batch, n - done)
        v = np.asarray(fn(sampler(rng, m)), dtype=float)
        s += float(v.sum())
        s2 += float((v * v).sum())
        done += m
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0) * n / (n - 1)
    se = math.sqrt(var / n)
    return Estimate(mean, 3.0 * se, n, True)
