"""Root-pair algebra shared by the CT-uniform closed forms.

The CT-uniform density is the quadratic ``g(u) = l1 + 2 (l2 - l1) u +
3 (1 - l2) u**2``. Its roots are ``p, q = (l1 - l2 +/- r) / (3 (1 - l2))``
with ``r**2 = l1**2 + l2**2 + l1 l2 - 3 l1``. Integrals of ``P(u) log g(u)``
and ``P(u) / g(u)`` over the unit interval reduce to combinations

    (1 / r) * [P(p) L(p) - P(q) L(q)],   L(x) = log(x / (x - 1)),

which are real for both signs of ``r**2`` (for ``r**2 < 0`` the roots form a
conjugate pair and the principal complex logarithm is used).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RootPair",
    "ct_roots",
    "log_ratio",
    "root_pair_term",
    "inverse_density_integral",
    "DegenerateParametersError",
]

# below this |r| the two-point difference is replaced by its derivative limit
_SMALL_R = 1e-6


class DegenerateParametersError(ValueError):
    """Closed form undefined at these parameters (e.g. ``l2 == 1``)."""


@dataclass(frozen=True)
class RootPair:
    """Discriminant data of the CT-uniform density.

    ``r2`` is exact (real); ``r``, ``p`` and ``q`` are complex numbers whose
    imaginary parts vanish on the real branch ``r2 >= 0``.
    """

    r2: float
    r: complex
    p: complex
    q: complex

    @property
    def complex_branch(self) -> bool:
        return self.r2 < 0

    @property
    def midpoint(self) -> complex:
        return 0.5 * (self.p + self.q)


def ct_roots(l1: float, l2: float) -> RootPair:
    """Return ``r``, ``p`` and ``q`` for the CT-uniform density.

    >>> rp = ct_roots(0.5, 0.5)
    >>> round(rp.r2, 12)
    -0.75
    """
    if l2 == 1.0:
        raise DegenerateParametersError("roots are undefined for l2 == 1")
    r2 = l1 * l1 + l2 * l2 + l1 * l2 - 3.0 * l1
    r = cmath.sqrt(r2)
    den = 3.0 * (1.0 - l2)
    return RootPair(r2, r, (l1 - l2 + r) / den, (l1 - l2 - r) / den)


def log_ratio(x: complex) -> complex:
    """Principal ``log(x / (x - 1))``; ``x = 0`` gives ``-inf`` (real)."""
    if x == 0:
        return complex(-math.inf, 0.0)
    return cmath.log(x / (x - 1.0))


def _poly(coefs, x):
    # coefs[k] multiplies x**k
    out = 0j
    for c in reversed(coefs):
        out = out * x + c
    return out


def _p_times_l(coefs, x: complex) -> complex:
    # x**k log(x) -> 0 at x = 0, so P(0) = 0 makes the product vanish
    if x == 0:
        if coefs[0] != 0:
            return complex(math.copysign(math.inf, -coefs[0]), 0.0)
        return 0j
    return _poly(coefs, x) * log_ratio(x)


def _d_p_times_l(coefs, x: complex) -> complex:
    """Derivative of ``P(x) L(x)``; ``L'(x) = -1 / (x (x - 1))``."""
    deriv = [k * c for k, c in enumerate(coefs)][1:] or [0.0]
    if x == 0:
        # P'(0) L(0) is finite only when the linear coefficient vanishes;
        # -P(x)/(x(x-1)) tends to P'(0) when P(0) = 0
        c0 = coefs[0]
        c1 = coefs[1] if len(coefs) > 1 else 0.0
        if c0 != 0:
            return complex(math.inf, 0.0)
        if c1 != 0:
            return complex(math.copysign(math.inf, -c1), 0.0)
        return 0j
    return _poly(deriv, x) * log_ratio(x) - _poly(coefs, x) / (x * (x - 1.0))


def root_pair_term(coefs, rp: RootPair, l2: float) -> complex:
    """``(1/r) [P(p) L(p) - P(q) L(q)]`` with the ``r -> 0`` limit.

    Parameters
    ----------
    coefs : sequence of float
        Polynomial coefficients, ``coefs[k]`` multiplying ``x**k``.
    rp : RootPair
        Output of :func:`ct_roots`.
    l2 : float
        Second CT parameter; fixes ``p - q = 2 r / (3 (1 - l2))``.

    Returns
    -------
    complex
        Callers take the real part after checking the imaginary residue.
    """
    if abs(rp.r) < _SMALL_R:
        return 2.0 / (3.0 * (1.0 - l2)) * _d_p_times_l(coefs, rp.midpoint)
    return (_p_times_l(coefs, rp.p) - _p_times_l(coefs, rp.q)) / rp.r


def inverse_density_integral(l1: float, l2: float) -> float:
    """``int_0^1 du / g(u)`` for the CT-uniform density ``g``.

    Evaluated branch by branch so the result is real without complex
    cancellation: ``atan2(rho, l2) / rho`` when ``r**2 = -rho**2 < 0`` and
    ``atanh(r / l2) / r`` when ``r**2 > 0``. Infinite when ``g(0) = l1 = 0``.
    """
    if l1 <= 0.0:
        return math.inf
    r2 = l1 * l1 + l2 * l2 + l1 * l2 - 3.0 * l1
    if r2 < 0.0:
        rho = math.sqrt(-r2)
        return math.atan2(rho, l2) / rho
    r = math.sqrt(r2)
    if r == 0.0:
        return 1.0 / l2 if l2 > 0 else math.inf
    x = r / l2
    if l2 <= 0.0 or x >= 1.0:
        # real roots with l2 <= 0 put a zero of g inside (0, 1)
        return math.inf
    return float(np.arctanh(x)) / r
