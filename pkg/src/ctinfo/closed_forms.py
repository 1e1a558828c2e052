"""Closed-form CT-uniform measures.

Every function takes ``(l1, l2)`` (plus ``v`` or ``lam`` where relevant) and
returns a float. The expressions are reduced to the root-pair terms of
:mod:`ctinfo.roots`; each one is cross-checked against quadrature in the
test-suite. Functions raise :class:`~ctinfo.roots.DegenerateParametersError`
for ``l2 == 1`` where the roots are undefined and
:class:`ComplexResidueError` if complex arithmetic fails to cancel.

Notation: ``g`` is the CT-uniform density, ``f_U`` the uniform density,
``f_W = 3u**2`` (largest of three), ``f_23 = 6u(1 - u)`` (median of three).
"""

from __future__ import annotations

import math

import numpy as np

from .roots import DegenerateParametersError, ct_roots, inverse_density_integral, root_pair_term

__all__ = [
    "ComplexResidueError",
    "kl_u_uct",
    "kl_uct_u",
    "kl_u23_uct",
    "kl_uct_w",
    "kl_w_uct",
    "kl_u23_w",
    "kl_w_u",
    "chi2_uct_u",
    "chi2_u_uct",
    "chi2_w_uct",
    "theta",
    "fisher_ct_uniform",
    "fisher_one_param",
    "kl_mix_uct",
    "kl_uct_mix",
    "H_W",
    "H_V",
]

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
# entropies of the Beta(3, 1) and Beta(2, 1) densities
H_W = 2.0 / 3.0 - LOG3
H_V = 0.5 - LOG2

_IMAG_TOL = 1e-9


class ComplexResidueError(ArithmeticError):
    """Imaginary part of a complex-branch evaluation did not cancel."""


def _real(z: complex) -> float:
    z = complex(z)
    if math.isfinite(z.real) and abs(z.imag) > _IMAG_TOL * max(1.0, abs(z.real)):
        raise ComplexResidueError(f"imaginary residue {z.imag:.3g} in closed form")
    return z.real


def _pair(coefs, l1, l2) -> complex:
    if l2 == 1.0:
        raise DegenerateParametersError("closed form needs lambda2 != 1")
    return root_pair_term(coefs, ct_roots(l1, l2), l2)


def _quad_tail(l1: float, l2: float) -> float:
    # recurring constant of the KL(f_UCT, .) family
    return 2.0 / (9.0 * (1.0 - l2)) * (l1 * l1 + 13 * l2 * l2 - 2 * l1 * l2 - 18 * l2 + 6)


# ---------------------------------------------------------------- KL family
def kl_u_uct(l1: float, l2: float) -> float:
    """``KL(f_U, g) = -int log g``."""
    b, c = l2 - l1, 1.0 - l2
    pair = _pair([0.0, b, 3 * c], l1, l2)
    return _real(2.0 - pair - math.log(3.0 - l1 - l2))


def _phi_pair(l1, l2):
    b, c = l2 - l1, 1.0 - l2
    return 0.5 * _pair([0.0, 0.0, 2 * b * b, 10 * b * c, 12 * c * c], l1, l2)


def kl_uct_u(l1: float, l2: float) -> float:
    """``KL(g, f_U) = int g log g``."""
    val = (math.log(3.0 - l1 - l2) - _phi_pair(l1, l2)
           - 2.0 / 3.0 * (3 + l1 - 4 * l2) + _quad_tail(l1, l2))
    return _real(val)


def kl_u23_uct(l1: float, l2: float) -> float:
    """``KL(f_23, g)``.

    Differs from the commonly printed form in the signs of the cubic and
    quartic coefficients of the root-pair polynomial and in the rational
    constant; both were fixed against quadrature.
    """
    b, c = l2 - l1, 1.0 - l2
    pair = 0.5 * _pair([0.0, 0.0, 6 * b, 18 + 4 * l1 - 22 * l2, -12 * c], l1, l2)
    const = (15 + 24 * l1 - 42 * l2 - 8 * l1 * l1 - 8 * l1 * l2 + 19 * l2 * l2) / (9 * c * c)
    return _real(math.log(6.0 / (3.0 - l1 - l2)) - 5.0 / 3.0 - pair + const)


def kl_uct_w(l1: float, l2: float) -> float:
    """``KL(g, f_W)``."""
    val = (-_phi_pair(l1, l2) - math.log(3.0 / (3.0 - l1 - l2))
           + (l1 + 9 * l2 - 4) / 3.0 + _quad_tail(l1, l2))
    return _real(val)


def kl_w_uct(l1: float, l2: float) -> float:
    """``KL(f_W, g)``."""
    b, c = l2 - l1, 1.0 - l2
    pair = 0.5 * _pair([0.0, 0.0, 0.0, 2 * b, 6 * c], l1, l2)
    val = (-pair + math.log(3.0 / (3.0 - l1 - l2))
           + b * (3 - 7 * l2 + 4 * l1) / (9 * c * c)
           + 2.0 * (4 * l1 * l1 + 10 * l2 * l2 - 8 * l1 * l2 - 9 * l2 + 3) / (9 * c * c)
           - 2.0 / 3.0)
    return _real(val)


def kl_u23_w(l1: float = 0.0, l2: float = 0.0) -> float:
    """``KL(f_23, f_W) = log 2`` (parameter free)."""
    return LOG2


def kl_w_u(l1: float = 0.0, l2: float = 0.0) -> float:
    """``KL(f_W, f_U) = log 3 - 2/3`` (parameter free)."""
    return LOG3 - 2.0 / 3.0


# ------------------------------------------------------------- chi-square
def chi2_uct_u(l1: float, l2: float) -> float:
    """``chi2(g, f_U) = int (g - 1)**2``; a polynomial in the parameters."""
    return (12 - 15 * l1 - 9 * l2 + 5 * l1 * l2 + 5 * l1 * l1 + 2 * l2 * l2) / 15.0


def chi2_u_uct(l1: float, l2: float) -> float:
    """``chi2(f_U, g) = int 1/g - 1``, infinite when ``l1 = 0``."""
    return inverse_density_integral(l1, l2) - 1.0


def chi2_w_uct(l1: float, l2: float) -> float:
    """``chi2(f_W, g)``."""
    c = 1.0 - l2
    sigma = 0.5 * _pair([0.0, 0.0, 0.0, 0.0, 1.0], l1, l2)
    val = -1.0 + (4 * l1 * l1 + 10 * l2 * l2 - 8 * l1 * l2 - 9 * l2 + 3) / (3 * c**3) - 9.0 * sigma
    return _real(val)


# ----------------------------------------------------------------- entropy
def theta(l1: float, l2: float) -> float:
    """``H(g) - (1 - l2) H(f_W)``, the parameter-only part of the CT entropy."""
    return -kl_uct_u(l1, l2) - (1.0 - l2) * H_W


# ------------------------------------------------------------------ Fisher
def fisher_ct_uniform(l1: float, l2: float) -> tuple[float, float, float]:
    """Expected information ``(i11, i12, i22)`` of the CT-uniform model.

    ``i11`` uses the branch-correct ``int 1/g`` so it stays valid for
    ``l2 < 0`` on the complex branch.
    """
    c = 1.0 - l2
    w1 = 2.0 * _real(_pair([0.0, 1.0, -1.0], l1, l2))
    w2 = 0.5 * _real(_pair([0.0, 2.0, -7.0, 6.0], l1, l2))
    w3 = 0.5 * _real(_pair([0.0, 0.0, 4.0, -12.0, 9.0], l1, l2))
    J = inverse_density_integral(l1, l2)
    # once int 1/g diverges the finite pieces no longer matter
    i11 = math.inf if math.isinf(J) else J + w1 + 4.0 / (3.0 * c)
    i12 = -w2 - 4.0 * (1.0 - l1) / (3.0 * c * c)
    i22 = (4 * l1 * l1 - 8 * l1 + 3 * l2 + 1) / (3 * c**3) - w3
    return i11, i12, i22


def _score_moments(kmax: int) -> np.ndarray:
    h = np.polynomial.Polynomial([1.0, -4.0, 3.0])
    out = np.empty(kmax + 1)
    p = np.polynomial.Polynomial([1.0])
    for k in range(kmax + 1):
        integ = p.integ()
        out[k] = integ(1.0) - integ(0.0)
        p = p * h
    return out


_H_MOMENTS = _score_moments(64)
_SERIES_CUTOFF = 0.05


def fisher_one_param(lam: float) -> float:
    """Fisher information of the one-parameter cubic, ``(int 1/g* - 1) / lam**2``.

    ``g* = 1 + lam (1 - 4u + 3u**2)``. Near ``lam = 0`` the power series
    ``sum_k (-lam)**k int h**(k+2)`` is used; its value at 0 is ``2/15``.
    """
    if abs(lam) < _SERIES_CUTOFF:
        k = np.arange(_H_MOMENTS.size - 2)
        return float(np.sum((-lam) ** k * _H_MOMENTS[k + 2]))
    return (inverse_density_integral(1.0 + lam, 1.0 - lam) - 1.0) / (lam * lam)


# ------------------------------------------------- mixture versus CT model
def _atan_factor(v: float) -> float:
    # sqrt(v / (3(1-v))) * atan(sqrt(3(1-v)/v)), continuous on [0, 1]
    if v <= 0.0:
        return 0.0
    if v >= 1.0:
        return 1.0
    s = math.sqrt(3.0 * (1.0 - v) / v)
    return math.atan(s) / s


def _check_v(v: float) -> float:
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"mixture weight v must lie in [0, 1], got {v}")
    return v


def kl_mix_uct(v: float, l1: float, l2: float) -> float:
    """``KL(m, g)`` with ``m(u) = v + 3 (1 - v) u**2``."""
    v = _check_v(v)
    b, c = l2 - l1, 1.0 - l2
    xi = 0.5 * _pair([0.0, 2 * v * b, 6 * v * c, 2 * b * (1 - v), 6 * (1 - v) * c], l1, l2)
    val = (math.log((3 - 2 * v) / (3 - l1 - l2))
           + (1 - v) / (9 * c * c) * (4 * l1 * l1 + 13 * l2 * l2 - 5 * l1 * l2 - 3 * l1 - 15 * l2 + 6)
           + 4.0 * v / 3.0 * _atan_factor(v)
           - 2.0 / 3.0 * (1 - 2 * v)
           - xi)
    return _real(val)


def kl_uct_mix(v: float, l1: float, l2: float) -> float:
    """``KL(g, m)`` with ``m(u) = v + 3 (1 - v) u**2``.

    The endpoints use the reductions ``m = f_W`` (``v = 0``) and
    ``m = f_U`` (``v = 1``).
    """
    v = _check_v(v)
    if v == 0.0:
        return kl_uct_w(l1, l2)
    if v == 1.0:
        return kl_uct_u(l1, l2)
    b, c = l2 - l1, 1.0 - l2
    ratio = v / (3.0 * (1.0 - v))
    t = _atan_factor(v)
    val = (math.log((3 - l1 - l2) / (3 - 2 * v))
           - (4 + 5 * l1 - 9 * l2) / 3.0
           - _phi_pair(l1, l2)
           - ratio * (2 * c - b * math.log(v / (3 - 2 * v)))
           - 2.0 * (l1 - ratio * c) * t
           + _quad_tail(l1, l2)
           + 2.0 * l1)
    return _real(val)
