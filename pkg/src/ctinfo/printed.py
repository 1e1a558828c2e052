"""Published forms of the closed-form expressions, encoded verbatim.

These are evaluated only by :mod:`ctinfo.erratum`, which compares them with
quadrature. They are evaluated the way a reader would: principal complex
branches (``cmath``) and the real part of the result. Where an expression
is correct as published the library uses an equivalent form from
:mod:`ctinfo.closed_forms`; where it is not, the library uses the fixed
form and this module keeps the published one for the report.
"""

from __future__ import annotations

import cmath
import math

__all__ = [
    "kl_a", "kl_b", "kl_c", "kl_d", "kl_e",
    "chi2_a", "chi2_b", "chi2_c",
    "theta", "fisher_matrix", "fisher_one_param",
    "kl_mix_a", "kl_mix_b",
    "entropy_pareto", "entropy_exponential",
    "quadratic_entropy_weighted_term", "one_param_entropy",
    "gmd_power", "gmd_quadratic_remainder", "gmd_quadratic",
    "gmd_one_param", "ctg_weights", "ctg_weights_one_param",
    "cts_constant",
]


def _L(x):
    if x == 0:
        return complex(-math.inf, 0.0)
    return cmath.log(x / (x - 1))


def _xl(poly, x):
    # poly(x) * L(x) with x**k log x -> 0 at the origin
    if x == 0:
        return 0j
    return poly(x) * _L(x)


def _aux(l1, l2):
    r = cmath.sqrt(l1 * l1 + l2 * l2 + l1 * l2 - 3 * l1)
    p = (l1 - l2 + r) / (3 * (1 - l2))
    q = (l1 - l2 - r) / (3 * (1 - l2))
    return r, p, q


def _phi(l1, l2, r):
    b, c = l2 - l1, 1 - l2
    return lambda x: _xl(lambda y: 2 * b * b * y**2 + 10 * b * c * y**3 + 12 * c * c * y**4, x) / (2 * r)


def _s(l1, l2):
    return 3 - l1 - l2


def _q2(l1, l2):
    return 2 / (9 * (1 - l2)) * (l1 * l1 + 13 * l2 * l2 - 2 * l1 * l2 - 18 * l2 + 6)


def kl_a(l1, l2):
    r, p, q = _aux(l1, l2)
    vphi = lambda x: _xl(lambda y: (l2 - l1) * y + 3 * (1 - l2) * y * y, x) / r
    return (2 - vphi(p) + vphi(q) - math.log(_s(l1, l2))).real


def kl_b(l1, l2):
    r, p, q = _aux(l1, l2)
    phi = _phi(l1, l2, r)
    return (math.log(_s(l1, l2)) - phi(p) + phi(q) - 2 / 3 * (3 + l1 - 4 * l2) + _q2(l1, l2)).real


def kl_c(l1, l2):
    r, p, q = _aux(l1, l2)
    eta = lambda x: _xl(lambda y: 6 * (l2 - l1) * y**2 - (18 + 4 * l1 - 22 * l2) * y**3
                        + 12 * (1 - l2) * y**4, x) / (2 * r)
    const = (55 * l2 * l2 - 8 * l1 * l1 - 44 * l1 * l2 - 78 * l2 + 60 * l1 + 15) / (9 * (1 - l2) ** 2)
    return (math.log(6 / _s(l1, l2)) - 5 / 3 - eta(p) + eta(q) - const).real


def kl_d(l1, l2):
    r, p, q = _aux(l1, l2)
    phi = _phi(l1, l2, r)
    return (-phi(p) + phi(q) - math.log(3 / _s(l1, l2)) + (l1 + 9 * l2 - 4) / 3 + _q2(l1, l2)).real


def kl_e(l1, l2):
    r, p, q = _aux(l1, l2)
    gam = lambda x: _xl(lambda y: 2 * (l2 - l1) * y**3 + 6 * (1 - l2) * y**4, x) / (2 * r)
    c2 = (1 - l2) ** 2
    val = (gam(q) - gam(p) + math.log(3 / _s(l1, l2)) + (l2 - l1) / (9 * c2) * (3 - 7 * l2 + 4 * l1)
           + 2 / (9 * c2) * (4 * l1 * l1 + 10 * l2 * l2 - 8 * l1 * l2 - 9 * l2 + 3) - 2 / 3)
    return val.real


def chi2_a(l1, l2):
    return (12 - 15 * l1 - 9 * l2 + 5 * l1 * l2 + 5 * l1 * l1 + 2 * l2 * l2) / 15


def _atanh_over_r(l1, l2):
    r, _, _ = _aux(l1, l2)
    return cmath.atanh(r / l2) / r


def chi2_b(l1, l2):
    return (-1 + _atanh_over_r(l1, l2)).real


def chi2_c(l1, l2):
    r, p, q = _aux(l1, l2)
    sigma = (_xl(lambda y: y**4, p) - _xl(lambda y: y**4, q)) / (2 * r)
    return (-1 + (4 * l1 * l1 + 10 * l2 * l2 - 8 * l1 * l2 - 9 * l2 + 3) / (3 * (1 - l2) ** 3)
            - 9 * sigma).real


def theta(l1, l2):
    return -kl_b(l1, l2) - (1 - l2) * (2 / 3 - math.log(3))


def fisher_matrix(l1, l2):
    r, p, q = _aux(l1, l2)

    def om(poly, scale):
        return scale * (_xl(poly, p) - _xl(poly, q)) / r

    w1 = om(lambda y: y - y * y, 2)
    w2 = om(lambda y: 2 * y - 7 * y * y + 6 * y**3, 0.5)
    w3 = om(lambda y: 4 * y * y - 12 * y**3 + 9 * y**4, 0.5)
    c = 1 - l2
    i11 = _atanh_over_r(l1, l2) + w1 + 4 / (3 * c)
    i12 = -w2 - 4 * (1 - l1) / (3 * c * c)
    i22 = (4 * l1 * l1 - 8 * l1 + 3 * l2 + 1) / (3 * c**3) - w3
    return i11.real, i12.real, i22.real


def fisher_one_param(lam):
    rs = cmath.sqrt(lam * lam - 3 * lam)
    ps = (rs - 2 * lam) / (3 * lam)
    qs = (rs + 2 * lam) / (3 * lam)
    pi = lambda x: lam * lam / (2 * rs) * _xl(lambda y: 9 * y**4 - 24 * y**3 + 22 * y * y - 8 * y, x)
    val = (lam * lam / rs * cmath.atanh(rs / (1 - lam)) + pi(ps) - pi(qs) - lam / 3 * (13 * lam + 10)) / lam**2
    return val.real


def _xi(v, l1, l2, r):
    b, c = l2 - l1, 1 - l2
    return lambda x: _xl(lambda y: 2 * v * b * y + 6 * v * c * y * y + 2 * b * (1 - v) * y**3
                         + 6 * (1 - v) * c * y**4, x) / (2 * r)


def kl_mix_a(v, l1, l2):
    r, p, q = _aux(l1, l2)
    xi = _xi(v, l1, l2, r)
    at = math.atan(math.sqrt(3 * (1 - v) / v))
    val = (math.log((3 - 2 * v) / _s(l1, l2))
           + (1 - v) / (9 * (1 - l2) ** 2) * (4 * l1 * l1 + 13 * l2 * l2 - 5 * l1 * l2 - 3 * l1 - 15 * l2 + 6)
           + 4 * v**1.5 / (3 * math.sqrt(3) * math.sqrt(1 - v)) * at - 2 / 3 * (1 - 2 * v) - xi(p) + xi(q))
    return val.real


def kl_mix_b(v, l1, l2):
    r, p, q = _aux(l1, l2)
    phi = _phi(l1, l2, r)
    at = math.atan(math.sqrt(3 * (1 - v) / v))
    val = (math.log(_s(l1, l2) / (3 - 2 * v)) - (4 + 5 * l1 - 9 * l2) / 3 - phi(p) + phi(q)
           - v / (3 * (1 - v)) * (2 * (1 - l2) - (l2 - l1) * math.log(v / (3 - 2 * v)))
           - 2 * (l1 - v * (1 - l2) / (3 * (1 - v))) * math.sqrt(v / (3 * (1 - v))) * at
           + _q2(l1, l2))
    return val.real


def entropy_pareto(alpha, l1, l2):
    a = alpha
    return (l1 * ((a + 1) / a**2 - math.log(a)) + (1 - l2) * (1 / 6 - 7 / (6 * a) - math.log(3 * a))
            + (l2 - l1) * ((a + 1) * (3 - 2 * a) / (2 * a) - math.log(a)) + theta(l1, l2))


def entropy_exponential(beta, l1, l2):
    return (l1 * (1 - math.log(beta)) + (1 - l2) * (math.log(3 * beta) - 2.5)
            - (l2 - l1) * math.log(beta) + theta(l1, l2))


def quadratic_entropy_weighted_term(lam, h_max3, h_v):
    """``-lam H(f_max) + lam H(f_V)`` read with the max of a triple."""
    return -lam * h_max3 + lam * h_v


def one_param_entropy(lam, h_f, h_max, h_weighted, h_w, h_ustar):
    return (1 + lam) * h_f + lam * h_max - 2 * lam * h_weighted - lam * h_w + h_ustar


def gmd_power(b, c, l1, l2):
    A = l1 * (1 - l1)
    B = l2 - l1
    C = l2 * (1 - l2) - 2 * l1 * (l2 - l1)
    D = -((l2 - l1) ** 2 + 2 * l1 * (1 - l2))
    E = -2 * (1 - l2) * (l2 - l1)
    return (2 * b * c / ((c + 1) * (2 * c + 1)) * l1 * l1
            + 2 * b * (1 - l2) ** 2 * (1 / (3 * c + 1) - 3 / (4 * c + 1) + 3 / (5 * c + 1) - 1 / (6 * c + 1))
            + 2 * b * (A / (c + 1) + B / (2 * c + 1) + C / (3 * c + 1) + D / (4 * c + 1) + E / (5 * c + 1)))


def gmd_quadratic_remainder(lam, int_f2_sf2, int_weighted):
    """Remainder for ``l1 = 1 + lam``, ``l2 = 1`` as published.

    ``int_f2_sf2 = int F**2 (1-F)**2 dx`` and
    ``int_weighted = int u(1-u)(1+2u) / f(F^-1(u)) du``.
    """
    return 2 * lam * lam * int_f2_sf2 - lam * (1 + lam) * int_weighted


def gmd_quadratic(lam, gmd_f, gmd_max, int_weighted):
    return (1 + lam) ** 2 * gmd_f + lam * lam * gmd_max - lam * (1 + lam) * int_weighted


def gmd_one_param(lam, gmd_f, gmd_max, int_poly):
    """``int_poly(coefs)`` must return ``int P(u) / f(F^-1(u)) du``."""
    coefs = [0.0, 1 + lam, 2.0, -(5 + 3 * lam * lam), 6 * lam + 2, -4 * lam]
    return (1 + lam) ** 2 * gmd_f + lam * lam * gmd_max - 2 * lam * int_poly(coefs)


def ctg_weights(l1, l2):
    e1 = (4 * l1 - 2 * l2 - 3 * l1 * l1) / (1 - 2 * l1)
    e2 = ((26 * l2 - 20 * l1 - 6 * l2 * l2) - 3 * e1 * (4 * l2 - 8)) / (9 * (2 * l2 - 3))
    return e1, e2


def ctg_weights_one_param(lam):
    e1 = (3 * lam * lam + 2) / (1 + 2 * lam)
    e2 = ((34 * lam + 6 * lam * lam) + 12 * e1 * (1 + lam)) / (9 * (1 + 2 * lam))
    return e1, e2


def cts_constant(l1, l2):
    return (math.log(3) - 1) * (l2 - l1)
