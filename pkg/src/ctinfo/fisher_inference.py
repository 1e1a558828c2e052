"""Fisher information, maximum likelihood and Fisher-based intervals.

With ``g(u) = l1 + 2 (l2 - l1) u + 3 (1 - l2) u**2`` the log-likelihood of
one observation is ``log f(x) + log g(F(x))``, so the scores are
``(1 - 2F) / g`` and ``(2F - 3F**2) / g`` and the information entries are
``E[(1 - 2F)**2 / g**2]``, ``E[(1 - 2F)(2F - 3F**2) / g**2]`` and
``E[(2F - 3F**2)**2 / g**2]``. They depend on the parameters only.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Literal, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from . import closed_forms as cf
from ._kernels import backend
from .baselines import Uniform
from .ct_model import (STRICT_BOX, CTDistribution, CTParams, _min_of_g, g_zero, integral_diverges, make_ct,
                       make_one_param_cubic)
from .divergences import chi_square, component
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_domain, integrate_unit
from .roots import DegenerateParametersError

__all__ = [
    "FisherMatrix",
    "SingularFisherError",
    "FitFailedError",
    "fisher_matrix",
    "fisher_one_param",
    "FitResult",
    "mle_fit",
    "z_quantile",
    "MODELS",
]

log = logging.getLogger(__name__)

_ZERO_TOL = 1e-14


class SingularFisherError(np.linalg.LinAlgError):
    """The information matrix cannot be inverted."""


class FitFailedError(RuntimeError):
    """No optimizer start converged."""

    def __init__(self, message: str, trace: list | None = None):
        super().__init__(message)
        self.trace = trace or []


@dataclass(frozen=True)
class FisherMatrix:
    """Symmetric 2x2 information matrix for ``(l1, l2)``.

    Entries are ``+inf`` when the CT density touches zero where the
    corresponding score does not vanish.
    """

    i11: float
    i12: float
    i22: float
    method: Literal["closed_form", "quadrature", "observed"] = "quadrature"

    def as_array(self) -> np.ndarray:
        return np.array([[self.i11, self.i12], [self.i12, self.i22]])

    @property
    def finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.i11, self.i12, self.i22))

    def is_psd(self, tol: float = 1e-9) -> bool:
        if not self.finite:
            return self.i11 >= 0 and self.i22 >= 0
        return self.i11 >= -tol and self.i22 >= -tol and self.i11 * self.i22 - self.i12**2 >= -tol

    def inverse(self) -> np.ndarray:
        if not self.finite:
            raise SingularFisherError("information matrix has infinite entries")
        det = self.i11 * self.i22 - self.i12**2
        if not det > 0.0:
            raise SingularFisherError(f"information matrix is singular (det = {det:.3g})")
        return np.array([[self.i22, -self.i12], [-self.i12, self.i11]]) / det

    def to_dict(self) -> dict:
        return {"i11": self.i11, "i12": self.i12, "i22": self.i22, "method": self.method}


def _params(params) -> CTParams:
    return params if isinstance(params, CTParams) else CTParams(*params)


_SCORES = ([1.0, -2.0], [0.0, 2.0, -3.0])


def _zero_sentinels(l1: float, l2: float) -> dict[str, float]:
    """Entries that diverge because ``g`` vanishes on ``[0, 1]``."""
    z = g_zero(l1, l2)
    if z is None:
        return {}
    ustar = z[0]
    # a point just inside the unit interval fixes the sign of a divergent entry
    probe = min(max(ustar + (1e-6 if ustar < 0.5 else -1e-6), 0.0), 1.0)
    out = {}
    for name, (a, b) in (("i11", (0, 0)), ("i12", (0, 1)), ("i22", (1, 1))):
        num = np.polynomial.Polynomial(_SCORES[a]) * np.polynomial.Polynomial(_SCORES[b])
        if integral_diverges(l1, l2, num.coef):
            out[name] = math.copysign(math.inf, float(num(probe)))
    return out


def fisher_matrix(ct: CTDistribution, spec: QuadratureSpec = DEFAULT_SPEC,
                  method: Literal["quadrature", "closed_form"] = "quadrature") -> FisherMatrix:
    """Per-observation information matrix of ``(l1, l2)``.

    ``quadrature`` integrates the score products against the CT density over
    the baseline's support; ``closed_form`` uses the CT-uniform expressions,
    which apply to every baseline.
    """
    l1, l2 = ct.l1, ct.l2
    if method == "closed_form":
        try:
            vals = dict(zip(("i11", "i12", "i22"), cf.fisher_ct_uniform(l1, l2)))
            vals.update(_zero_sentinels(l1, l2))
            return FisherMatrix(vals["i11"], vals["i12"], vals["i22"], method="closed_form")
        except (ArithmeticError, DegenerateParametersError) as exc:
            log.info("closed-form information unavailable at %s (%s); using quadrature", (l1, l2), exc)
    elif method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    sentinel = _zero_sentinels(l1, l2)
    b = ct.baseline

    def entry(k1, k2):
        def integrand(x):
            u = b.cdf(x)
            g = l1 + u * (2.0 * (l2 - l1) + 3.0 * (1.0 - l2) * u)
            s = (1.0 - 2.0 * u, 2.0 * u - 3.0 * u * u)
            with np.errstate(divide="ignore", invalid="ignore"):
                return b.pdf(x) * s[k1] * s[k2] / g
        return integrate_domain(integrand, b, spec).value

    vals = {}
    for name, (k1, k2) in (("i11", (0, 0)), ("i12", (0, 1)), ("i22", (1, 1))):
        vals[name] = sentinel.get(name, None)
        if vals[name] is None:
            vals[name] = entry(k1, k2)
    return FisherMatrix(vals["i11"], vals["i12"], vals["i22"], method="quadrature")


def fisher_one_param(lam: float, spec: QuadratureSpec = DEFAULT_SPEC,
                     method: Literal["closed_form", "identity", "score"] = "closed_form") -> float:
    """Information of the one-parameter cubic ``l1 = 1 + lam``, ``l2 = 1 - lam``.

    ``closed_form`` evaluates ``(int 1/g* - 1) / lam**2`` (a series near 0);
    ``identity`` divides the quadrature chi-square ``chi2(f, f*)`` by
    ``lam**2``; ``score`` integrates ``h**2 / g*`` with
    ``h = 1 - 4u + 3u**2``. At ``lam = 0`` every method returns the
    continuous extension ``2/15``.

    >>> round(fisher_one_param(0.0), 15) == round(2 / 15, 15)
    True
    """
    lam = float(lam)
    if method == "closed_form" or lam == 0.0:
        if method not in ("closed_form", "identity", "score"):
            raise ValueError(f"unknown method {method!r}")
        return cf.fisher_one_param(lam)
    if method == "identity":
        base = Uniform()
        r = chi_square(component("f", base), make_one_param_cubic(base, lam), base, spec)
        return r.value / (lam * lam)
    if method == "score":
        def integrand(u):
            h = 1.0 - 4.0 * u + 3.0 * u * u
            return h * h / (1.0 + lam * h)
        return integrate_unit(integrand, spec).value
    raise ValueError(f"unknown method {method!r}")


# --------------------------------------------------------------------- MLE
_Z = {0.90: 1.645, 0.95: 1.960}


def z_quantile(level: float) -> float:
    """Two-sided standard normal quantile ``z_{(1 - level)/2}``."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must lie in (0, 1), got {level}")
    for k, v in _Z.items():
        if abs(level - k) < 1e-12:
            return v
    return NormalDist().inv_cdf(0.5 + level / 2.0)


@dataclass(frozen=True)
class _Model:
    names: tuple[str, ...]
    box: tuple[tuple[float, float], ...]
    starts: tuple[tuple[float, ...], ...]


MODELS: dict[str, _Model] = {
    "ct_uniform": _Model(("l1", "l2"), STRICT_BOX,
                         ((0.5, 0.5), (0.2, 0.8), (0.8, 0.2), (0.3, -0.3), (0.9, 0.9))),
    "ct_weibull": _Model(("l1", "l2", "k"), STRICT_BOX + ((1e-3, 50.0),),
                         ((0.5, 0.5, 1.0), (0.2, 0.8, 1.0), (0.8, 0.2, 1.0), (0.3, -0.3, 1.5), (0.9, 0.9, 0.7))),
}
_ALIASES = {"ctu": "ct_uniform", "ctw": "ct_weibull", "uniform": "ct_uniform", "weibull": "ct_weibull"}


def _resolve_model(model: str) -> str:
    model = _ALIASES.get(model, model)
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {sorted(MODELS)}")
    return model


def _nll(model: str, x: np.ndarray, theta) -> float:
    kern = backend()
    if model == "ct_uniform":
        return kern.ct_uniform_nll(x, theta[0], theta[1])
    return kern.ctw_nll(x, theta[0], theta[1], theta[2])


def _in_region(model: str, theta) -> bool:
    spec = MODELS[model]
    if any(not (lo <= t <= hi) for t, (lo, hi) in zip(theta, spec.box)):
        return False
    return _min_of_g(theta[0], theta[1])[0] >= 0.0


def _penalized(model: str, x: np.ndarray):
    box = MODELS[model].box

    def fn(theta):
        if not _in_region(model, theta):
            excess = sum(max(lo - t, 0.0, t - hi) for t, (lo, hi) in zip(theta, box))
            return 1e12 * (1.0 + excess)
        v = _nll(model, x, theta)
        return v if math.isfinite(v) else 1e12
    return fn


def _observed_information(model: str, x: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Per-observation observed information by central differences of the NLL."""
    n = x.size
    d = theta.size
    h = 1e-4 * np.maximum(1.0, np.abs(theta))
    f0 = _nll(model, x, theta)
    H = np.empty((d, d))
    for i in range(d):
        ei = np.zeros(d)
        ei[i] = h[i]
        H[i, i] = (_nll(model, x, theta + ei) - 2.0 * f0 + _nll(model, x, theta - ei)) / h[i] ** 2
        for j in range(i + 1, d):
            ej = np.zeros(d)
            ej[j] = h[j]
            H[i, j] = H[j, i] = (_nll(model, x, theta + ei + ej) - _nll(model, x, theta + ei - ej)
                                 - _nll(model, x, theta - ei + ej) + _nll(model, x, theta - ei - ej)) / (
                4.0 * h[i] * h[j])
    return H / n


@dataclass(frozen=True)
class FitResult:
    """Maximum-likelihood fit with Fisher-based intervals.

    ``information`` is the per-observation matrix over all parameters;
    ``fisher`` its ``(l1, l2)`` block. ``ci[level][name] = (lo, hi)``, or
    ``None`` for every parameter when the matrix is singular.
    """

    model: str
    estimates: dict[str, float]
    loglik: float
    n: int
    fisher: FisherMatrix
    information: np.ndarray = field(repr=False)
    ci: dict[float, dict[str, tuple[float, float] | None]]
    ci_available: bool = True

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "estimates": dict(self.estimates),
            "loglik": self.loglik,
            "fisher": self.fisher.to_dict(),
            "information": self.information.tolist(),
            "ci_available": self.ci_available,
            "ci": {f"{lvl:.17g}": {k: (None if v is None else list(v)) for k, v in per.items()}
                   for lvl, per in self.ci.items()},
        }


def mle_fit(data, model: str = "ct_uniform", init: Mapping[str, float] | None = None,
            levels: float | Sequence[float] = (0.90, 0.95),
            information: Literal["expected", "observed", "auto"] = "auto") -> FitResult:
    """Fit ``ct_uniform`` (``l1, l2``) or ``ct_weibull`` (``l1, l2, k``; unit scale).

    The negative log-likelihood is minimized by Nelder-Mead from five starts
    (``init`` replaces the first) inside ``[0, 1] x [-1, 1]`` with a
    nonnegative density; outside that region the objective is a large
    penalty. ``information="auto"`` uses the closed-form expected matrix for
    ``ct_uniform`` and the observed matrix for ``ct_weibull``. Intervals are
    ``est +- z sqrt(diag(I^-1) / n)`` intersected with the parameter box.
    """
    model = _resolve_model(model)
    spec = MODELS[model]
    x = np.ascontiguousarray(data, dtype=float).ravel()
    if x.size < 30:
        raise ValueError(f"mle_fit needs at least 30 observations, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("data must be finite")
    if model == "ct_uniform" and (x.min() < 0.0 or x.max() > 1.0):
        raise ValueError("ct_uniform data must lie in [0, 1]")
    if model == "ct_weibull" and x.min() <= 0.0:
        raise ValueError("ct_weibull data must be positive")
    levels = (levels,) if np.isscalar(levels) else tuple(levels)

    starts = list(spec.starts)
    if init:
        starts[0] = tuple(float(init.get(k, s)) for k, s in zip(spec.names, starts[0]))
    objective = _penalized(model, x)
    best, trace = None, []
    for s in starts:
        res = minimize(objective, np.asarray(s, dtype=float), method="Nelder-Mead",
                       options={"xatol": 1e-7, "fatol": 1e-9, "maxiter": 4000, "maxfev": 8000})
        trace.append({"start": list(s), "fun": float(res.fun), "success": bool(res.success),
                      "nit": int(res.nit), "message": str(res.message)})
        if res.success and res.fun < 1e11 and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        raise FitFailedError("Nelder-Mead did not converge from any start", trace)
    theta = np.asarray(best.x, dtype=float)
    estimates = {k: float(v) for k, v in zip(spec.names, theta)}

    mode = information
    if mode == "auto":
        mode = "expected" if model == "ct_uniform" else "observed"
    if mode == "expected":
        if model != "ct_uniform":
            raise ValueError("expected information is implemented for ct_uniform only")
        fm = fisher_matrix(make_ct(Uniform(), CTParams(theta[0], theta[1])), method="closed_form")
        info = fm.as_array()
    elif mode == "observed":
        info = _observed_information(model, x, theta)
        fm = FisherMatrix(info[0, 0], info[0, 1], info[1, 1], method="observed")
    else:
        raise ValueError(f"unknown information type {information!r}")

    n = x.size
    ci: dict[float, dict[str, tuple[float, float] | None]] = {}
    available = True
    try:
        if not np.all(np.isfinite(info)):
            raise SingularFisherError("information matrix has infinite entries")
        cov = np.linalg.inv(info)
        var = np.diag(cov) / n
        if np.any(~np.isfinite(var)) or np.any(var <= 0.0):
            raise SingularFisherError("information matrix is not positive definite")
    except (np.linalg.LinAlgError, SingularFisherError) as exc:
        log.warning("confidence intervals unavailable: %s", exc)
        available = False
    for lvl in levels:
        z = z_quantile(lvl)
        per: dict[str, tuple[float, float] | None] = {}
        for i, name in enumerate(spec.names):
            if not available:
                per[name] = None
                continue
            lo_b, hi_b = spec.box[i]
            half = z * math.sqrt(var[i])
            per[name] = (float(max(theta[i] - half, lo_b)), float(min(theta[i] + half, hi_b)))
        ci[float(lvl)] = per
    return FitResult(model, estimates, -float(best.fun), n, fm, info, ci, available)
