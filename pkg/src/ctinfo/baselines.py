"""Parent (baseline) distributions.

Every information measure in this package is computed on top of a baseline
distribution ``F``. A baseline supplies four vectorized primitives: the CDF,
the PDF, the quantile function ``F^{-1}`` and the density evaluated at the
quantile, ``f(F^{-1}(u))``, which is the Jacobian used by every
``u = F(x)`` substitution.

Five families are available: ``uniform``, ``exponential`` (``exp``),
``pareto``, ``power`` and ``weibull``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

__all__ = [
    "Baseline",
    "Uniform",
    "Exponential",
    "Pareto",
    "Power",
    "Weibull",
    "ParameterDomainError",
    "UnknownFamilyError",
    "make_baseline",
    "density_at_quantile",
    "FAMILIES",
]


class ParameterDomainError(ValueError):
    """A distribution parameter lies outside its admissible range."""


class UnknownFamilyError(KeyError):
    """No baseline family is registered under the requested name."""


def _check_unit(u):
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise ParameterDomainError("u must lie in the open interval (0, 1)")
    return u


@dataclass(frozen=True)
class Baseline:
    """Abstract parent distribution.

    Subclasses implement ``_cdf``, ``_pdf``, ``_quantile`` and ``_daq`` on
    arrays already restricted to the support; the public methods take care of
    broadcasting and of values outside the support.
    """

    name: ClassVar[str] = "baseline"
    support: ClassVar[tuple[float, float]] = (-math.inf, math.inf)

    @property
    def params(self) -> dict[str, float]:
        return {}

    # public API -----------------------------------------------------------
    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        inside = (x > lo) & (x < hi)
        out = np.where(x >= hi, 1.0, 0.0)
        if np.any(inside):
            out = np.where(inside, self._cdf(np.where(inside, x, self._mid)), out)
        return out[()] if out.ndim == 0 else out

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        inside = (x > lo) & (x < hi)
        out = np.zeros_like(x)
        if np.any(inside):
            out = np.where(inside, self._pdf(np.where(inside, x, self._mid)), 0.0)
        return out[()] if out.ndim == 0 else out

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if np.any((u < 0.0) | (u > 1.0)):
            raise ParameterDomainError("quantile argument must lie in [0, 1]")
        return self._quantile(u)

    def density_at_quantile(self, u):
        """``f(F^{-1}(u))`` for ``u`` in the open unit interval."""
        return self._daq(_check_unit(u))

    def spec_string(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v:.17g}" for k, v in self.params.items())
        return f"{self.name}:{inner}"

    @property
    def _mid(self) -> float:
        return float(self._quantile(np.asarray(0.5)))

    # hooks ----------------------------------------------------------------
    def _cdf(self, x):
        raise NotImplementedError

    def _pdf(self, x):
        raise NotImplementedError

    def _quantile(self, u):
        raise NotImplementedError

    def _daq(self, u):
        return self._pdf(self._quantile(u))


@dataclass(frozen=True)
class Uniform(Baseline):
    name: ClassVar[str] = "uniform"
    support: ClassVar[tuple[float, float]] = (0.0, 1.0)

    def _cdf(self, x):
        return x

    def _pdf(self, x):
        return np.ones_like(x)

    def _quantile(self, u):
        return u * 1.0

    def _daq(self, u):
        return np.ones_like(u)


@dataclass(frozen=True)
class Exponential(Baseline):
    beta: float = 1.0
    name: ClassVar[str] = "exp"
    support: ClassVar[tuple[float, float]] = (0.0, math.inf)

    def __post_init__(self):
        if not self.beta > 0:
            raise ParameterDomainError(f"exponential rate must be > 0, got {self.beta}")

    @property
    def params(self):
        return {"beta": self.beta}

    def _cdf(self, x):
        return -np.expm1(-self.beta * x)

    def _pdf(self, x):
        return self.beta * np.exp(-self.beta * x)

    def _quantile(self, u):
        with np.errstate(divide="ignore"):
            return -np.log1p(-u) / self.beta

    def _daq(self, u):
        return self.beta * (1.0 - u)


@dataclass(frozen=True)
class Pareto(Baseline):
    """Pareto with CDF ``1 - x**(-alpha)`` on ``x >= 1``."""

    alpha: float = 2.0
    name: ClassVar[str] = "pareto"
    support: ClassVar[tuple[float, float]] = (1.0, math.inf)

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterDomainError(f"pareto shape must be > 0, got {self.alpha}")

    @property
    def params(self):
        return {"alpha": self.alpha}

    def _cdf(self, x):
        return -np.expm1(-self.alpha * np.log(x))

    def _pdf(self, x):
        return self.alpha * x ** (-self.alpha - 1.0)

    def _quantile(self, u):
        with np.errstate(divide="ignore"):
            return (1.0 - u) ** (-1.0 / self.alpha)

    def _daq(self, u):
        return self.alpha * (1.0 - u) ** ((self.alpha + 1.0) / self.alpha)


@dataclass(frozen=True)
class Power(Baseline):
    """Power law with CDF ``(x/b)**c`` on ``0 < x < b``."""

    b: float = 1.0
    c: float = 1.0
    name: ClassVar[str] = "power"

    def __post_init__(self):
        if not (self.b > 0 and self.c > 0):
            raise ParameterDomainError(f"power needs b > 0 and c > 0, got b={self.b}, c={self.c}")

    @property
    def support(self):  # type: ignore[override]
        return (0.0, self.b)

    @property
    def params(self):
        return {"b": self.b, "c": self.c}

    def _cdf(self, x):
        return (x / self.b) ** self.c

    def _pdf(self, x):
        return self.c * x ** (self.c - 1.0) / self.b**self.c

    def _quantile(self, u):
        return self.b * u ** (1.0 / self.c)

    def _daq(self, u):
        return (self.c / self.b) * u ** ((self.c - 1.0) / self.c)


@dataclass(frozen=True)
class Weibull(Baseline):
    """Unit-scale Weibull with CDF ``1 - exp(-x**k)``."""

    k: float = 1.0
    name: ClassVar[str] = "weibull"
    support: ClassVar[tuple[float, float]] = (0.0, math.inf)

    def __post_init__(self):
        if not self.k > 0:
            raise ParameterDomainError(f"weibull shape must be > 0, got {self.k}")

    @property
    def params(self):
        return {"k": self.k}

    def _cdf(self, x):
        return -np.expm1(-(x**self.k))

    def _pdf(self, x):
        return self.k * x ** (self.k - 1.0) * np.exp(-(x**self.k))

    def _quantile(self, u):
        with np.errstate(divide="ignore"):
            return (-np.log1p(-u)) ** (1.0 / self.k)

    def _daq(self, u):
        t = -np.log1p(-u)
        return self.k * (1.0 - u) * t ** ((self.k - 1.0) / self.k)


FAMILIES: dict[str, type[Baseline]] = {
    "uniform": Uniform,
    "exp": Exponential,
    "exponential": Exponential,
    "pareto": Pareto,
    "power": Power,
    "weibull": Weibull,
}


def make_baseline(name: str, **params: float) -> Baseline:
    """Instantiate a baseline family by name.

    >>> float(make_baseline("power", b=2, c=3).cdf(1.0))
    0.125
    """
    try:
        cls = FAMILIES[name.lower()]
    except KeyError:
        raise UnknownFamilyError(f"unknown baseline family {name!r}") from None
    try:
        return cls(**{k: float(v) for k, v in params.items()})
    except TypeError as exc:
        raise ParameterDomainError(f"bad parameters for {name!r}: {exc}") from None


def density_at_quantile(b: Baseline, u):
    return b.density_at_quantile(u)
