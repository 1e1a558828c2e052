"""Closed-form verification suite and erratum report.

Two kinds of checks run against quadrature oracles:

``implementation``
    The library's closed forms (:mod:`ctinfo.closed_forms`). These must
    agree within ``1e-6`` everywhere and within ``1e-7`` where the roots of
    ``g`` are real.
``printed``
    The published expressions (:mod:`ctinfo.printed`). Every one that
    misses the oracle by more than ``1e-6`` is listed in the report; a miss
    is a finding, not a failure.

Cells where ``g`` vanishes make some measures infinite. There the oracle
checks the divergence structurally (the zero of ``g`` and the integrand's
numerator at it) and confirms that quadrature fails to converge; a closed
form passes if it returns ``inf``.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
import numpy as np

from . import __version__
from ._jsonio import dumps
from . import closed_forms as cf
from . import printed
from .baselines import Exponential, Pareto, Power, Uniform
from .ct_model import CTParams, integral_diverges, make_ct, make_one_param_cubic, make_quadratic
from .divergences import chi_square, component, kl, kl_mixture_ct
from .entropy import (ct_entropy_closed_form, ct_shannon_entropy, entropy_special_cases, shannon_entropy,
                      theta_quadrature)
from .gini import (ctg, ctg_energy_mixture, ctg_via_energy, gmd, gmd_ct_decomposed, gmd_power_example,
                   r_star_poly, r_star_quadratic, CtgWeights)
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_unit

__all__ = [
    "Check",
    "VerifyReport",
    "parameter_grid",
    "lambda_grid",
    "branch",
    "run_closed_form_suite",
    "run_printed_suite",
    "verify",
    "TOL",
    "TOL_REAL",
    "MISMATCH_TOL",
]

log = logging.getLogger(__name__)

TOL = 1e-6
TOL_REAL = 1e-7
MISMATCH_TOL = 1e-6


def parameter_grid(n: int = 21) -> list[tuple[float, float]]:
    """Valid cells of the ``n x n`` grid on ``[0, 1] x [-1, 1]``, without ``l2 = 1``."""
    cells = []
    for l1 in np.linspace(0.0, 1.0, n):
        for l2 in np.linspace(-1.0, 1.0, n):
            l1f, l2f = round(float(l1), 12), round(float(l2), 12)
            if l2f == 1.0 or not CTParams.is_valid(l1f, l2f, strict=True):
                continue
            cells.append((l1f, l2f))
    return cells


def lambda_grid(n: int = 21) -> list[float]:
    """``n`` equally spaced values of the one-parameter ``lam`` on ``[-1, 1]``."""
    return [round(float(v), 12) for v in np.linspace(-1.0, 1.0, n)]


def branch(l1: float, l2: float) -> str:
    """``real`` or ``complex`` according to the sign of ``r**2``."""
    r2 = l1 * l1 + l2 * l2 + l1 * l2 - 3.0 * l1
    return "real" if r2 > 0.0 else "complex"


@dataclass
class Check:
    """Outcome of one closed form over its grid."""

    name: str
    kind: str
    description: str
    n_points: int = 0
    max_abs: float = 0.0
    worst_at: list | None = None
    max_abs_real: float = 0.0
    max_abs_complex: float = 0.0
    n_divergent: int = 0
    divergence_mismatches: int = 0
    n_undefined: int = 0
    passed: bool = True
    samples: list = field(default_factory=list)

    @property
    def mismatch(self) -> bool:
        return self.max_abs > MISMATCH_TOL or self.divergence_mismatches > 0

    def record(self, at, value: float, oracle: float, br: str = "real") -> None:
        self.n_points += 1
        if math.isnan(value) or math.isnan(oracle):
            # the expression cannot be evaluated here (e.g. a zero denominator)
            self.n_undefined += 1
            if len(self.samples) < 5:
                self.samples.append([at, value, oracle, None])
            return
        if math.isinf(oracle) or math.isinf(value):
            self.n_divergent += 1
            if not (math.isinf(oracle) and math.isinf(value) and np.sign(oracle) == np.sign(value)):
                self.divergence_mismatches += 1
                if self.worst_at is None:
                    self.worst_at = [at, value, oracle]
            return
        d = abs(value - oracle)
        if not math.isfinite(d):
            d = math.inf
        if br == "real":
            self.max_abs_real = max(self.max_abs_real, d)
        else:
            self.max_abs_complex = max(self.max_abs_complex, d)
        if d >= self.max_abs:
            self.max_abs = d
            self.worst_at = [at, value, oracle]
        if d > MISMATCH_TOL and len(self.samples) < 5:
            self.samples.append([at, value, oracle, d])

    def finish(self) -> "Check":
        if self.kind == "implementation":
            self.passed = (self.max_abs < TOL and self.max_abs_real < TOL_REAL
                           and self.divergence_mismatches == 0 and self.n_undefined == 0)
        else:
            self.passed = True
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mismatch"] = self.mismatch
        return d


@dataclass
class VerifyReport:
    checks: list[Check]
    grid: int
    wall_time: float = 0.0

    @property
    def implementation_ok(self) -> bool:
        return all(c.passed for c in self.checks if c.kind == "implementation")

    @property
    def mismatches(self) -> list[Check]:
        return [c for c in self.checks if c.kind == "printed" and c.mismatch]

    def to_dict(self) -> dict:
        return {
            "version": __version__,
            "grid": self.grid,
            "tolerances": {"implementation": TOL, "implementation_real_branch": TOL_REAL,
                           "printed_mismatch": MISMATCH_TOL},
            "implementation_ok": self.implementation_ok,
            "printed_mismatches": [c.to_dict() for c in self.mismatches],
            "checks": [c.to_dict() for c in self.checks],
        }

    def write(self, path) -> None:
        Path(path).write_text(dumps(self.to_dict()) + "\n")


# ---------------------------------------------------------------- oracles
_U = Uniform()


def _oracle_value(est, divergent_expected: bool) -> float:
    """Quadrature value, or ``inf`` for a divergence confirmed by quadrature.

    A divergence predicted from the zero of ``g`` counts only if quadrature
    also fails: it reports divergence, does not converge or exceeds ``1e3``.
    """
    if divergent_expected:
        if est.divergent or not est.converged or est.value > 1e3:
            return math.inf
        log.warning("expected divergence but quadrature converged to %r", est.value)
    return float(est.value)


class _Oracle:
    """Quadrature values on the unit interval, cached per cell."""

    def __init__(self, spec: QuadratureSpec):
        self.spec = spec
        self.cache: dict = {}

    def _get(self, key, fn):
        if key not in self.cache:
            self.cache[key] = fn()
        return self.cache[key]

    def kl(self, which: str, l1: float, l2: float) -> float:
        _, n1, n2 = _KL_NAMES[which]
        p = CTParams(l1, l2)
        return self._get(("kl", which, l1, l2),
                         lambda: kl(component(n1, _U, p), component(n2, _U, p), _U, self.spec).value)

    def chi2(self, which: str, l1: float, l2: float) -> float:
        n1, n2 = _CHI2_NAMES[which]
        p = CTParams(l1, l2)

        def run():
            r = chi_square(component(n1, _U, p), component(n2, _U, p), _U, self.spec)
            num = {"a": None, "b": [1.0], "c": [0.0, 0.0, 0.0, 0.0, 9.0]}[which]
            div = num is not None and integral_diverges(l1, l2, num)
            return _oracle_value(r, div)
        return self._get(("chi2", which, l1, l2), run)

    def theta(self, l1: float, l2: float) -> float:
        return self._get(("theta", l1, l2), lambda: theta_quadrature((l1, l2), self.spec).value)

    def fisher(self, l1: float, l2: float) -> tuple[float, float, float]:
        """Raw quadrature of the score products, independent of the library's sentinels."""
        def run():
            s = (np.polynomial.Polynomial([1.0, -2.0]), np.polynomial.Polynomial([0.0, 2.0, -3.0]))
            out = []
            for a, b in ((0, 0), (0, 1), (1, 1)):
                num = s[a] * s[b]

                def integrand(u, num=num):
                    with np.errstate(divide="ignore", invalid="ignore"):
                        return num(u) / (l1 + u * (2.0 * (l2 - l1) + 3.0 * (1.0 - l2) * u))
                est = integrate_unit(integrand, self.spec)
                v = _oracle_value(est, integral_diverges(l1, l2, num.coef))
                if math.isinf(v):
                    # sign from the integrand next to the zero of g
                    probe = 1e-9 if integrand(np.array([1e-9]))[0] != 0 else 1 - 1e-9
                    v = math.copysign(math.inf, float(integrand(np.array([probe]))[0]))
                out.append(v)
            return tuple(out)
        return self._get(("fisher", l1, l2), run)

    def info_one_param(self, lam: float) -> float:
        h = np.polynomial.Polynomial([1.0, -4.0, 3.0])

        def run():
            def integrand(u):
                hu = h(u)
                return hu * hu / (1.0 + lam * hu)
            est = integrate_unit(integrand, self.spec)
            return _oracle_value(est, integral_diverges(1.0 + lam, 1.0 - lam, (h * h).coef))
        return self._get(("I", lam), run)


_KL_NAMES = {
    "a": (cf.kl_u_uct, "f", "ct"),
    "b": (cf.kl_uct_u, "ct", "f"),
    "c": (cf.kl_u23_uct, "f23", "ct"),
    "d": (cf.kl_uct_w, "ct", "fmax"),
    "e": (cf.kl_w_uct, "fmax", "ct"),
    "f": (cf.kl_u23_w, "f23", "fmax"),
    "g": (cf.kl_w_u, "fmax", "f"),
}
_CHI2_NAMES = {"a": ("ct", "f"), "b": ("f", "ct"), "c": ("fmax", "ct")}
_CHI2_IMPL = {"a": cf.chi2_uct_u, "b": cf.chi2_u_uct, "c": cf.chi2_w_uct}
_KL_PRINTED = {"a": printed.kl_a, "b": printed.kl_b, "c": printed.kl_c, "d": printed.kl_d, "e": printed.kl_e}
_CHI2_PRINTED = {"a": printed.chi2_a, "b": printed.chi2_b, "c": printed.chi2_c}


def _safe(fn, *args) -> float:
    try:
        v = float(fn(*args))
    except (ZeroDivisionError, ValueError, OverflowError, ArithmeticError):
        return math.nan
    return v


# ----------------------------------------------------------------- suites
def run_closed_form_suite(n: int = 21, spec: QuadratureSpec = DEFAULT_SPEC,
                          oracle: _Oracle | None = None) -> list[Check]:
    """Library closed forms against quadrature on the parameter grid."""
    oracle = oracle or _Oracle(spec)
    cells = parameter_grid(n)
    checks = []
    for w, (fn, _, _) in _KL_NAMES.items():
        c = Check(f"kl_{w}", "implementation", f"KL closed form ({w})")
        for l1, l2 in cells:
            c.record([l1, l2], _safe(fn, l1, l2), oracle.kl(w, l1, l2), branch(l1, l2))
        checks.append(c.finish())
    for w, fn in _CHI2_IMPL.items():
        c = Check(f"chi2_{w}", "implementation", f"chi-square closed form ({w})")
        for l1, l2 in cells:
            c.record([l1, l2], _safe(fn, l1, l2), oracle.chi2(w, l1, l2), branch(l1, l2))
        checks.append(c.finish())
    c = Check("theta", "implementation", "parameter-only entropy term theta")
    for l1, l2 in cells:
        c.record([l1, l2], _safe(cf.theta, l1, l2), oracle.theta(l1, l2), branch(l1, l2))
    checks.append(c.finish())
    names = ("i11", "i12", "i22")
    fchecks = [Check(f"fisher_{k}", "implementation", f"CT-uniform information entry {k}") for k in names]
    for l1, l2 in cells:
        try:
            vals = cf.fisher_ct_uniform(l1, l2)
        except ArithmeticError:
            vals = (math.nan,) * 3
        ref = oracle.fisher(l1, l2)
        for ch, v, r in zip(fchecks, vals, ref):
            ch.record([l1, l2], v, r, branch(l1, l2))
    checks.extend(ch.finish() for ch in fchecks)
    c = Check("fisher_one_param", "implementation", "one-parameter information I(lam)")
    for lam in lambda_grid(n):
        c.record([lam], _safe(cf.fisher_one_param, lam), oracle.info_one_param(lam),
                 branch(1.0 + lam, 1.0 - lam))
    checks.append(c.finish())
    return checks


def _subgrid(n: int) -> list[tuple[float, float]]:
    cells = parameter_grid(n)
    return [c for c in cells if c[0] not in (0.0, 0.5)]


def run_printed_suite(n: int = 21, spec: QuadratureSpec = DEFAULT_SPEC,
                      oracle: _Oracle | None = None, example_grid: int = 5) -> list[Check]:
    """Published expressions against quadrature.

    The parameter-only forms use the full grid; the worked examples, which
    need quadrature over heavier baselines, use an ``example_grid`` subgrid.
    """
    oracle = oracle or _Oracle(spec)
    cells = parameter_grid(n)
    sub = _subgrid(example_grid)
    checks = []

    for w, fn in _KL_PRINTED.items():
        c = Check(f"printed_kl_{w}", "printed", f"published KL closed form ({w})")
        for l1, l2 in cells:
            c.record([l1, l2], _safe(fn, l1, l2), oracle.kl(w, l1, l2), branch(l1, l2))
        checks.append(c.finish())
    for w, fn in _CHI2_PRINTED.items():
        c = Check(f"printed_chi2_{w}", "printed", f"published chi-square closed form ({w})")
        for l1, l2 in cells:
            c.record([l1, l2], _safe(fn, l1, l2), oracle.chi2(w, l1, l2), branch(l1, l2))
        checks.append(c.finish())
    c = Check("printed_theta", "printed", "published theta")
    for l1, l2 in cells:
        c.record([l1, l2], _safe(printed.theta, l1, l2), oracle.theta(l1, l2), branch(l1, l2))
    checks.append(c.finish())

    fchecks = [Check(f"printed_fisher_{k}", "printed", f"published CT-uniform information entry {k}")
               for k in ("i11", "i12", "i22")]
    for l1, l2 in cells:
        try:
            vals = printed.fisher_matrix(l1, l2)
        except (ZeroDivisionError, ValueError, ArithmeticError):
            vals = (math.nan,) * 3
        for ch, v, r in zip(fchecks, vals, oracle.fisher(l1, l2)):
            ch.record([l1, l2], v, r, branch(l1, l2))
    checks.extend(ch.finish() for ch in fchecks)

    c = Check("printed_fisher_one_param", "printed", "published closed form of I(lam)")
    for lam in lambda_grid(n):
        if lam == 0.0:
            continue
        c.record([lam], _safe(printed.fisher_one_param, lam), oracle.info_one_param(lam),
                 branch(1.0 + lam, 1.0 - lam))
    checks.append(c.finish())

    # mixture of f and f_max against the CT law, both directions
    for name, fn, direction in (("printed_kl_mix_ct", printed.kl_mix_a, "mix_ct"),
                                ("printed_kl_ct_mix", printed.kl_mix_b, "ct_mix")):
        c = Check(name, "printed", f"published KL between the f/f_max mixture and the CT law ({direction})")
        for v in (0.25, 0.5, 0.75):
            for l1, l2 in sub:
                ref = kl_mixture_ct(v, (l1, l2), direction, spec, method="quadrature").value
                c.record([v, l1, l2], _safe(fn, v, l1, l2), ref, branch(l1, l2))
        checks.append(c.finish())

    # worked entropy examples
    for name, base, fn, arg in (("printed_entropy_pareto", Pareto(2.0), printed.entropy_pareto, 2.0),
                                ("printed_entropy_exponential", Exponential(2.0),
                                 printed.entropy_exponential, 2.0)):
        c = Check(name, "printed", f"published CT entropy over the {base.name} baseline ({arg:g})")
        for l1, l2 in sub:
            ref = shannon_entropy(make_ct(base, (l1, l2)), base, spec).value
            c.record([arg, l1, l2], _safe(fn, arg, l1, l2), ref, branch(l1, l2))
        checks.append(c.finish())

    lams = (-0.7, -0.3, 0.3, 0.7)
    b = Exponential(1.0)
    c = Check("printed_quadratic_entropy", "printed",
              "published quadratic entropy identity read with the largest of three draws")
    for lam in lams:
        s = entropy_special_cases(lam, b, "quadratic", spec)
        h_max3 = shannon_entropy(component("fmax", b), b, spec).value
        rhs = ((1 + lam) * s.terms["H_f"] + printed.quadratic_entropy_weighted_term(lam, h_max3, s.terms["H_V"])
               + s.terms["H_gT"])
        c.record([lam], rhs, s.lhs)
    checks.append(c.finish())
    c = Check("printed_one_param_entropy", "printed", "published one-parameter entropy identity")
    for lam in lams:
        s = entropy_special_cases(lam, b, "one_param", spec)
        t = s.terms
        c.record([lam], printed.one_param_entropy(lam, t["H_f"], t["H_fmax"], t["H_F_weighted"], t["H_W"],
                                                  t["H_gstar"]), s.lhs)
    checks.append(c.finish())

    # Gini's mean difference
    pw = Power(2.0, 3.0)
    c = Check("printed_gmd_power", "printed", "published GMD over the power baseline (b=2, c=3)")
    for l1, l2 in cells:
        ref = gmd(make_ct(pw, (l1, l2)), pw, spec).value
        c.record([l1, l2], _safe(printed.gmd_power, 2.0, 3.0, l1, l2), ref, branch(l1, l2))
    checks.append(c.finish())

    c_rem = Check("printed_gmd_quadratic_remainder", "printed", "published R* of the quadratic case")
    c_q = Check("printed_gmd_quadratic", "printed", "published GMD of the quadratic case")
    c_1 = Check("printed_gmd_one_param", "printed", "published GMD of the one-parameter cubic")
    for base in (Exponential(1.0), Power(2.0, 3.0)):
        g_f = gmd(base, base, spec).value
        g_max = gmd(component("fmax", base), base, spec).value
        int_sq = r_star_poly([0.0, 0.0, 1.0, -2.0, 1.0], base, spec).value / 2.0
        int_w = r_star_poly([0.0, 1.0, 1.0, -2.0], base, spec).value / 2.0
        int_poly = lambda coefs, base=base: r_star_poly(coefs, base, spec).value / 2.0
        for lam in lams:
            dq = gmd_ct_decomposed(make_quadratic(base, lam), spec)
            c_rem.record([base.spec_string(), lam], printed.gmd_quadratic_remainder(lam, int_sq, int_w), dq.r_star)
            c_q.record([base.spec_string(), lam], printed.gmd_quadratic(lam, g_f, g_max, int_w), dq.total)
            d1 = gmd(make_one_param_cubic(base, lam), base, spec).value
            c_1.record([base.spec_string(), lam], printed.gmd_one_param(lam, g_f, g_max, int_poly), d1)
    checks.extend(x.finish() for x in (c_rem, c_q, c_1))

    c = Check("printed_ctg_weights", "printed", "published energy-distance weights of the CT GMD")
    for base in (Uniform(), Exponential(1.0)):
        for l1, l2 in sub:
            ct = make_ct(base, (l1, l2))
            c.record([base.spec_string(), l1, l2], ctg_via_energy(ct, spec).value, ctg(ct, spec).value,
                     branch(l1, l2))
    checks.append(c.finish())
    c = Check("printed_ctg_weights_one_param", "printed", "published one-parameter energy-distance weights")
    for lam in lams:
        if 1 + 2 * lam == 0:
            continue
        ct = make_one_param_cubic(Uniform(), lam)
        w = CtgWeights(*printed.ctg_weights_one_param(lam))
        c.record([lam], ctg_via_energy(ct, spec, w).value, ctg(ct, spec).value)
    checks.append(c.finish())

    c = Check("printed_cts_constant", "printed", "published constant of the CT Shannon entropy")
    for l1, l2 in sub:
        p = CTParams(l1, l2)
        d = ct_shannon_entropy(p, Uniform(), spec, "definition").value
        k = ct_shannon_entropy(p, Uniform(), spec, "kl").value - (math.log(3.0) - 1.0) * (l2 - l1)
        c.record([l1, l2], printed.cts_constant(l1, l2), d - k, branch(l1, l2))
    checks.append(c.finish())
    return checks


def _implementation_extras(spec: QuadratureSpec, example_grid: int = 5) -> list[Check]:
    """Library counterparts of the worked examples, against the same oracles."""
    sub = _subgrid(example_grid)
    checks = []
    for direction in ("mix_ct", "ct_mix"):
        c = Check(f"kl_mixture_{direction}", "implementation", f"mixture/CT KL closed form ({direction})")
        for v in (0.0, 0.25, 0.5, 0.75, 1.0):
            for l1, l2 in sub:
                cf_v = kl_mixture_ct(v, (l1, l2), direction).value
                ref = kl_mixture_ct(v, (l1, l2), direction, spec, method="quadrature").value
                c.record([v, l1, l2], cf_v, ref, branch(l1, l2))
        checks.append(c.finish())
    for base in (Pareto(2.0), Exponential(2.0)):
        c = Check(f"entropy_closed_form_{base.name}", "implementation",
                  f"CT entropy closed form over the {base.name} baseline")
        for l1, l2 in sub:
            ref = shannon_entropy(make_ct(base, (l1, l2)), base, spec).value
            c.record([l1, l2], ct_entropy_closed_form(base, (l1, l2)), ref, branch(l1, l2))
        checks.append(c.finish())
    pw = Power(2.0, 3.0)
    c = Check("gmd_power", "implementation", "GMD closed form over the power baseline (b=2, c=3)")
    for l1, l2 in parameter_grid(11):
        c.record([l1, l2], gmd_power_example(2.0, 3.0, (l1, l2)), gmd(make_ct(pw, (l1, l2)), pw, spec).value)
    checks.append(c.finish())
    c = Check("gmd_quadratic_r_star", "implementation", "reduced R* of the quadratic case")
    for lam in (-0.7, -0.3, 0.3, 0.7):
        b = Exponential(1.0)
        c.record([lam], r_star_quadratic(lam, b, spec).value, gmd_ct_decomposed(make_quadratic(b, lam), spec).r_star)
    checks.append(c.finish())
    c = Check("ctg_energy_mixture", "implementation", "exact energy-distance form of the CT GMD")
    for l1, l2 in sub:
        ct = make_ct(Exponential(1.0), (l1, l2))
        c.record([l1, l2], ctg_energy_mixture(ct, spec).value, ctg(ct, spec).value, branch(l1, l2))
    checks.append(c.finish())
    return checks


def verify(n: int = 21, spec: QuadratureSpec = DEFAULT_SPEC, suite: str = "all",
           out: str | Path | None = "erratum_report.json") -> VerifyReport:
    """Run the suites and optionally write the JSON report.

    ``suite`` is ``closed-forms`` (library closed forms only), ``printed``
    (published forms and the library counterparts of the worked examples)
    or ``all``.
    """
    if suite not in ("closed-forms", "printed", "all"):
        raise ValueError(f"unknown suite {suite!r}")
    t0 = time.perf_counter()
    oracle = _Oracle(spec)
    checks: list[Check] = []
    checks += run_closed_form_suite(n, spec, oracle)
    if suite in ("printed", "all"):
        checks += _implementation_extras(spec)
        checks += run_printed_suite(n, spec, oracle)
    report = VerifyReport(checks, n, time.perf_counter() - t0)
    if out is not None:
        report.write(out)
    return report
