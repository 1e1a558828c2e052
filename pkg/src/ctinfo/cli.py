"""``ctinfo`` command-line interface.

Data goes to stdout (one JSON document, a CSV table with a header row, or
an aligned text table); diagnostics go to stderr. Exit codes: 0 success,
1 usage error, 2 numerical non-convergence. Floats are written with 17
significant digits; non-finite values become the strings ``"inf"``,
``"-inf"`` and ``"nan"`` so that the JSON stays valid.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._jsonio import _num, dumps
from .ct_model import InvalidParametersError
from .divergences import chi_square, jeffreys, kl, kl_closed_forms, chi_square_closed_forms, symmetric_chi_square
from .entropy import ct_entropy_decomposed, ct_shannon_entropy, shannon_entropy
from .erratum import verify
from .fisher_inference import FitFailedError, fisher_matrix, fisher_one_param, mle_fit
from .gini import InfiniteMeanError, ctg, ctg_energy_mixture, ctg_via_energy, gmd, gmd_ct_decomposed
from .parsing import DistSpecError, parse_dist, parse_floats, parse_kv
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .roots import DegenerateParametersError
from .sim_harness import TABLE1_MIXES, SimulationConfig, SimulationReport, run_ci_study, run_kl_selection

__all__ = ["main", "build_parser", "dumps"]

log = logging.getLogger("ctinfo")

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2


class UsageError(Exception):
    pass


# ----------------------------------------------------------------- output
def _flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += _flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, (list, tuple)) and obj and isinstance(obj[0], (dict, list, tuple)):
        out = []
        for i, v in enumerate(obj):
            out += _flatten(v, f"{prefix}[{i}]")
        return out
    return [(prefix, obj)]


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return _num(float(v)).strip('"')
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return "" if v is None else str(v)


def _emit(result, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if isinstance(result, SimulationReport):
        if fmt == "json":
            out.write(result.to_json() + "\n")
        elif fmt == "csv":
            result.to_csv(out)
        else:
            rows = [[_cell(r[c]) for c in result.columns] for r in result.rows]
            _table(result.columns, rows, out)
        return
    if fmt == "json":
        out.write(dumps(result) + "\n")
        return
    pairs = _flatten(result)
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in pairs:
            w.writerow([k, _cell(v)])
    else:
        _table(["key", "value"], [[k, _cell(v)] for k, v in pairs], out)


def _table(header, rows, out) -> None:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
    out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)) + "\n")
    for r in rows:
        out.write("  ".join(str(x).ljust(w) for x, w in zip(r, widths)) + "\n")


def _est(e, **extra) -> dict:
    d = {"value": float(e.value), "error_bound": float(e.error_bound), "converged": bool(e.converged)}
    if getattr(e, "divergent", False):
        d["divergent"] = True
    d.update(extra)
    return d


# --------------------------------------------------------------- commands
def _spec(args) -> QuadratureSpec:
    return QuadratureSpec(abs_tol=args.abs_tol, rel_tol=args.rel_tol)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CTINFO_SEED")
    if env is None:
        return 42
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CTINFO_SEED must be an integer, got {env!r}")


def cmd_entropy(args):
    d = parse_dist(args.dist)
    spec = _spec(args)
    if args.ct_shannon:
        if not d.is_ct:
            raise UsageError("--ct-shannon needs a ct, ct1 or qt distribution")
        e = ct_shannon_entropy(d.dist.params, d.baseline, spec, args.method)
        return _est(e, measure="ct_shannon_entropy", method=args.method, dist=d.text), e.converged
    if args.decompose:
        if not d.is_ct:
            raise UsageError("--decompose needs a ct, ct1 or qt distribution")
        dec = ct_entropy_decomposed(d.dist, spec)
        res = dec.to_dict()
        res.update(measure="shannon_entropy_decomposition", dist=d.text, discrepancy=dec.discrepancy)
        return res, dec.converged
    e = shannon_entropy(d.dist, d.baseline, spec)
    return _est(e, measure="shannon_entropy", dist=d.text), e.converged


_MEASURES = {"kl": kl, "jeffreys": jeffreys, "chi2": chi_square, "symchi2": symmetric_chi_square}


def cmd_divergence(args):
    spec = _spec(args)
    if args.closed_form:
        if args.params is None:
            raise UsageError("--closed-form needs --params l1=..,l2=..")
        kv = parse_kv(args.params, args.params, 0, ("l1", "l2"))
        table = kl_closed_forms if args.kind == "kl" else chi_square_closed_forms
        if args.kind not in ("kl", "chi2"):
            raise UsageError("closed forms exist for --kind kl and chi2 only")
        r = table(args.closed_form, (kv["l1"], kv["l2"]), spec)
        res = r.to_dict()
        res.update(kind=args.kind, form=args.closed_form, params=kv)
        return res, r.converged
    if args.source is None or args.target is None:
        raise UsageError("divergence needs --from and --to (or --closed-form)")
    a, b = parse_dist(args.source), parse_dist(args.target)
    if a.baseline != b.baseline:
        raise UsageError(f"--from and --to must share a baseline ({a.baseline.spec_string()} vs "
                         f"{b.baseline.spec_string()})")
    r = _MEASURES[args.kind](a.dist, b.dist, a.baseline, spec)
    res = r.to_dict()
    res.update(kind=args.kind, source=a.text, target=b.text)
    return res, r.converged


def cmd_gini(args):
    d = parse_dist(args.dist)
    spec = _spec(args)
    if args.decompose or args.ctg:
        if not d.is_ct:
            raise UsageError("--decompose and --ctg need a ct, ct1 or qt distribution")
    if args.decompose:
        dec = gmd_ct_decomposed(d.dist, spec)
        res = dec.to_dict()
        res.update(measure="gmd_decomposition", dist=d.text, discrepancy=dec.discrepancy)
        return res, dec.converged
    if args.ctg:
        direct = ctg(d.dist, spec)
        mix = ctg_energy_mixture(d.dist, spec)
        res = {"measure": "ctg", "dist": d.text, "value": direct.value, "error_bound": direct.error_bound,
               "converged": direct.converged, "energy_mixture_form": mix.value}
        try:
            res["energy_published_weights"] = ctg_via_energy(d.dist, spec).value
        except ZeroDivisionError as exc:
            res["energy_published_weights"] = None
            log.warning("%s", exc)
        return res, direct.converged and mix.converged
    e = gmd(d.dist, d.baseline, spec)
    return _est(e, measure="gmd", dist=d.text), e.converged


def cmd_fisher(args):
    spec = _spec(args)
    if args.one_param is not None:
        v = fisher_one_param(args.one_param, spec, args.method if args.method != "quadrature" else "score")
        return {"measure": "fisher_one_param", "lam": args.one_param, "value": v}, True
    if args.dist is None:
        raise UsageError("fisher needs --dist or --one-param")
    d = parse_dist(args.dist)
    if not d.is_ct:
        raise UsageError("fisher needs a ct, ct1 or qt distribution")
    method = "closed_form" if args.method == "closed_form" else "quadrature"
    fm = fisher_matrix(d.dist, spec, method)
    res = fm.to_dict()
    res.update(dist=d.text, psd=fm.is_psd())
    return res, True


def _read_data(path: str) -> np.ndarray:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    vals = []
    for i, row in enumerate(csv.reader(io.StringIO(text))):
        if not row or not row[0].strip():
            continue
        try:
            vals.append(float(row[0]))
        except ValueError:
            if i == 0:
                continue  # header
            raise UsageError(f"{path}: line {i + 1}: not a number: {row[0]!r}")
    return np.array(vals)


def cmd_fit(args):
    x = _read_data(args.data)
    levels = parse_floats(args.level, "level")
    init = parse_kv(args.init, args.init, 0) if args.init else None
    try:
        fit = mle_fit(x, args.model, init=init, levels=levels)
    except FitFailedError as exc:
        log.error("fit failed: %s", exc)
        for t in exc.trace:
            log.error("  %s", t)
        return {"error": "fit_failed", "trace": exc.trace}, False
    res = fit.to_dict()
    return res, fit.ci_available


def cmd_sample(args):
    d = parse_dist(args.dist)
    x = d.dist.sample(args.n, _seed(args))
    if args.format == "json":
        return {"dist": d.text, "n": args.n, "seed": _seed(args), "x": [float(v) for v in x]}, True
    buf = ["x"] + [f"{float(v):.17g}" for v in x]
    return "\n".join(buf) + "\n", True


def cmd_simulate(args):
    seed = _seed(args)
    ns = [int(v) for v in parse_floats(args.n, "n")] if args.n else None
    if args.study == "table1":
        mixes = [(tuple(parse_floats(args.mix, "mix")), tuple(ns or (150, 300, 500)))] if args.mix else [
            (m, tuple(ns) if ns else n_list) for m, n_list in TABLE1_MIXES]
        rows, meta = [], None
        for mix, n_list in mixes:
            if len(mix) != 3:
                raise UsageError("--mix needs three probabilities")
            cfg = SimulationConfig("kl_selection", n_list, args.reps, seed, mix=mix, bins=args.bins,
                                   smoothing=args.smoothing, workers=args.workers, checkpoint=args.checkpoint)
            rep = run_kl_selection(cfg)
            rows += rep.rows
            meta = rep.metadata
            log.info("mix %s: %.1f s", mix, rep.wall_time)
        report = SimulationReport("kl_selection", rep.columns, rows, meta)
    else:
        if args.model is None or args.params is None:
            raise UsageError("simulate ci needs --model and --params")
        tp = parse_kv(args.params, args.params, 0)
        cfg = SimulationConfig("ci_study", tuple(ns or (150, 300, 500)), args.reps, seed, model=args.model,
                               true_params=tp, levels=tuple(parse_floats(args.level, "level")),
                               workers=args.workers, checkpoint=args.checkpoint)
        report = run_ci_study(cfg)
        log.info("ci study: %.1f s", report.wall_time)
    if args.out:
        report.write(args.out)
        log.info("wrote %s", args.out)
    return report, True


def cmd_verify(args):
    report = verify(args.grid, _spec(args), args.suite, args.out)
    summary = {
        "implementation_ok": report.implementation_ok,
        "grid": args.grid,
        "suite": args.suite,
        "report": args.out,
        "failed_checks": [c.name for c in report.checks if not c.passed],
        "printed_mismatches": [{"name": c.name, "max_abs": c.max_abs, "worst_at": c.worst_at,
                                "divergence_mismatches": c.divergence_mismatches}
                               for c in report.mismatches],
    }
    log.info("verify finished in %.1f s", report.wall_time)
    if not report.implementation_ok:
        log.error("closed forms disagree with quadrature: %s", summary["failed_checks"])
    return summary, report.implementation_ok


# ----------------------------------------------------------------- parser
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--abs-tol", type=float, default=DEFAULT_SPEC.abs_tol, help="quadrature absolute tolerance")
    common.add_argument("--rel-tol", type=float, default=DEFAULT_SPEC.rel_tol, help="quadrature relative tolerance")
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $CTINFO_SEED or 42)")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = _Parser(prog="ctinfo", description="Information measures of cubic transmuted distributions.")
    p.add_argument("--version", action="version", version=f"ctinfo {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("entropy", parents=[common], help="Shannon or CT Shannon entropy")
    s.add_argument("--dist", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--decompose", action="store_true")
    g.add_argument("--ct-shannon", action="store_true")
    s.add_argument("--method", choices=("definition", "kl", "closed_form"), default="definition")
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("divergence", parents=[common], help="KL, Jeffreys, chi-square, symmetric chi-square")
    s.add_argument("--kind", choices=tuple(_MEASURES), default="kl")
    s.add_argument("--from", dest="source")
    s.add_argument("--to", dest="target")
    s.add_argument("--closed-form", choices=("a", "b", "c", "d", "e", "f", "g"))
    s.add_argument("--params", help="l1=..,l2=.. for --closed-form")
    s.set_defaults(func=cmd_divergence)

    s = sub.add_parser("gini", parents=[common], help="Gini's mean difference and CT Gini")
    s.add_argument("--dist", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--decompose", action="store_true")
    g.add_argument("--ctg", action="store_true")
    s.set_defaults(func=cmd_gini)

    s = sub.add_parser("fisher", parents=[common], help="Fisher information")
    s.add_argument("--dist")
    s.add_argument("--one-param", type=float, metavar="LAM")
    s.add_argument("--method", choices=("quadrature", "closed_form", "identity", "score"), default="quadrature")
    s.set_defaults(func=cmd_fisher)

    s = sub.add_parser("fit", parents=[common], help="maximum likelihood with Fisher intervals")
    s.add_argument("--model", choices=("ctu", "ctw", "ct_uniform", "ct_weibull"), default="ctu")
    s.add_argument("--data", required=True, help="CSV file (first column) or - for stdin")
    s.add_argument("--level", default="0.90,0.95")
    s.add_argument("--init", help="starting values, e.g. l1=0.5,l2=0.5,k=1")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("sample", parents=[common], help="draw variates")
    s.add_argument("--dist", required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("simulate", parents=[common], help="simulation campaigns")
    s.add_argument("study", choices=("table1", "ci"))
    s.add_argument("--mix")
    s.add_argument("--n")
    s.add_argument("--reps", type=int, default=500)
    s.add_argument("--model", choices=("ctu", "ctw", "ct_uniform", "ct_weibull"))
    s.add_argument("--params")
    s.add_argument("--level", default="0.90,0.95")
    s.add_argument("--bins", type=int, default=20)
    s.add_argument("--smoothing", type=float, default=0.5)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--checkpoint")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("verify", parents=[common], help="closed forms and published forms against quadrature")
    s.add_argument("--suite", choices=("closed-forms", "printed", "all"), default="all")
    s.add_argument("--grid", type=int, default=21)
    s.add_argument("--out", default="erratum_report.json")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="ctinfo: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.INFO)
        if args.abs_tol <= 0 or args.rel_tol <= 0:
            raise UsageError("tolerances must be positive")
        result, ok = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DistSpecError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidParametersError, DegenerateParametersError, InfiniteMeanError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        _emit(result, args.format)
    if not ok:
        print("numerical result did not converge to the requested tolerance", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
