"""Simulation campaigns: KL-based component selection and CI studies.

Every replication draws from its own stream,
``np.random.SeedSequence([seed, n, rep])``, so results do not depend on the
order or the process in which replications run. Reports contain no timing
data and are byte-identical for identical configurations.

A campaign with a ``checkpoint`` path appends each finished row to a JSON
Lines file keyed by the configuration; rerunning the same configuration
reuses those rows and computes only the missing ones.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
import scipy

from . import __version__
from ._jsonio import dumps
from ._kernels import backend
from .baselines import Uniform, Weibull
from .ct_model import CTParams, MixingProbs, make_ct, sample_ct
from .fisher_inference import FitFailedError, MODELS, _resolve_model, mle_fit

__all__ = [
    "SimulationConfig",
    "SimulationReport",
    "TABLE1_MIXES",
    "component_bin_masses",
    "histogram_kl",
    "run_kl_selection",
    "run_ci_study",
    "run",
    "KL_COLUMNS",
    "CI_COLUMNS",
]

log = logging.getLogger(__name__)

KL_COLUMNS = ["mix1", "mix2", "mix3", "n", "KL1", "KL2", "KL3", "prop1", "prop2", "prop3"]
CI_COLUMNS = ["param", "n", "level", "avg_lo", "avg_hi", "avg_width", "coverage", "fits", "failures"]

# mixes and sizes of the reference selection campaign
TABLE1_MIXES: tuple[tuple[tuple[float, float, float], tuple[int, ...]], ...] = (
    ((0.9, 0.05, 0.05), (150, 300, 500)),
    ((0.05, 0.9, 0.05), (150, 300, 500)),
    ((0.05, 0.05, 0.9), (150, 300, 500)),
    ((0.9, 0.075, 0.025), (150, 300, 500)),
    ((0.075, 0.9, 0.025), (150, 300, 500)),
    ((0.1, 0.8, 0.1), (250, 300, 500)),
)


@dataclass(frozen=True)
class SimulationConfig:
    """One campaign.

    ``kl_selection`` needs ``mix``; ``ci_study`` needs ``model`` and
    ``true_params`` (``l1``, ``l2`` and, for ``ct_weibull``, ``k``).
    """

    study: Literal["kl_selection", "ci_study"]
    n_list: tuple[int, ...]
    replications: int = 500
    seed: int = 42
    mix: tuple[float, float, float] | None = None
    model: str | None = None
    true_params: dict[str, float] | None = None
    levels: tuple[float, ...] = (0.90, 0.95)
    bins: int = 20
    smoothing: float = 0.5
    workers: int = 1
    output_path: str | None = None
    checkpoint: str | None = None

    def __post_init__(self):
        if self.study not in ("kl_selection", "ci_study"):
            raise ValueError(f"unknown study {self.study!r}")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list or any(n < 1 for n in n_list):
            raise ValueError("n_list must be a nonempty list of positive sizes")
        object.__setattr__(self, "n_list", n_list)
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        if self.bins < 1 or self.smoothing < 0:
            raise ValueError("bins must be positive and smoothing nonnegative")
        if self.study == "kl_selection":
            if self.mix is None:
                raise ValueError("kl_selection needs mixing probabilities")
            MixingProbs(*self.mix)
            object.__setattr__(self, "mix", tuple(float(v) for v in self.mix))
        else:
            if self.model is None or self.true_params is None:
                raise ValueError("ci_study needs a model and true parameters")
            model = _resolve_model(self.model)
            object.__setattr__(self, "model", model)
            names = MODELS[model].names
            missing = [k for k in names if k not in self.true_params]
            if missing:
                raise ValueError(f"true_params missing {missing}")
            CTParams(self.true_params["l1"], self.true_params["l2"], strict=True)
            if model == "ct_uniform" and any(n < 30 for n in n_list):
                raise ValueError("ci_study needs n >= 30")

    def key(self, per_n: bool = False) -> str:
        """Hash of everything that affects the results.

        With ``per_n`` the size list is left out: a row for one ``n`` does not
        depend on the other sizes, so checkpoints carry over between runs.
        """
        d = asdict(self)
        for k in ("workers", "output_path", "checkpoint") + (("n_list",) if per_n else ()):
            d.pop(k)
        blob = json.dumps(d, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


@dataclass
class SimulationReport:
    """Rows plus metadata. ``wall_time`` is kept out of the serialized output."""

    study: str
    columns: list[str]
    rows: list[dict]
    metadata: dict
    wall_time: float = field(default=0.0, compare=False)

    def to_csv(self, stream=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(r[c]) for c in self.columns])
        text = buf.getvalue()
        if stream is not None:
            stream.write(text)
        return text

    def to_json(self) -> str:
        return dumps({"study": self.study, "columns": self.columns, "rows": self.rows,
                      "metadata": dict(sorted(self.metadata.items()))})

    def write(self, path: str | Path) -> None:
        path = Path(path)
        text = self.to_json() if path.suffix == ".json" else self.to_csv()
        path.write_text(text)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"not serializable: {type(o)}")


def _metadata(cfg: SimulationConfig, extra: dict | None = None) -> dict:
    meta = {"seed": cfg.seed, "replications": cfg.replications, "config_key": cfg.key(),
            "versions": {"ctinfo": __version__, "numpy": np.__version__, "scipy": scipy.__version__}}
    meta.update(extra or {})
    return meta


def _rng(seed: int, n: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, n, rep]))


# ------------------------------------------------------------ checkpoints
def _load_checkpoint(cfg: SimulationConfig) -> dict[int, list[dict]]:
    if not cfg.checkpoint or not Path(cfg.checkpoint).exists():
        return {}
    done: dict[int, list[dict]] = {}
    key = cfg.key(per_n=True)
    for line in Path(cfg.checkpoint).read_text().splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec.get("key") == key:
            done[int(rec["n"])] = rec["rows"]
    return done


def _save_checkpoint(cfg: SimulationConfig, n: int, rows: list[dict]) -> None:
    if not cfg.checkpoint:
        return
    with open(cfg.checkpoint, "a") as fh:
        fh.write(json.dumps({"key": cfg.key(per_n=True), "n": n, "rows": rows}, default=_json_default) + "\n")


def _map(fn, args: list, workers: int) -> list:
    if workers <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, args, chunksize=max(1, len(args) // (4 * workers))))


# ------------------------------------------------------------ KL selection
def component_bin_masses(bins: int) -> np.ndarray:
    """Masses of the min, median and max of a uniform triple in ``bins`` equal cells.

    Shape ``(3, bins)``.
    """
    e = np.linspace(0.0, 1.0, bins + 1)
    cdfs = (1.0 - (1.0 - e) ** 3, 3.0 * e**2 - 2.0 * e**3, e**3)
    return np.array([np.diff(c) for c in cdfs])


def histogram_kl(u, bins: int = 20, smoothing: float = 0.5) -> np.ndarray:
    """Plug-in ``KL(sample, component)`` for the three order-statistic components.

    The sample density is the histogram on ``bins`` equal cells of ``[0, 1]``
    with ``smoothing`` added to every count; the components enter through
    their exact cell masses.
    """
    u = np.asarray(u, dtype=float)
    counts = backend().histogram_counts(u, bins).astype(float)
    p = (counts + smoothing) / (u.size + bins * smoothing)
    q = component_bin_masses(bins)
    with np.errstate(divide="ignore"):
        return np.sum(np.where(p > 0.0, p * (np.log(p) - np.log(q)), 0.0), axis=1)


def _kl_rep(args) -> np.ndarray:
    mix, n, rep, seed, bins, smoothing = args
    u = sample_ct(MixingProbs(*mix), Uniform(), n, _rng(seed, n, rep))
    return histogram_kl(u, bins, smoothing)


def run_kl_selection(cfg: SimulationConfig) -> SimulationReport:
    """Mean histogram KL to each component and how often each one is closest.

    Ties go to the lower-index component.
    """
    if cfg.study != "kl_selection":
        raise ValueError("config is not a kl_selection study")
    t0 = time.perf_counter()
    done = _load_checkpoint(cfg)
    rows = []
    for n in cfg.n_list:
        if n in done:
            rows.extend(done[n])
            continue
        args = [(cfg.mix, n, rep, cfg.seed, cfg.bins, cfg.smoothing) for rep in range(cfg.replications)]
        kls = np.array(_map(_kl_rep, args, cfg.workers))
        winners = np.argmin(kls, axis=1)
        props = np.bincount(winners, minlength=3) / cfg.replications
        mean = kls.mean(axis=0)
        row = {"mix1": cfg.mix[0], "mix2": cfg.mix[1], "mix3": cfg.mix[2], "n": n,
               "KL1": float(mean[0]), "KL2": float(mean[1]), "KL3": float(mean[2]),
               "prop1": float(props[0]), "prop2": float(props[1]), "prop3": float(props[2])}
        _save_checkpoint(cfg, n, [row])
        rows.append(row)
    meta = _metadata(cfg, {"estimator": "histogram", "bins": cfg.bins, "smoothing": cfg.smoothing})
    report = SimulationReport("kl_selection", list(KL_COLUMNS), rows, meta, time.perf_counter() - t0)
    if cfg.output_path:
        report.write(cfg.output_path)
    return report


# --------------------------------------------------------------- CI study
def _ci_rep(args):
    model, truth, n, rep, seed, levels = args
    rng = _rng(seed, n, rep)
    base = Uniform() if model == "ct_uniform" else Weibull(truth["k"])
    x = make_ct(base, (truth["l1"], truth["l2"])).sample(n, rng)
    try:
        fit = mle_fit(x, model, init=truth, levels=levels)
    except (FitFailedError, ValueError) as exc:
        return None, str(exc)
    if not fit.ci_available:
        return None, "singular information matrix"
    return {lvl: {k: v for k, v in per.items()} for lvl, per in fit.ci.items()}, None


def run_ci_study(cfg: SimulationConfig) -> SimulationReport:
    """Average interval endpoints, width and empirical coverage per parameter, n and level.

    Each row reports one interval per configuration: the average of the
    per-replication endpoints. Failed fits are excluded and
    counted.
    """
    if cfg.study != "ci_study":
        raise ValueError("config is not a ci_study")
    t0 = time.perf_counter()
    names = MODELS[cfg.model].names
    truth = {k: float(cfg.true_params[k]) for k in names}
    done = _load_checkpoint(cfg)
    rows = []
    failures_total = 0
    for n in cfg.n_list:
        if n in done:
            rows.extend(done[n])
            failures_total += done[n][0]["failures"] if done[n] else 0
            continue
        args = [(cfg.model, truth, n, rep, cfg.seed, cfg.levels) for rep in range(cfg.replications)]
        results = _map(_ci_rep, args, cfg.workers)
        ok = [r for r, _ in results if r is not None]
        failures = len(results) - len(ok)
        failures_total += failures
        for err in {e for _, e in results if e is not None}:
            log.warning("n=%d: fit failure: %s", n, err)
        n_rows = []
        for lvl in cfg.levels:
            for name in names:
                if ok:
                    lo = np.array([r[lvl][name][0] for r in ok])
                    hi = np.array([r[lvl][name][1] for r in ok])
                    cover = float(np.mean((lo <= truth[name]) & (truth[name] <= hi)))
                    avg_lo, avg_hi, width = float(lo.mean()), float(hi.mean()), float((hi - lo).mean())
                else:
                    avg_lo = avg_hi = width = cover = math.nan
                n_rows.append({"param": name, "n": n, "level": lvl, "avg_lo": avg_lo, "avg_hi": avg_hi,
                               "avg_width": width, "coverage": cover, "fits": len(ok), "failures": failures})
        _save_checkpoint(cfg, n, n_rows)
        rows.extend(n_rows)
    total = cfg.replications * len(cfg.n_list)
    meta = _metadata(cfg, {"model": cfg.model, "true_params": truth, "levels": list(cfg.levels),
                           "failure_rate": failures_total / total,
                           "endpoint_summary": "mean over replications"})
    report = SimulationReport("ci_study", list(CI_COLUMNS), rows, meta, time.perf_counter() - t0)
    if cfg.output_path:
        report.write(cfg.output_path)
    return report


def run(cfg: SimulationConfig) -> SimulationReport:
    """Dispatch on ``cfg.study``."""
    return run_kl_selection(cfg) if cfg.study == "kl_selection" else run_ci_study(cfg)
