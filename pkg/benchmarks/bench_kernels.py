"""Time the compiled kernels against the NumPy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 7]

Each kernel is run on identical inputs under both backends; the outputs are
compared before timing so a speedup is never reported for a wrong answer.
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from ctinfo import _kernels, _pykernels


def cases(n: int, seed: int):
    rng = np.random.default_rng(seed)
    draws = rng.random((n, 4))
    u = rng.random(n)
    x = rng.weibull(1.5, n)
    return {
        "select_order_stats": (draws, 0.3, 0.7),
        "ct_uniform_nll": (u, 0.4, 0.6),
        "ctw_nll": (x, 0.4, 0.6, 1.5),
        "histogram_counts": (u, 20),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if "cython" not in _kernels.available_backends():
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    from ctinfo import _ckernels

    print(f"n={args.n} repeat={args.repeat} (best of repeat, milliseconds)")
    print(f"{'kernel':<20} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, inputs in cases(args.n, args.seed).items():
        py, cy = getattr(_pykernels, name), getattr(_ckernels, name)
        a, b = py(*inputs), cy(*inputs)
        if not np.allclose(a, b, rtol=1e-12, atol=0.0):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        t_py = min(timeit.repeat(lambda: py(*inputs), number=1, repeat=args.repeat))
        t_cy = min(timeit.repeat(lambda: cy(*inputs), number=1, repeat=args.repeat))
        print(f"{name:<20} {1e3 * t_py:>10.3f} {1e3 * t_cy:>10.3f} {t_py / t_cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
