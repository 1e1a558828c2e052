"""Pure-NumPy reference implementations of the hot kernels.

The compiled module ``_ckernels`` implements the same functions with the
same signatures; :mod:`ctinfo._kernels` picks one at import time.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def select_order_stats(draws, t1: float, t2: float):
    """Pick min/median/max of ``draws[:, 1:4]`` by ``draws[:, 0]``.

    ``draws[:, 0] < t1`` selects the minimum, ``< t2`` the median and
    anything else the maximum.
    """
    draws = np.ascontiguousarray(draws, dtype=float)
    triple = np.sort(draws[:, 1:4], axis=1)
    v = draws[:, 0]
    idx = np.where(v < t1, 0, np.where(v < t2, 1, 2))
    return np.take_along_axis(triple, idx[:, None], axis=1)[:, 0]


def ct_uniform_nll(x, l1: float, l2: float) -> float:
    """Negative log-likelihood of CT-uniform data; ``inf`` if ``g <= 0``."""
    x = np.asarray(x, dtype=float)
    g = l1 + x * (2.0 * (l2 - l1) + 3.0 * (1.0 - l2) * x)
    if np.any(g <= 0.0):
        return np.inf
    return -float(np.sum(np.log(g)))


def ctw_nll(x, l1: float, l2: float, k: float) -> float:
    """Negative log-likelihood of the CT-Weibull (unit scale, shape ``k``)."""
    x = np.asarray(x, dtype=float)
    if k <= 0.0 or np.any(x <= 0.0):
        return np.inf
    xk = x**k
    u = -np.expm1(-xk)
    g = l1 + u * (2.0 * (l2 - l1) + 3.0 * (1.0 - l2) * u)
    if np.any(g <= 0.0):
        return np.inf
    return -float(np.sum(np.log(k) + (k - 1.0) * np.log(x) - xk + np.log(g)))


def histogram_counts(u, bins: int):
    """Counts of ``u`` in ``bins`` equal cells of ``[0, 1]``; out-of-range values are clipped."""
    u = np.asarray(u, dtype=float)
    idx = np.clip((u * bins).astype(np.int64), 0, bins - 1)
    return np.bincount(idx, minlength=bins).astype(np.int64)
