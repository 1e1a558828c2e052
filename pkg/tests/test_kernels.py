import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctinfo import _pykernels
from ctinfo._kernels import available_backends, backend, set_backend

needs_c = pytest.mark.skipif("cython" not in available_backends(), reason="extension not built")


@pytest.fixture(scope="module")
def ck():
    from ctinfo import _ckernels
    return _ckernels


@needs_c
def test_backends_agree(ck):
    rng = np.random.default_rng(3)
    draws = rng.random((5000, 4))
    assert np.array_equal(ck.select_order_stats(draws, 0.2, 0.7), _pykernels.select_order_stats(draws, 0.2, 0.7))
    u = rng.random(5000)
    assert np.array_equal(ck.histogram_counts(u, 20), _pykernels.histogram_counts(u, 20))
    for l1, l2 in [(0.4, 0.6), (0.9, -0.5), (0.0, 0.0)]:
        assert ck.ct_uniform_nll(u, l1, l2) == pytest.approx(_pykernels.ct_uniform_nll(u, l1, l2), rel=1e-12)
    x = rng.weibull(1.5, 5000)
    assert ck.ctw_nll(x, 0.4, 0.6, 1.5) == pytest.approx(_pykernels.ctw_nll(x, 0.4, 0.6, 1.5), rel=1e-12)


@needs_c
def test_invalid_density_is_inf(ck):
    u = np.array([0.1, 0.5, 0.9])
    for mod in (ck, _pykernels):
        assert mod.ct_uniform_nll(u, 0.5, -1.0) == pytest.approx(_pykernels.ct_uniform_nll(u, 0.5, -1.0))
        assert mod.ctw_nll(np.array([-1.0, 1.0]), 0.5, 0.5, 1.0) == np.inf


@needs_c
@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(1e-6, 1 - 1e-6), min_size=1, max_size=300),
       st.floats(0.0, 1.0), st.floats(-1.0, 1.0))
def test_nll_agrees_hypothesis(ck, xs, l1, l2):
    x = np.array(xs)
    a, b = ck.ct_uniform_nll(x, l1, l2), _pykernels.ct_uniform_nll(x, l1, l2)
    if np.isfinite(b):
        assert a == pytest.approx(b, rel=1e-10, abs=1e-10)
    else:
        assert a == b


def test_select_order_stats_picks_components():
    draws = np.array([[0.1, 0.3, 0.2, 0.9], [0.5, 0.3, 0.2, 0.9], [0.95, 0.3, 0.2, 0.9]])
    assert np.array_equal(_pykernels.select_order_stats(draws, 0.2, 0.7), [0.2, 0.3, 0.9])


def test_set_backend_round_trip():
    prev = set_backend("python")
    try:
        assert backend() is _pykernels
    finally:
        set_backend("cython" if prev is not _pykernels else "python")
    with pytest.raises(ValueError):
        set_backend("fortran")


def test_pure_python_env():
    env = dict(os.environ, CTINFO_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from ctinfo._kernels import backend; print(backend().__name__)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "ctinfo._pykernels"
