import json
import math

from ctinfo.erratum import MISMATCH_TOL, Check, branch, parameter_grid, verify


def test_check_records():
    c = Check("x", "implementation", "demo")
    c.record([0.1, 0.2], 1.0, 1.0 + 1e-12)
    c.record([0.3, 0.4], math.inf, math.inf)
    c.record([0.5, 0.6], math.nan, 1.0)
    assert c.n_points == 3 and c.n_divergent == 1 and c.n_undefined == 1
    assert not c.finish().passed  # undefined points fail an implementation check
    assert not c.mismatch


def test_divergence_mismatch():
    c = Check("y", "printed", "demo")
    c.record([0, 0], 2.0, math.inf)
    assert c.divergence_mismatches == 1 and c.mismatch
    assert c.finish().passed  # printed checks are informational


def test_mismatch_threshold():
    c = Check("z", "printed", "demo")
    c.record([0, 0], 1.0, 1.0 + 2 * MISMATCH_TOL, "complex")
    assert c.mismatch and c.max_abs_complex > MISMATCH_TOL and c.max_abs_real == 0.0


def test_grid_and_branch():
    cells = parameter_grid(5)
    assert all(l2 != 1.0 for _, l2 in cells)
    assert (0.0, 0.0) in cells
    assert branch(0.5, 0.5) == "complex"
    assert branch(0.0, 1.0) == "real"


def test_small_verify(tmp_path):
    out = tmp_path / "r.json"
    rep = verify(5, suite="closed-forms", out=out)
    assert rep.implementation_ok
    assert all(c.kind == "implementation" for c in rep.checks)
    d = json.loads(out.read_text())
    assert d["grid"] == 5 and d["implementation_ok"] is True
