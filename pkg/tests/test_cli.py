import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ctinfo import CTParams, Uniform, make_ct
from ctinfo.cli import main


def run(argv, capsys):
    rc = main(argv)
    out, err = capsys.readouterr()
    return rc, out, err


def test_kl_beta31(capsys):
    rc, out, _ = run(["divergence", "--kind", "kl", "--from", "beta31", "--to", "uniform"], capsys)
    assert rc == 0
    assert json.loads(out)["value"] == pytest.approx(math.log(3) - 2 / 3, abs=1e-10)


def test_closed_form_divergence(capsys):
    rc, out, _ = run(["divergence", "--closed-form", "a", "--params", "l1=0.4,l2=0.6"], capsys)
    assert rc == 0
    d = json.loads(out)
    assert d["method"] == "closed_form" and d["value"] > 0


def test_entropy_ct_uniform_zero(capsys):
    rc, out, _ = run(["entropy", "--dist", "ct:l1=1,l2=1@uniform"], capsys)
    assert rc == 0
    assert abs(json.loads(out)["value"]) < 1e-10


def test_csv_format(capsys):
    rc, out, _ = run(["gini", "--dist", "uniform", "--format", "csv"], capsys)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "key,value"
    assert float(dict(l.split(",", 1) for l in lines[1:])["value"]) == pytest.approx(1 / 3)


def test_table_format(capsys):
    rc, out, _ = run(["fisher", "--one-param", "0.5", "--format", "table"], capsys)
    assert rc == 0 and "value" in out


def test_sample_seeded(capsys):
    a = run(["sample", "--dist", "ct:l1=0.4,l2=0.6", "--n", "5", "--seed", "9"], capsys)[1]
    b = run(["sample", "--dist", "ct:l1=0.4,l2=0.6", "--n", "5", "--seed", "9"], capsys)[1]
    assert a == b and len(json.loads(a)["x"]) == 5


def test_seed_from_env(capsys, monkeypatch):
    monkeypatch.setenv("CTINFO_SEED", "9")
    a = run(["sample", "--dist", "uniform", "--n", "3"], capsys)[1]
    b = run(["sample", "--dist", "uniform", "--n", "3", "--seed", "9"], capsys)[1]
    assert a == b


def test_fit_from_csv(tmp_path, capsys):
    x = make_ct(Uniform(), CTParams(0.4, 0.6)).sample(500, seed=2)
    f = tmp_path / "x.csv"
    np.savetxt(f, x)
    rc, out, _ = run(["fit", "--model", "ctu", "--data", str(f)], capsys)
    assert rc == 0
    d = json.loads(out)
    assert set(d["estimates"]) == {"l1", "l2"}


def test_simulate_table1(capsys):
    rc, out, _ = run(["simulate", "table1", "--mix", "0.1,0.8,0.1", "--n", "100", "--reps", "10",
                      "--format", "csv"], capsys)
    assert rc == 0
    assert out.splitlines()[0].startswith("mix1,mix2,mix3,n,KL1")


@pytest.mark.parametrize("argv", [
    ["entropy", "--dist", "bogus"],
    ["gini", "--dist", "pareto:alpha=1"],
    ["divergence", "--kind", "kl", "--from", "uniform"],
    ["entropy"],
    ["nosuchverb"],
])
def test_usage_errors(argv, capsys):
    rc, _, err = run(argv, capsys)
    assert rc == 1
    assert err


def test_caret_in_error(capsys):
    _, _, err = run(["entropy", "--dist", "ct:l1=0.4,l9=1"], capsys)
    assert "^" in err


def test_nonconvergence_exit_code(capsys):
    rc, out, _ = run(["entropy", "--dist", "pareto:alpha=1.1", "--abs-tol", "1e-14", "--rel-tol", "1e-14"], capsys)
    assert rc == 2
    assert json.loads(out)["converged"] is False


def test_json_is_strict(capsys):
    rc, out, _ = run(["divergence", "--kind", "chi2", "--from", "uniform", "--to", "ct:l1=0,l2=0"], capsys)
    json.loads(out, parse_constant=lambda c: pytest.fail(f"non-standard constant {c}"))


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ctinfo.cli", "gini", "--dist", "exp:beta=2"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["value"] == pytest.approx(0.5, abs=1e-9)
