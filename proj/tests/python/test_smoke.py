import json
import math

import numpy as np
import pytest

import nlfrac


def test_mittag_leffler_classical_and_half():
    for t in (-3.0, -0.5, 0.0, 1.0, 2.5):
        assert nlfrac.mittag_leffler(1.0, t) == pytest.approx(math.exp(t), rel=1e-12)
    # E_{1/2}(-x) = exp(x^2) erfc(x)
    x = 1.3
    assert nlfrac.mittag_leffler(0.5, -x) == pytest.approx(math.exp(x * x) * math.erfc(x), rel=1e-12)
    assert nlfrac.mittag_leffler_deriv(1.0, 0.7) == pytest.approx(math.exp(0.7), rel=1e-12)


def test_bad_order_raises():
    with pytest.raises(ValueError):
        nlfrac.mittag_leffler(1.5, 0.0)


def test_caputo_of_linear_history_is_exact():
    alpha, dt, n = 0.6, 1.0 / 64, 64
    t = np.arange(n + 1) * dt
    d = nlfrac.caputo(t, 0.0, dt, alpha)
    exact = t ** (1 - alpha) / math.gamma(2 - alpha)
    assert np.allclose(d, exact, rtol=1e-12, atol=1e-14)


def test_fode_constant_forcing():
    alpha, c1, dt, n = 0.7, 1.0, 1.0 / 128, 128
    u = nlfrac.fode(np.ones(n + 1), 0.0, dt, alpha, c1)
    expected = (1.0 - nlfrac.mittag_leffler(alpha, -c1)) / c1
    assert u[-1] == pytest.approx(expected, rel=1e-10)
    u_l1 = nlfrac.fode(np.ones(n + 1), 0.0, dt, alpha, c1, method="l1")
    assert abs(u_l1[-1] - u[-1]) < 1e-3


def test_pucci_of_constant_is_zero():
    v = nlfrac.pucci(np.full(33, 2.0), -1.0, 1.0, 0.5, exterior=(2.0, 2.0))
    assert np.all(np.abs(v) < 1e-12)


def test_solve_and_fit():
    x = np.linspace(-1.0, 1.0, 65)
    res = nlfrac.solve(np.exp(-16 * x * x), -1.0, 1.0, alpha=0.8, sigma=0.5, exterior=(0.0, 0.0))
    u = res["u"]
    assert u.shape == (res["t"].size, 65)
    assert np.max(np.abs(u[-1])) < 1.0
    rep = nlfrac.fit_holder(u, -1.0, 1.0, -1.0, res["dt"], 0.8, 0.5, 0.0, 0.0, ratio=0.5, depth=3)
    assert rep["alpha"] == 0.8
    assert len(rep["osc"]) == 4
    assert rep["flags"]["monotone"]


def test_cli_round_trip(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"alpha": 1.0, "ml": {"n_points": 3}}))
    out = tmp_path / "out"
    assert nlfrac.run_cli(["ml", "--config", str(cfg), "--out", str(out)]) == 0
    assert (out / "ml.csv").exists()
    assert json.loads((out / "manifest.json").read_text())["status"] == "ok"
    cfg.write_text(json.dumps({"alpha": 2.0}))
    assert nlfrac.run_cli(["ml", "--config", str(cfg), "--out", str(out)]) == 2
