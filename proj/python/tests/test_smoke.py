import json
import math

import pytest

import hkmc


def test_phi_power_closed_form():
    sf = hkmc.ScaleFunction.power(3.0)
    assert hkmc.phi(sf, 1.0, 1.0) == pytest.approx(0.3849002, rel=1e-6)
    lo, hi = hkmc.phi_bounds(sf, 2.0, 0.5)
    assert lo <= hkmc.phi(sf, 2.0, 0.5) <= hi


def test_exit_prob_matches_series():
    model = hkmc.ProcessModel.brownian_line(bridge=True)
    est = hkmc.exit_prob(model, 0.0, 1.0, [0.5, 1.0], n_paths=4000, dt=1e-3, seed=3)
    for (p, se), t in zip(est, [0.5, 1.0]):
        assert abs(p - hkmc.reference.exit_prob_series(t)) <= 4 * se


def test_same_seed_same_numbers():
    model = hkmc.ProcessModel.brownian_circle(4.0)
    A = hkmc.Region.ball(0.0, 0.5)
    a = hkmc.transition_prob(model, 0.0, [0.1], A, n_paths=1000, dt=1e-3, seed=9)
    hkmc.set_thread_count(1)
    b = hkmc.transition_prob(model, 0.0, [0.1], A, n_paths=1000, dt=1e-3, seed=9)
    hkmc.set_thread_count(0)
    assert a == b


def test_mdh_identity_small():
    model = hkmc.ProcessModel.brownian_line(bridge=True)
    rows = hkmc.verify_multiple_dh(
        model,
        hkmc.Region.open_interval(-1, 1),
        hkmc.Region.open_interval(-0.5, 0.5),
        hkmc.Region.closed_interval(-0.4, 0.4),
        0.0,
        [0.5],
        n_paths=500,
        dt=1e-3,
        seed=4,
        inner_m=4,
        n_max=16,
    )
    assert rows[0]["pass"]


def test_constants_ledger():
    led = hkmc.derive_constants(1, 2, 2, 1.0, 1.0, 1.346, 0.297, overrides={"c_eps_1": 1.0})
    assert led["c_eps_2"][0] == pytest.approx(32 * math.exp(-3), rel=1e-9)
    assert led["c_eps_1"][1] == "user-override"
    assert math.isfinite(led["c_eps"][0])


def test_config_error_is_value_error():
    with pytest.raises(ValueError):
        hkmc.Region.open_interval(1.0, -1.0)


def test_cli_round_trip(tmp_path):
    cfg = tmp_path / "phi.json"
    cfg.write_text(json.dumps({"scale_function": {"kind": "power", "beta": 2}, "phi": {"n_R": 5, "n_t": 5}}))
    out = tmp_path / "out"
    assert hkmc.cli(["phi", "--config", str(cfg), "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "pass"
    assert (out / "phi.csv").exists()
    assert hkmc.cli(["estimate", "--config", str(cfg), "--out", str(out)]) == 2
