from __future__ import annotations

import math

import numpy as np
import pytest

import altgd
from altgd import (
    AGDConfig,
    DivergenceError,
    InitConfig,
    MonitorViolationError,
    Rng,
    agd_step,
    gaussian_matrix,
    grad_x,
    grad_y,
    init_plain_gaussian,
    init_unbalanced,
    run,
)
from altgd._kernel import STATUS_NONFINITE, STATUS_OK, STATUS_TARGET, available_backends, get_backend
from altgd.agd import (
    MONITOR_COLSPAN,
    TERMINATION_BUDGET,
    TERMINATION_TARGET,
)

FIG1_ETA = 0.0683


def _small_problem(seed=17):
    rng = Rng(seed, 0)
    a = gaussian_matrix(rng, 6, 5, 1.0)
    x = gaussian_matrix(rng, 6, 3, 1.0)
    y = gaussian_matrix(rng, 5, 3, 1.0)
    return a, x, y


def test_step_fixed_point_at_optimum():
    rng = Rng(1, 0)
    x = gaussian_matrix(rng, 5, 2, 1.0)
    y = gaussian_matrix(rng, 4, 2, 1.0)
    a = x @ y.T
    x1, y1 = agd_step(x, y, a, 0.05)
    assert np.array_equal(x1, x) and np.array_equal(y1, y)


def test_step_scalar_hand_computation():
    x1, y1 = agd_step(np.array([[2.0]]), np.array([[3.0]]), np.array([[1.0]]), 0.01)
    assert x1[0, 0] == pytest.approx(1.85, abs=1e-15)
    assert y1[0, 0] == pytest.approx(2.915825, abs=1e-12)


def test_step_half_residual_identity():
    # After the X half-step, the residual contracts by (I - eta Y Y^T).
    a, x, y = _small_problem()
    eta = 0.01
    r = x @ y.T - a
    x1 = x - eta * grad_x(x, y, a)
    half = (y @ x1.T - a.T).T  # transposed back to m x n
    predicted = r @ (np.eye(y.shape[0]) - eta * (y @ y.T))
    assert np.linalg.norm(half - predicted) <= 1e-10 * np.linalg.norm(predicted)


def test_alternation_order_is_normative():
    a, x, y = _small_problem()
    eta = 0.01
    x1, y1 = agd_step(x, y, a, eta)
    y_updated_x = y - eta * grad_y(x1, y, a)
    y_stale_x = y - eta * grad_y(x, y, a)
    assert np.allclose(y1, y_updated_x, rtol=0, atol=1e-15)
    assert not np.allclose(y1, y_stale_x, rtol=0, atol=1e-12)


def test_step_validation_and_divergence():
    a, x, y = _small_problem()
    with pytest.raises(ValueError):
        agd_step(x, y, a, 0.0)
    with pytest.raises(ValueError):
        agd_step(x[:, :2], y, a, 0.1)
    huge = 1e160 * np.ones((2, 2))
    with pytest.raises(DivergenceError):
        agd_step(huge, huge, np.ones((2, 2)), 1.0)


def test_run_terminates_at_optimum():
    # A pair that factors A exactly stops at t = 0 with the target reached.
    rng = Rng(4, 0)
    x = gaussian_matrix(rng, 8, 3, 1.0)
    y = gaussian_matrix(rng, 7, 3, 1.0)
    a = x @ y.T
    cfg = AGDConfig(eta=0.01, max_iters=10, target_rel_loss=1e-6, record_every=1)
    rec = run(a, x, y, cfg)
    assert rec.termination == TERMINATION_TARGET
    assert rec.final.t == 0
    assert len(rec.stats) == 1


def test_run_divergence_error(fig1_matrix, fig1_init_config):
    x0, y0 = init_unbalanced(Rng(777, 0), fig1_matrix, fig1_init_config)
    cfg = AGDConfig(eta=10.0, max_iters=200, record_every=10, monitor_mode="off")
    with pytest.raises(DivergenceError) as err:
        run(fig1_matrix, x0, y0, cfg)
    assert err.value.iteration <= 100


def test_run_determinism(fig1_matrix, fig1_init_config):
    x0, y0 = init_unbalanced(Rng(777, 1), fig1_matrix, fig1_init_config)
    cfg = AGDConfig(eta=FIG1_ETA, max_iters=300, target_rel_loss=1e-6, record_every=10)
    rec_a = run(fig1_matrix, x0, y0, cfg, scheme="unbalanced", seed=(777, 1))
    rec_b = run(fig1_matrix, x0, y0, cfg, scheme="unbalanced", seed=(777, 1))
    assert rec_a.stats == rec_b.stats
    assert rec_a.violations == rec_b.violations
    assert rec_a.termination == rec_b.termination


def test_run_stats_invariants(fig1_matrix, fig1_init_config):
    x0, y0 = init_unbalanced(Rng(777, 2), fig1_matrix, fig1_init_config)
    cfg = AGDConfig(eta=FIG1_ETA, max_iters=120, target_rel_loss=0.0, record_every=25)
    rec = run(fig1_matrix, x0, y0, cfg)
    na2 = float(np.vdot(fig1_matrix, fig1_matrix))
    ts = [row.t for row in rec.stats]
    assert ts == sorted(ts) and len(set(ts)) == len(ts)
    assert ts == [0, 25, 50, 75, 100, 120]
    assert rec.termination == TERMINATION_BUDGET
    for row in rec.stats:
        assert row.f >= 0.0
        assert row.rel_loss == pytest.approx(2.0 * row.f / na2, rel=1e-12)
        assert row.sigma1_x >= row.sigmar_x >= 0.0
        assert row.sigma1_y >= row.sigmar_y >= 0.0


def test_run_converges_fig1_instance(fig1_matrix, fig1_init_config):
    # End-to-end qualitative reproduction: the unbalanced scheme reaches a
    # relative squared residual of 1e-6 within 5000 iterations with monotone
    # recorded loss and quiet monitors, on at least 18 of 20 seeds.
    cfg = AGDConfig(eta=FIG1_ETA, max_iters=5000, target_rel_loss=1e-6, record_every=10)
    converged = 0
    for stream in range(20):
        x0, y0 = init_unbalanced(Rng(777, stream), fig1_matrix, fig1_init_config)
        rec = run(fig1_matrix, x0, y0, cfg)
        assert not rec.violations
        fs = [row.f for row in rec.stats]
        assert all(b <= a + 1e-12 for a, b in zip(fs, fs[1:]))
        assert max(row.colspan_leak for row in rec.stats) <= 1e-8
        converged += rec.termination == TERMINATION_TARGET
    assert converged >= 18


def test_plain_gaussian_colspan_negative_control(fig1_matrix, fig1_init_config):
    x0, y0 = init_plain_gaussian(Rng(777, 0), fig1_matrix, fig1_init_config)
    cfg = AGDConfig(eta=FIG1_ETA, max_iters=20, record_every=5, monitor_mode="log")
    rec = run(fig1_matrix, x0, y0, cfg)
    assert rec.stats[0].colspan_leak > 1e-2
    assert any(v.monitor == MONITOR_COLSPAN for v in rec.violations)


def test_fatal_monitor_mode_raises(fig1_matrix, fig1_init_config):
    x0, y0 = init_plain_gaussian(Rng(777, 0), fig1_matrix, fig1_init_config)
    cfg = AGDConfig(eta=FIG1_ETA, max_iters=20, record_every=5, monitor_mode="fatal")
    with pytest.raises(MonitorViolationError) as err:
        run(fig1_matrix, x0, y0, cfg)
    assert err.value.violations
    assert err.value.record is not None
    assert err.value.record.termination == "monitor-violation"


def test_envelope_at_theoretical_step_size(fig1_matrix):
    report = altgd.theory_report(
        fig1_matrix, InitConfig(c=4.0, nu=1e-10, eta=1.0, d=6), epsilon=1e-8
    )
    eta = report.eta_max
    cfg = AGDConfig(eta=eta, max_iters=2000, target_rel_loss=0.0, record_every=100)
    init_cfg = InitConfig(c=4.0, nu=1e-10, eta=eta, d=6)
    for stream in range(2):
        x0, y0 = init_unbalanced(Rng(777, stream), fig1_matrix, init_cfg)
        rec = run(fig1_matrix, x0, y0, cfg)
        assert not rec.violations
        f0 = rec.f0
        for row in rec.stats:
            assert row.f <= math.exp(-report.beta * row.t / 4.0) * f0 + 1e-15


def test_config_validation():
    with pytest.raises(ValueError):
        AGDConfig(eta=0.0, max_iters=10)
    with pytest.raises(ValueError):
        AGDConfig(eta=0.1, max_iters=0)
    with pytest.raises(ValueError):
        AGDConfig(eta=0.1, max_iters=10, record_every=0)
    with pytest.raises(ValueError):
        AGDConfig(eta=0.1, max_iters=10, monitor_mode="loud")
    with pytest.raises(ValueError):
        AGDConfig(eta=0.1, max_iters=10, monitors=frozenset({"bogus"}))


# ---------------------------------------------------------------------------
# kernel backends
# ---------------------------------------------------------------------------


def _block_problem():
    rng = Rng(55, 0)
    a = gaussian_matrix(rng, 30, 20, 1.0)
    x = 0.1 * gaussian_matrix(rng, 30, 4, 1.0)
    y = 0.1 * gaussian_matrix(rng, 20, 4, 1.0)
    return a, x, y


def test_backends_agree():
    a, x0, y0 = _block_problem()
    results = {}
    for name in available_backends():
        be = get_backend(name)
        x, y = x0.copy(), y0.copy()
        res = be.run_block(x, y, a, 0.02, 500, -1.0, True)
        results[name] = (res, x, y)
    if len(results) < 2:
        pytest.skip("compiled backend not built")
    (res_a, xa, ya), (res_b, xb, yb) = results["cython"], results["numpy"]
    assert res_a.steps == res_b.steps == 500
    assert res_a.status == res_b.status == STATUS_OK
    np.testing.assert_allclose(res_a.f, res_b.f, rtol=1e-9, atol=1e-13)
    np.testing.assert_allclose(res_a.gx2, res_b.gx2, rtol=1e-9, atol=1e-13)
    np.testing.assert_allclose(res_a.lamx, res_b.lamx, rtol=1e-9, atol=1e-13)
    np.testing.assert_allclose(xa, xb, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(ya, yb, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("name", available_backends())
def test_backend_determinism_and_single_step(name):
    be = get_backend(name)
    a, x0, y0 = _block_problem()
    runs = []
    for _ in range(2):
        x, y = x0.copy(), y0.copy()
        res = be.run_block(x, y, a, 0.02, 37, -1.0, True)
        runs.append((res.f.copy(), x.copy(), y.copy()))
    assert np.array_equal(runs[0][0], runs[1][0])
    assert np.array_equal(runs[0][1], runs[1][1])
    # one kernel step equals the reference step function
    x, y = x0.copy(), y0.copy()
    be.run_block(x, y, a, 0.02, 1, -1.0, False)
    x_ref, y_ref = agd_step(x0, y0, a, 0.02)
    np.testing.assert_allclose(x, x_ref, rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(y, y_ref, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("name", available_backends())
def test_backend_target_and_nonfinite_status(name):
    be = get_backend(name)
    a, x0, y0 = _block_problem()
    na2 = float(np.vdot(a, a))
    # generous target (above the rank-4 approximation floor): stops mid-block
    x, y = x0.copy(), y0.copy()
    res = be.run_block(x, y, a, 0.02, 10_000, 0.4 * na2, False)
    assert res.status == STATUS_TARGET
    assert 0 < res.steps < 10_000
    assert res.f[-1] <= 0.4 * na2
    assert len(res.f) == res.steps + 1
    assert len(res.gx2) == res.steps
    # absurd step size: non-finite detected and reported
    x, y = x0.copy(), y0.copy()
    res = be.run_block(x, y, a, 50.0, 10_000, -1.0, False)
    assert res.status == STATUS_NONFINITE
    assert not math.isfinite(res.f[-1])
