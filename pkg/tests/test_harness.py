from __future__ import annotations

import csv

import pytest

from altgd import ConfigError, InitConfig, theory_report
from altgd.harness import (
    SUMMARY_COLUMNS,
    TRAJECTORY_COLUMNS,
    build_config,
    parse_config_file,
)
from altgd.harness.cli import main
from altgd.harness.experiments import build_matrix, cmd_montecarlo, cmd_run, cmd_theory
from altgd.verification import gradient_suite, run_all_suites


def _read(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def test_kind_defaults():
    fig1 = build_config("fig1")
    assert fig1.eta == 0.0683 and fig1.trials == 5 and fig1.target == 1e-6
    fig2 = build_config("fig2")
    assert fig2.eta is None and fig2.eta_mult == 1e4 and fig2.target == 0.0
    run_cfg = build_config("run")
    assert run_cfg.eta_mult == 1.0  # neither eta nor eta-mult given
    mc = build_config("montecarlo")
    assert (mc.d, mc.r, mc.trials) == (50, 10, 2000)
    assert mc.matrix_seed == mc.seed


def test_config_file_and_flag_precedence(tmp_path):
    cfg_file = tmp_path / "exp.cfg"
    cfg_file.write_text("eta = 0.05\ntrials = 3   # comment\nscheme = plain-gaussian\n")
    file_values = parse_config_file(cfg_file)
    cfg = build_config("run", file_values, {"trials": 7})
    assert cfg.eta == 0.05
    assert cfg.trials == 7  # flag wins
    assert cfg.scheme == "plain-gaussian"


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        build_config("run", None, {"trials": 0})
    with pytest.raises(ConfigError):
        build_config("run", None, {"max_iters": 0})
    with pytest.raises(ConfigError):
        build_config("run", None, {"monitors": "loud"})
    with pytest.raises(ConfigError):
        build_config("run", None, {"sigmar": -1.0})
    with pytest.raises(ConfigError):
        build_config("run", None, {"r": 200})
    bad = tmp_path / "bad.cfg"
    bad.write_text("no_such_key = 3\n")
    with pytest.raises(ConfigError):
        parse_config_file(bad)
    bad.write_text("eta == 0.1\n")
    with pytest.raises(ConfigError):
        parse_config_file(bad)


# ---------------------------------------------------------------------------
# experiment drivers
# ---------------------------------------------------------------------------


def test_cmd_run_outputs(tmp_path):
    cfg = build_config("run", None, {
        "out": str(tmp_path / "out"), "trials": 2, "max_iters": 300,
        "record_every": 20, "jobs": 1,
    })
    paths = cmd_run(cfg)
    names = sorted(p.name for p in paths)
    assert names == ["run_summary.csv", "run_trial000.csv", "run_trial001.csv"]
    rows = _read(tmp_path / "out" / "run_trial000.csv")
    assert list(rows[0].keys()) == list(TRAJECTORY_COLUMNS)
    assert rows[0]["iter"] == "0"
    assert rows[0]["envelope"] != ""  # unbalanced scheme carries the envelope
    assert float(rows[0]["envelope"]) == pytest.approx(2.0 * float(rows[0]["f"]), rel=1e-12)
    summary = _read(tmp_path / "out" / "run_summary.csv")
    assert list(summary[0].keys()) == list(SUMMARY_COLUMNS)
    assert not any(p.with_name(p.name + ".tmp").exists() for p in paths)


def test_cmd_run_envelope_empty_for_baselines(tmp_path):
    cfg = build_config("run", None, {
        "out": str(tmp_path / "out"), "trials": 1, "max_iters": 50,
        "scheme": "plain-gaussian", "eta": 0.0683,
    })
    cmd_run(cfg)
    rows = _read(tmp_path / "out" / "run_trial000.csv")
    assert all(row["envelope"] == "" for row in rows)
    summary = _read(tmp_path / "out" / "run_summary.csv")
    assert summary[0]["beta"] == ""


def test_summary_recomputable_from_trajectories(tmp_path):
    # The summary's convergence columns are pure functions of the emitted
    # per-trial CSVs.
    cfg = build_config("run", None, {
        "out": str(tmp_path / "out"), "trials": 2, "max_iters": 3000,
        "eta": 0.0683, "target": 1e-6, "record_every": 10,
    })
    cmd_run(cfg)
    summary = _read(tmp_path / "out" / "run_summary.csv")
    for stream, row in enumerate(summary):
        rows = _read(tmp_path / "out" / f"run_trial{stream:03d}.csv")
        final = rows[-1]
        assert float(row["final_rel_loss"]) == float(final["rel_loss"])
        reached = float(final["rel_loss"]) <= 1e-6
        assert (row["iters_to_target"] != "") == reached
        if reached:
            assert int(row["iters_to_target"]) == int(final["iter"])


def test_byte_determinism_across_jobs(tmp_path):
    blobs = {}
    for jobs in (1, 4):
        out = tmp_path / f"jobs{jobs}"
        cfg = build_config("fig1", None, {
            "out": str(out), "trials": 3, "max_iters": 400, "jobs": jobs,
        })
        from altgd.harness.experiments import cmd_fig1

        cmd_fig1(cfg)
        blobs[jobs] = {p.name: p.read_bytes() for p in sorted(out.iterdir())}
    assert blobs[1].keys() == blobs[4].keys()
    for name in blobs[1]:
        assert blobs[1][name] == blobs[4][name], name


def test_cmd_theory_matches_library(tmp_path, capsys):
    cfg = build_config("theory", None, {"out": str(tmp_path / "out")})
    path = cmd_theory(cfg)
    out = capsys.readouterr().out
    a, _ = build_matrix(cfg)
    report = theory_report(a, InitConfig(c=4.0, nu=1e-10, eta=1.0, d=6), epsilon=1e-8)
    assert f"rho = {report.rho}" in out
    assert f"beta = {report.beta}" in out
    assert f"t_budget = {report.t_budget}" in out
    header = path.read_text().splitlines()[0]
    assert header.startswith("sigma1,sigmar,rank,")


def test_cmd_montecarlo(tmp_path, capsys):
    cfg = build_config("montecarlo", None, {
        "out": str(tmp_path / "out"), "trials": 400, "t": (0.0, 0.5, 1.0, 2.0),
    })
    path = cmd_montecarlo(cfg)
    rows = _read(path)
    assert [row["t"] for row in rows] == ["0.0", "0.5", "1.0", "2.0"]
    assert float(rows[0]["bound_violation_rate"]) == 1.0  # t=0: vacuous bound
    rates = [float(row["empirical_lower_rate"]) for row in rows]
    assert rates == sorted(rates, reverse=True)  # shared draws: monotone in t
    for row in rows:
        assert float(row["empirical_lower_rate"]) <= float(row["bound_violation_rate"]) + 0.05
        assert float(row["empirical_upper_rate"]) <= float(row["bound_violation_rate"]) + 0.05


def test_cmd_montecarlo_low_trials_warning(tmp_path, capsys):
    cfg = build_config("montecarlo", None, {"out": str(tmp_path / "out"), "trials": 50})
    cmd_montecarlo(cfg)
    assert "warning" in capsys.readouterr().out


# ---------------------------------------------------------------------------
# CLI exit codes
# ---------------------------------------------------------------------------


def test_cli_run_success_and_exit_codes(tmp_path):
    out = tmp_path / "cli"
    code = main(["run", "--trials", "1", "--max-iters", "200", "--eta", "0.0683",
                 "--out", str(out)])
    assert code == 0
    assert (out / "run_trial000.csv").exists()

    assert main(["run", "--trials", "0", "--out", str(out)]) == 2

    code = main(["run", "--eta", "10.0", "--trials", "1", "--max-iters", "500",
                 "--monitors", "off", "--out", str(out)])
    assert code == 3

    code = main(["run", "--scheme", "plain-gaussian", "--eta", "0.0683",
                 "--trials", "1", "--max-iters", "50", "--monitors", "fatal",
                 "--out", str(out)])
    assert code == 4


def test_cli_io_error(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    code = main(["run", "--trials", "1", "--max-iters", "50", "--eta", "0.0683",
                 "--out", str(blocker / "sub")])
    assert code == 5


def test_cli_rejects_unknown_kind():
    with pytest.raises(SystemExit):
        main(["nonsense"])


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


def test_gradient_suite_passes_and_detects_corruption():
    clean = gradient_suite(instances=20)
    assert clean.passed
    corrupted = gradient_suite(
        instances=5, grad_x_fn=lambda x, y, a: -((x @ y.T - a) @ y)
    )
    assert not corrupted.passed


def test_run_all_suites(capsys):
    results = run_all_suites(base_seed=777, monitor_seeds=(0,), monitor_iters=2000)
    by_name = {r.name: r for r in results}
    assert by_name["gradient-finite-difference"].passed
    assert by_name["f0-step-size-independence"].passed
    assert by_name["invariant-monitors-fatal"].passed
    assert by_name["decay-envelope"].passed
    assert by_name["colspan-negative-control"].passed
    assert by_name["gaussian-concentration"].passed


def test_cli_verify_smoke(tmp_path, monkeypatch):
    # Full verify through the CLI; exercised with the default instance.
    code = main(["verify", "--out", str(tmp_path)])
    assert code == 0
