"""Experiment drivers behind the CLI subcommands.

Every experiment draws its matrix from a dedicated stream of the matrix
seed (stream id 2**63 + matrix index), so all trials of an experiment share
one matrix while trial i uses stream id i of the base seed.  Trials are
independent and may run on a thread pool (--jobs); outputs are collected and
written in a fixed order, so --jobs does not affect the files.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .. import theory
from ..agd import AGDConfig, TrajectoryRecord, run
from ..initializer import InitConfig, InitScheme, initialize
from ..matrixcore import Rng, gaussian_matrix
from ..synth import SpectrumSpec, make_matrix
from ..verification import run_all_suites
from .config import MATRIX_STREAM, ExperimentConfig
from .csvio import atomic_write_text, summary_row, write_summary, write_trajectory

FIG2_SIGMARS = (0.1, 0.5, 0.9)


def build_matrix(cfg: ExperimentConfig, sigmar: float | None = None,
                 matrix_index: int = 0):
    spec = SpectrumSpec.linspace(
        cfg.m, cfg.n, cfg.sigma1, cfg.sigmar if sigmar is None else sigmar, cfg.r
    )
    rng = Rng(cfg.matrix_seed, MATRIX_STREAM + matrix_index)
    return make_matrix(rng, spec), spec


def instance_report(a, cfg: ExperimentConfig) -> theory.TheoryReport:
    # The report only reads c, nu and d from the init config; eta is not used.
    proto = InitConfig(c=cfg.c, nu=cfg.nu, eta=1.0, d=cfg.d)
    return theory.theory_report(a, proto, cfg.epsilon)


def resolve_eta(a, cfg: ExperimentConfig) -> tuple[float, float]:
    """Step size for an instance: absolute --eta wins, otherwise
    --eta-mult times the theoretical cap.  Returns (eta, beta)."""
    report = instance_report(a, cfg)
    if cfg.eta is not None:
        return cfg.eta, report.beta
    return cfg.eta_mult * report.eta_max, report.beta


def _run_trials(tasks: Sequence[Callable[[], TrajectoryRecord]],
                jobs: int) -> list[TrajectoryRecord]:
    if jobs <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [future.result() for future in futures]


def _trial_task(a, scheme: InitScheme, init_cfg: InitConfig, agd_cfg: AGDConfig,
                base_seed: int, stream: int) -> Callable[[], TrajectoryRecord]:
    def task() -> TrajectoryRecord:
        rng = Rng(base_seed, stream)
        x0, y0 = initialize(rng, a, init_cfg)
        return run(a, x0, y0, agd_cfg, scheme=scheme.value, seed=(base_seed, stream))
    return task


def _agd_config(cfg: ExperimentConfig, eta: float) -> AGDConfig:
    return AGDConfig(
        eta=eta,
        max_iters=cfg.max_iters,
        target_rel_loss=cfg.target,
        record_every=cfg.record_every,
        monitor_mode=cfg.monitors,
    )


def cmd_run(cfg: ExperimentConfig) -> list[Path]:
    """Single-scheme trajectories: one CSV per trial plus a summary."""
    a, spec = build_matrix(cfg)
    eta, beta = resolve_eta(a, cfg)
    scheme = InitScheme(cfg.scheme)
    env_beta = beta if scheme is InitScheme.UNBALANCED else None
    init_cfg = InitConfig(c=cfg.c, nu=cfg.nu, eta=eta, d=cfg.d, scheme=scheme)
    agd_cfg = _agd_config(cfg, eta)
    tasks = [
        _trial_task(a, scheme, init_cfg, agd_cfg, cfg.seed, stream)
        for stream in range(cfg.trials)
    ]
    records = _run_trials(tasks, cfg.jobs)
    out = Path(cfg.out)
    paths = []
    rows = []
    for stream, record in enumerate(records):
        paths.append(
            write_trajectory(out / f"run_trial{stream:03d}.csv", record, beta=env_beta)
        )
        rows.append(summary_row("run", scheme.value, spec.values[-1], stream,
                                eta, env_beta, record))
    paths.append(write_summary(out / "run_summary.csv", rows))
    return paths


def cmd_fig1(cfg: ExperimentConfig) -> list[Path]:
    """Initialization comparison: three schemes, shared matrix, shared step size."""
    a, spec = build_matrix(cfg)
    eta, beta = resolve_eta(a, cfg)
    agd_cfg = _agd_config(cfg, eta)
    out = Path(cfg.out)
    paths = []
    rows = []
    for scheme in (InitScheme.UNBALANCED, InitScheme.BALANCED_COLSPAN,
                   InitScheme.PLAIN_GAUSSIAN):
        init_cfg = InitConfig(c=cfg.c, nu=cfg.nu, eta=eta, d=cfg.d, scheme=scheme)
        tasks = [
            _trial_task(a, scheme, init_cfg, agd_cfg, cfg.seed, stream)
            for stream in range(cfg.trials)
        ]
        records = _run_trials(tasks, cfg.jobs)
        env_beta = beta if scheme is InitScheme.UNBALANCED else None
        for stream, record in enumerate(records):
            name = f"fig1_{scheme.value}_trial{stream:03d}.csv"
            paths.append(write_trajectory(out / name, record, beta=env_beta))
            rows.append(summary_row("fig1", scheme.value, spec.values[-1], stream,
                                    eta, env_beta, record))
    paths.append(write_summary(out / "fig1_summary.csv", rows))
    return paths


def cmd_fig2(cfg: ExperimentConfig) -> list[Path]:
    """Conditioning sweep: one matrix per sigma_r, unbalanced init, step size
    eta_mult times the per-matrix theoretical cap, envelope column included."""
    out = Path(cfg.out)
    paths = []
    rows = []
    for index, sigmar in enumerate(FIG2_SIGMARS):
        a, spec = build_matrix(cfg, sigmar=sigmar, matrix_index=index)
        report = instance_report(a, cfg)
        eta = cfg.eta if cfg.eta is not None else cfg.eta_mult * report.eta_max
        init_cfg = InitConfig(c=cfg.c, nu=cfg.nu, eta=eta, d=cfg.d,
                              scheme=InitScheme.UNBALANCED)
        agd_cfg = _agd_config(cfg, eta)
        tasks = [
            _trial_task(a, InitScheme.UNBALANCED, init_cfg, agd_cfg, cfg.seed, stream)
            for stream in range(cfg.trials)
        ]
        records = _run_trials(tasks, cfg.jobs)
        for stream, record in enumerate(records):
            name = f"fig2_sr{sigmar}_trial{stream:03d}.csv"
            paths.append(write_trajectory(out / name, record, beta=report.beta))
            rows.append(summary_row("fig2", "unbalanced", sigmar, stream,
                                    eta, report.beta, record))
    paths.append(write_summary(out / "fig2_summary.csv", rows))
    return paths


def cmd_theory(cfg: ExperimentConfig, emit: Callable[[str], None] = print) -> Path | None:
    """Print (and optionally write) the theory report for the instance."""
    a, _spec = build_matrix(cfg)
    report = instance_report(a, cfg)
    fields = (
        ("sigma1", report.sigma1),
        ("sigmar", report.sigmar),
        ("rank", report.rank),
        ("s", report.s),
        ("rho", report.rho),
        ("beta", report.beta),
        ("delta", report.delta),
        ("f0_bound", report.f0),
        ("epsilon", cfg.epsilon),
        ("eta_max", report.eta_max),
        ("t_budget", report.t_budget),
        ("envelope_t0", report.envelope(0.0)),
    )
    for key, value in fields:
        emit(f"{key} = {value}")
    if cfg.out:
        header = ",".join(key for key, _ in fields)
        row = ",".join(repr(float(v)) if isinstance(v, float) else str(v)
                       for _, v in fields)
        return atomic_write_text(Path(cfg.out) / "theory.csv", header + "\n" + row + "\n")
    return None


def cmd_montecarlo(cfg: ExperimentConfig, emit: Callable[[str], None] = print) -> Path:
    """Empirical violation rates of the Gaussian singular value bounds.

    One sample set is drawn and evaluated against every requested deviation
    t, so the reported rates are monotone in t by construction.
    """
    if cfg.trials < 100:
        emit(f"warning: {cfg.trials} trials gives poor rate resolution; use >= 100")
    rng = Rng(cfg.seed, 0)
    extremes = np.empty((cfg.trials, 2))
    for i in range(cfg.trials):
        g = gaussian_matrix(rng, cfg.d, cfg.r, 1.0)
        sv = np.linalg.svd(g, compute_uv=False)
        extremes[i] = sv[0], sv[-1]
    lines = ["t,lower,upper,bound_violation_rate,empirical_lower_rate,"
             "empirical_upper_rate,trials"]
    for t in cfg.t:
        lower, upper, prob = theory.gaussian_sv_bounds(cfg.d, cfg.r, t)
        rate_low = float(np.mean(extremes[:, 1] < lower))
        rate_high = float(np.mean(extremes[:, 0] > upper))
        lines.append(",".join((
            repr(float(t)), repr(lower), repr(upper), repr(1.0 - prob),
            repr(rate_low), repr(rate_high), str(cfg.trials),
        )))
        emit(f"t={t}: empirical violation rates {rate_low:.4f}/{rate_high:.4f} "
             f"vs bound {1.0 - prob:.4f}")
    return atomic_write_text(Path(cfg.out) / "montecarlo.csv", "\n".join(lines) + "\n")


def cmd_verify(cfg: ExperimentConfig, emit: Callable[[str], None] = print) -> bool:
    """Run every verification suite; True iff all pass."""
    results = run_all_suites(base_seed=cfg.seed, matrix_seed=cfg.matrix_seed)
    all_ok = True
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        emit(f"{status} {result.name}: {result.detail}")
        all_ok &= result.passed
    emit("verify: all suites passed" if all_ok else "verify: FAILURES present")
    return all_ok
