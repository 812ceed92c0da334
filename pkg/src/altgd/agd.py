"""Alternating gradient descent with per-iteration diagnostics and monitors.

One iteration updates X against the current Y, then Y against the *updated*
X; the order is normative.  The loop runs in blocks of ``record_every``
steps through a compiled (or numpy) kernel; at every block boundary a full
diagnostic snapshot is taken (losses, factor singular values, gradient
norms, balancedness, column-span leak) and the sampled invariant monitors
are evaluated.  Per-step monitors (descent, cumulative gradient budget) are
evaluated from scalars the kernel reports for every iteration.

Monitors express the convergence theory's invariants with small
floating-point slacks.  In ``log`` mode violations are recorded on the
trajectory; in ``fatal`` mode the first violation raises
:class:`~altgd.errors.MonitorViolationError`, stopping at the end of the
diagnostic window that contains it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernel import STATUS_NONFINITE, STATUS_TARGET, run_block
from .errors import DegenerateMatrixError, DivergenceError, MonitorViolationError
from .initializer import RANK_TOL
from .matrixcore import as_matrix, colspan_leak, numeric_rank, svd
from .objective import _check_shapes, grad_x, grad_y

MONITOR_COLSPAN = "colspan"
MONITOR_PL = "pl"
MONITOR_DESCENT = "descent"
MONITOR_SV_DRIFT = "sv-drift"
MONITOR_GRAD_BUDGET = "grad-budget"
ALL_MONITORS = frozenset(
    {MONITOR_COLSPAN, MONITOR_PL, MONITOR_DESCENT, MONITOR_SV_DRIFT, MONITOR_GRAD_BUDGET}
)

TERMINATION_TARGET = "target-reached"
TERMINATION_BUDGET = "budget-exhausted"
TERMINATION_MONITOR = "monitor-violation"

# Floating-point slacks for invariants that are exact in real arithmetic.
COLSPAN_TOL = 1e-8
PL_SLACK = 1e-10
DESCENT_SLACK = 1e-12
SV_DRIFT_SLACK = 1e-8
GRAD_BUDGET_SLACK = 1e-8


@dataclass(frozen=True)
class AGDConfig:
    """Loop parameters: step size, horizon, stopping target on the relative
    squared residual 2f/||A||_F^2 (0 disables), diagnostic stride, and which
    monitors run in which mode (off | log | fatal)."""

    eta: float
    max_iters: int
    target_rel_loss: float = 0.0
    record_every: int = 1
    monitors: frozenset = ALL_MONITORS
    monitor_mode: str = "log"

    def __post_init__(self):
        if not self.eta > 0.0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.target_rel_loss < 0.0:
            raise ValueError(f"target_rel_loss must be >= 0, got {self.target_rel_loss}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")
        unknown = set(self.monitors) - ALL_MONITORS
        if unknown:
            raise ValueError(f"unknown monitors: {sorted(unknown)}")
        object.__setattr__(self, "monitors", frozenset(self.monitors))
        if self.monitor_mode not in ("off", "log", "fatal"):
            raise ValueError(f"monitor_mode must be off, log or fatal, got {self.monitor_mode}")


@dataclass(frozen=True)
class IterationStats:
    t: int
    f: float
    rel_loss: float
    sigma1_x: float
    sigmar_x: float
    sigma1_y: float
    sigmar_y: float
    grad_norm_x: float
    grad_norm_y: float
    balance: float
    colspan_leak: float


@dataclass(frozen=True)
class MonitorViolation:
    t: int
    monitor: str
    measured: float
    bound: float


@dataclass
class TrajectoryRecord:
    config: AGDConfig
    scheme: str | None
    seed: tuple[int, int] | None
    stats: list[IterationStats]
    termination: str
    violations: list[MonitorViolation] = field(default_factory=list)

    @property
    def f0(self) -> float:
        return self.stats[0].f

    @property
    def final(self) -> IterationStats:
        return self.stats[-1]

    def iters_to_target(self) -> int | None:
        return self.stats[-1].t if self.termination == TERMINATION_TARGET else None


def agd_step(x, y, a, eta: float):
    """One alternating step: X against the old Y, then Y against the new X."""
    x = as_matrix(x, "x")
    y = as_matrix(y, "y")
    a = as_matrix(a, "a")
    _check_shapes(x, y, a)
    if not eta > 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    with np.errstate(over="ignore", invalid="ignore"):
        x_next = x - eta * grad_x(x, y, a)
        y_next = y - eta * grad_y(x_next, y, a)
    if not (np.all(np.isfinite(x_next)) and np.all(np.isfinite(y_next))):
        raise DivergenceError(0, "non-finite iterate after one alternating step")
    return x_next, y_next


def run(a, x0, y0, cfg: AGDConfig, scheme: str | None = None,
        seed: tuple[int, int] | None = None) -> TrajectoryRecord:
    """Run alternating gradient descent from (x0, y0) against ``a``.

    Returns the trajectory record with diagnostics every ``cfg.record_every``
    iterations plus the final state.  Raises
    :class:`~altgd.errors.DivergenceError` on non-finite iterates and
    :class:`~altgd.errors.MonitorViolationError` in fatal monitor mode.
    """
    a = as_matrix(a, "a")
    x = np.array(as_matrix(x0, "x0"))
    y = np.array(as_matrix(y0, "y0"))
    _check_shapes(x, y, a)
    eta = cfg.eta
    d = x.shape[1]

    na2 = float(np.vdot(a, a))
    a_svd = svd(a)
    rank = numeric_rank(a_svd.singular_values, RANK_TOL)
    if rank == 0:
        raise DegenerateMatrixError("cannot run against a zero matrix")
    basis = np.ascontiguousarray(a_svd.u[:, :rank])
    r_idx = min(rank, d) - 1

    monitors = cfg.monitors if cfg.monitor_mode != "off" else frozenset()
    fatal = cfg.monitor_mode == "fatal"
    need_norms = bool({MONITOR_DESCENT, MONITOR_GRAD_BUDGET} & monitors)
    target_f = 0.5 * cfg.target_rel_loss * na2 if cfg.target_rel_loss > 0.0 else -1.0

    stats: list[IterationStats] = []
    violations: list[MonitorViolation] = []

    # Set after the t=0 snapshot.
    f0 = math.nan
    t_star = math.inf
    init_norms_ok = False
    baseline: IterationStats | None = None

    def build_record(termination: str) -> TrajectoryRecord:
        return TrajectoryRecord(
            config=cfg, scheme=scheme, seed=seed,
            stats=list(stats), termination=termination, violations=list(violations),
        )

    def violate(t: int, monitor: str, measured: float, bound: float) -> None:
        violations.append(MonitorViolation(t=t, monitor=monitor, measured=measured, bound=bound))
        if fatal:
            raise MonitorViolationError(violations, build_record(TERMINATION_MONITOR))

    def snapshot(t: int) -> IterationStats:
        r_full = x @ y.T - a
        f = 0.5 * float(np.vdot(r_full, r_full))
        svx = np.linalg.svd(x, compute_uv=False)
        svy = np.linalg.svd(y, compute_uv=False)
        gx = r_full @ y
        x_next = x - eta * gx
        r_half = x_next @ y.T - a
        f_half = 0.5 * float(np.vdot(r_half, r_half))
        gy_half = r_half.T @ x_next
        grad_norm_y = float(np.linalg.norm(gy_half))
        leak = colspan_leak(x, basis)
        row = IterationStats(
            t=t,
            f=f,
            rel_loss=2.0 * f / na2,
            sigma1_x=float(svx[0]),
            sigmar_x=float(svx[r_idx]),
            sigma1_y=float(svy[0]),
            sigmar_y=float(svy[r_idx]),
            grad_norm_x=float(np.linalg.norm(gx)),
            grad_norm_y=grad_norm_y,
            balance=float(np.linalg.norm(x.T @ x - y.T @ y)),
            colspan_leak=leak,
        )
        stats.append(row)

        if MONITOR_COLSPAN in monitors and leak > COLSPAN_TOL:
            violate(t, MONITOR_COLSPAN, leak, COLSPAN_TOL)
        if MONITOR_PL in monitors:
            sr_next = float(np.linalg.svd(x_next, compute_uv=False)[r_idx])
            lhs = grad_norm_y * grad_norm_y
            rhs = 2.0 * sr_next * sr_next * f_half - PL_SLACK * (1.0 + f_half)
            if lhs < rhs:
                violate(t, MONITOR_PL, lhs, rhs)
        if (
            MONITOR_SV_DRIFT in monitors
            and baseline is not None
            and init_norms_ok
            and t <= t_star
        ):
            drift = math.sqrt(2.0 * t * eta * f0)
            for measured, reference, low in (
                (row.sigmar_x, baseline.sigmar_x, True),
                (row.sigmar_y, baseline.sigmar_y, True),
                (row.sigma1_x, baseline.sigma1_x, False),
                (row.sigma1_y, baseline.sigma1_y, False),
            ):
                if low:
                    bound = reference - drift - SV_DRIFT_SLACK
                    if measured < bound:
                        violate(t, MONITOR_SV_DRIFT, measured, bound)
                else:
                    bound = reference + drift + SV_DRIFT_SLACK
                    if measured > bound:
                        violate(t, MONITOR_SV_DRIFT, measured, bound)
        return row

    first = snapshot(0)
    f0 = first.f
    baseline = first
    if f0 > 0.0:
        t_star = math.floor(1.0 / (32.0 * eta * eta * f0))
    init_norms_ok = (
        first.sigma1_x**2 <= 9.0 / (16.0 * eta)
        and first.sigma1_y**2 <= 9.0 / (16.0 * eta)
    )
    budget_sum = 0.0
    budget_bound = 2.0 * f0 / eta + GRAD_BUDGET_SLACK
    budget_preconds_ok = True
    budget_violated = False

    if target_f >= 0.0 and f0 <= target_f:
        return build_record(TERMINATION_TARGET)

    t = 0
    termination = TERMINATION_BUDGET
    while t < cfg.max_iters:
        block_len = min(cfg.record_every, cfg.max_iters - t)
        res = run_block(x, y, a, eta, block_len, target_f, need_norms)

        if MONITOR_DESCENT in monitors:
            inv_eta = 1.0 / eta
            for j in range(res.steps):
                if res.lamy[j] <= inv_eta and res.lamx[j + 1] <= 2.0 * inv_eta:
                    if res.f[j + 1] > res.f[j] + DESCENT_SLACK:
                        violate(t + j + 1, MONITOR_DESCENT,
                                res.f[j + 1] - res.f[j], DESCENT_SLACK)
        if MONITOR_GRAD_BUDGET in monitors:
            inv_eta = 1.0 / eta
            for j in range(res.steps):
                if budget_preconds_ok and not (
                    res.lamx[j] <= inv_eta and res.lamy[j] <= inv_eta
                ):
                    budget_preconds_ok = False
                budget_sum += res.gx2[j]
                if (
                    not budget_violated
                    and budget_preconds_ok
                    and init_norms_ok
                    and t + j <= t_star
                    and budget_sum > budget_bound
                ):
                    budget_violated = True
                    violate(t + j, MONITOR_GRAD_BUDGET, budget_sum, budget_bound)

        if res.status == STATUS_NONFINITE:
            raise DivergenceError(t + res.steps)
        t += res.steps
        snapshot(t)
        if res.status == STATUS_TARGET:
            termination = TERMINATION_TARGET
            break

    return build_record(termination)
