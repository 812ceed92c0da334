"""Closed-form convergence theory for alternating gradient descent.

Given a rank-r target A, factor rank d > r and the initialization constants,
these functions compute the over-parameterization margin rho, the rate
constant beta = rho^2 sigma_r^2 / (c^2 sigma1^2), the failure-probability
term delta, the step-size cap for a requested accuracy, the iteration budget
for which the guarantees hold, the geometric decay envelope on the squared
residual, the recursive restart schedule, and the non-asymptotic singular
value bounds for Gaussian matrices that underpin the initialization events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DegenerateMatrixError,
    InfeasibleParametersError,
    OutOfRegimeError,
    RankDeficiencyError,
    TrivialTargetError,
)
from .initializer import RANK_TOL, InitConfig
from .matrixcore import DenseMatrix, as_matrix, numeric_rank, singular_values

DEFAULT_S = 1e-12


@dataclass(frozen=True)
class TheoryReport:
    """All theory quantities for one problem instance."""

    rho: float
    beta: float
    delta: float
    s: float
    eta_max: float
    t_budget: int
    f0: float
    sigma1: float
    sigmar: float
    rank: int
    envelope: Callable[[float], float]


def rho(d: int, r: int, s: float) -> float:
    """Over-parameterization margin 1 - (sqrt(r) + sqrt(s)) / sqrt(d)."""
    if d < 1 or r < 1:
        raise ValueError(f"need d >= 1 and r >= 1, got d={d}, r={r}")
    if not s > 0.0:
        raise ValueError(f"s must be positive, got {s}")
    if math.sqrt(r) + math.sqrt(s) >= math.sqrt(d):
        raise InfeasibleParametersError(
            f"feasibility requires sqrt(r) + sqrt(s) < sqrt(d); "
            f"got sqrt({r}) + sqrt({s}) = {math.sqrt(r) + math.sqrt(s):.6f} "
            f">= sqrt({d}) = {math.sqrt(d):.6f}"
        )
    return 1.0 - (math.sqrt(r) + math.sqrt(s)) / math.sqrt(d)


def beta(rho_value: float, sigma1: float, sigmar: float, c: float) -> float:
    """Rate constant rho^2 sigma_r^2 / (c^2 sigma1^2)."""
    if not 0.0 < rho_value <= 1.0:
        raise ValueError(f"rho must lie in (0, 1], got {rho_value}")
    if sigmar <= 0.0:
        raise RankDeficiencyError(f"sigma_r must be positive, got {sigmar}")
    if sigma1 < sigmar:
        raise ValueError(f"need sigma1 >= sigma_r, got {sigma1} < {sigmar}")
    if not c >= 1.0:
        raise ValueError(f"c must be >= 1, got {c}")
    return (rho_value * sigmar) ** 2 / (c * sigma1) ** 2


def delta(s: float, r: float, d: float) -> float:
    """Failure-probability term exp(-s/2) + exp(-r/2) + exp(-d/2).

    Zero arguments are allowed so the degenerate limit (value 3) is
    evaluable; negatives are rejected.
    """
    for name, value in (("s", s), ("r", r), ("d", d)):
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value}")
    return math.exp(-s / 2.0) + math.exp(-r / 2.0) + math.exp(-d / 2.0)


def eta_max(beta_value: float, f0: float, epsilon: float) -> float:
    """Largest step size guaranteeing an epsilon-accurate squared residual:
    beta / sqrt(32 f0 log(2 f0 / epsilon))."""
    if not beta_value > 0.0:
        raise ValueError(f"beta must be positive, got {beta_value}")
    if not f0 > 0.0:
        raise ValueError(f"f0 must be positive, got {f0}")
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if epsilon >= 2.0 * f0:
        raise TrivialTargetError(
            f"epsilon = {epsilon} is at least the initial squared residual "
            f"2 f0 = {2.0 * f0}; the target is met before the first step"
        )
    return beta_value / math.sqrt(32.0 * f0 * math.log(2.0 * f0 / epsilon))


def iteration_budget(beta_value: float, eta: float, f0: float) -> int:
    """Horizon floor(beta / (8 eta^2 f0)) over which the guarantees hold."""
    if not (beta_value > 0.0 and eta > 0.0 and f0 > 0.0):
        raise ValueError("beta, eta and f0 must all be positive")
    return int(math.floor(beta_value / (8.0 * eta * eta * f0)))


def decay_envelope(beta_value: float, f0: float, t: float) -> float:
    """Bound 2 exp(-beta t / 4) f0 on the squared residual at iteration t."""
    if t < 0:
        raise ValueError(f"iteration index must be non-negative, got {t}")
    return 2.0 * math.exp(-beta_value * t / 4.0) * f0


def stage_schedule(
    beta_value: float, eta: float, f0: float, epsilon: float, k: int
) -> list[int]:
    """Cumulative iteration counts of the recursive restart schedule.

    Stage l+1 runs floor((1/(4 epsilon))^l * T1) iterations, where T1 is the
    base budget; after stage k the squared residual is epsilon^k times its
    initial value.  Requires epsilon <= 1/16 and eta within the schedule's
    step-size cap beta / sqrt(32 f0 log(1/epsilon)).
    """
    if k < 1:
        raise ValueError(f"need at least one stage, got k={k}")
    if not 0.0 < epsilon <= 1.0 / 16.0:
        raise OutOfRegimeError(
            f"the restart schedule requires 0 < epsilon <= 1/16, got {epsilon}"
        )
    cap = beta_value / math.sqrt(32.0 * f0 * math.log(1.0 / epsilon))
    if eta > cap * (1.0 + 1e-12):
        raise OutOfRegimeError(
            f"eta = {eta:.6e} exceeds the schedule step-size cap {cap:.6e}"
        )
    t1 = iteration_budget(beta_value, eta, f0)
    ratio = 1.0 / (4.0 * epsilon)
    cumulative: list[int] = []
    total = 0
    for stage in range(k):
        total += int(math.floor(ratio**stage * t1))
        cumulative.append(total)
    return cumulative


def gaussian_sv_bounds(
    d: int, r: int, t: float, variance: float = 1.0
) -> tuple[float, float, float]:
    """High-probability extreme singular values of a d x r Gaussian matrix.

    For i.i.d. mean-zero entries of the given variance, each of

        sigma_r >= sqrt(v) (sqrt(d) - sqrt(r) - t)
        sigma_1 <= sqrt(v) (sqrt(d) + sqrt(r) + t)

    holds with probability at least 1 - exp(-t^2 / 2).  Returns
    (lower, upper, probability).
    """
    if d < r or r < 1:
        raise ValueError(f"need d >= r >= 1, got d={d}, r={r}")
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    if not variance > 0.0:
        raise ValueError(f"variance must be positive, got {variance}")
    root_v = math.sqrt(variance)
    lower = root_v * (math.sqrt(d) - math.sqrt(r) - t)
    upper = root_v * (math.sqrt(d) + math.sqrt(r) + t)
    prob = 1.0 - math.exp(-t * t / 2.0)
    return lower, upper, prob


def initial_loss_bound(a: DenseMatrix, nu: float) -> float:
    """Deterministic high-probability bound 0.5 (1 + nu)^2 ||A||_F^2 on the
    initial loss of the unbalanced scheme."""
    a = as_matrix(a, "a")
    return 0.5 * (1.0 + nu) ** 2 * float(np.vdot(a, a))


def theory_report(
    a: DenseMatrix,
    cfg: InitConfig,
    epsilon: float,
    s: float = DEFAULT_S,
    f0: float | None = None,
) -> TheoryReport:
    """Assemble every theory quantity for the instance (A, cfg, epsilon).

    ``f0`` defaults to the deterministic bound 0.5 (1 + nu)^2 ||A||_F^2 so the
    step-size cap is computable before any random draw; pass a realized
    initial loss to tighten the report.
    """
    a = as_matrix(a, "a")
    sv = singular_values(a)
    if float(sv[0]) <= 0.0:
        raise DegenerateMatrixError("cannot build a theory report for a zero matrix")
    rank = numeric_rank(sv, RANK_TOL)
    sigma1 = float(sv[0])
    sigmar = float(sv[rank - 1])
    if cfg.d <= rank:
        raise InfeasibleParametersError(
            f"factor rank d = {cfg.d} must exceed rank(A) = {rank}"
        )
    rho_value = rho(cfg.d, rank, s)
    beta_value = beta(rho_value, sigma1, sigmar, cfg.c)
    delta_value = delta(s, rank, cfg.d)
    f0_value = float(f0) if f0 is not None else initial_loss_bound(a, cfg.nu)
    eta_cap = eta_max(beta_value, f0_value, epsilon)
    t_budget = iteration_budget(beta_value, eta_cap, f0_value)

    def envelope(t: float, _b: float = beta_value, _f: float = f0_value) -> float:
        return decay_envelope(_b, _f, t)

    return TheoryReport(
        rho=rho_value,
        beta=beta_value,
        delta=delta_value,
        s=s,
        eta_max=eta_cap,
        t_budget=t_budget,
        f0=f0_value,
        sigma1=sigma1,
        sigmar=sigmar,
        rank=rank,
        envelope=envelope,
    )
