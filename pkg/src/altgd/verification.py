"""Self-contained verification suites behind the ``verify`` CLI command.

Each suite returns a (name, passed, detail) result.  The suites check, at
desk scale: gradients against central finite differences, invariance of the
initial loss to the step size, the invariant monitors in fatal mode at the
theoretical step size, the geometric decay envelope, the column-span
negative control for the plain Gaussian baseline, and the Monte-Carlo
concentration of Gaussian extreme singular values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import objective, theory
from .agd import ALL_MONITORS, AGDConfig, run
from .errors import MonitorViolationError
from .initializer import InitConfig, init_plain_gaussian, init_unbalanced
from .matrixcore import Rng, colspan_leak, column_space_basis, gaussian_matrix
from .synth import SpectrumSpec, make_matrix

FD_STEP = 1e-6
FD_TOL = 1e-6


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _finite_difference(f: Callable[[np.ndarray], float], m: np.ndarray) -> np.ndarray:
    g = np.zeros_like(m)
    it = np.nditer(m, flags=["multi_index"])
    while not it.finished:
        idx = it.multi_index
        plus = m.copy()
        plus[idx] += FD_STEP
        minus = m.copy()
        minus[idx] -= FD_STEP
        g[idx] = (f(plus) - f(minus)) / (2.0 * FD_STEP)
        it.iternext()
    return g


def gradient_suite(
    instances: int = 100,
    seed: int = 20240,
    grad_x_fn: Callable = objective.grad_x,
    grad_y_fn: Callable = objective.grad_y,
) -> SuiteResult:
    """Both gradients vs central finite differences on small random instances."""
    worst = 0.0
    rng = Rng(seed, 0)
    gen = rng._gen
    for _ in range(instances):
        m = int(gen.integers(2, 9))
        n = int(gen.integers(2, 9))
        d = int(gen.integers(1, 5))
        a = gen.normal(size=(m, n))
        x = gen.normal(size=(m, d))
        y = gen.normal(size=(n, d))
        gx = grad_x_fn(x, y, a)
        gy = grad_y_fn(x, y, a)
        fd_x = _finite_difference(lambda v: objective.loss(v, y, a), x)
        fd_y = _finite_difference(lambda v: objective.loss(x, v, a), y)
        err_x = np.linalg.norm(fd_x - gx) / max(1.0, np.linalg.norm(gx))
        err_y = np.linalg.norm(fd_y - gy) / max(1.0, np.linalg.norm(gy))
        worst = max(worst, err_x, err_y)
    return SuiteResult(
        "gradient-finite-difference",
        worst <= FD_TOL,
        f"worst relative error {worst:.3e} over {instances} instances (tol {FD_TOL:.0e})",
    )


def f0_step_size_suite(a: np.ndarray, cfg_proto: InitConfig, seeds: Sequence[int],
                       base_seed: int) -> SuiteResult:
    """The initial loss of the unbalanced scheme must not depend on eta."""
    etas = (1e-4, 1e-2, 1.0)
    worst = 0.0
    for stream in seeds:
        values = []
        for eta in etas:
            cfg = InitConfig(c=cfg_proto.c, nu=cfg_proto.nu, eta=eta, d=cfg_proto.d)
            x0, y0 = init_unbalanced(Rng(base_seed, stream), a, cfg)
            values.append(objective.loss(x0, y0, a))
        spread = (max(values) - min(values)) / max(values)
        worst = max(worst, spread)
    return SuiteResult(
        "f0-step-size-independence",
        worst <= 1e-12,
        f"worst relative spread of f0 across eta {etas}: {worst:.3e} (tol 1e-12)",
    )


def fatal_monitor_suite(a: np.ndarray, cfg_proto: InitConfig, seeds: Sequence[int],
                        base_seed: int, epsilon: float = 1e-8,
                        max_iters: int = 10_000, record_every: int = 100):
    """Run at the theoretical step size with every monitor fatal, and check
    the decay envelope on the recorded losses.  Returns two results."""
    report = theory.theory_report(a, cfg_proto, epsilon)
    eta = report.eta_max
    cfg = AGDConfig(
        eta=eta, max_iters=max_iters, target_rel_loss=0.0,
        record_every=record_every, monitors=ALL_MONITORS, monitor_mode="fatal",
    )
    init_cfg = InitConfig(c=cfg_proto.c, nu=cfg_proto.nu, eta=eta, d=cfg_proto.d)
    envelope_ok = True
    envelope_detail = ""
    try:
        for stream in seeds:
            x0, y0 = init_unbalanced(Rng(base_seed, stream), a, init_cfg)
            record = run(a, x0, y0, cfg, scheme="unbalanced", seed=(base_seed, stream))
            f0 = record.f0
            horizon = min(report.t_budget, max_iters)
            for row in record.stats:
                if row.t <= horizon and row.f > math.exp(-report.beta * row.t / 4.0) * f0:
                    envelope_ok = False
                    envelope_detail = f"f exceeded envelope at t={row.t} (stream {stream})"
                    break
        monitor_result = SuiteResult(
            "invariant-monitors-fatal",
            True,
            f"{len(seeds)} runs x {max_iters} iterations at eta={eta:.3e}, no violation",
        )
    except MonitorViolationError as err:
        monitor_result = SuiteResult("invariant-monitors-fatal", False, str(err))
        envelope_ok = False
        envelope_detail = "skipped (monitor violation)"
    envelope_result = SuiteResult(
        "decay-envelope",
        envelope_ok,
        envelope_detail or f"f_t <= exp(-beta t/4) f0 at all recorded t (beta={report.beta:.3e})",
    )
    return monitor_result, envelope_result


def colspan_negative_control(a: np.ndarray, cfg_proto: InitConfig,
                             base_seed: int) -> SuiteResult:
    """The plain Gaussian baseline must *fail* the column-span property."""
    cfg = InitConfig(c=cfg_proto.c, nu=cfg_proto.nu, eta=cfg_proto.eta, d=cfg_proto.d)
    x0, _ = init_plain_gaussian(Rng(base_seed, 0), a, cfg)
    basis = column_space_basis(a)
    leak = colspan_leak(x0, basis)
    return SuiteResult(
        "colspan-negative-control",
        leak > 1e-2,
        f"plain-gaussian leak at t=0 is {leak:.3f} (> 1e-2 expected: control fails the "
        "column-span property by design)",
    )


def concentration_suite(d: int = 50, r: int = 10, t: float = 2.0, trials: int = 2000,
                        seed: int = 30117, margin: float = 0.03) -> SuiteResult:
    """Empirical violation rates of the Gaussian singular value bounds."""
    lower, upper, prob = theory.gaussian_sv_bounds(d, r, t)
    bound_rate = 1.0 - prob
    rng = Rng(seed, 0)
    below = above = 0
    for _ in range(trials):
        g = gaussian_matrix(rng, d, r, 1.0)
        sv = np.linalg.svd(g, compute_uv=False)
        below += sv[-1] < lower
        above += sv[0] > upper
    rate_low = below / trials
    rate_high = above / trials
    ok = rate_low <= bound_rate + margin and rate_high <= bound_rate + margin
    return SuiteResult(
        "gaussian-concentration",
        ok,
        f"violation rates {rate_low:.4f}/{rate_high:.4f} vs bound "
        f"{bound_rate:.4f} + {margin} ({trials} trials)",
    )


def run_all_suites(
    base_seed: int = 777,
    matrix_seed: int | None = None,
    grad_x_fn: Callable = objective.grad_x,
    grad_y_fn: Callable = objective.grad_y,
    monitor_seeds: Sequence[int] = (0, 1, 2),
    monitor_iters: int = 10_000,
) -> list[SuiteResult]:
    """All suites on the standard desk-scale instance."""
    matrix_seed = base_seed if matrix_seed is None else matrix_seed
    spec = SpectrumSpec.linspace(100, 100, 1.0, 0.5, 5)
    a = make_matrix(Rng(matrix_seed, 2**63), spec)
    cfg_proto = InitConfig(c=4.0, nu=1e-10, eta=0.0683, d=6)

    results = [gradient_suite(grad_x_fn=grad_x_fn, grad_y_fn=grad_y_fn)]
    results.append(
        f0_step_size_suite(a, cfg_proto, seeds=range(10), base_seed=base_seed)
    )
    monitor_result, envelope_result = fatal_monitor_suite(
        a, cfg_proto, seeds=monitor_seeds, base_seed=base_seed, max_iters=monitor_iters
    )
    results.append(monitor_result)
    results.append(envelope_result)
    results.append(colspan_negative_control(a, cfg_proto, base_seed))
    results.append(concentration_suite())
    return results
