"""Pure-numpy fallback for the alternating-descent inner loop."""

from __future__ import annotations

import math

import numpy as np

from .result import STATUS_NONFINITE, STATUS_OK, STATUS_TARGET, BlockResult

NAME = "numpy"


def _lam_max(m: np.ndarray) -> float:
    # Exact squared spectral norm via the d x d Gram matrix.
    return float(np.linalg.eigvalsh(m.T @ m)[-1])


def run_block(
    x: np.ndarray,
    y: np.ndarray,
    a: np.ndarray,
    eta: float,
    max_steps: int,
    target_f: float,
    need_norms: bool,
) -> BlockResult:
    """Advance (x, y) in place by up to ``max_steps`` alternating steps.

    Per visited state j (0 .. steps) the block reports the loss f[j] and,
    when ``need_norms``, the squared spectral norms lam_x[j], lam_y[j]; per
    step taken it reports the squared gradient norms gx2[j], gy2[j].  Stops
    early when the loss is non-finite or falls to ``target_f`` (disabled if
    negative); the final visited state is always covered by the reports.
    """
    k = int(max_steps)
    f = np.empty(k + 1)
    gx2 = np.empty(k)
    gy2 = np.empty(k)
    lamx = np.zeros(k + 1)
    lamy = np.zeros(k + 1)
    status = STATUS_OK
    steps = k
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(k + 1):
            r = x @ y.T
            r -= a
            fj = 0.5 * float(np.vdot(r, r))
            f[j] = fj
            if need_norms:
                lamx[j] = _lam_max(x)
                lamy[j] = _lam_max(y)
            if not math.isfinite(fj):
                status, steps = STATUS_NONFINITE, j
                break
            if target_f >= 0.0 and fj <= target_f:
                status, steps = STATUS_TARGET, j
                break
            if j == k:
                break
            gx = r @ y
            gx2[j] = float(np.vdot(gx, gx))
            x -= eta * gx
            r2 = x @ y.T
            r2 -= a
            gy = r2.T @ x
            gy2[j] = float(np.vdot(gy, gy))
            y -= eta * gy
    return BlockResult(
        steps=steps,
        status=status,
        f=f[: steps + 1],
        gx2=gx2[:steps],
        gy2=gy2[:steps],
        lamx=lamx[: steps + 1],
        lamy=lamy[: steps + 1],
    )
