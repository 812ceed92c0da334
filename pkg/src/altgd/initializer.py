"""Factor initialization schemes.

The main scheme is deliberately unbalanced: X0 is placed in the column space
of A and blown up by 1/(sqrt(eta) C sigma1(A)), while Y0 is shrunk by
sqrt(eta) D sigma1(A).  Two baselines isolate what that buys: one keeps the
column-space placement but balances the factor scales, the other is a plain
balanced Gaussian draw.  Both baselines are scaled to reproduce the
unbalanced scheme's initial product magnitude (exactly for the column-space
baseline, in expectation for the Gaussian one) so comparisons start from the
same initial loss.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMatrixError, InfeasibleParametersError
from .matrixcore import DenseMatrix, Rng, as_matrix, numeric_rank, singular_values

RANK_TOL = 1e-10


class InitScheme(enum.Enum):
    UNBALANCED = "unbalanced"
    BALANCED_COLSPAN = "balanced-colspan"
    PLAIN_GAUSSIAN = "plain-gaussian"


@dataclass(frozen=True)
class InitConfig:
    """Constants of the initialization: scale factors c (>= 1), nu in (0, 1),
    d_scale (defaults to the maximum allowed, c * nu / 9), step size eta and
    factor rank d."""

    c: float
    nu: float
    eta: float
    d: int
    d_scale: float | None = None
    scheme: InitScheme = InitScheme.UNBALANCED

    def __post_init__(self):
        if not self.c >= 1.0:
            raise ValueError(f"c must be >= 1, got {self.c}")
        if not 0.0 < self.nu < 1.0:
            raise ValueError(f"nu must lie in (0, 1), got {self.nu}")
        if not self.eta > 0.0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.d < 1:
            raise ValueError(f"factor rank d must be >= 1, got {self.d}")
        if self.d_scale is None:
            object.__setattr__(self, "d_scale", self.c * self.nu / 9.0)
        elif self.d_scale > self.c * self.nu / 9.0 * (1.0 + 1e-12):
            raise ValueError(
                f"d_scale must not exceed c * nu / 9 = {self.c * self.nu / 9.0:.6e}, "
                f"got {self.d_scale}"
            )


def _spectrum_and_rank(a: DenseMatrix, cfg: InitConfig) -> tuple[float, int]:
    sv = singular_values(a)
    sigma1 = float(sv[0])
    if sigma1 <= 0.0:
        raise DegenerateMatrixError("cannot initialize against a zero matrix")
    rank = numeric_rank(sv, RANK_TOL)
    if cfg.d <= rank:
        raise InfeasibleParametersError(
            f"factor rank d = {cfg.d} must exceed rank(A) = {rank}"
        )
    return sigma1, rank


def _draw_factors(rng: Rng, n: int, d: int) -> tuple[DenseMatrix, DenseMatrix]:
    # Fixed draw order: the column-mixing factor (variance 1/d), then the
    # Y-side factor (variance 1/n).  Schemes sharing a stream share draws.
    phi_x = rng.normal(n, d, math.sqrt(1.0 / d))
    phi_y = rng.normal(n, d, math.sqrt(1.0 / n))
    return phi_x, phi_y


def init_unbalanced(rng: Rng, a, cfg: InitConfig) -> tuple[DenseMatrix, DenseMatrix]:
    """Unbalanced initialization:

        X0 = A Phi_x / (sqrt(eta) c sigma1(A)),   Y0 = sqrt(eta) d_scale sigma1(A) Phi_y

    X0 lies in the column space of A by construction; the initial loss does
    not depend on eta or on the sigma1(A) scale factors (they cancel in
    X0 Y0^T).
    """
    a = as_matrix(a, "a")
    sigma1, _ = _spectrum_and_rank(a, cfg)
    n = a.shape[1]
    phi_x, phi_y = _draw_factors(rng, n, cfg.d)
    x0 = (a @ phi_x) / (math.sqrt(cfg.eta) * cfg.c * sigma1)
    y0 = math.sqrt(cfg.eta) * cfg.d_scale * sigma1 * phi_y
    return np.ascontiguousarray(x0), np.ascontiguousarray(y0)


def _rebalance(x: DenseMatrix, y: DenseMatrix) -> tuple[DenseMatrix, DenseMatrix]:
    # Divide X and multiply Y by the same scalar so their top singular values
    # agree; the product X Y^T is unchanged.
    s1x = float(singular_values(x)[0])
    s1y = float(singular_values(y)[0])
    if s1x <= 0.0 or s1y <= 0.0:
        raise DegenerateMatrixError("cannot rebalance a zero factor")
    g = math.sqrt(s1x / s1y)
    return np.ascontiguousarray(x / g), np.ascontiguousarray(y * g)


def init_balanced_colspan(rng: Rng, a, cfg: InitConfig) -> tuple[DenseMatrix, DenseMatrix]:
    """Column-space placement without the asymmetric scaling: the unbalanced
    factors rebalanced to equal top singular values, preserving X0 Y0^T."""
    x0, y0 = init_unbalanced(rng, a, cfg)
    return _rebalance(x0, y0)


def init_plain_gaussian(rng: Rng, a, cfg: InitConfig) -> tuple[DenseMatrix, DenseMatrix]:
    """Plain balanced Gaussian baseline.

    Entries are N(0, 1/d) for X0 and N(0, 1/n) for Y0, with a common scalar
    chosen so E ||X0 Y0^T||_F^2 matches the unbalanced scheme's
    (d_scale/c)^2 ||A||_F^2, then rebalanced to equal top singular values.
    """
    a = as_matrix(a, "a")
    _spectrum_and_rank(a, cfg)
    m, n = a.shape
    gx = rng.normal(m, cfg.d, math.sqrt(1.0 / cfg.d))
    gy = rng.normal(n, cfg.d, math.sqrt(1.0 / n))
    product_norm = (cfg.d_scale / cfg.c) * float(np.linalg.norm(a)) / math.sqrt(m)
    c0 = math.sqrt(product_norm)
    return _rebalance(c0 * gx, c0 * gy)


_DISPATCH = {
    InitScheme.UNBALANCED: init_unbalanced,
    InitScheme.BALANCED_COLSPAN: init_balanced_colspan,
    InitScheme.PLAIN_GAUSSIAN: init_plain_gaussian,
}


def initialize(rng: Rng, a, cfg: InitConfig) -> tuple[DenseMatrix, DenseMatrix]:
    """Dispatch on ``cfg.scheme``."""
    return _DISPATCH[cfg.scheme](rng, a, cfg)
