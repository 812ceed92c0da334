"""Alternating gradient descent for asymmetric low-rank matrix factorization.

The library factors a rank-r matrix A as X Y^T with factor rank d > r using
alternating gradient descent from a deliberately unbalanced random
initialization that places X0 in the column space of A.  It computes the
closed-form convergence theory for each instance (rate constant, step-size
cap, iteration budget, decay envelope, restart schedule), monitors the
theory's invariants at runtime, and reproduces the reference experiments as
CSV trajectories via the ``altgd`` CLI.
"""

from ._kernel import BACKEND as KERNEL_BACKEND
from .agd import (
    ALL_MONITORS,
    AGDConfig,
    IterationStats,
    MonitorViolation,
    TrajectoryRecord,
    agd_step,
    run,
)
from .errors import (
    AltgdError,
    ConfigError,
    DegenerateMatrixError,
    DivergenceError,
    InfeasibleParametersError,
    MonitorViolationError,
    NonFiniteError,
    OutOfRegimeError,
    RankDeficiencyError,
    TrivialTargetError,
)
from .initializer import (
    InitConfig,
    InitScheme,
    init_balanced_colspan,
    init_plain_gaussian,
    init_unbalanced,
    initialize,
)
from .matrixcore import (
    DenseMatrix,
    Rng,
    SvdResult,
    colspan_leak,
    column_space_basis,
    frobenius_norm,
    gaussian_matrix,
    orthonormal_columns,
    singular_values,
    spectral_norm,
    svd,
)
from .objective import Residuals, balancedness, grad_x, grad_y, loss
from .synth import SpectrumSpec, make_matrix
from .theory import (
    TheoryReport,
    beta,
    decay_envelope,
    delta,
    eta_max,
    gaussian_sv_bounds,
    initial_loss_bound,
    iteration_budget,
    rho,
    stage_schedule,
    theory_report,
)

__version__ = "0.1.0"

__all__ = [
    "AGDConfig",
    "ALL_MONITORS",
    "AltgdError",
    "ConfigError",
    "DegenerateMatrixError",
    "DenseMatrix",
    "DivergenceError",
    "InfeasibleParametersError",
    "InitConfig",
    "InitScheme",
    "IterationStats",
    "KERNEL_BACKEND",
    "MonitorViolation",
    "MonitorViolationError",
    "NonFiniteError",
    "OutOfRegimeError",
    "RankDeficiencyError",
    "Residuals",
    "Rng",
    "SpectrumSpec",
    "SvdResult",
    "TheoryReport",
    "TrajectoryRecord",
    "TrivialTargetError",
    "agd_step",
    "balancedness",
    "beta",
    "colspan_leak",
    "column_space_basis",
    "decay_envelope",
    "delta",
    "eta_max",
    "frobenius_norm",
    "gaussian_matrix",
    "gaussian_sv_bounds",
    "grad_x",
    "grad_y",
    "init_balanced_colspan",
    "init_plain_gaussian",
    "init_unbalanced",
    "initial_loss_bound",
    "initialize",
    "iteration_budget",
    "loss",
    "make_matrix",
    "orthonormal_columns",
    "rho",
    "run",
    "singular_values",
    "spectral_norm",
    "stage_schedule",
    "svd",
    "theory_report",
]
