"""The factorization objective f(X, Y) = 0.5 ||X Y^T - A||_F^2 and its gradients."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrixcore import DenseMatrix


def _check_shapes(x: DenseMatrix, y: DenseMatrix, a: DenseMatrix) -> None:
    m, n = a.shape
    if x.shape[0] != m or y.shape[0] != n or x.shape[1] != y.shape[1]:
        raise ValueError(
            f"inconsistent shapes: x {x.shape}, y {y.shape}, a {a.shape} "
            "(need x: m x d, y: n x d, a: m x n)"
        )


def residual(x: DenseMatrix, y: DenseMatrix, a: DenseMatrix) -> DenseMatrix:
    """R = X Y^T - A, the m x n residual whose squared norm is twice the loss."""
    _check_shapes(x, y, a)
    return x @ y.T - a


def half_residual(x: DenseMatrix, y: DenseMatrix, a: DenseMatrix) -> DenseMatrix:
    """The transposed residual Y X^T - A^T (n x m), as used after an X half-step."""
    _check_shapes(x, y, a)
    return y @ x.T - a.T


@dataclass(frozen=True)
class Residuals:
    """Residual pair around one alternation: the full residual at (X_t, Y_t)
    and the transposed half-step residual at (X_{t+1}, Y_t)."""

    r_full: DenseMatrix
    r_half: DenseMatrix

    @property
    def loss_full(self) -> float:
        return 0.5 * float(np.vdot(self.r_full, self.r_full))

    @property
    def loss_half(self) -> float:
        return 0.5 * float(np.vdot(self.r_half, self.r_half))


def loss(x: DenseMatrix, y: DenseMatrix, a: DenseMatrix) -> float:
    r = residual(x, y, a)
    return 0.5 * float(np.vdot(r, r))


def grad_x(x: DenseMatrix, y: DenseMatrix, a: DenseMatrix) -> DenseMatrix:
    """Gradient in X: (X Y^T - A) Y, shape m x d."""
    return residual(x, y, a) @ y


def grad_y(x: DenseMatrix, y: DenseMatrix, a: DenseMatrix) -> DenseMatrix:
    """Gradient in Y: (X Y^T - A)^T X, shape n x d."""
    return residual(x, y, a).T @ x


def balancedness(x: DenseMatrix, y: DenseMatrix) -> float:
    """||X^T X - Y^T Y||_F; zero iff the factor pair is perfectly balanced."""
    if x.shape[1] != y.shape[1]:
        raise ValueError(f"factor column counts differ: {x.shape[1]} vs {y.shape[1]}")
    return float(np.linalg.norm(x.T @ x - y.T @ y))
