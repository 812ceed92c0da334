"""Dense linear algebra and seeded random sampling used by every other module.

All matrices are 2-D ``float64`` C-contiguous numpy arrays (row-major).
``DenseMatrix`` is an alias for ``numpy.ndarray`` with that convention; the
:func:`as_matrix` validator enforces it at API boundaries.  Randomness comes
from counter-based Philox streams keyed by ``(seed, stream_id)`` so that any
trial of any experiment can be reproduced bit-for-bit from two integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMatrixError, NonFiniteError

DenseMatrix = np.ndarray

_UINT64_SPAN = 2**64


class Rng:
    """Seeded random stream keyed by ``(seed, stream_id)``.

    Identical keys reproduce identical sample sequences across runs and
    platforms (Philox is counter-based, not OS-seeded).  Distinct stream ids
    give statistically independent streams, so parallel trials derive their
    own stream from a shared base seed, e.g. ``Rng(base, trial_index)``.

    Instances are stateful: successive draws advance the stream.  Construct a
    fresh ``Rng`` to restart a sequence.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        for name, value in (("seed", seed), ("stream_id", stream_id)):
            if not isinstance(value, (int, np.integer)):
                raise ValueError(f"{name} must be an integer, got {value!r}")
            if not 0 <= value < _UINT64_SPAN:
                raise ValueError(f"{name} must fit in 64 unsigned bits, got {value}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._gen = np.random.Generator(np.random.Philox(key=[self.seed, self.stream_id]))

    def normal(self, rows: int, cols: int, std: float = 1.0) -> DenseMatrix:
        return self._gen.normal(0.0, std, size=(rows, cols))

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class SvdResult:
    """Full singular value decomposition ``M = U diag(s) Vt``.

    ``u`` has orthonormal columns, ``vt`` orthonormal rows, and
    ``singular_values`` is non-increasing and non-negative.
    """

    u: DenseMatrix
    singular_values: np.ndarray
    vt: DenseMatrix


def as_matrix(a, name: str = "matrix") -> DenseMatrix:
    """Validate and canonicalize ``a`` as a finite 2-D float64 row-major array."""
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must be 2-D with positive dimensions, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return m


def gaussian_matrix(rng: Rng, rows: int, cols: int, variance: float) -> DenseMatrix:
    """Matrix with i.i.d. mean-zero Gaussian entries of the given variance."""
    if rows < 1 or cols < 1:
        raise ValueError(f"dimensions must be positive, got {rows}x{cols}")
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    return rng.normal(rows, cols, math.sqrt(variance))


def svd(m: DenseMatrix) -> SvdResult:
    """Full SVD via LAPACK; singular values accurate to ~1e-15 relative."""
    m = as_matrix(m)
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    return SvdResult(u=np.ascontiguousarray(u), singular_values=s, vt=np.ascontiguousarray(vt))


def singular_values(m: DenseMatrix) -> np.ndarray:
    """All min(rows, cols) singular values of ``m``, non-increasing."""
    m = as_matrix(m)
    return np.linalg.svd(m, compute_uv=False)


def orthonormal_columns(rng: Rng, rows: int, cols: int) -> DenseMatrix:
    """Haar-distributed matrix with orthonormal columns.

    QR of a standard Gaussian with the R-diagonal sign correction, which makes
    the distribution invariant under left rotation.
    """
    if cols < 1 or rows < cols:
        raise ValueError(f"need rows >= cols >= 1, got {rows}x{cols}")
    g = rng.normal(rows, cols)
    q, r = np.linalg.qr(g)
    signs = np.where(np.diagonal(r) < 0.0, -1.0, 1.0)
    return np.ascontiguousarray(q * signs)


def numeric_rank(sv: np.ndarray, rel_tol: float = 1e-10) -> int:
    """Count singular values above ``rel_tol`` times the largest."""
    sv = np.asarray(sv, dtype=np.float64)
    if sv.size == 0 or sv[0] <= 0.0:
        return 0
    return int(np.count_nonzero(sv > rel_tol * sv[0]))


def column_space_basis(m: DenseMatrix, rel_tol: float = 1e-10) -> DenseMatrix:
    """Orthonormal basis of the column space, rank detected at ``rel_tol``."""
    res = svd(m)
    rank = numeric_rank(res.singular_values, rel_tol)
    if rank == 0:
        raise DegenerateMatrixError("matrix is numerically zero")
    return np.ascontiguousarray(res.u[:, :rank])


def colspan_leak(x: DenseMatrix, basis: DenseMatrix) -> float:
    """Relative mass of ``x`` outside the span of ``basis``: ||(I-P)x||_F / ||x||_F."""
    nx = float(np.linalg.norm(x))
    if nx == 0.0:
        return 0.0
    out = x - basis @ (basis.T @ x)
    return float(np.linalg.norm(out)) / nx


def spectral_norm(m: DenseMatrix) -> float:
    """Largest singular value."""
    return float(singular_values(m)[0])


def frobenius_norm(m: DenseMatrix) -> float:
    return float(np.linalg.norm(as_matrix(m)))


def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"incompatible shapes for matmul: {a.shape} @ {b.shape}")
    return a @ b


def transpose(m: DenseMatrix) -> DenseMatrix:
    return np.ascontiguousarray(m.T)


def add(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.shape != b.shape:
        raise ValueError(f"incompatible shapes for add: {a.shape} + {b.shape}")
    return a + b


def scale(m: DenseMatrix, alpha: float) -> DenseMatrix:
    return alpha * m
