"""Synthetic test matrices A = U diag(values) V^T with prescribed spectra."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrixcore import DenseMatrix, Rng, orthonormal_columns


@dataclass(frozen=True)
class SpectrumSpec:
    """Dimensions plus an explicit non-increasing positive singular spectrum."""

    m: int
    n: int
    values: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"dimensions must be positive, got {self.m}x{self.n}")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("spectrum must contain at least one value")
        if len(vals) > min(self.m, self.n):
            raise ValueError(
                f"rank {len(vals)} exceeds min(m, n) = {min(self.m, self.n)}"
            )
        if any(v <= 0.0 for v in vals):
            raise ValueError("singular values must be strictly positive")
        if any(vals[i] < vals[i + 1] for i in range(len(vals) - 1)):
            raise ValueError("singular values must be non-increasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def linspace(cls, m: int, n: int, sigma1: float, sigmar: float, r: int) -> "SpectrumSpec":
        """r values evenly spaced from sigma1 down to sigmar."""
        if r < 1:
            raise ValueError(f"rank must be at least 1, got {r}")
        if r == 1 and sigma1 != sigmar:
            raise ValueError("rank-1 linspace requires sigma1 == sigmar")
        return cls(m=m, n=n, values=tuple(np.linspace(sigma1, sigmar, r)))

    @property
    def rank(self) -> int:
        return len(self.values)

    def squared_frobenius(self) -> float:
        return float(sum(v * v for v in self.values))


def make_matrix(rng: Rng, spec: SpectrumSpec) -> DenseMatrix:
    """m x n matrix with singular values exactly ``spec.values`` and
    Haar-random singular subspaces.  Deterministic given ``rng``."""
    r = spec.rank
    u = orthonormal_columns(rng, spec.m, r)
    v = orthonormal_columns(rng, spec.n, r)
    return np.ascontiguousarray((u * np.asarray(spec.values)) @ v.T)
