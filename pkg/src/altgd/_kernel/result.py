"""Shared result container for the iteration kernels."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

STATUS_OK = 0
STATUS_TARGET = 1
STATUS_NONFINITE = 2


class BlockResult(NamedTuple):
    steps: int
    status: int
    f: np.ndarray      # length steps + 1: loss at each visited state
    gx2: np.ndarray    # length steps: squared X-gradient norm per step
    gy2: np.ndarray    # length steps: squared Y-gradient norm per step
    lamx: np.ndarray   # length steps + 1: squared spectral norm of X (if requested)
    lamy: np.ndarray   # length steps + 1: squared spectral norm of Y (if requested)
