"""Iteration-kernel backend selection.

The compiled BLAS kernel is preferred when its extension module is present;
otherwise the pure-numpy fallback is used.  Set ``ALTGD_KERNEL`` to
``cython`` or ``numpy`` to force a backend (``cython`` raises if the
extension is missing), or leave it at ``auto``.
"""

from __future__ import annotations

import os

from . import numpy_backend
from .result import STATUS_NONFINITE, STATUS_OK, STATUS_TARGET, BlockResult

__all__ = [
    "BACKEND",
    "BlockResult",
    "STATUS_NONFINITE",
    "STATUS_OK",
    "STATUS_TARGET",
    "available_backends",
    "get_backend",
    "run_block",
]

_requested = os.environ.get("ALTGD_KERNEL", "auto").lower()
if _requested not in ("auto", "cython", "numpy"):
    raise ImportError(f"ALTGD_KERNEL must be auto, cython or numpy, got {_requested!r}")

if _requested == "numpy":
    _impl = numpy_backend
else:
    try:
        from . import _accel as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "cython":
            raise
        _impl = numpy_backend

BACKEND: str = _impl.NAME
run_block = _impl.run_block


def available_backends() -> list[str]:
    names = ["numpy"]
    try:
        from . import _accel  # noqa: F401
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Return a backend module by name; used by the backend benchmark/tests."""
    if name == "numpy":
        return numpy_backend
    if name == "cython":
        from . import _accel
        return _accel
    raise ValueError(f"unknown kernel backend {name!r}")
