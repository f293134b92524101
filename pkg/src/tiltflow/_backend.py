"""Kernel backend selection.

Imports the compiled extension when present, falling back to the pure
Python implementation.  Set TILTFLOW_PURE_PYTHON=1 to force the
fallback (used by the benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("TILTFLOW_PURE_PYTHON"):
    from tiltflow import _kernels_py as kernels
else:
    try:
        from tiltflow import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from tiltflow import _kernels_py as kernels

BACKEND = kernels.IMPLEMENTATION

__all__ = ["kernels", "BACKEND"]
