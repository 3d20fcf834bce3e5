"""Scan-kernel backend selection.

The compiled Cython extension is preferred; the numpy/scipy fallback is
selected when the extension is missing or IMJET_PURE_PYTHON=1 is set.
Both expose the same `linear_recurrence(coef, drive)` contract and are
interchangeable bit-for-bit up to floating-point associativity (they apply
operations in the same order, so results are in fact identical).
"""

import os

from . import _fallback

if os.environ.get("IMJET_PURE_PYTHON") == "1":
    _impl = _fallback
    BACKEND = "fallback"
else:
    try:
        from . import _scan as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "fallback"

linear_recurrence = _impl.linear_recurrence

fallback_linear_recurrence = _fallback.linear_recurrence

__all__ = ["linear_recurrence", "fallback_linear_recurrence", "BACKEND"]
