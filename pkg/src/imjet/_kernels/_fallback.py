"""Pure numpy/scipy implementation of the scan kernel.

scipy.signal.lfilter runs the recurrence in C per mode column; only the
loop over the (few dozen) columns is Python.
"""

import numpy as np
from scipy.signal import lfilter


def linear_recurrence(coef: np.ndarray, drive: np.ndarray) -> np.ndarray:
    """Per-column scan v[i] = coef[j] * v[i-1] + drive[i], v[0] = drive[0]."""
    coef = np.asarray(coef, dtype=float)
    drive = np.asarray(drive, dtype=float)
    if drive.ndim != 2 or coef.shape != (drive.shape[1],):
        raise ValueError("coef length must match drive columns")
    out = np.empty_like(drive)
    for j in range(drive.shape[1]):
        out[:, j] = lfilter([1.0], [1.0, -coef[j]], drive[:, j])
    return out
