# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled first-order linear recurrence over (time, mode) arrays.

This scan is the single hot primitive behind the Green operator and every
fixed-point iteration: v[0] = drive[0], v[i] = coef * v[i-1] + drive[i],
with a separate coefficient per mode column.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def linear_recurrence(double[::1] coef, double[:, ::1] drive):
    """Per-column scan v[i] = coef[j] * v[i-1] + drive[i], v[0] = drive[0]."""
    cdef Py_ssize_t m = drive.shape[0]
    cdef Py_ssize_t k = drive.shape[1]
    if coef.shape[0] != k:
        raise ValueError("coef length must match drive columns")
    out = np.empty((m, k), dtype=np.float64)
    cdef double[:, ::1] v = out
    cdef Py_ssize_t i, j
    cdef double c
    for j in range(k):
        v[0, j] = drive[0, j]
    for i in range(1, m):
        for j in range(k):
            v[i, j] = coef[j] * v[i - 1, j] + drive[i, j]
    return out
