# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled recursion kernel; semantics match _fallback.var_recursion."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def var_recursion(object coefs_in, object preset_in, object initial_in):
    """Run the autoregressive recursion y[t] = preset[t] + sum_i A_i y[t-i].

    See the fallback module for the parameter contract.
    """
    cdef double[:, :, ::1] coefs = np.ascontiguousarray(coefs_in, dtype=np.float64)
    cdef double[:, ::1] preset = np.ascontiguousarray(preset_in, dtype=np.float64)
    cdef double[:, ::1] initial = np.ascontiguousarray(initial_in, dtype=np.float64)

    cdef Py_ssize_t p = coefs.shape[0]
    cdef Py_ssize_t k = coefs.shape[1]
    cdef Py_ssize_t t_len = preset.shape[0]

    out_arr = np.empty((t_len, k), dtype=np.float64)
    cdef double[:, ::1] out = out_arr

    cdef Py_ssize_t t, i, j, m, lag_row
    cdef double acc

    for t in range(t_len):
        for j in range(k):
            acc = preset[t, j]
            for i in range(1, p + 1):
                lag_row = t - i
                if lag_row >= 0:
                    for m in range(k):
                        acc += coefs[i - 1, j, m] * out[lag_row, m]
                else:
                    for m in range(k):
                        acc += coefs[i - 1, j, m] * initial[p + lag_row, m]
            out[t, j] = acc
    return out_arr
