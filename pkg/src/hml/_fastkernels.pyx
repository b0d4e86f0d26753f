# Direct O(N*K) Hankel correlation kernels. These are the reference path
# for the FFT-accelerated route in hml.kernels and the hot loop of the
# package; keep them free of Python objects inside the loops.

import numpy as np


def hankel_matvec_f64(const double[::1] table, const double[::1] vec, Py_ssize_t n_out):
    """out[n] = sum_k table[n+k] * vec[k] for n in [0, n_out)."""
    cdef Py_ssize_t n, k
    cdef Py_ssize_t kk = vec.shape[0]
    if table.shape[0] < n_out + kk - 1:
        raise ValueError("table too short for requested output length")
    out = np.empty(n_out, dtype=np.float64)
    cdef double[::1] o = out
    cdef double acc
    for n in range(n_out):
        acc = 0.0
        for k in range(kk):
            acc += table[n + k] * vec[k]
        o[n] = acc
    return out


def hankel_matvec_c128(const double[::1] table, const double complex[::1] vec, Py_ssize_t n_out):
    """Complex-vector variant of hankel_matvec_f64."""
    cdef Py_ssize_t n, k
    cdef Py_ssize_t kk = vec.shape[0]
    if table.shape[0] < n_out + kk - 1:
        raise ValueError("table too short for requested output length")
    out = np.empty(n_out, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double complex acc
    for n in range(n_out):
        acc = 0.0
        for k in range(kk):
            acc = acc + table[n + k] * vec[k]
        o[n] = acc
    return out
