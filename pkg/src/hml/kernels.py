"""Hankel correlation kernels: compiled core with a numpy fallback.

Both paths compute out[n] = sum_k table[n+k] * vec[k]. The direct path is
the O(N*K) reference (compiled when the extension built, numpy slices
otherwise); the FFT path is the O(N log N) production route. Set
HML_PURE_PYTHON=1 to force the fallback even when the extension exists.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.signal import fftconvolve

_ext = None
if os.environ.get("HML_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _fastkernels as _ext  # type: ignore[no-redef]
    except ImportError:
        _ext = None

#: Which direct-path implementation got selected at import.
BACKEND = "compiled" if _ext is not None else "numpy"


def _check(table: np.ndarray, vec: np.ndarray, n_out: int) -> None:
    if table.ndim != 1 or vec.ndim != 1:
        raise ValueError("table and vec must be 1-d")
    if n_out < 0:
        raise ValueError("n_out must be nonnegative")
    if table.shape[0] < n_out + vec.shape[0] - 1:
        raise ValueError(
            f"table length {table.shape[0]} < n_out + len(vec) - 1 "
            f"= {n_out + vec.shape[0] - 1}"
        )


def hankel_matvec_direct(table, vec, n_out: int) -> np.ndarray:
    """Direct correlation; exact reference for the FFT path."""
    table = np.ascontiguousarray(table, dtype=np.float64)
    vec = np.asarray(vec)
    _check(table, vec, n_out)
    if np.iscomplexobj(vec):
        vec = np.ascontiguousarray(vec, dtype=np.complex128)
        if _ext is not None:
            return np.asarray(_ext.hankel_matvec_c128(table, vec, n_out))
        return _direct_numpy(table, vec, n_out)
    vec = np.ascontiguousarray(vec, dtype=np.float64)
    if _ext is not None:
        return np.asarray(_ext.hankel_matvec_f64(table, vec, n_out))
    return _direct_numpy(table, vec, n_out)


def _direct_numpy(table: np.ndarray, vec: np.ndarray, n_out: int) -> np.ndarray:
    out = np.empty(n_out, dtype=vec.dtype)
    k = vec.shape[0]
    for n in range(n_out):
        out[n] = table[n : n + k] @ vec
    return out


def hankel_matvec_fft(table, vec, n_out: int) -> np.ndarray:
    """FFT-accelerated correlation via one convolution with reversed vec."""
    table = np.ascontiguousarray(table, dtype=np.float64)
    vec = np.asarray(vec)
    _check(table, vec, n_out)
    k = vec.shape[0]
    full = fftconvolve(table, vec[::-1])
    return full[k - 1 : k - 1 + n_out]


def hankel_matvec(table, vec, n_out: int, method: str = "auto") -> np.ndarray:
    """Dispatch between the direct and FFT paths.

    "auto" uses the FFT route once the work crosses a small threshold;
    below it the direct path has less overhead.
    """
    if method == "direct":
        return hankel_matvec_direct(table, vec, n_out)
    if method == "fft":
        return hankel_matvec_fft(table, vec, n_out)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if n_out * len(vec) <= 1 << 14:
        return hankel_matvec_direct(table, vec, n_out)
    return hankel_matvec_fft(table, vec, n_out)
