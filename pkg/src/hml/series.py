"""Truncated power series with family metadata and coefficient operators.

Series are plain coefficient arrays a_0..a_N. Tagged families (log kernel,
binomial kernel, normalized power kernel) carry their parameters so that
point evaluation can attach a rigorous truncation tail bound. Coefficient
operators cover Hadamard products, dyadic Taylor blocks, smooth
partition-of-unity blocks, and the Gamma-ratio fractional derivative and
integral multipliers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from scipy.special import gammaln, gammasgn

from .errors import ParameterError, PrecisionError, TruncationError

__all__ = [
    "PowerSeries",
    "FamilyTag",
    "FracParams",
    "EvalResult",
    "from_coefficients",
    "log_kernel",
    "binomial_kernel",
    "power_kernel",
    "monomial",
    "eval_series",
    "gamma_ratio",
    "log_gamma_ratio",
    "frac_diff",
    "frac_int",
    "hadamard",
    "dyadic_block",
    "n_blocks",
    "smooth_partition_block",
    "block_coefficient",
    "hp_norm",
    "hinf_norm",
    "series_to_csv",
]

#: evaluation domain cap; tail bounds degrade as |z| -> 1
EVAL_RADIUS = 1.0 - 1e-6


@dataclass(frozen=True)
class FamilyTag:
    name: str  # log_kernel | binomial | power_kernel | custom
    params: tuple[float, ...] = ()


@dataclass(frozen=True)
class PowerSeries:
    coeffs: np.ndarray
    family: Optional[FamilyTag] = None
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        c = np.array(self.coeffs, copy=True)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d array")
        if not np.issubdtype(c.dtype, np.number):
            raise ValueError("coefficients must be numeric")
        if not np.issubdtype(c.dtype, np.complexfloating):
            c = c.astype(np.float64)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.coeffs)

    @property
    def nonneg_coeffs(self) -> bool:
        return self.is_real and bool(np.all(self.coeffs >= 0))

    def truncated(self, new_trunc: int) -> "PowerSeries":
        if new_trunc >= self.truncation:
            return self
        return PowerSeries(self.coeffs[: new_trunc + 1], self.family, self.flags)

    def effective_degree(self, rel: float = 1e-18) -> int:
        mags = np.abs(self.coeffs)
        top = mags.max()
        if top == 0:
            return 0
        keep = np.nonzero(mags > rel * top)[0]
        return int(keep[-1]) if keep.size else 0


def from_coefficients(coeffs, family: Optional[FamilyTag] = None) -> PowerSeries:
    return PowerSeries(np.asarray(coeffs), family)


def log_kernel(b: float, trunc: int) -> PowerSeries:
    """log(e/(1-bz)) truncated: a_0 = 1, a_k = b^k / k."""
    if not (0.0 <= b < 1.0):
        raise ValueError("b must lie in [0, 1)")
    k = np.arange(1, trunc + 1, dtype=float)
    coeffs = np.concatenate([[1.0], b**k / k])
    return PowerSeries(coeffs, FamilyTag("log_kernel", (b,)))


def _binomial_coeffs(c: float, trunc: int) -> np.ndarray:
    k = np.arange(trunc + 1, dtype=float)
    return np.exp(gammaln(k + c) - gammaln(k + 1.0) - gammaln(c))


def binomial_kernel(c: float, trunc: int) -> PowerSeries:
    """(1-z)^-c truncated: a_k = Gamma(k+c) / (Gamma(k+1) Gamma(c))."""
    if not (c > 0):
        raise ValueError("binomial parameter c must be positive")
    return PowerSeries(_binomial_coeffs(c, trunc), FamilyTag("binomial", (c,)))


def power_kernel(a: float, beta: float, expo: float, trunc: int) -> PowerSeries:
    """(1-a^2)^beta (1-az)^-expo truncated."""
    if not (0.0 <= a < 1.0):
        raise ValueError("a must lie in [0, 1)")
    if not (expo > 0):
        raise ValueError("exponent must be positive")
    scale = (1.0 - a * a) ** beta
    k = np.arange(trunc + 1, dtype=float)
    coeffs = scale * np.exp(gammaln(k + expo) - gammaln(k + 1.0)
                            - gammaln(expo)) * a**k
    return PowerSeries(coeffs, FamilyTag("power_kernel", (a, beta, expo)))


def monomial(k: int, trunc: Optional[int] = None) -> PowerSeries:
    n = k if trunc is None else trunc
    if n < k:
        raise ValueError("truncation below the monomial degree")
    coeffs = np.zeros(n + 1)
    coeffs[k] = 1.0
    return PowerSeries(coeffs, FamilyTag("custom"))


# ---------------------------------------------------------------------------
# evaluation with tail bounds


@dataclass(frozen=True)
class EvalResult:
    value: complex
    tail_bound: float


def _geometric_tail(last_mag: float, q: float, r: float) -> float:
    # sum_{m>=1} last_mag * (q r)^m
    x = q * r
    if x >= 1.0:
        return math.inf
    return last_mag * x / (1.0 - x)


def _tail_bound(f: PowerSeries, r: float) -> float:
    if r == 0.0:
        return 0.0
    n = f.truncation
    fam = f.family
    if fam is not None and fam.name == "log_kernel":
        (b,) = fam.params
        x = b * r
        if x == 0.0:
            return 0.0
        return x ** (n + 1) / ((n + 1) * (1.0 - x))
    if fam is not None and fam.name in ("binomial", "power_kernel"):
        if fam.name == "binomial":
            a, scale, expo = 1.0, 1.0, fam.params[0]
        else:
            a, beta, expo = fam.params
            scale = (1.0 - a * a) ** beta
        if a == 0.0:
            return 0.0
        nxt = scale * math.exp(gammaln(n + 1 + expo) - gammaln(n + 2.0)
                               - gammaln(expo)) * a ** (n + 1)
        ratio = a * max(1.0, (n + 1 + expo) / (n + 2.0))
        if ratio * r >= 1.0:
            return math.inf
        return nxt * r ** (n + 1) / (1.0 - ratio * r)
    # custom: geometric extrapolation from the trailing coefficients
    mags = np.abs(f.coeffs)
    if mags[-1] == 0.0:
        return 0.0
    tail_mags = mags[-9:]
    nz = tail_mags > 0
    q = 0.0
    for i in range(len(tail_mags) - 1):
        if nz[i] and nz[i + 1]:
            q = max(q, tail_mags[i + 1] / tail_mags[i])
    return _geometric_tail(mags[-1] * r**n, q, r)


def eval_series(f: PowerSeries, z: complex, tol: Optional[float] = None) -> EvalResult:
    """Horner evaluation plus a truncation tail bound from the family tag.

    Raises PrecisionError when a tolerance is requested and the bound
    exceeds it.
    """
    r = abs(z)
    if r > EVAL_RADIUS:
        raise ValueError(f"|z| = {r} exceeds the evaluation domain "
                         f"{EVAL_RADIUS}")
    value = complex(np.polynomial.polynomial.polyval(z, f.coeffs))
    bound = _tail_bound(f, r)
    if tol is not None and bound > tol:
        raise PrecisionError(
            f"tail bound {bound:.3e} exceeds requested tolerance {tol:.1e}")
    return EvalResult(value, bound)


def eval_on_grid(coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Plain vectorized evaluation (no bounds); internal helper."""
    return np.polynomial.polynomial.polyval(points, coeffs)


# ---------------------------------------------------------------------------
# Gamma-ratio machinery


def log_gamma_ratio(n, alpha: float):
    """log of Gamma(n+1+alpha) / (Gamma(n+1) Gamma(alpha+1))."""
    if alpha <= -1:
        raise ValueError("alpha must exceed -1")
    n = np.asarray(n, dtype=float)
    return gammaln(n + 1.0 + alpha) - gammaln(n + 1.0) - gammaln(alpha + 1.0)


def gamma_ratio(n, alpha: float):
    """Gamma(n+1+alpha) / (Gamma(n+1) Gamma(alpha+1)), ~ n^alpha / Gamma(alpha+1).

    Evaluated through log-gamma differences with a single exponentiation.
    """
    out = np.exp(log_gamma_ratio(n, alpha))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FracParams:
    """Parameters (t, s) of the coefficient multipliers

        m_n = Gamma(2+t) Gamma(n+2+t+s) / (Gamma(2+t+s) Gamma(n+2+t)).

    Neither 1+t nor 1+t+s may be a negative integer.
    """

    t: float
    s: float

    def __post_init__(self):
        for label, x in (("1+t", 1.0 + self.t), ("1+t+s", 1.0 + self.t + self.s)):
            if x <= -0.5 and abs(x - round(x)) < 1e-9:
                raise ParameterError(f"{label} = {x} is a negative integer")


def _frac_multipliers(params: FracParams, n_max: int) -> np.ndarray:
    t, s = params.t, params.s
    n = np.arange(n_max + 1, dtype=float)
    args = (2.0 + t, 2.0 + t + s)
    narr = (n + 2.0 + t + s, n + 2.0 + t)
    signs = (gammasgn(args[0]) * gammasgn(args[1])
             * gammasgn(narr[0]) * gammasgn(narr[1]))
    if np.any(signs == 0.0):
        raise ParameterError("a Gamma argument hit a nonpositive integer")
    logm = (gammaln(args[0]) - gammaln(args[1])
            + gammaln(narr[0]) - gammaln(narr[1]))
    return signs * np.exp(logm)


def frac_diff(f: PowerSeries, params: FracParams) -> PowerSeries:
    """Coefficientwise multiplication by the Gamma-ratio symbols."""
    m = _frac_multipliers(params, f.truncation)
    return PowerSeries(f.coeffs * m)


def frac_int(f: PowerSeries, params: FracParams) -> PowerSeries:
    """Inverse of frac_diff: coefficientwise division by the same symbols."""
    m = _frac_multipliers(params, f.truncation)
    return PowerSeries(f.coeffs / m)


# ---------------------------------------------------------------------------
# Hadamard products and blocks


def hadamard(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Coefficientwise product; truncation is the smaller of the two."""
    n = min(f.truncation, g.truncation)
    return PowerSeries(f.coeffs[: n + 1] * g.coeffs[: n + 1])


def n_blocks(trunc: int) -> int:
    """Largest n with 2^(n+1) - 1 <= trunc."""
    if trunc < 1:
        return 0
    return int(math.floor(math.log2(trunc + 1))) - 1


def dyadic_block(f: PowerSeries, n: int) -> PowerSeries:
    """Taylor slice on [2^n, 2^(n+1)) (block 0 is a_0 + a_1 z)."""
    if n < 0:
        raise ValueError("block index must be nonnegative")
    if n == 0:
        if f.truncation < 1:
            raise TruncationError("block 0 needs degree >= 1")
        return PowerSeries(f.coeffs[:2])
    lo, hi = 1 << n, (1 << (n + 1)) - 1
    if hi > f.truncation:
        raise TruncationError(
            f"block {n} ends at degree {hi} > truncation {f.truncation}")
    out = np.zeros(hi + 1, dtype=f.coeffs.dtype)
    out[lo : hi + 1] = f.coeffs[lo : hi + 1]
    return PowerSeries(out)


def _bump(x: np.ndarray) -> np.ndarray:
    """exp(-1/x) for x > 0, 0 otherwise."""
    out = np.zeros_like(x, dtype=float)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _cutoff(s: np.ndarray) -> np.ndarray:
    """Smooth decreasing cutoff: 1 for s <= 1, 0 for s >= 2."""
    s = np.asarray(s, dtype=float)
    a = _bump(2.0 - s)
    b = _bump(s - 1.0)
    mid = np.divide(a, a + b, out=np.zeros_like(a), where=(a + b) > 0)
    return np.where(s <= 1.0, 1.0, np.where(s >= 2.0, 0.0, mid))


def block_coefficient(k, n: int):
    """Coefficient of z^k in the smooth block polynomial of index n >= 1."""
    k = np.asarray(k, dtype=float)
    scale = float(1 << (n - 1))
    return _cutoff(k / (2.0 * scale)) - _cutoff(k / scale)


@lru_cache(maxsize=64)
def _smooth_block_coeffs(n: int) -> np.ndarray:
    if n == 0:
        c = np.array([1.0, 1.0])
    else:
        hi = (1 << (n + 1)) - 1
        k = np.arange(hi + 1)
        c = np.asarray(block_coefficient(k, n))
        c[: (1 << (n - 1))] = 0.0
    c.setflags(write=False)
    return c


def smooth_partition_block(n: int) -> PowerSeries:
    """Smooth partition-of-unity block polynomial.

    Block 0 is 1 + z; block n >= 1 is supported on [2^(n-1), 2^(n+1) - 1]
    with coefficients from a C-infinity cutoff, so the blocks sum to 1 on
    every coefficient index.
    """
    if n < 0:
        raise ValueError("block index must be nonnegative")
    return PowerSeries(_smooth_block_coeffs(n))


# ---------------------------------------------------------------------------
# circle norms of polynomials


def _next_pow2(m: int) -> int:
    return 1 << max(0, (m - 1).bit_length())


def _trimmed(coeffs: np.ndarray) -> np.ndarray:
    mags = np.abs(coeffs)
    top = mags.max()
    if top == 0:
        return coeffs[:1]
    keep = np.nonzero(mags > 1e-18 * top)[0]
    return coeffs[: keep[-1] + 1]


def hp_norm(f: Union[PowerSeries, np.ndarray], p: float, oversample: int = 8) -> float:
    """Hardy-space norm of a polynomial by circle sampling.

    Spectrally accurate trapezoid rule with `oversample` times the degree
    in sample points; doubling the factor is the refinement check used by
    callers.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    coeffs = _trimmed(f.coeffs if isinstance(f, PowerSeries) else np.asarray(f))
    m = _next_pow2(max(64, oversample * len(coeffs)))
    vals = np.abs(np.fft.fft(coeffs, m))
    return float(np.mean(vals**p) ** (1.0 / p))


def hinf_norm(f: Union[PowerSeries, np.ndarray], oversample: int = 16) -> float:
    """Sup norm on the circle: dense sampling plus one local refinement."""
    coeffs = _trimmed(f.coeffs if isinstance(f, PowerSeries) else np.asarray(f))
    if len(coeffs) == 1:
        return float(abs(coeffs[0]))
    m = _next_pow2(max(64, oversample * len(coeffs)))
    vals = np.abs(np.fft.fft(coeffs, m))
    k = int(np.argmax(vals))
    base = 2.0 * np.pi * k / m
    local = base + np.linspace(-2.0 * np.pi / m, 2.0 * np.pi / m, 65)
    pts = np.exp(1j * local)
    lv = np.abs(np.polynomial.polynomial.polyval(pts, coeffs))
    return float(max(vals[k], lv.max()))


def series_to_csv(f: PowerSeries, path) -> None:
    """Dump coefficients as (index, re, im) rows."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "re", "im"])
        for k, a in enumerate(f.coeffs):
            writer.writerow([k, float(np.real(a)), float(np.imag(a))])
