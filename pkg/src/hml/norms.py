"""Numerical norms on the unit disk and norm-equivalence reports.

Area integrals use polar quadrature: composite Gauss-Legendre in x = r^2
over dyadic panels accumulating toward the boundary, and exact-in-band
trapezoid (FFT) sampling in the angle, with per-radius sample counts tied
to the effective coefficient bandwidth at that radius. Estimates carry a
refinement delta from doubling both the radial and angular budgets.

Band equivalences (the ~ claims) are reported as ratio sweeps with a
fixed admissible band and a drift bound under refinement of the dominant
discretization parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from .errors import TruncationError
from .series import (
    FracParams,
    PowerSeries,
    dyadic_block,
    frac_diff,
    hinf_norm,
    hp_norm,
    n_blocks,
    smooth_partition_block,
)

__all__ = [
    "NormEstimate",
    "EquivalenceReport",
    "make_report",
    "ap_norm",
    "bloch_norm",
    "bloch_norm_frac",
    "frac_bloch_equivalence",
    "dyadic_norm_equivalence",
    "CoefficientMeanBloch",
    "coefficient_mean_bloch",
    "smooth_block_sup",
    "smooth_block_bloch",
    "A1CoefficientReport",
    "a1_coefficient_tests",
    "KernelIntegral",
    "kernel_integral",
    "BAND_LIMIT",
    "DRIFT_LIMIT",
]

#: admissible max/min ratio band for an equivalence claim
BAND_LIMIT = 10.0
#: admissible relative ratio drift when the dominant parameter doubles
DRIFT_LIMIT = 0.10

_AP_CERT = 1e-6
_BLOCH_CERT = 1e-4


@dataclass(frozen=True)
class NormEstimate:
    value: float
    method: str
    radial_nodes: int
    angular_nodes: int
    refinement_delta: float
    certified: bool

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class EquivalenceReport:
    claim_id: str
    ratio_min: float
    ratio_max: float
    sweep: tuple[tuple[float, float], ...]
    drift: float
    verdict: str  # band_ok | drift | fail
    flags: tuple[str, ...] = ()


def make_report(claim_id: str, sweep, drift: float,
                band_limit: float = BAND_LIMIT, flags=()) -> EquivalenceReport:
    ratios = np.asarray([r for _, r in sweep], dtype=float)
    if ratios.size == 0 or not np.all(np.isfinite(ratios)) or np.any(ratios <= 0):
        return EquivalenceReport(claim_id, math.nan, math.nan, tuple(sweep),
                                 drift, "fail", tuple(flags))
    rmin, rmax = float(ratios.min()), float(ratios.max())
    band_ok = rmax / rmin <= band_limit
    drift_ok = abs(drift) <= DRIFT_LIMIT
    if band_ok and drift_ok:
        verdict = "band_ok"
    elif band_ok:
        verdict = "drift"
    else:
        verdict = "fail"
    return EquivalenceReport(claim_id, rmin, rmax, tuple(sweep), drift,
                             verdict, tuple(flags))


# ---------------------------------------------------------------------------
# area integrals


def _coeffs_of(f: Union[PowerSeries, np.ndarray]) -> np.ndarray:
    return f.coeffs if isinstance(f, PowerSeries) else np.asarray(f)


def _trim(coeffs: np.ndarray) -> np.ndarray:
    mags = np.abs(coeffs)
    top = mags.max()
    if top == 0:
        return coeffs[:1]
    keep = np.nonzero(mags > 1e-18 * top)[0]
    return coeffs[: keep[-1] + 1]


def _next_pow2(m: int) -> int:
    return 1 << max(0, (m - 1).bit_length())


def _fold_fft(scaled: np.ndarray, m: int) -> np.ndarray:
    """Values at the m-th roots of unity; exact for any degree via folding."""
    if len(scaled) <= m:
        return np.fft.fft(scaled, m)
    pad = (-len(scaled)) % m
    folded = np.pad(scaled, (0, pad)).reshape(-1, m).sum(axis=0)
    return np.fft.fft(folded)


def _mean_abs_pow(coeffs: np.ndarray, ns: np.ndarray, r: float, p: float,
                  mult: int) -> tuple[float, int]:
    """Angular mean of |f(r e^{i th})|^p and the sample count used."""
    scaled = coeffs * r**ns
    bandwidth = min(len(coeffs), int(48.0 / max(1.0 - r, 1e-15)) + 1)
    m = _next_pow2(max(64, mult * bandwidth))
    vals = np.abs(_fold_fft(scaled, m))
    return float(np.mean(vals**p)), m


@lru_cache(maxsize=32)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _disk_integral(coeffs: np.ndarray, p: float, gamma: float = 0.0,
                   level: int = 0):
    """Integral of |f|^p (1-|z|)^gamma over the disk (normalized area).

    Composite GL in x = r^2 over dyadic panels; panels extend until both
    the last contribution and the analytic remainder bound are negligible.
    """
    coeffs = _trim(coeffs)
    ns = np.arange(len(coeffs))
    abs_sum = float(np.sum(np.abs(coeffs)))
    mult = (4 if p == 2 else 8) << level
    n_gl = 16 << level
    gx, gw = _leggauss(n_gl)

    total = 0.0
    ang_max = 0
    radial = 0
    x_lo = 0.0
    j = 0
    while j < 60:
        x_hi = 1.0 - 0.5 ** (j + 1)
        xs = x_lo + (gx + 1.0) * 0.5 * (x_hi - x_lo)
        ws = gw * 0.5 * (x_hi - x_lo)
        contrib = 0.0
        for x, w in zip(xs, ws):
            r = math.sqrt(x)
            mean, m = _mean_abs_pow(coeffs, ns, r, p, mult)
            if gamma != 0.0:
                mean *= (1.0 - r) ** gamma
            contrib += w * mean
            ang_max = max(ang_max, m)
        radial += n_gl
        total += contrib
        x_lo = x_hi
        j += 1
        if j >= 12:
            remainder = abs_sum**p * 0.5 ** (j * (gamma + 1.0)) / (gamma + 1.0)
            if (abs(contrib) <= 1e-11 * abs(total)
                    and remainder <= 1e-10 * abs(total)):
                break
    return total, radial, ang_max


def ap_norm(f: Union[PowerSeries, np.ndarray], p: float) -> NormEstimate:
    """Bergman-space norm (integral of |f|^p against normalized area)^(1/p).

    Certified when doubling the radial and angular budgets moves the
    integral by less than 1e-6 relative; an uncertified estimate is the
    non-convergence flag for functions growing too fast at this truncation.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    coeffs = _coeffs_of(f)
    i0, _, _ = _disk_integral(coeffs, p, 0.0, level=0)
    i1, radial, ang = _disk_integral(coeffs, p, 0.0, level=1)
    scale = max(abs(i1), abs(i0), 1e-300)
    delta = abs(i1 - i0) / scale
    return NormEstimate(i1 ** (1.0 / p), "polar_gl_fft", radial, ang, delta,
                        delta < _AP_CERT)


# ---------------------------------------------------------------------------
# Bloch norms


_RADIAL_J_MAX = 30


def _radial_grid(step_offset: float = 0.0) -> np.ndarray:
    js = np.arange(0, _RADIAL_J_MAX + 1, dtype=float) + step_offset
    return 1.0 - 0.5**js


def _grid_sup(coeffs: np.ndarray, radii: np.ndarray, weight_pow: float,
              nonneg: bool) -> tuple[float, int]:
    """sup over the grid of (1-r^2)^w |g(r e^{i th})|."""
    ns = np.arange(len(coeffs))
    if nonneg:
        vals = np.polynomial.polynomial.polyval(radii, coeffs)
        sup = float(np.max((1.0 - radii**2) ** weight_pow * np.abs(vals)))
        return sup, 1
    sup = 0.0
    ang = 0
    for r in radii:
        scaled = coeffs * r**ns
        bandwidth = min(len(coeffs), int(48.0 / max(1.0 - r, 1e-15)) + 1)
        m = _next_pow2(max(64, 8 * bandwidth))
        top = float(np.max(np.abs(_fold_fft(scaled, m))))
        sup = max(sup, (1.0 - r * r) ** weight_pow * top)
        ang = max(ang, m)
    return sup, ang


def _bloch_like(coeffs: np.ndarray, weight_pow: float, method: str) -> NormEstimate:
    nonneg = (not np.iscomplexobj(coeffs)) and bool(np.all(coeffs >= 0))
    base, ang1 = _grid_sup(coeffs, _radial_grid(), weight_pow, nonneg)
    refined, ang2 = _grid_sup(coeffs, _radial_grid(0.5), weight_pow, nonneg)
    sup = max(base, refined)
    delta = (sup - base) / max(sup, 1e-300)
    return NormEstimate(sup, method, 2 * (_RADIAL_J_MAX + 1),
                        max(ang1, ang2), delta, delta <= _BLOCH_CERT)


def bloch_norm(f: PowerSeries) -> NormEstimate:
    """|f(0)| plus the grid sup of (1-|z|^2) |f'(z)|.

    Series with nonnegative coefficients use the radial fast path (the
    angular max sits on the positive axis).
    """
    coeffs = f.coeffs
    if len(coeffs) == 1:
        return NormEstimate(float(abs(coeffs[0])), "radial_grid", 1, 1, 0.0, True)
    deriv = coeffs[1:] * np.arange(1, len(coeffs))
    est = _bloch_like(deriv, 1.0, "radial_grid")
    value = float(abs(coeffs[0])) + est.value
    delta = est.refinement_delta * (est.value / max(value, 1e-300))
    return NormEstimate(value, est.method, est.radial_nodes,
                        est.angular_nodes, delta, delta <= _BLOCH_CERT)


def bloch_norm_frac(f: PowerSeries, s: float, t: float) -> NormEstimate:
    """Equivalent Bloch seminorm through the order-t fractional derivative.

    Computes the grid sup of (1-|z|^2)^t |g| where g has coefficients
    multiplied by the Gamma-ratio symbols with superscripts (s, t).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    params = FracParams(t=s, s=t)  # first superscript s, second t
    g = frac_diff(f, params)
    return _bloch_like(g.coeffs, t, "frac_radial_grid")


def frac_bloch_equivalence(family: Sequence[PowerSeries], s: float, t: float,
                           labels: Optional[Sequence[float]] = None
                           ) -> EquivalenceReport:
    """Ratio sweep of the fractional seminorm against bloch_norm."""
    sweep = []
    for i, f in enumerate(family):
        num = bloch_norm_frac(f, s, t).value
        den = bloch_norm(f).value
        label = labels[i] if labels is not None else float(i)
        sweep.append((label, num / den))
    f0 = family[0]
    half = f0.truncated(max(1, f0.truncation // 2))
    r_half = bloch_norm_frac(half, s, t).value / bloch_norm(half).value
    drift = sweep[0][1] / r_half - 1.0
    return make_report(f"frac_bloch(s={s},t={t})", sweep, drift)


# ---------------------------------------------------------------------------
# area integrals vs dyadic block sums


def _block_sum(coeffs: np.ndarray, p: float, gamma: float,
               oversample: int = 8) -> tuple[float, float]:
    """sum_n 2^{-n(gamma+1)} (H^p norm of block n)^p and the last-term share."""
    trunc = len(coeffs) - 1
    nb = n_blocks(trunc)
    total = 0.0
    last = 0.0
    for n in range(nb + 1):
        if n == 0:
            seg = coeffs[:2]
        else:
            seg = coeffs[1 << n : 1 << (n + 1)]
        term = 2.0 ** (-n * (gamma + 1.0)) * hp_norm(seg, p, oversample) ** p
        total += term
        last = term
    return total, (last / total if total > 0 else 0.0)


def dyadic_norm_equivalence(f: PowerSeries, p: float, gamma: float
                            ) -> EquivalenceReport:
    """Weighted area integral of |f|^p against its dyadic block-sum form.

    Both sides are computed at the full and at the halved truncation; the
    report records the two ratios and the drift between them.
    """
    if p <= 1:
        raise ValueError("p must exceed 1")
    if gamma <= -1:
        raise ValueError("gamma must exceed -1")

    def one(series: PowerSeries) -> tuple[float, float]:
        k1, _, _ = _disk_integral(series.coeffs, p, gamma, level=1)
        k2, lastfrac = _block_sum(series.coeffs, p, gamma)
        return k1 / k2, lastfrac

    n = f.truncation
    ratio_full, lastfrac = one(f)
    ratio_half, _ = one(f.truncated(max(3, n // 2)))
    drift = ratio_full / ratio_half - 1.0
    flags = ("k2_unstabilized",) if lastfrac > 0.02 else ()
    return make_report(f"area_vs_blocks(p={p},gamma={gamma})",
                       [(n // 2, ratio_half), (n, ratio_full)], drift,
                       flags=flags)


# ---------------------------------------------------------------------------
# coefficient criteria


@dataclass(frozen=True)
class CoefficientMeanBloch:
    value: float
    attained_at: int
    stabilized: bool

    def __float__(self) -> float:
        return self.value


def coefficient_mean_bloch(seq) -> CoefficientMeanBloch:
    """Growth-norm bound for nonnegative coefficients:

        c_0 + max_n (1/n) sum_{k<=n} k c_k.

    The running max is nondecreasing in the truncation, so attainment at
    the last index means the value has not stabilized.
    """
    c = np.asarray(seq.coeffs if isinstance(seq, PowerSeries) else seq,
                   dtype=float)
    if np.any(c < 0):
        raise ValueError("coefficients must be nonnegative")
    if len(c) == 1:
        return CoefficientMeanBloch(float(c[0]), 0, True)
    k = np.arange(1, len(c), dtype=float)
    means = np.cumsum(k * c[1:]) / k
    idx = int(np.argmax(means))
    value = float(c[0] + means[idx])
    return CoefficientMeanBloch(value, idx + 1, idx + 1 < len(c) - 1)


def smooth_block_sup(f: PowerSeries) -> tuple[float, int]:
    """sup over n of the circle sup norm of (smooth block n) * f."""
    trunc = f.truncation
    nb = n_blocks(trunc)
    sup = 0.0
    attained = 0
    for n in range(nb + 1):
        block = smooth_partition_block(n)
        m = min(block.truncation, trunc)
        prod = f.coeffs[: m + 1] * block.coeffs[: m + 1]
        val = hinf_norm(prod)
        if val > sup:
            sup, attained = val, n
    return sup, attained


def smooth_block_bloch(f: PowerSeries) -> EquivalenceReport:
    """Compare sup_n of smooth-block sup norms with bloch_norm."""
    n = f.truncation

    def ratio(series: PowerSeries) -> tuple[float, int]:
        sup, attained = smooth_block_sup(series)
        return sup / bloch_norm(series).value, attained

    r_full, attained = ratio(f)
    r_half, _ = ratio(f.truncated(max(3, n // 2)))
    drift = r_full / r_half - 1.0
    flags = ()
    if attained == n_blocks(n):
        flags = ("truncation_dominated",)
    return make_report("smooth_block_bloch", [(n // 2, r_half), (n, r_full)],
                       drift, flags=flags)


@dataclass(frozen=True)
class A1CoefficientReport:
    lower: float
    upper: float
    lower_trend: str  # converged | diverging | inconclusive
    upper_trend: str


def _octave_trend(terms: np.ndarray) -> str:
    # complete octaves only; a trailing partial octave would fake decay
    sums = []
    m = 0
    while (1 << (m + 1)) <= len(terms) + 1:
        lo, hi = 1 << m, 1 << (m + 1)
        sums.append(terms[lo - 1 : hi - 1].sum())
        m += 1
    if len(sums) < 4:
        return "inconclusive"
    if sums[-1] == 0.0:
        return "converged"
    ratios = [sums[i + 1] / sums[i] if sums[i] > 0 else math.inf
              for i in range(len(sums) - 4, len(sums) - 1)]
    if all(r >= 0.98 for r in ratios):
        return "diverging"
    if all(r <= 0.8 for r in ratios):
        return "converged"
    return "inconclusive"


def a1_coefficient_tests(f: PowerSeries) -> A1CoefficientReport:
    """Partial sums of |a_n|/n and |a_n|/n^2 with dyadic growth detection.

    The first sum converging pins membership in the integrable Bergman
    class; that membership in turn forces the second sum to converge.
    """
    mags = np.abs(f.coeffs[1:])
    n = np.arange(1, len(f.coeffs), dtype=float)
    lower_terms = mags / n
    upper_terms = mags / n**2
    return A1CoefficientReport(
        float(lower_terms.sum()),
        float(upper_terms.sum()),
        _octave_trend(lower_terms),
        _octave_trend(upper_terms),
    )


# ---------------------------------------------------------------------------
# boundary-kernel area integral


@dataclass(frozen=True)
class KernelIntegral:
    value: float
    regime: str  # bounded | log | power
    refinement_delta: float


@lru_cache(maxsize=64)
def _half_circle(m: int) -> np.ndarray:
    return np.cos(np.linspace(0.0, math.pi, m // 2 + 1))


def _kernel_angular_mean(a: float, b: float, mult: int) -> float:
    """Mean over the circle of (1 + a^2 - 2 a cos th)^-b (even in th)."""
    m = _next_pow2(max(64, int(mult / max(1.0 - a, 1e-12))))
    m = min(m, 1 << 20)
    cos_th = _half_circle(m)
    g = (1.0 + a * a - 2.0 * a * cos_th) ** (-b)
    return float((g[0] + g[-1] + 2.0 * g[1:-1].sum()) / m)


def kernel_integral(z: complex, t: float, delta: float,
                    level: int = 0) -> KernelIntegral:
    """Area integral of (1-|u|^2)^delta |1 - conj(z) u|^-(2+t+delta).

    Polar quadrature; the growth regime as |z| -> 1 is classified by the
    sign of t (bounded / logarithmic / power).
    """
    if delta <= -1:
        raise ValueError("delta must exceed -1")
    az = abs(z)
    if az >= 1.0:
        raise ValueError("z must lie in the open unit disk")
    b = (2.0 + t + delta) / 2.0

    def integral(lv: int) -> float:
        mult = 16 << lv
        n_gl = 12 << lv
        gx, gw = _leggauss(n_gl)
        total = 0.0
        x_lo = 0.0
        j = 0
        while j < 40:
            x_hi = 1.0 - 0.5 ** (j + 1)
            xs = x_lo + (gx + 1.0) * 0.5 * (x_hi - x_lo)
            ws = gw * 0.5 * (x_hi - x_lo)
            contrib = 0.0
            for x, w in zip(xs, ws):
                mean = _kernel_angular_mean(az * math.sqrt(x), b, mult)
                contrib += w * (1.0 - x) ** delta * mean
            total += contrib
            x_lo = x_hi
            j += 1
            if j >= 10 and abs(contrib) <= 1e-11 * abs(total):
                break
        return total

    v0 = integral(level)
    v1 = integral(level + 1)
    ref = abs(v1 - v0) / max(abs(v1), 1e-300)
    if t < 0:
        regime = "bounded"
    elif t == 0:
        regime = "log"
    else:
        regime = "power"
    return KernelIntegral(v1, regime, ref)
