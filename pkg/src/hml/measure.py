"""Positive Borel measures on [0, 1): atoms plus one regular density family.

A measure is a finite list of atoms (t_i, w_i) together with an optional
density c (1-t)^kappa log^delta(e/(1-t)), optionally multiplied by a
bounded smooth profile. This family is closed under division by powers of
(1-t) and covers every measure the boundedness theory needs; the pure
power case has closed-form moments and tails which the quadrature paths
are tested against.

Infinite measures (kappa <= -1 after a weight division) are representable:
`Measure.is_finite` reports the dichotomy, moments of infinite measures
raise DivergenceError, and tails are +inf so Carleson classification
correctly fails.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import betaln

from . import quadrature as quad
from .errors import DivergenceError

_LN2 = math.log(2.0)

__all__ = [
    "Density",
    "Measure",
    "CarlesonQuery",
    "CarlesonReport",
    "IntegrabilityResult",
    "lebesgue",
    "power_density_measure",
    "atom_measure",
    "moment",
    "moment_table",
    "tail",
    "weighted_log_moment",
    "integrability_check",
    "tail_weighted_check",
    "carleson_classify",
    "divide_weight",
    "measure_to_dict",
    "measure_from_dict",
    "load_measure",
    "dump_measure",
    "measure_from_atoms_string",
]


@dataclass(frozen=True)
class Density:
    """Weight c (1-t)^kappa log^delta(e/(1-t)) times an optional profile."""

    c: float
    kappa: float
    delta: float = 0.0
    profile: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if not (self.c > 0):
            raise ValueError("density constant c must be positive")
        for name in ("c", "kappa", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"density field {name} must be finite")

    @property
    def pure_power(self) -> bool:
        return self.delta == 0.0 and self.profile is None

    @property
    def is_finite(self) -> bool:
        # integral of (1-t)^kappa log^delta near 1 converges iff kappa > -1,
        # or kappa == -1 with delta < -1 (bounded profiles cannot change this
        # verdict upward, and we treat them as order-one factors).
        return self.kappa > -1.0 or (self.kappa == -1.0 and self.delta < -1.0)

    def weight_u(self, u: np.ndarray) -> np.ndarray:
        """Density times dt/du on the u-grid: c e^{-(kappa+1)u} (1+u)^delta."""
        w = self.c * np.exp(-(self.kappa + 1.0) * u) * (1.0 + u) ** self.delta
        if self.profile is not None:
            w = w * np.asarray(self.profile(quad.t_from_u(u)), dtype=float)
        return w


@dataclass(frozen=True)
class Measure:
    atoms: tuple[tuple[float, float], ...] = ()
    density: Optional[Density] = None
    total_mass_hint: Optional[float] = None

    def __post_init__(self):
        atoms = tuple(sorted((float(t), float(w)) for t, w in self.atoms))
        for t, w in atoms:
            if not (0.0 <= t < 1.0):
                raise ValueError(f"atom location {t} outside [0, 1)")
            if not (w > 0):
                raise ValueError(f"atom weight {w} must be positive")
        object.__setattr__(self, "atoms", atoms)
        if self.total_mass_hint is not None and self.total_mass_hint < 0:
            raise ValueError("total_mass_hint must be nonnegative")
        if not self.atoms and self.density is None:
            raise ValueError("measure needs atoms or a density")

    @property
    def is_finite(self) -> bool:
        return self.density is None or self.density.is_finite

    def atom_arrays(self):
        if not self.atoms:
            return np.empty(0), np.empty(0)
        a = np.asarray(self.atoms)
        return a[:, 0], a[:, 1]

    def total_mass(self) -> float:
        return moment(self, 0)

    def scaled(self, factor: float) -> "Measure":
        """Same measure with all weights multiplied by factor > 0."""
        if not (factor > 0):
            raise ValueError("scale factor must be positive")
        dens = self.density
        if dens is not None:
            dens = Density(dens.c * factor, dens.kappa, dens.delta, dens.profile)
        return Measure(
            atoms=tuple((t, w * factor) for t, w in self.atoms),
            density=dens,
        )


def lebesgue() -> Measure:
    return Measure(density=Density(c=1.0, kappa=0.0))


def power_density_measure(c: float, kappa: float, delta: float = 0.0) -> Measure:
    return Measure(density=Density(c=c, kappa=kappa, delta=delta))


def atom_measure(*atoms: tuple[float, float]) -> Measure:
    return Measure(atoms=tuple(atoms))


# ---------------------------------------------------------------------------
# moments


def _require_finite(mu: Measure) -> None:
    if not mu.is_finite:
        raise DivergenceError("measure is not finite")


def _atom_powers(locs: np.ndarray, weights: np.ndarray, n) -> np.ndarray:
    """sum_i w_i t_i^n for one n or a vector of n (0^0 = 1)."""
    n = np.asarray(n)
    if locs.size == 0:
        return np.zeros(n.shape, dtype=float) if n.ndim else 0.0
    pos = locs > 0.0
    out = np.zeros(n.shape, dtype=float) if n.ndim else 0.0
    if pos.any():
        lt = np.log(locs[pos])
        out = out + (weights[pos] * np.exp(np.multiply.outer(n, lt))).sum(axis=-1)
    if (~pos).any():
        zero_w = weights[~pos].sum()
        out = out + np.where(n == 0, zero_w, 0.0)
    return out


def moment(mu: Measure, n: int, method: str = "auto") -> float:
    """n-th moment: integral of t^n against the measure.

    Closed Beta form for pure power densities, endpoint quadrature with
    node-doubling certification otherwise.
    """
    if n < 0:
        raise ValueError("moment order must be nonnegative")
    _require_finite(mu)
    locs, weights = mu.atom_arrays()
    value = float(_atom_powers(locs, weights, int(n)))
    dens = mu.density
    if dens is None:
        return value
    if dens.pure_power and method in ("auto", "closed"):
        return value + dens.c * math.exp(betaln(n + 1.0, dens.kappa + 1.0))
    if method == "closed":
        raise ValueError("no closed form for this density")

    u_cover = math.log(n + 2.0) + 6.0

    def evaluate(nodes):
        u, w = quad.endpoint_grid(dens.kappa + 1.0, dens.delta, u_cover,
                                  nodes_per_panel=nodes)
        return float(np.sum(w * dens.weight_u(u)
                            * np.exp(n * quad.log_t_from_u(u))))

    v, _ = quad.certified_value(evaluate, what=f"moment({n})")
    return value + v


def moment_table(mu: Measure, m_max: int, method: str = "auto") -> np.ndarray:
    """Moments 0..m_max as one certified array."""
    _require_finite(mu)
    ns = np.arange(m_max + 1)
    locs, weights = mu.atom_arrays()
    out = np.asarray(_atom_powers(locs, weights, ns), dtype=float)
    dens = mu.density
    if dens is None:
        return out
    if dens.pure_power and method in ("auto", "closed"):
        return out + dens.c * np.exp(betaln(ns + 1.0, dens.kappa + 1.0))
    if method == "closed":
        raise ValueError("no closed form for this density")

    u_cover = math.log(m_max + 2.0) + 6.0

    def table(nodes):
        u, w = quad.endpoint_grid(dens.kappa + 1.0, dens.delta, u_cover,
                                  nodes_per_panel=nodes)
        wt = w * dens.weight_u(u)
        log_t = quad.log_t_from_u(u)
        vals = np.empty(m_max + 1)
        step = max(1, (1 << 22) // max(len(u), 1))
        for lo in range(0, m_max + 1, step):
            hi = min(lo + step, m_max + 1)
            vals[lo:hi] = np.exp(np.multiply.outer(ns[lo:hi], log_t)) @ wt
        return vals

    v1 = table(12)
    v2 = table(24)
    scale = np.maximum(np.abs(v2), 1e-300) + 1e-16 * abs(v2[0])
    delta = float(np.max(np.abs(v2 - v1) / scale))
    if delta > quad.CERT_RTOL:
        from .errors import NonConvergenceError

        raise NonConvergenceError(
            f"moment table: node doubling moved entries by {delta:.3e}")
    return out + v2


# ---------------------------------------------------------------------------
# tails


def _density_tail(dens: Density, t, method: str = "auto"):
    """Density part of mu([t, 1)) for scalar or array t."""
    t = np.asarray(t, dtype=float)
    if not dens.is_finite:
        return np.full(t.shape, np.inf)
    if dens.pure_power and method in ("auto", "closed"):
        return dens.c * (1.0 - t) ** (dens.kappa + 1.0) / (dens.kappa + 1.0)
    if dens.kappa == -1.0 and dens.profile is None and method in ("auto", "closed"):
        u_t = -np.log1p(-t)
        return dens.c * (1.0 + u_t) ** (dens.delta + 1.0) / (-(dens.delta + 1.0))
    if method == "closed":
        raise ValueError("no closed form for this density tail")

    def one(tv: float) -> float:
        u_t = -math.log1p(-tv)

        def evaluate(nodes):
            u, w = quad.endpoint_grid(dens.kappa + 1.0, dens.delta,
                                      u_cover=4.0, u_start=u_t,
                                      nodes_per_panel=nodes)
            return float(np.sum(w * dens.weight_u(u)))

        v, _ = quad.certified_value(evaluate, what=f"tail({tv})")
        return v

    return np.vectorize(one)(t)


def tail(mu: Measure, t, method: str = "auto"):
    """mu([t, 1)); exact for atoms, closed form for pure powers.

    Accepts a scalar or an array of t values in [0, 1).
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr < 0) | (t_arr >= 1)):
        raise ValueError("tail requires t in [0, 1)")
    locs, weights = mu.atom_arrays()
    if locs.size:
        # atoms at t_i >= t contribute; locs sorted ascending
        csum = np.concatenate([[0.0], np.cumsum(weights[::-1])])[::-1]
        idx = np.searchsorted(locs, t_arr, side="left")
        out = csum[idx]
    else:
        out = np.zeros(t_arr.shape)
    if mu.density is not None:
        out = out + _density_tail(mu.density, t_arr, method)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# weighted moments and integrability


def weighted_log_moment(mu: Measure, n: int, c: float, base: str = "e") -> float:
    """Integral of t^n log^c(base/(1-t)) against the measure.

    With c = 0 this is exactly `moment` (same code path, bit for bit).
    """
    if c < 0:
        raise ValueError("log power c must be nonnegative")
    if base not in ("e", "2"):
        raise ValueError("base must be 'e' or '2'")
    if c == 0:
        return moment(mu, n)
    _require_finite(mu)
    offset = 1.0 if base == "e" else _LN2

    locs, weights = mu.atom_arrays()
    value = 0.0
    if locs.size:
        logf = (offset - np.log1p(-locs)) ** c
        value += float(np.sum(weights * locs**n * logf)) if n else float(
            np.sum(weights * logf))
    dens = mu.density
    if dens is None:
        return value
    # effective log power delta + c; finite iff kappa > -1 (log factors are
    # harmless) or kappa == -1 with delta + c < -1
    if not (dens.kappa > -1.0 or (dens.kappa == -1.0 and dens.delta + c < -1.0)):
        raise DivergenceError("weighted log moment diverges")

    u_cover = math.log(n + 2.0) + 6.0

    def evaluate(nodes):
        u, w = quad.endpoint_grid(dens.kappa + 1.0, dens.delta + c, u_cover,
                                  nodes_per_panel=nodes)
        logf = (offset + u) ** c
        return float(np.sum(w * dens.weight_u(u) * logf
                            * np.exp(n * quad.log_t_from_u(u))))

    v, _ = quad.certified_value(evaluate, what=f"weighted_log_moment({n})")
    return value + v


@dataclass(frozen=True)
class IntegrabilityResult:
    """Outcome of a finite-vs-infinite decision.

    finite is None when the refinement detector could not decide. For a
    finite integral value_or_growth is the value; otherwise it is the
    observed growth factor per depth doubling.
    """

    finite: Optional[bool]
    value_or_growth: float
    method: str

    def __bool__(self) -> bool:
        return bool(self.finite)


# depth-doubling schedule and thresholds for the refinement detector
_REFINE_DEPTHS = (4, 8, 16, 32, 64, 128, 256, 512, 1024)
_GROW_FACTOR = 1.5
_STABLE_RTOL = 1e-8


def _refine_decide(partial_fn, depths=_REFINE_DEPTHS):
    """Shared detector: four growing doublings => infinite, two stable
    doublings => finite, else inconclusive."""
    values = []
    ratios = []
    for j in depths:
        values.append(partial_fn(j))
        if len(values) >= 2:
            prev, cur = values[-2], values[-1]
            ratios.append(np.inf if prev == 0 else cur / prev)
        if len(ratios) >= 4 and all(
                (not np.isfinite(r)) or r >= _GROW_FACTOR for r in ratios[-4:]):
            return False, float(ratios[-1])
        if len(ratios) >= 2 and all(
                np.isfinite(r) and abs(r - 1.0) < _STABLE_RTOL
                for r in ratios[-2:]):
            return True, float(values[-1])
    return None, float(ratios[-1]) if ratios else 0.0


def integrability_check(mu: Measure, power: float, log_power: float = 0.0,
                        method: str = "auto") -> IntegrabilityResult:
    """Decide whether log^l(e/(1-t)) (1-t)^-power is mu-integrable.

    Closed-form comparison for recognized density families; the doubling
    refinement detector otherwise (or when forced with method='refine').
    """
    locs, weights = mu.atom_arrays()
    atom_value = 0.0
    if locs.size:
        atom_value = float(np.sum(
            weights * (1.0 - np.log1p(-locs)) ** log_power
            * (1.0 - locs) ** (-power)))
    dens = mu.density
    if dens is None:
        return IntegrabilityResult(True, atom_value, "closed")

    rate = dens.kappa - power + 1.0
    dl = dens.delta + log_power
    if method in ("auto", "closed") and dens.profile is None:
        if rate > 0 or (rate == 0 and dl < -1):
            value = atom_value + _density_weighted_value(dens, power, log_power)
            return IntegrabilityResult(True, value, "closed")
        # infinite: report the observed growth per depth doubling
        growth = _observed_growth(mu, power, log_power)
        return IntegrabilityResult(False, growth, "closed")
    if method == "closed":
        raise ValueError("closed comparison unavailable for this density")

    def partial(j: int) -> float:
        return _partial_integral(mu, power, log_power, j)

    finite, info = _refine_decide(partial)
    if finite is True:
        return IntegrabilityResult(True, info, "refine")
    if finite is False:
        return IntegrabilityResult(False, info, "refine")
    return IntegrabilityResult(None, info, "refine")


def _density_weighted_value(dens: Density, power: float, log_power: float) -> float:
    """Value of the (finite) density part of integrability_check."""
    rate = dens.kappa - power + 1.0
    dl = dens.delta + log_power
    if rate == 0 and dens.profile is None:
        # pure log integrand in u: c * int (1+u)^dl du, dl < -1
        return dens.c / (-(dl + 1.0))

    def evaluate(nodes):
        u, w = quad.endpoint_grid(rate, dl, u_cover=8.0, nodes_per_panel=nodes)
        vals = w * dens.weight_u(u) * (1.0 + u) ** log_power * np.exp(power * u)
        return float(np.sum(vals))

    v, _ = quad.certified_value(evaluate, what="integrability value")
    return v


def _partial_integral(mu: Measure, power: float, log_power: float, j: int) -> float:
    """Integral of the check integrand over [0, 1 - 2^-j]."""
    u_hi = j * _LN2
    cut = -math.expm1(-u_hi)
    p = 0.0
    locs, weights = mu.atom_arrays()
    if locs.size:
        sel = locs < cut
        if sel.any():
            p += float(np.sum(weights[sel]
                              * (1.0 - np.log1p(-locs[sel])) ** log_power
                              * (1.0 - locs[sel]) ** (-power)))
    dens = mu.density
    if dens is not None:
        rate = dens.kappa - power + 1.0
        breaks = quad.u_breakpoints(0.0, u_hi, u_cover=8.0, rate=rate)
        u, w = quad.gauss_panels(breaks, 16)
        p += float(np.sum(w * dens.weight_u(u) * (1.0 + u) ** log_power
                          * np.exp(power * u)))
    return p


def _observed_growth(mu: Measure, power: float, log_power: float) -> float:
    p16 = _partial_integral(mu, power, log_power, 16)
    p32 = _partial_integral(mu, power, log_power, 32)
    return np.inf if p16 == 0 else p32 / p16


def tail_weighted_check(mu: Measure, power: float,
                        method: str = "auto") -> IntegrabilityResult:
    """Decide/evaluate the double-measure integral of mu([t,1)) (1-t)^-power.

    The density self-interaction decides finiteness: with tail ~ (1-t)^(k+1)
    log^d the integrand power is 2k+1-power. Atom contributions are finite.
    """
    dens = mu.density
    if dens is not None and not dens.is_finite:
        return IntegrabilityResult(False, np.inf, "closed")
    if dens is None:
        finite = True
        mtd = "closed"
    elif dens.profile is None and method in ("auto", "closed"):
        rate2 = 2.0 * dens.kappa + 2.0 - power
        finite = rate2 > 0 or (rate2 == 0 and 2.0 * dens.delta < -1.0)
        mtd = "closed"
    elif method == "closed":
        raise ValueError("closed comparison unavailable for this density")
    else:

        def partial(j: int) -> float:
            return _tail_weighted_partial(mu, power, j)

        finite, info = _refine_decide(partial)
        if finite is None:
            return IntegrabilityResult(None, info, "refine")
        if finite is False:
            return IntegrabilityResult(False, info, "refine")
        mtd = "refine"

    if not finite:
        p16 = _tail_weighted_partial(mu, power, 16)
        p32 = _tail_weighted_partial(mu, power, 32)
        growth = np.inf if p16 == 0 else p32 / p16
        return IntegrabilityResult(False, growth, mtd)

    value = _tail_weighted_value(mu, power)
    return IntegrabilityResult(True, value, mtd)


def _tail_weighted_value(mu: Measure, power: float) -> float:
    locs, weights = mu.atom_arrays()
    value = 0.0
    if locs.size:
        tails = tail(mu, locs)
        value += float(np.sum(weights * tails * (1.0 - locs) ** (-power)))
    dens = mu.density
    if dens is None:
        return value
    rate2 = 2.0 * dens.kappa + 2.0 - power
    atom_breaks = tuple(-math.log1p(-t) for t in locs)

    def evaluate(nodes):
        u, w = quad.endpoint_grid(max(rate2, dens.kappa + 1.0), 2.0 * dens.delta,
                                  u_cover=10.0, nodes_per_panel=nodes,
                                  extra_breaks=atom_breaks)
        t = quad.t_from_u(u)
        tails = tail(mu, t)
        return float(np.sum(w * dens.weight_u(u) * tails * np.exp(power * u)))

    v, _ = quad.certified_value(evaluate, what="tail-weighted integral")
    return value + v


def _tail_weighted_partial(mu: Measure, power: float, j: int) -> float:
    u_hi = j * _LN2
    cut = -math.expm1(-u_hi)
    value = 0.0
    locs, weights = mu.atom_arrays()
    if locs.size:
        sel = locs < cut
        if sel.any():
            tails = tail(mu, locs[sel])
            value += float(np.sum(weights[sel] * tails
                                  * (1.0 - locs[sel]) ** (-power)))
    dens = mu.density
    if dens is not None:
        rate2 = 2.0 * dens.kappa + 2.0 - power
        breaks = quad.u_breakpoints(0.0, u_hi, u_cover=8.0, rate=rate2)
        u, w = quad.gauss_panels(breaks, 16)
        t = quad.t_from_u(u)
        tails = tail(mu, t)
        value += float(np.sum(w * dens.weight_u(u) * tails * np.exp(power * u)))
    return value


# ---------------------------------------------------------------------------
# Carleson classification


@dataclass(frozen=True)
class CarlesonQuery:
    s: float
    gamma: float = 0.0
    vanishing: bool = False

    def __post_init__(self):
        if not (self.s > 0):
            raise ValueError("Carleson exponent s must be positive")
        if self.gamma < 0:
            raise ValueError("logarithmic power gamma must be nonnegative")


@dataclass(frozen=True)
class CarlesonReport:
    query: CarlesonQuery
    ratio_samples: tuple[tuple[float, float], ...]
    sup_estimate: float
    limit_estimate: Optional[float]
    verdict: str  # holds | fails | inconclusive

    def ratios(self) -> np.ndarray:
        return np.asarray([r for _, r in self.ratio_samples])


# extension depth and thresholds for the verdict rules
_EXTEND = 4
_SUP_STABILITY = 0.05
_VANISH_FRACTION = 0.05


def carleson_classify(mu: Measure, query: CarlesonQuery, depth: int = 24,
                      tail_method: str = "auto") -> CarlesonReport:
    """Sample tail ratios on the dyadic grid and classify.

    ratio(j) = mu([t_j,1)) log^gamma(e/(1-t_j)) / (1-t_j)^s at t_j = 1-2^-j.
    Holds when the sup over j <= depth is stable under four more dyadic
    levels; fails when the deep samples keep increasing; inconclusive when
    they oscillate. A vanishing query additionally requires the last four
    ratios to decrease to below 5% of the grid maximum.
    """
    if depth < 8:
        raise ValueError("depth must be at least 8")
    js = np.arange(depth + _EXTEND + 1)
    ts = 1.0 - 0.5**js
    tails = np.asarray(tail(mu, ts, method=tail_method), dtype=float)
    logf = (1.0 + js * _LN2) ** query.gamma
    ratios = tails * logf * np.exp2(js * query.s)

    samples = tuple((float(t), float(r)) for t, r in zip(ts, ratios))
    sup_all = float(np.max(ratios))
    sup_base = float(np.max(ratios[: depth + 1]))

    if not np.isfinite(sup_all):
        return CarlesonReport(query, samples, sup_all, None, "fails")

    deep = ratios[depth:]
    stable = sup_all <= sup_base * (1.0 + _SUP_STABILITY)
    increasing = bool(np.all(np.diff(deep) > 0))
    if stable:
        verdict = "holds"
    elif increasing:
        verdict = "fails"
    else:
        verdict = "inconclusive"

    limit_estimate = None
    if query.vanishing:
        limit_estimate = float(ratios[-1])
        if verdict == "holds":
            last4 = ratios[-4:]
            decreasing = bool(np.all(np.diff(last4) <= 0))
            small = last4[-1] <= _VANISH_FRACTION * sup_all
            verdict = "holds" if (decreasing and small) else "fails"

    return CarlesonReport(query, samples, sup_all, limit_estimate, verdict)


# ---------------------------------------------------------------------------
# weight division


def divide_weight(mu: Measure, gamma: float) -> Measure:
    """The measure (1-t)^-gamma dmu. Finiteness of the result is a property
    of the output, not a precondition here."""
    if not (gamma > 0):
        raise ValueError("gamma must be positive")
    dens = mu.density
    if dens is not None:
        dens = Density(dens.c, dens.kappa - gamma, dens.delta, dens.profile)
    atoms = tuple((t, w * (1.0 - t) ** (-gamma)) for t, w in mu.atoms)
    return Measure(atoms=atoms, density=dens)


# ---------------------------------------------------------------------------
# JSON spec files (schema documented in the README)


def measure_to_dict(mu: Measure) -> dict:
    if mu.density is not None and mu.density.profile is not None:
        raise ValueError("profiles are not serializable")
    out: dict = {}
    if mu.atoms:
        out["atoms"] = [{"t": t, "w": w} for t, w in mu.atoms]
    if mu.density is not None:
        out["density"] = {
            "c": mu.density.c,
            "kappa": mu.density.kappa,
            "delta": mu.density.delta,
        }
    if mu.total_mass_hint is not None:
        out["total_mass_hint"] = mu.total_mass_hint
    return out


def measure_from_dict(spec: dict) -> Measure:
    unknown = set(spec) - {"atoms", "density", "total_mass_hint"}
    if unknown:
        raise ValueError(f"unknown measure spec keys: {sorted(unknown)}")
    atoms = []
    for entry in spec.get("atoms", []):
        extra = set(entry) - {"t", "w"}
        if extra:
            raise ValueError(f"unknown atom keys: {sorted(extra)}")
        atoms.append((float(entry["t"]), float(entry["w"])))
    density = None
    if "density" in spec:
        d = spec["density"]
        extra = set(d) - {"c", "kappa", "delta"}
        if extra:
            raise ValueError(f"unknown density keys: {sorted(extra)}")
        density = Density(float(d["c"]), float(d["kappa"]),
                          float(d.get("delta", 0.0)))
    hint = spec.get("total_mass_hint")
    mu = Measure(atoms=tuple(atoms), density=density,
                 total_mass_hint=None if hint is None else float(hint))
    if mu.total_mass_hint is not None and mu.is_finite:
        mass = mu.total_mass()
        if not math.isclose(mass, mu.total_mass_hint, rel_tol=1e-6,
                            abs_tol=1e-12):
            raise ValueError(
                f"total mass {mass} does not match hint {mu.total_mass_hint}")
    return mu


def load_measure(path) -> Measure:
    with open(path, "r", encoding="utf-8") as fh:
        return measure_from_dict(json.load(fh))


def dump_measure(mu: Measure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(measure_to_dict(mu), fh, indent=2)
        fh.write("\n")


def measure_from_atoms_string(text: str) -> Measure:
    """Parse inline atoms \"t:w,t:w\" (CLI convenience)."""
    atoms = []
    for part in text.split(","):
        t_str, _, w_str = part.partition(":")
        if not w_str:
            raise ValueError(f"bad atom spec {part!r}, expected t:w")
        atoms.append((float(t_str), float(w_str)))
    return Measure(atoms=tuple(atoms))
