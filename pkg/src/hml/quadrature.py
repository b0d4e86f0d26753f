"""Gauss-Legendre machinery for integrands concentrated at t = 1.

All measure integrals substitute t = 1 - exp(-u), u in [0, inf): a weight
(1-t)^kappa dt becomes exp(-(kappa+1)u) du and log(e/(1-t)) becomes 1+u.
Grids are composite Gauss-Legendre panels in u: unit panels across the
region where the integrand varies (the "cover"), then widening panels
through the exponential decay, truncated once the analytic tail bound is
negligible. Certification doubles the per-panel node count and requires
the value to move by less than a configured relative tolerance.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import NonConvergenceError

#: relative tolerance for node-doubling certification of measure integrals
CERT_RTOL = 1e-10

#: log of the admissible relative tail truncation (e^-37 ~ 8.5e-17)
TAIL_MARGIN = 37.0


@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gauss_panels(breaks, nodes_per_panel: int):
    """Composite Gauss-Legendre nodes/weights over consecutive panels."""
    breaks = np.asarray(breaks, dtype=float)
    if breaks.ndim != 1 or len(breaks) < 2:
        raise ValueError("need at least two breakpoints")
    x, w = _leggauss(nodes_per_panel)
    lo = breaks[:-1]
    width = np.diff(breaks)
    nodes = (lo[:, None] + (x[None, :] + 1.0) * 0.5 * width[:, None]).ravel()
    weights = (0.5 * width[:, None] * w[None, :]).ravel()
    return nodes, weights


def tail_extent(rate: float, delta: float, margin: float = TAIL_MARGIN) -> float:
    """u beyond which exp(-rate*u) (1+u)^max(delta,0) has shed `margin` e-folds."""
    if rate <= 0:
        raise ValueError("tail extent needs a positive decay rate")
    d = max(delta, 0.0)
    u = margin / rate
    for _ in range(4):
        u = (margin + d * np.log1p(u)) / rate
    return u


def u_breakpoints(u_start: float, u_max: float, u_cover: float, rate: float = 1.0):
    """Panel breakpoints: unit panels over the cover, then widening panels.

    Widths grow geometrically but stay small enough that a fixed-order GL
    rule resolves exp(rate * u) across one panel.
    """
    if u_max <= u_start:
        raise ValueError("empty u-range")
    cap = 6.0 / max(abs(rate), 0.25)
    pts = [u_start]
    cover_end = min(u_start + max(u_cover, 1.0), u_max)
    while pts[-1] + 1.0 < cover_end:
        pts.append(pts[-1] + 1.0)
    if pts[-1] < cover_end:
        pts.append(cover_end)
    width = 1.0
    while pts[-1] < u_max:
        width = min(width * 1.6, cap)
        pts.append(min(pts[-1] + width, u_max))
    return np.asarray(pts)


def endpoint_grid(
    rate: float,
    delta: float,
    u_cover: float,
    u_start: float = 0.0,
    nodes_per_panel: int = 12,
    extra_breaks=(),
):
    """u-grid for integrands ~ exp(-rate*u) (1+u)^delta beyond the cover."""
    u_max = u_start + max(u_cover, 1.0) + tail_extent(rate, delta)
    breaks = u_breakpoints(u_start, u_max, u_cover, rate)
    if len(extra_breaks):
        eb = np.asarray(extra_breaks, dtype=float)
        eb = eb[(eb > u_start) & (eb < u_max)]
        breaks = np.unique(np.concatenate([breaks, eb]))
    return gauss_panels(breaks, nodes_per_panel)


def t_from_u(u: np.ndarray) -> np.ndarray:
    """t = 1 - exp(-u), stable for small u."""
    return -np.expm1(-u)


def log_t_from_u(u: np.ndarray) -> np.ndarray:
    """log(1 - exp(-u)), stable at both ends."""
    with np.errstate(divide="ignore"):
        return np.log(-np.expm1(-u))


def certified_value(evaluate, nodes_base: int = 12, rtol: float = CERT_RTOL,
                    what: str = "integral"):
    """Run `evaluate(nodes)` at base and doubled node counts.

    Returns (value_at_doubled, relative_change). Raises NonConvergenceError
    when doubling still moves the value by more than rtol.
    """
    v1 = evaluate(nodes_base)
    v2 = evaluate(2 * nodes_base)
    scale = max(abs(v2), abs(v1))
    delta = abs(v2 - v1) / scale if scale > 0 else 0.0
    if not np.isfinite(v2) or delta > rtol:
        raise NonConvergenceError(
            f"{what}: node doubling moved the value by {delta:.3e} "
            f"(tolerance {rtol:.1e})"
        )
    return v2, delta
