"""Moments of the recentred chi variable Z_p = X_p - sqrt(p-1), where X_p^2
is chi-square with p degrees of freedom, p in [1, inf].

The infinite member is the centred normal with variance 1/2 (the
distributional limit of Z_p).  Quadrature runs in the chi variable x with
the shift applied inside the integrand, over a window around the bulk at
sqrt(p-1) wide enough that the neglected mass is far below every tolerance
used here (the chi log-density drops like -delta^2 away from the bulk).
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import DomainError
from .funcspec import validate_monotone_samples
from .monotonicity import DECREASING, GridSpec, MonotonicityReport, check_monotone
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, adaptive_quadrature
from .special import ln_gamma

__all__ = [
    "check_chi_dof",
    "chi_density",
    "z_moment",
    "z_ratio",
    "certify_prop2",
]

_SQRT_PI = math.sqrt(math.pi)
_BULK_HALF_WIDTH = 30.0
_NORMAL_CUT = 10.0


def check_chi_dof(p: float) -> float:
    """Validate chi-family degrees of freedom: real >= 1, or math.inf."""
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise DomainError(f"chi-family degrees of freedom must lie in [1, inf], got {p!r}")
    return p


def chi_density(p: float, x):
    """Density of X_p: 2^(1-p/2) x^(p-1) e^(-x^2/2) / Gamma(p/2) for x > 0.

    Finite p only; vectorized in x; exactly 0 at x <= 0 (for p = 1 the
    half-normal value at the origin is approached only as x -> 0+).
    """
    p = check_chi_dof(p)
    if math.isinf(p):
        raise DomainError("chi_density requires finite degrees of freedom")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    xp = x[pos]
    log_c = (1.0 - 0.5 * p) * math.log(2.0) - ln_gamma(0.5 * p)
    out[pos] = np.exp(log_c + (p - 1.0) * np.log(xp) - 0.5 * xp * xp)
    return float(out) if out.ndim == 0 else out


def _kink_shifts(fn: Callable, shift: float) -> tuple[float, ...]:
    return tuple(t + shift for t in getattr(fn, "breakpoints", ()))


def z_moment(
    p: float,
    b: Callable,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """E b(Z_p) for bounded b.

    Finite p: integral_0^inf chi_density(p, x) b(x - sqrt(p-1)) dx.
    Infinite p: integral b(z) e^(-z^2) / sqrt(pi) dz (normal, variance 1/2).
    """
    p = check_chi_dof(p)
    if math.isinf(p):
        def integrand(z):
            z = np.asarray(z, dtype=float)
            return np.asarray(b(z), dtype=float) * np.exp(-z * z) / _SQRT_PI

        breaks = tuple(
            t for t in getattr(b, "breakpoints", ()) if abs(t) < _NORMAL_CUT
        )
        return adaptive_quadrature(
            integrand, -_NORMAL_CUT, _NORMAL_CUT, cfg, breakpoints=breaks
        )

    mu = math.sqrt(p - 1.0)

    def integrand(x):
        x = np.asarray(x, dtype=float)
        return chi_density(p, x) * np.asarray(b(x - mu), dtype=float)

    lo = max(0.0, mu - _BULK_HALF_WIDTH)
    hi = mu + _BULK_HALF_WIDTH
    breaks = tuple(t for t in (_kink_shifts(b, mu) + (mu,)) if lo < t < hi)
    return adaptive_quadrature(integrand, lo, hi, cfg, breakpoints=breaks)


def z_ratio(
    p: float,
    a: Callable,
    r: Callable,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """E (ra)(Z_p) / E a(Z_p) for bounded a >= 0 and bounded nondecreasing r."""
    p = check_chi_dof(p)

    def b(z):
        return np.asarray(r(z), dtype=float) * np.asarray(a(z), dtype=float)

    b.breakpoints = tuple(
        set(getattr(a, "breakpoints", ())) | set(getattr(r, "breakpoints", ()))
    )
    denom = z_moment(p, a, cfg)
    if denom <= 0.0:
        raise DomainError("denominator moment E a(Z_p) is not positive")
    return z_moment(p, b, cfg) / denom


def certify_prop2(
    part: str,
    p_grid: GridSpec,
    b: Callable | None = None,
    a: Callable | None = None,
    r: Callable | None = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    include_infinite: bool = True,
    margin_floor: float = 0.0,
) -> MonotonicityReport:
    """Certify strict decrease in p over [1, hi] (plus the infinite member)
    of E b(Z_p) (part 'i') or the ratio E (ra)(Z_p)/E a(Z_p) (part 'ii')."""
    if p_grid.lo < 1.0:
        raise DomainError("chi-family p grid must start at or above 1")
    if part == "i":
        if b is None:
            raise DomainError("part i requires the function b")
        validate_monotone_samples(b, -_NORMAL_CUT, _NORMAL_CUT, name="b",
                                  require_nonnegative=True)

        def value(p: float) -> float:
            return z_moment(p, b, cfg)

    elif part == "ii":
        if a is None or r is None:
            raise DomainError("part ii requires the functions a and r")
        validate_monotone_samples(r, -_NORMAL_CUT, _NORMAL_CUT, name="r")

        def value(p: float) -> float:
            return z_ratio(p, a, r, cfg)

    else:
        raise DomainError(f"unknown part {part!r}; expected 'i' or 'ii'")

    points = [float(v) for v in p_grid.points()]
    if include_infinite:
        points.append(math.inf)
    return check_monotone([(p, value(p)) for p in points], DECREASING, margin_floor)
