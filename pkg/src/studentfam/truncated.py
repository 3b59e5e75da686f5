"""Conditional and plus-part moments of |T_p| around the threshold 1.

The threshold is fixed at 1 throughout, matching the statements being
certified.  Supplied functions are evaluable callables; nonnegativity and
monotonicity are validated on 1000 sampled points (black-box functions
cannot be checked exactly, and the reports say so).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .funcspec import sampled_sup, validate_monotone_samples
from .monotonicity import DECREASING, GridSpec, MonotonicityReport, check_monotone
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    adaptive_quadrature,
    integrate_with_tail_bound,
)
from .student import check_dof, density, log_norm_const, tail

__all__ = [
    "PlusPartSpec",
    "conditional_below",
    "conditional_above",
    "plus_ratio",
    "certify_prop1",
]

_ABOVE_SAMPLE_HI = 50.0


class PlusPartSpec:
    """Functions for a plus-part moment ratio E (ra)((...)_+) / E a((...)_+).

    ``side`` selects the transform: 'below' uses (1 - |T_p|)_+ (arguments in
    [0, 1]), 'above' uses (|T_p| - 1)_+ (arguments in [0, inf)).  ``a`` must
    vanish at 0 exactly, which makes the atom of the plus-part at 0 drop out
    of both moments; ``r`` must be nondecreasing (sample-validated).
    """

    def __init__(self, side: str, a: Callable, r: Callable) -> None:
        if side not in ("below", "above"):
            raise DomainError(f"side must be 'below' or 'above', got {side!r}")
        a0 = float(np.asarray(a(0.0), dtype=float))
        if a0 != 0.0:
            raise DomainError(f"a(0) must be exactly 0, got {a0!r}")
        hi = 1.0 if side == "below" else _ABOVE_SAMPLE_HI
        vals = np.asarray(a(np.linspace(0.0, hi, 1000)), dtype=float)
        if np.any(vals < 0.0):
            raise DomainError("a must be nonnegative on its domain")
        validate_monotone_samples(r, 0.0, hi, name="r")
        self.side = side
        self.a = a
        self.r = r

    def b(self, t):
        return np.asarray(self.r(t), dtype=float) * np.asarray(self.a(t), dtype=float)


def _breaks_below(fn: Callable) -> tuple[float, ...]:
    # Kinks of t -> fn(1 - x) land at x = 1 - t.
    return tuple(1.0 - t for t in getattr(fn, "breakpoints", ()) if 0.0 < 1.0 - t < 1.0)


def _breaks_above(fn: Callable) -> tuple[float, ...]:
    return tuple(1.0 + t for t in getattr(fn, "breakpoints", ()) if t > 0.0)


def _integral_below(p: float, g: Callable, cfg: QuadratureConfig,
                    breakpoints: Sequence[float] = ()) -> float:
    """2 * integral_0^1 f_p(x) g(1 - x) dx."""

    def integrand(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(density(p, x), dtype=float) * np.asarray(g(1.0 - x), dtype=float)

    return 2.0 * adaptive_quadrature(integrand, 0.0, 1.0, cfg, breakpoints=breakpoints)


def _integral_above(p: float, g: Callable, g_sup: float, cfg: QuadratureConfig,
                    breakpoints: Sequence[float] = ()) -> float:
    """2 * integral_1^inf f_p(x) g(x - 1) dx for bounded g (sup g = g_sup)."""

    def integrand(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(density(p, x), dtype=float) * np.asarray(g(x - 1.0), dtype=float)

    if math.isinf(p):
        def bound(X: float) -> float:
            return g_sup * density(math.inf, X) / X
    else:
        lead = log_norm_const(p) + 0.5 * (p + 1.0) * math.log(p) - math.log(p)

        def bound(X: float) -> float:
            return g_sup * math.exp(lead - p * math.log(X))

    # Seed the head interval so kinks of g land on panel edges.
    head = adaptive_quadrature(integrand, 1.0, 11.0,
                               cfg, breakpoints=breakpoints)
    return 2.0 * (head + integrate_with_tail_bound(
        integrand, 11.0, bound, cfg, first_width=10.0))


def conditional_below(
    p: float,
    b: Callable,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    validate: bool = True,
) -> float:
    """E( b(1 - |T_p|) | |T_p| < 1 ) for nondecreasing b >= 0 on [0, 1]."""
    p = check_dof(p)
    if validate:
        validate_monotone_samples(b, 0.0, 1.0, name="b")
    numer = _integral_below(p, b, cfg, breakpoints=_breaks_below(b))
    denom = 1.0 - 2.0 * tail(p, 1.0).tail
    return numer / denom


def conditional_above(
    p: float,
    b: Callable,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    validate: bool = True,
) -> float:
    """E( b(|T_p| - 1) | |T_p| > 1 ) for bounded nondecreasing b >= 0."""
    p = check_dof(p)
    if validate:
        validate_monotone_samples(b, 0.0, _ABOVE_SAMPLE_HI, name="b")
    b_sup = sampled_sup(b, 0.0, 1e9, samples=32)
    numer = _integral_above(p, b, b_sup, cfg, breakpoints=_breaks_above(b))
    denom = 2.0 * tail(p, 1.0).tail
    return numer / denom


def plus_ratio(
    p: float,
    spec: PlusPartSpec,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """E b((...)_+) / E a((...)_+) with b = r a, on the side chosen by spec."""
    p = check_dof(p)
    if spec.side == "below":
        breaks_a = _breaks_below(spec.a)
        breaks_b = tuple(set(breaks_a) | set(_breaks_below(spec.r)))
        numer = _integral_below(p, spec.b, cfg, breakpoints=breaks_b)
        denom = _integral_below(p, spec.a, cfg, breakpoints=breaks_a)
    else:
        a_sup = sampled_sup(spec.a, 0.0, 1e9, samples=64)
        r_sup = sampled_sup(spec.r, 0.0, 1e9, samples=64)
        breaks_a = _breaks_above(spec.a)
        breaks_b = tuple(set(breaks_a) | set(_breaks_above(spec.r)))
        numer = _integral_above(p, spec.b, a_sup * r_sup, cfg, breakpoints=breaks_b)
        denom = _integral_above(p, spec.a, a_sup, cfg, breakpoints=breaks_a)
    if denom <= 0.0:
        raise DomainError(
            "denominator moment E a((...)_+) is not positive; "
            "a must be nonzero on a set of positive measure"
        )
    return numer / denom


def certify_prop1(
    part: str,
    p_grid: GridSpec,
    b: Callable | None = None,
    spec: PlusPartSpec | None = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    include_infinite: bool = True,
    margin_floor: float = 0.0,
) -> MonotonicityReport:
    """Certify strict decrease in p of the part-(i)..(iv) quantity.

    Parts 'i'/'ii' take the function b; parts 'iii'/'iv' take a PlusPartSpec
    (whose side must match the part).  The p grid is extended with the
    infinite member unless disabled.
    """
    if part in ("i", "ii"):
        if b is None:
            raise DomainError(f"part {part} requires the function b")
        evaluate = conditional_below if part == "i" else conditional_above
        hi = 1.0 if part == "i" else _ABOVE_SAMPLE_HI
        validate_monotone_samples(b, 0.0, hi, name="b")

        def value(p: float) -> float:
            return evaluate(p, b, cfg, validate=False)

    elif part in ("iii", "iv"):
        if spec is None:
            raise DomainError(f"part {part} requires a PlusPartSpec")
        wanted = "below" if part == "iii" else "above"
        if spec.side != wanted:
            raise DomainError(f"part {part} requires side={wanted!r}, got {spec.side!r}")

        def value(p: float) -> float:
            return plus_ratio(p, spec, cfg)

    else:
        raise DomainError(f"unknown part {part!r}; expected one of i, ii, iii, iv")

    points = [float(v) for v in p_grid.points()]
    if include_infinite:
        points.append(math.inf)
    return check_monotone([(p, value(p)) for p in points], DECREASING, margin_floor)
