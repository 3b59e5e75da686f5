"""Density, tail, and parameter derivatives of the Student-t family.

Degrees of freedom are plain floats on (0, inf]; ``math.inf`` is the
distinguished infinite member, for which every operation switches to the
standard normal limit explicitly rather than substituting a large finite
value.  ``density``/``log_density`` and the derivative helpers accept numpy
arrays in ``x`` so quadrature oracles can evaluate node batches in one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    adaptive_quadrature,
    integrate_with_tail_bound,
)
from .special import (
    digamma,
    ln_gamma,
    log_normal_tail,
    log_reg_inc_beta,
    normal_tail,
)

__all__ = [
    "INFINITE_DOF",
    "TailEvaluation",
    "check_dof",
    "is_infinite",
    "density",
    "log_density",
    "tail",
    "tail_value",
    "log_tail",
    "tail_values",
    "tail_quadrature_oracle",
    "dlogdensity_dp",
    "rho_prime",
    "dtail_dp",
    "tail_logderiv_r",
    "lemma1_lhs",
    "lemma1_rhs",
]

INFINITE_DOF = math.inf

_LOG_NORMAL_CONST = -0.5 * math.log(2.0 * math.pi)


def check_dof(p: float) -> float:
    """Validate degrees of freedom: finite positive real, or math.inf."""
    p = float(p)
    if math.isnan(p) or p <= 0.0:
        raise DomainError(f"degrees of freedom must lie in (0, inf], got {p!r}")
    return p


def is_infinite(p: float) -> bool:
    return math.isinf(check_dof(p))


def _check_finite_dof(p: float) -> float:
    p = check_dof(p)
    if math.isinf(p):
        raise DomainError("operation requires finite degrees of freedom")
    return p


def log_norm_const(p: float) -> float:
    """ln of the density normalisation Gamma((p+1)/2) / (sqrt(pi p) Gamma(p/2))."""
    p = _check_finite_dof(p)
    return ln_gamma(0.5 * (p + 1.0)) - ln_gamma(0.5 * p) - 0.5 * math.log(math.pi * p)


def log_density(p: float, x):
    """ln f_p(x); vectorized in x, stable far into the tails via log1p."""
    p = check_dof(p)
    x = np.asarray(x, dtype=float)
    if math.isinf(p):
        out = _LOG_NORMAL_CONST - 0.5 * x * x
    else:
        out = log_norm_const(p) - 0.5 * (p + 1.0) * np.log1p(x * x / p)
    return float(out) if out.ndim == 0 else out


def density(p: float, x):
    """f_p(x), evaluated as exp(log_density) for stability."""
    ld = log_density(p, x)
    return np.exp(ld) if isinstance(ld, np.ndarray) else math.exp(ld)


@dataclass(frozen=True)
class TailEvaluation:
    """One tail evaluation G_p(x) with its log, coherent by construction."""

    x: float
    p: float
    tail: float
    log_tail: float


def tail(p: float, x: float) -> TailEvaluation:
    """Tail function G_p(x) = P(T_p > x).

    For finite p and x >= 0 this uses the incomplete-beta identity
    G_p(x) = I_z(p/2, 1/2) / 2 with z = p/(p + x^2), evaluated in log space
    so tails below 1e-300 retain relative accuracy; the identity itself is
    certified against ``tail_quadrature_oracle`` in the test suite rather
    than assumed.  Negative x goes through G_p(x) = 1 - G_p(-x).
    """
    p = check_dof(p)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"tail requires finite x, got {x!r}")
    if x < 0.0:
        flipped = tail(p, -x)
        value = 1.0 - flipped.tail
        return TailEvaluation(x=x, p=p, tail=value, log_tail=math.log1p(-flipped.tail))
    if math.isinf(p):
        lt = log_normal_tail(x)
        value = normal_tail(x) if x <= 36.0 else math.exp(lt)
        return TailEvaluation(x=x, p=p, tail=value, log_tail=lt)
    if x == 0.0:
        return TailEvaluation(x=0.0, p=p, tail=0.5, log_tail=math.log(0.5))
    z = p / (p + x * x)
    one_minus_z = x * x / (p + x * x)
    lt = math.log(0.5) + log_reg_inc_beta(0.5 * p, 0.5, z, one_minus_z)
    return TailEvaluation(x=x, p=p, tail=math.exp(lt), log_tail=lt)


def tail_value(p: float, x: float) -> float:
    return tail(p, x).tail


def log_tail(p: float, x: float) -> float:
    return tail(p, x).log_tail


def tail_values(p: float, xs) -> np.ndarray:
    """G_p evaluated pointwise over an array of abscissae."""
    return np.array([tail(p, float(v)).tail for v in np.asarray(xs, dtype=float).ravel()])


def _power_tail_mass_bound(p: float, X: float) -> float:
    """Upper bound on integral of f_p over [X, inf) for finite p, any X > 0.

    From f_p(u) <= c_p (u^2/p)^(-(p+1)/2): the remainder is at most
    c_p p^((p+1)/2) X^(-p) / p, computed in log space to survive huge X.
    """
    lb = log_norm_const(p) + 0.5 * (p + 1.0) * math.log(p) - p * math.log(X) - math.log(p)
    return math.exp(lb)


def _relative_cfg(cfg: QuadratureConfig, scale: float) -> QuadratureConfig:
    """Tie the absolute tolerance to the integral's own magnitude.

    Deep-tail integrals are far smaller than any fixed absolute tolerance;
    without this rescaling the adaptive loop would stop immediately and the
    contract of *relative* agreement with the closed form would be lost.
    """
    return replace(cfg, abs_tol=max(1e-300, cfg.rel_tol * scale))


def tail_quadrature_oracle(
    p: float, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """G_p(x) by adaptive quadrature of the defining integral of f_p.

    Independent of the incomplete-beta route: integrates the density from x
    outward, appending doubling panels until the analytic bound on the
    remaining mass falls below cfg.tail_cut_tol relative to the accumulated
    value.  The absolute tolerance is rescaled to an analytic overestimate
    of G_p(x) itself (never to the closed form being certified) so the
    relative-accuracy contract holds even for tails near underflow.
    """
    p = check_dof(p)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"tail_quadrature_oracle requires finite x, got {x!r}")

    if math.isinf(p):
        def f(u):
            return density(math.inf, u)

        def bound(X: float) -> float:
            # Mills-type bound: G(X) <= phi(X)/X for X > 0.
            return density(math.inf, X) / X

        scale = min(1.0, bound(x)) if x > 0 else 1.0
        return integrate_with_tail_bound(
            f, x, bound, _relative_cfg(cfg, scale), first_width=max(10.0, 10.0 - x)
        )

    def f(u):
        return density(p, u)

    def bound(X: float) -> float:
        return _power_tail_mass_bound(p, X)

    scale = min(1.0, bound(max(x, 1.0)))
    return integrate_with_tail_bound(
        f, x, bound, _relative_cfg(cfg, scale), first_width=max(10.0, 10.0 - x)
    )


def dlogdensity_dp(p: float, x):
    """Partial derivative of ln f_p(x) with respect to p (finite p only).

    Closed form: psi terms - 1/(2p) - log1p(x^2/p)/2 + (p+1)x^2/(2p(p+x^2)).
    Certified against a central finite difference of log_density in the
    tests.  Vectorized in x.
    """
    p = _check_finite_dof(p)
    x = np.asarray(x, dtype=float)
    const = 0.5 * digamma(0.5 * (p + 1.0)) - 0.5 * digamma(0.5 * p) - 0.5 / p
    x2 = x * x
    out = const - 0.5 * np.log1p(x2 / p) + (p + 1.0) * x2 / (2.0 * p * (p + x2))
    return float(out) if out.ndim == 0 else out


def rho_prime(p: float, x):
    """x-derivative of dlogdensity_dp: exactly x(1 - x^2)/(p + x^2)^2."""
    p = _check_finite_dof(p)
    x = np.asarray(x, dtype=float)
    out = x * (1.0 - x * x) / (p + x * x) ** 2
    return float(out) if out.ndim == 0 else out


def dtail_dp(p: float, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Partial derivative of G_p(x) in p, by differentiating under the integral:

        dG_p(x)/dp = integral_x^inf f_p(u) * dlogdensity_dp(p, u) du.

    The remainder past X is bounded by the power-law density bound times
    (M + ln u) with M collecting the constant part of |dlogdensity_dp|,
    integrated in closed form; doubling panels stop once that bound is
    negligible relative to the accumulated value.
    """
    p = _check_finite_dof(p)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"dtail_dp requires finite x, got {x!r}")

    const = 0.5 * digamma(0.5 * (p + 1.0)) - 0.5 * digamma(0.5 * p) - 0.5 / p
    lc = log_norm_const(p)

    def integrand(u):
        u = np.asarray(u, dtype=float)
        t = np.log1p(u * u / p)
        f = np.exp(lc - 0.5 * (p + 1.0) * t)
        rho = const - 0.5 * t + (p + 1.0) * u * u / (2.0 * p * (p + u * u))
        return f * rho

    # |rho(u)| <= M + ln u for u >= 1.
    M = abs(const) + 0.5 * math.log1p(1.0 / p) + 0.5 * (p + 1.0) / p

    def bound(X: float) -> float:
        if X < 1.0:
            return math.inf
        lead = lc + 0.5 * (p + 1.0) * math.log(p) - p * math.log(X)
        return math.exp(lead) * ((M + math.log(X)) / p + 1.0 / (p * p))

    # Relative accuracy matters downstream through r = dtail/G; scale the
    # absolute tolerance to G_p(x) so far-tail derivatives stay meaningful.
    scale = max(tail(p, x).tail, 1e-280)
    return integrate_with_tail_bound(
        integrand, x, bound, _relative_cfg(cfg, scale), first_width=max(10.0, 10.0 - x)
    )


def tail_logderiv_r(p: float, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """r_p(x) = d ln G_p(x) / dp = dtail_dp / G_p(x), for x >= 0."""
    p = _check_finite_dof(p)
    x = float(x)
    if x < 0.0:
        raise DomainError(f"tail_logderiv_r requires x >= 0, got {x}")
    return dtail_dp(p, x, cfg) / tail(p, x).tail


def lemma1_lhs(p: float) -> float:
    """p psi((p+1)/2) - p psi(p/2) - 1, i.e. 2p d(ln f_p(0))/dp in closed form."""
    p = _check_finite_dof(p)
    return p * (digamma(0.5 * (p + 1.0)) - digamma(0.5 * p)) - 1.0


def lemma1_rhs(p: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Quadrature of integral_0^1 2 t^p / (1+t)^2 dt, the positive closed form
    that the digamma expression reduces to."""
    p = _check_finite_dof(p)

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return 2.0 * t**p / (1.0 + t) ** 2

    return adaptive_quadrature(integrand, 0.0, 1.0, cfg)
