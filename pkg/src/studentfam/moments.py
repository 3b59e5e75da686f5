"""Generalized moments E b(|T_p|) through the Stieltjes representation

    E b(|T_p|) / 2 = sum_atoms mass * G_p(loc) + integral G_p(x) b'(x) dx,

their closed-form power special cases, and the monotonicity certifiers for
moments and moment ratios over the degrees of freedom.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DomainError,
    MeasureConsistencyError,
    UnsupportedFamilyError,
)
from .monotonicity import (
    DECREASING,
    GridSpec,
    MonotonicityReport,
    check_monotone,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_to_inf
from .special import ln_gamma
from .student import check_dof, density, tail_values
from .student import tail as student_tail

__all__ = [
    "MeasureFamily",
    "StieltjesMeasure",
    "power_measure",
    "power_log_measure",
    "indicator_measure",
    "atoms_measure",
    "parse_measure",
    "finiteness_threshold",
    "generalized_moment",
    "direct_moment_oracle",
    "power_moment",
    "certify_moment_monotone",
    "certify_ratio_monotone",
    "correlation_identity",
]

_HALF_LOG_PI = 0.5 * math.log(math.pi)
_DENSITY_SEEDS = (1e-9, 1e-6, 1e-3, 1.0, 10.0, 100.0)


@dataclass(frozen=True)
class MeasureFamily:
    """Named family tag: 'power', 'power_log', 'indicator', or 'custom'."""

    kind: str
    param: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("power", "power_log", "indicator", "custom"):
            raise DomainError(f"unknown measure family {self.kind!r}")
        if self.kind in ("power", "power_log") and not (self.param and self.param > 0):
            raise DomainError(f"{self.kind} requires s > 0, got {self.param}")
        if self.kind == "indicator" and (self.param is None or self.param < 0):
            raise DomainError(f"indicator requires c >= 0, got {self.param}")


@dataclass(frozen=True)
class StieltjesMeasure:
    """Lebesgue-Stieltjes measure mu_b with mu_b([0, x]) = b(x).

    Atoms carry the jumps of b (b(0) > 0 shows up as an atom at 0); the
    absolutely continuous part is an evaluable density on (0, inf).
    ``cumulative`` evaluates b itself when known (used by oracle
    cross-checks), and ``family`` tags named families so finiteness can be
    classified analytically instead of heuristically.
    """

    atoms: tuple[tuple[float, float], ...] = ()
    density: Callable | None = None
    description: str = "custom"
    family: MeasureFamily | None = None
    cumulative: Callable | None = None
    density_breakpoints: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        locs = [loc for loc, _ in self.atoms]
        if any(loc < 0 for loc in locs):
            raise DomainError("atom locations must be >= 0")
        if any(mass <= 0 for _, mass in self.atoms):
            raise DomainError("atom masses must be > 0")
        if locs != sorted(locs) or len(set(locs)) != len(locs):
            raise DomainError("atoms must be sorted by location and distinct")
        if not self.atoms and self.density is None:
            raise DomainError("measure must carry atoms, a density, or both")


def power_measure(s: float) -> StieltjesMeasure:
    """mu_b for b(x) = x^s: density s x^(s-1) on (0, inf)."""
    fam = MeasureFamily("power", float(s))
    s = float(s)
    return StieltjesMeasure(
        density=lambda x, s=s: s * np.asarray(x, dtype=float) ** (s - 1.0),
        description=f"pow:{s:g}",
        family=fam,
        cumulative=lambda x, s=s: np.asarray(x, dtype=float) ** s,
    )


def power_log_measure(s: float) -> StieltjesMeasure:
    """mu_b for b(x) = x^s / ln^2(e^(2/s) + x), the boundary-finite family.

    b'(x) = x^(s-1) [ s L - 2x/(e^(2/s)+x) ] / L^3 with L = ln(e^(2/s)+x);
    the bracket is positive because L >= 2/s, so b is nondecreasing.
    """
    fam = MeasureFamily("power_log", float(s))
    s = float(s)
    shift = math.exp(2.0 / s)

    def dens(x, s=s, shift=shift):
        x = np.asarray(x, dtype=float)
        L = np.log(shift + x)
        return x ** (s - 1.0) * (s * L - 2.0 * x / (shift + x)) / L**3

    def cum(x, s=s, shift=shift):
        x = np.asarray(x, dtype=float)
        return x**s / np.log(shift + x) ** 2

    return StieltjesMeasure(
        density=dens, description=f"powlog:{s:g}", family=fam, cumulative=cum
    )


def indicator_measure(c: float) -> StieltjesMeasure:
    """mu_b for the right-continuous step b(x) = 1{x >= c}: one atom at c."""
    fam = MeasureFamily("indicator", float(c))
    c = float(c)
    return StieltjesMeasure(
        atoms=((c, 1.0),),
        description=f"ind:{c:g}",
        family=fam,
        cumulative=lambda x, c=c: (np.asarray(x, dtype=float) >= c).astype(float),
    )


def atoms_measure(atoms: Sequence[tuple[float, float]], description: str = "atoms") -> StieltjesMeasure:
    atoms = tuple(sorted((float(a), float(m)) for a, m in atoms))

    def cum(x, atoms=atoms):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for loc, mass in atoms:
            out = out + mass * (x >= loc)
        return out

    return StieltjesMeasure(atoms=atoms, description=description, cumulative=cum)


def parse_measure(token: str) -> StieltjesMeasure:
    """CLI measure mini-language: pow:s, powlog:s, ind:c, atoms:<csv-path>."""
    name, _, arg = token.partition(":")
    name = name.strip().lower()
    if name == "pow":
        return power_measure(float(arg))
    if name == "powlog":
        return power_log_measure(float(arg))
    if name == "ind":
        return indicator_measure(float(arg))
    if name == "atoms":
        with open(arg, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
        return atoms_measure([(float(r[0]), float(r[1])) for r in rows], description=token)
    raise DomainError(f"unknown measure token {token!r}")


def finiteness_threshold(family: MeasureFamily) -> tuple[float, bool]:
    """(p_b, boundary_included) for the named families.

    power(s) has finiteness set (s, inf); power_log(s) includes its boundary,
    [s, inf); indicator measures are finite for every p > 0.  No general
    divergence classifier is claimed for custom measures.
    """
    if family.kind == "power":
        return float(family.param), False
    if family.kind == "power_log":
        return float(family.param), True
    if family.kind == "indicator":
        return 0.0, False
    raise UnsupportedFamilyError("finiteness classification needs a named family")


def _known_finite(p: float, measure: StieltjesMeasure) -> bool | None:
    if measure.family is None or measure.family.kind == "custom":
        return None
    if math.isinf(p):
        return True
    p_b, included = finiteness_threshold(measure.family)
    if p > p_b:
        return True
    if p == p_b and included:
        return True
    return False


def generalized_moment(
    p: float,
    measure: StieltjesMeasure,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """E b(|T_p|) = 2 [ sum_atoms mass G_p(loc) + integral G_p b' ].

    Returns math.inf when the moment diverges.  Named families are
    classified analytically via their finiteness threshold; custom densities
    fall back to the doubling-domain heuristic of ``integrate_to_inf`` (a
    verdict, not a proof, and documented as such).
    """
    p = check_dof(p)
    total = sum(mass * student_tail(p, loc).tail for loc, mass in measure.atoms)
    if measure.density is not None:
        known = _known_finite(p, measure)
        if known is False:
            return math.inf

        def integrand(x):
            x = np.asarray(x, dtype=float)
            return tail_values(p, x) * np.asarray(measure.density(x), dtype=float)

        part = integrate_to_inf(
            integrand,
            0.0,
            cfg,
            breakpoints=_DENSITY_SEEDS + measure.density_breakpoints,
            known_finite=known,
        )
        if math.isinf(part):
            return math.inf
        total += part
    return 2.0 * total


def direct_moment_oracle(
    p: float,
    b: Callable,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    breakpoints: Sequence[float] = (),
    known_finite: bool | None = None,
) -> float:
    """E b(|T_p|) = 2 integral_0^inf f_p(x) b(x) dx, quadrature on the density
    side of the Fubini identity; the independent cross-check of
    ``generalized_moment``."""
    p = check_dof(p)
    if not breakpoints:
        breakpoints = tuple(getattr(b, "breakpoints", ()))

    def integrand(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(density(p, x), dtype=float) * np.asarray(b(x), dtype=float)

    value = integrate_to_inf(
        integrand,
        0.0,
        cfg,
        breakpoints=tuple(breakpoints) + _DENSITY_SEEDS,
        known_finite=known_finite,
    )
    return math.inf if math.isinf(value) else 2.0 * value


def power_moment(p: float, s: float) -> float:
    """E |T_p|^s in closed form (certified against the quadrature oracle):

        p^(s/2) Gamma((s+1)/2) Gamma((p-s)/2) / (sqrt(pi) Gamma(p/2)),

    infinite for finite p <= s; for p = inf the normal absolute moment
    2^(s/2) Gamma((s+1)/2) / sqrt(pi).
    """
    p = check_dof(p)
    s = float(s)
    if not (s > 0 and math.isfinite(s)):
        raise DomainError(f"power_moment requires s > 0, got {s!r}")
    if math.isinf(p):
        return math.exp(0.5 * s * math.log(2.0) + ln_gamma(0.5 * (s + 1.0)) - _HALF_LOG_PI)
    if p <= s:
        return math.inf
    return math.exp(
        0.5 * s * math.log(p)
        + ln_gamma(0.5 * (s + 1.0))
        + ln_gamma(0.5 * (p - s))
        - _HALF_LOG_PI
        - ln_gamma(0.5 * p)
    )


def _p_points(p_grid: GridSpec, include_infinite: bool) -> list[float]:
    pts = [float(v) for v in p_grid.points()]
    if include_infinite:
        pts.append(math.inf)
    return pts


def certify_moment_monotone(
    measure: StieltjesMeasure,
    p_grid: GridSpec,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    include_infinite: bool = False,
    margin_floor: float = 0.0,
) -> MonotonicityReport:
    """Certify strict decrease of E b(|T_p|) along the p grid."""
    values = []
    for p in _p_points(p_grid, include_infinite):
        val = generalized_moment(p, measure, cfg)
        if math.isinf(val):
            raise DomainError(
                f"moment of {measure.description} diverges at grid point p={p:g}"
            )
        values.append((p, val))
    return check_monotone(values, DECREASING, margin_floor)


def _validate_rho_consistency(
    mu_a: StieltjesMeasure,
    mu_b: StieltjesMeasure,
    rho: Callable,
    tol: float = 1e-9,
) -> None:
    locs_a = {loc: mass for loc, mass in mu_a.atoms}
    locs_b = {loc: mass for loc, mass in mu_b.atoms}
    if set(locs_a) != set(locs_b):
        raise MeasureConsistencyError(
            "atom locations differ between mu_a and mu_b; rho cannot relate them"
        )
    for loc, mass_a in locs_a.items():
        expected = float(np.asarray(rho(loc), dtype=float)) * mass_a
        if abs(locs_b[loc] - expected) > tol * max(1.0, abs(locs_b[loc])):
            raise MeasureConsistencyError(
                f"atom at {loc:g}: mass {locs_b[loc]:g} != rho * {mass_a:g}"
            )
    if (mu_a.density is None) != (mu_b.density is None):
        raise MeasureConsistencyError(
            "exactly one of the measures has a density part; d mu_b = rho d mu_a fails"
        )
    if mu_a.density is not None:
        xs = np.geomspace(1e-3, 1e3, 25)
        da = np.asarray(mu_a.density(xs), dtype=float)
        db = np.asarray(mu_b.density(xs), dtype=float)
        rr = np.asarray(rho(xs), dtype=float)
        bad = np.abs(db - rr * da) > tol * (1.0 + np.abs(db))
        if np.any(bad):
            x_bad = float(xs[np.argmax(bad)])
            raise MeasureConsistencyError(
                f"density mismatch d mu_b != rho d mu_a near x={x_bad:.6g}"
            )


def certify_ratio_monotone(
    mu_a: StieltjesMeasure,
    mu_b: StieltjesMeasure,
    rho: Callable,
    p_grid: GridSpec,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    include_infinite: bool = False,
    margin_floor: float = 0.0,
) -> MonotonicityReport:
    """Certify strict decrease of E b(|T_p|) / E a(|T_p|) along the p grid.

    The caller supplies the Stieltjes density rho = db/da explicitly
    (recovering it numerically is ill-posed); the relation d mu_b = rho d
    mu_a is validated exactly on atoms and at sample points on densities.
    """
    _validate_rho_consistency(mu_a, mu_b, rho)
    values = []
    for p in _p_points(p_grid, include_infinite):
        denom = generalized_moment(p, mu_a, cfg)
        numer = generalized_moment(p, mu_b, cfg)
        if math.isinf(denom) or math.isinf(numer):
            raise DomainError(f"moment ratio undefined at grid point p={p:g} (divergent)")
        if denom <= 0.0:
            raise DomainError(f"denominator moment vanished at p={p:g}")
        values.append((p, numer / denom))
    return check_monotone(values, DECREASING, margin_floor)


def correlation_identity(
    mu_a: StieltjesMeasure,
    rho: Callable,
    p: float,
    q: float,
) -> tuple[float, float]:
    """Both sides of the correlation identity behind the ratio monotonicity,
    for purely atomic mu_a (d mu_b = rho d mu_a):

    lhs = (B_q/A_q - B_p/A_p) A_p A_q, with A the a-moment and B the b-moment;
    rhs = 2 sum_u sum_v [rho(v)-rho(u)] [R(v)-R(u)] G_p(u) G_p(v) m_u m_v,
    where R = G_q/G_p.  Returns (lhs, rhs).
    """
    p = check_dof(p)
    q = check_dof(q)
    if mu_a.density is not None:
        raise DomainError("correlation identity check supports atom-only measures")
    locs = [loc for loc, _ in mu_a.atoms]
    masses = [mass for _, mass in mu_a.atoms]
    rho_vals = [float(np.asarray(rho(loc), dtype=float)) for loc in locs]
    gp = [student_tail(p, loc).tail for loc in locs]
    gq = [student_tail(q, loc).tail for loc in locs]

    A_p = 2.0 * sum(m * g for m, g in zip(masses, gp))
    A_q = 2.0 * sum(m * g for m, g in zip(masses, gq))
    B_p = 2.0 * sum(m * r * g for m, r, g in zip(masses, rho_vals, gp))
    B_q = 2.0 * sum(m * r * g for m, r, g in zip(masses, rho_vals, gq))
    lhs = (B_q / A_q - B_p / A_p) * A_p * A_q

    ratio = [q_val / p_val for q_val, p_val in zip(gq, gp)]
    rhs = 0.0
    for i in range(len(locs)):
        for j in range(len(locs)):
            rhs += (
                (rho_vals[j] - rho_vals[i])
                * (ratio[j] - ratio[i])
                * gp[i]
                * gp[j]
                * masses[i]
                * masses[j]
            )
    return lhs, 2.0 * rhs
