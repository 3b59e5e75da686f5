"""Grid-based certification of monotone tail properties.

A certification here is honest about what numerics can claim: it evaluates a
quantity on a finite grid and reports the minimal margin in the claimed
direction.  "certified" means every consecutive pair (or grid point, for
pointwise dominance) cleared the margin floor; the realized ``min_margin`` is
always reported so callers can judge how far from a tie the run stayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, OrderingError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .student import check_dof, log_density, tail, tail_logderiv_r

__all__ = [
    "GridSpec",
    "MonotonicityReport",
    "check_monotone",
    "pointwise_dominance",
    "tail_ratio",
    "certify_mtr",
    "certify_sm",
    "stp2_minor",
    "seeded_stp2_tuples",
    "certify_partial_mlr",
    "tail_ratio_vs_r_integral",
]

DECREASING = "strictly_decreasing"
INCREASING = "strictly_increasing"


@dataclass(frozen=True)
class GridSpec:
    """A one-dimensional evaluation grid."""

    lo: float
    hi: float
    count: int
    spacing: str = "linear"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError("grid bounds must be finite")
        if not self.lo < self.hi:
            raise DomainError(f"grid requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.count < 2:
            raise DomainError("grid requires count >= 2")
        if self.spacing not in ("linear", "log"):
            raise DomainError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and self.lo <= 0.0:
            raise DomainError("log spacing requires lo > 0")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class MonotonicityReport:
    """Outcome of one grid certification."""

    direction: str
    status: str
    min_margin: float
    violations: tuple[tuple[int, float, float], ...]
    evaluations: int
    samples: tuple[tuple[float, float], ...] = field(default=(), repr=False)

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def check_monotone(
    values: Sequence[tuple[float, float]],
    direction: str,
    margin_floor: float = 0.0,
) -> MonotonicityReport:
    """Certify strict monotonicity of (point, value) pairs.

    A consecutive pair violates when its signed difference in the claimed
    direction fails to exceed ``margin_floor``; the default floor 0 therefore
    counts exact ties as violations.
    """
    if direction not in (DECREASING, INCREASING):
        raise DomainError(f"unknown direction {direction!r}")
    pts = [float(p) for p, _ in values]
    vals = [float(v) for _, v in values]
    if len(pts) < 2:
        raise DomainError("need at least 2 points to certify monotonicity")
    if any(b <= a for a, b in zip(pts[:-1], pts[1:])):
        raise DomainError("abscissae must be strictly increasing")

    sign = 1.0 if direction == DECREASING else -1.0
    violations = []
    min_margin = math.inf
    for i in range(len(vals) - 1):
        margin = sign * (vals[i] - vals[i + 1])
        min_margin = min(min_margin, margin)
        if margin <= margin_floor:
            violations.append((i, vals[i], vals[i + 1]))
    return MonotonicityReport(
        direction=direction,
        status="certified" if not violations else "violated",
        min_margin=min_margin,
        violations=tuple(violations),
        evaluations=len(vals),
        samples=tuple(zip(pts, vals)),
    )


def pointwise_dominance(
    values: Sequence[tuple[float, float, float]],
    margin_floor: float = 0.0,
) -> MonotonicityReport:
    """Certify upper > lower pointwise; margin is (upper - lower) per point."""
    violations = []
    min_margin = math.inf
    samples = []
    for i, (pt, upper, lower) in enumerate(values):
        margin = upper - lower
        min_margin = min(min_margin, margin)
        samples.append((float(pt), margin))
        if margin <= margin_floor:
            violations.append((i, float(upper), float(lower)))
    if not samples:
        raise DomainError("need at least 1 point for dominance check")
    return MonotonicityReport(
        direction=DECREASING,
        status="certified" if not violations else "violated",
        min_margin=min_margin,
        violations=tuple(violations),
        evaluations=len(samples),
        samples=tuple(samples),
    )


def _check_pair(p: float, q: float) -> tuple[float, float]:
    p = check_dof(p)
    q = check_dof(q)
    if not p < q:
        raise OrderingError(f"require p < q, got p={p}, q={q}")
    return p, q


def tail_ratio(p: float, q: float, x: float) -> float:
    """G_q(x)/G_p(x) for 0 < p < q <= inf, via the log tails."""
    p, q = _check_pair(p, q)
    return math.exp(tail(q, x).log_tail - tail(p, x).log_tail)


def certify_mtr(
    p: float, q: float, grid: GridSpec, margin_floor: float = 0.0
) -> MonotonicityReport:
    """Certify that log(G_q/G_p) strictly decreases along the grid."""
    p, q = _check_pair(p, q)
    xs = grid.points()
    vals = [tail(q, float(x)).log_tail - tail(p, float(x)).log_tail for x in xs]
    return check_monotone(list(zip(xs, vals)), DECREASING, margin_floor)


def certify_sm(
    p: float, q: float, grid: GridSpec, margin_floor: float = 0.0
) -> MonotonicityReport:
    """Certify G_q(x) < G_p(x) pointwise on the grid (margin = G_p - G_q)."""
    p, q = _check_pair(p, q)
    triples = [
        (float(x), tail(p, float(x)).tail, tail(q, float(x)).tail)
        for x in grid.points()
    ]
    return pointwise_dominance(triples, margin_floor)


def stp2_minor(p1: float, p2: float, y1: float, y2: float) -> float:
    """2x2 minor of the kernel (p, y) -> G_p(-y) on (0, inf] x (-inf, 0]:

        G_{p1}(-y1) G_{p2}(-y2) - G_{p1}(-y2) G_{p2}(-y1),

    strictly positive for p1 < p2 and y1 < y2 <= 0 (total positivity of
    order 2 of the tail kernel).
    """
    p1, p2 = _check_pair(p1, p2)
    y1 = float(y1)
    y2 = float(y2)
    if not y1 < y2:
        raise OrderingError(f"require y1 < y2, got y1={y1}, y2={y2}")
    if y2 > 0.0:
        raise OrderingError(f"require y2 <= 0, got {y2}")
    return (
        tail(p1, -y1).tail * tail(p2, -y2).tail
        - tail(p1, -y2).tail * tail(p2, -y1).tail
    )


def seeded_stp2_tuples(count: int, seed: int) -> list[tuple[float, float, float, float]]:
    """Reproducible admissible (p1, p2, y1, y2) tuples for STP2 sweeps.

    p values are log-uniform on [0.1, 100] (with roughly one in ten p2
    replaced by inf), y values uniform on [-8, 0].
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p1, p2 = sorted(np.exp(rng.uniform(math.log(0.1), math.log(100.0), size=2)))
        if p2 - p1 < 1e-9:
            continue
        if rng.random() < 0.1:
            p2 = math.inf
        y1, y2 = sorted(rng.uniform(-8.0, 0.0, size=2))
        if y2 - y1 < 1e-9:
            continue
        out.append((float(p1), float(p2), float(y1), float(y2)))
    return out


def certify_partial_mlr(
    p: float,
    q: float,
    grid_lo: GridSpec,
    grid_hi: GridSpec,
    margin_floor: float = 0.0,
) -> tuple[MonotonicityReport, MonotonicityReport]:
    """Certify the two-piece shape of the density ratio f_q/f_p:

    strictly increasing on [0, 1] and strictly decreasing on [1, cut],
    evaluated through the log-density difference.
    """
    p, q = _check_pair(p, q)
    if grid_lo.lo < 0.0 or grid_lo.hi > 1.0:
        raise DomainError("grid_lo must lie within [0, 1]")
    if grid_hi.lo < 1.0:
        raise DomainError("grid_hi must start at or above 1")

    def ratio_log(xs: np.ndarray) -> np.ndarray:
        return np.asarray(log_density(q, xs)) - np.asarray(log_density(p, xs))

    xs_lo = grid_lo.points()
    xs_hi = grid_hi.points()
    rep_lo = check_monotone(list(zip(xs_lo, ratio_log(xs_lo))), INCREASING, margin_floor)
    rep_hi = check_monotone(list(zip(xs_hi, ratio_log(xs_hi))), DECREASING, margin_floor)
    return rep_lo, rep_hi


def tail_ratio_vs_r_integral(
    p: float,
    q: float,
    x: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    nodes: int = 15,
) -> tuple[float, float]:
    """Cross-check log G_q(x)/G_p(x) against the integral of r_s(x) over s.

    Returns (log_ratio, gauss_legendre_integral); the two agree because the
    log tail ratio is exactly the integral of its own s-derivative.  Both
    endpoints must be finite.
    """
    p = check_dof(p)
    q = check_dof(q)
    if math.isinf(p) or math.isinf(q):
        raise DomainError("integral cross-check requires finite p and q")
    if not p < q:
        raise OrderingError(f"require p < q, got p={p}, q={q}")
    log_ratio = tail(q, x).log_tail - tail(p, x).log_tail
    z, w = np.polynomial.legendre.leggauss(nodes)
    s = 0.5 * (q - p) * z + 0.5 * (q + p)
    integral = 0.5 * (q - p) * sum(
        wi * tail_logderiv_r(float(si), x, cfg) for si, wi in zip(s, w)
    )
    return log_ratio, integral
