"""Executes certification targets and assembles schema-conformant entries.

Each run produces entries shaped as

    {target, params, grid, status, min_margin, violations, evaluations,
     wall_time_ms, library_version}

and keeps the evaluated samples alongside (for figures and sample dumps);
the samples are not part of the JSON schema.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .chi import certify_prop2, chi_density
from .defaults import DEFAULTS, PROFILES, Profile, densify_pset, scale_grid
from .funcspec import parse_function
from .moments import (
    atoms_measure,
    correlation_identity,
    certify_moment_monotone,
    certify_ratio_monotone,
    direct_moment_oracle,
    generalized_moment,
    indicator_measure,
    power_log_measure,
    power_measure,
    power_moment,
)
from .monotonicity import (
    GridSpec,
    MonotonicityReport,
    certify_mtr,
    certify_partial_mlr,
    certify_sm,
    seeded_stp2_tuples,
    stp2_minor,
    tail_ratio_vs_r_integral,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .student import (
    dlogdensity_dp,
    lemma1_lhs,
    lemma1_rhs,
    rho_prime,
    tail,
    tail_logderiv_r,
    tail_quadrature_oracle,
)
from .truncated import PlusPartSpec, certify_prop1, conditional_below, plus_ratio

__all__ = ["TargetResult", "TARGETS", "run_target", "run_all"]

INF = math.inf


@dataclass(frozen=True)
class TargetResult:
    entry: dict
    samples: tuple[tuple[float, float], ...] = ()


def _fmt_p(p: float) -> float | str:
    return "inf" if math.isinf(p) else p


def _grid_dict(grid: GridSpec | None):
    if grid is None:
        return None
    return {"lo": grid.lo, "hi": grid.hi, "count": grid.count, "spacing": grid.spacing}


def _entry(target, params, grid, status, min_margin, violations, evaluations, t0):
    return {
        "target": target,
        "params": params,
        "grid": _grid_dict(grid) if isinstance(grid, (GridSpec, type(None))) else grid,
        "status": status,
        "min_margin": min_margin,
        "violations": [list(v) for v in violations],
        "evaluations": evaluations,
        "wall_time_ms": (time.perf_counter() - t0) * 1000.0,
        "library_version": __version__,
    }


def _from_report(target, params, grid, rep: MonotonicityReport, t0) -> TargetResult:
    return TargetResult(
        _entry(target, params, grid, rep.status, rep.min_margin, rep.violations,
               rep.evaluations, t0),
        rep.samples,
    )


def _pair_list(p, q, profile: Profile):
    if p is not None and q is not None:
        return [(float(p), float(q))]
    pset = densify_pset(DEFAULTS["p_set"], profile)
    return [(a, b) for i, a in enumerate(pset) for b in pset[i + 1:]]


def _pgrid(grid: GridSpec, profile: Profile) -> GridSpec:
    if profile.pset_doubled:
        return GridSpec(grid.lo, grid.hi, grid.count * 2, grid.spacing)
    return grid


# --------------------------------------------------------------------------
# Individual targets
# --------------------------------------------------------------------------

def run_mtr(cfg, profile, p=None, q=None, x_grid=None, margin_floor=None):
    d = DEFAULTS["mtr"]
    grid = x_grid or scale_grid(d["x_grid"], profile)
    floor = d["min_margin_required"] if margin_floor is None else margin_floor
    out = []
    for pp, qq in _pair_list(p, q, profile):
        t0 = time.perf_counter()
        rep = certify_mtr(pp, qq, grid, margin_floor=floor)
        out.append(_from_report("mtr", {"p": _fmt_p(pp), "q": _fmt_p(qq)}, grid, rep, t0))
    return out


def run_sm(cfg, profile, p=None, q=None, x_grid=None, margin_floor=0.0):
    d = DEFAULTS["sm"]
    grid = x_grid or scale_grid(d["x_grid"], profile)
    out = []
    for pp, qq in _pair_list(p, q, profile):
        t0 = time.perf_counter()
        rep = certify_sm(pp, qq, grid, margin_floor=margin_floor)
        violations = list(rep.violations)
        # The pointwise strict ordering holds only for x > 0; at the origin
        # both tails must equal 1/2 to working precision.
        origin_gap = max(abs(tail(pp, 0.0).tail - 0.5), abs(tail(qq, 0.0).tail - 0.5))
        if origin_gap > d["equality_at_zero_tol"]:
            violations.append((-1, tail(pp, 0.0).tail, tail(qq, 0.0).tail))
        status = "certified" if not violations else "violated"
        entry = _entry("sm", {"p": _fmt_p(pp), "q": _fmt_p(qq)}, grid, status,
                       rep.min_margin, violations, rep.evaluations + 2, t0)
        out.append(TargetResult(entry, rep.samples))
    return out


def run_stp2(cfg, profile, count=None, seed=None):
    d = DEFAULTS["stp2"]
    n = count or d["count"] * profile.grid_factor
    t0 = time.perf_counter()
    tuples = seeded_stp2_tuples(n, seed if seed is not None else d["seed"])
    minors = [stp2_minor(*tup) for tup in tuples]
    violations = [(i, m, 0.0) for i, m in enumerate(minors) if m <= 0.0]
    hv = d["hand_value"]
    hand = stp2_minor(*hv["args"])
    if abs(hand - hv["expected"]) > hv["tol"]:
        violations.append((-1, hand, hv["expected"]))
    entry = _entry(
        "stp2",
        {"count": n, "seed": seed if seed is not None else d["seed"]},
        None,
        "certified" if not violations else "violated",
        min(minors),
        violations,
        n + 1,
        t0,
    )
    return [TargetResult(entry, tuple((float(i), m) for i, m in enumerate(minors)))]


def run_mlr_shape(cfg, profile, p=None, q=None, grid_lo=None, grid_hi=None):
    d = DEFAULTS["mlr-shape"]
    g_lo = grid_lo or scale_grid(d["grid_lo"], profile)
    g_hi = grid_hi or scale_grid(d["grid_hi"], profile)
    pairs = [(float(p), float(q))] if p is not None and q is not None else d["pairs"]
    out = []
    for pp, qq in pairs:
        t0 = time.perf_counter()
        rep_lo, rep_hi = certify_partial_mlr(pp, qq, g_lo, g_hi)
        out.append(_from_report(
            "mlr-shape", {"p": _fmt_p(pp), "q": _fmt_p(qq), "piece": "increasing"},
            g_lo, rep_lo, t0))
        t1 = time.perf_counter()
        out.append(_from_report(
            "mlr-shape", {"p": _fmt_p(pp), "q": _fmt_p(qq), "piece": "decreasing"},
            g_hi, rep_hi, t1))
    return out


def run_lemma1(cfg, profile, p_grid=None):
    d = DEFAULTS["lemma1"]
    grid = p_grid or scale_grid(d["p_grid"], profile)
    tol = d["identity_tol"]
    t0 = time.perf_counter()
    violations = []
    margins = []
    samples = []
    pts = [float(v) for v in grid.points()]
    for i, pp in enumerate(pts):
        lhs = lemma1_lhs(pp)
        rhs = lemma1_rhs(pp, cfg)
        gap = abs(lhs - rhs)
        margins.append(tol - gap)
        samples.append((pp, gap))
        if gap > tol or lhs <= 0.0 or rhs <= 0.0:
            violations.append((i, lhs, rhs))
    anchor = d["anchor_value"]
    lhs1 = lemma1_lhs(d["anchor_p"])
    rhs1 = lemma1_rhs(d["anchor_p"], cfg)
    if abs(lhs1 - anchor) > d["anchor_tol"] or abs(rhs1 - anchor) > d["anchor_tol"]:
        violations.append((-1, lhs1, rhs1))
    entry = _entry("lemma1", {"anchor_p": d["anchor_p"]}, grid,
                   "certified" if not violations else "violated",
                   min(margins), violations, len(pts) + 1, t0)
    return [TargetResult(entry, tuple(samples))]


def run_rho_prime(cfg, profile, p=None, x_grid=None):
    d = DEFAULTS["rho-prime"]
    grid = x_grid or scale_grid(d["x_grid"], profile)
    pset = (float(p),) if p is not None else densify_pset(d["p_set"], profile)
    tol = d["fd_tol"]
    out = []
    for pp in pset:
        t0 = time.perf_counter()
        xs = grid.points()
        h = 1e-5
        analytic = np.asarray(rho_prime(pp, xs))
        fd = (np.asarray(dlogdensity_dp(pp, xs + h))
              - np.asarray(dlogdensity_dp(pp, xs - h))) / (2.0 * h)
        gaps = np.abs(analytic - fd)
        violations = [(int(i), float(analytic[i]), float(fd[i]))
                      for i in np.nonzero(gaps > tol)[0]]
        # Exact sign structure: positive on (0,1), zero at 1, negative beyond.
        expected_sign = np.sign(xs * (1.0 - xs * xs))
        bad_sign = np.nonzero(np.sign(analytic) != expected_sign)[0]
        violations += [(int(i), float(analytic[i]), float(expected_sign[i]))
                       for i in bad_sign]
        entry = _entry("rho-prime", {"p": pp}, grid,
                       "certified" if not violations else "violated",
                       float(tol - np.max(gaps)), violations, len(xs), t0)
        out.append(TargetResult(entry, tuple(zip(map(float, xs), map(float, analytic)))))
    return out


def run_r_decreasing(cfg, profile, p=None, x_grid=None):
    d = DEFAULTS["r-decreasing"]
    grid = x_grid or scale_grid(d["x_grid"], profile)
    pset = (float(p),) if p is not None else densify_pset(d["p_set"], profile)
    out = []
    for pp in pset:
        t0 = time.perf_counter()
        xs = grid.points()
        vals = [tail_logderiv_r(pp, float(x), cfg) for x in xs]
        from .monotonicity import DECREASING, check_monotone

        rep = check_monotone(list(zip(xs, vals)), DECREASING)
        violations = list(rep.violations)
        # r extends continuously to 0 at the origin and leaves it downhill.
        origin = tail_logderiv_r(pp, d["origin_x"], cfg)
        if abs(origin) > d["origin_tol"]:
            violations.append((-1, origin, 0.0))
        if vals[0] >= 0.0:
            violations.append((-2, vals[0], 0.0))
        entry = _entry("r-decreasing", {"p": pp}, grid,
                       "certified" if not violations else "violated",
                       rep.min_margin, violations, rep.evaluations + 1, t0)
        out.append(TargetResult(entry, rep.samples))
    return out


def run_gqgp_integral(cfg, profile, p=None, q=None, x=None):
    d = DEFAULTS["gqgp-integral"]
    pp = d["p"] if p is None else float(p)
    qq = d["q"] if q is None else float(q)
    xx = d["x"] if x is None else float(x)
    t0 = time.perf_counter()
    lhs, rhs = tail_ratio_vs_r_integral(pp, qq, xx, cfg, nodes=d["nodes"])
    gap = abs(lhs - rhs)
    violations = [] if gap <= d["tol"] else [(0, lhs, rhs)]
    entry = _entry("gqgp-integral", {"p": pp, "q": qq, "x": xx}, None,
                   "certified" if not violations else "violated",
                   d["tol"] - gap, violations, d["nodes"] + 1, t0)
    return [TargetResult(entry, ((0.0, lhs), (1.0, rhs)))]


def run_cor1(cfg, profile):
    d = DEFAULTS["cor1"]
    out = []

    # Closed form E T_p^2 = p/(p-2).
    t0 = time.perf_counter()
    violations = []
    margins = []
    for i, pp in enumerate(d["square_moment_p"]):
        got = power_moment(pp, 2.0)
        want = pp / (pp - 2.0)
        rel = abs(got - want) / want
        margins.append(d["square_moment_tol"] - rel)
        if rel > d["square_moment_tol"]:
            violations.append((i, got, want))
    out.append(TargetResult(_entry(
        "cor1", {"check": "square-moment"}, None,
        "certified" if not violations else "violated",
        min(margins), violations, len(d["square_moment_p"]), t0)))

    # Strict decrease of E|T_p|^s over (s, inf].
    for s in d["decrease_s"]:
        t0 = time.perf_counter()
        grid = _pgrid(GridSpec(s + d["decrease_grid_lo_offset"],
                               d["decrease_grid_hi"],
                               d["decrease_grid_count"], "log"), profile)
        pts = [float(v) for v in grid.points()] + [INF]
        vals = [(pp, power_moment(pp, s)) for pp in pts]
        from .monotonicity import DECREASING, check_monotone

        rep = check_monotone(vals, DECREASING)
        out.append(_from_report("cor1", {"check": "power-decrease", "s": s}, grid, rep, t0))

    # Divergence flags at and below the threshold.
    t0 = time.perf_counter()
    violations = []
    for i, s in enumerate(d["decrease_s"]):
        if not math.isinf(power_moment(s, s)):
            violations.append((i, power_moment(s, s), INF))
        if not math.isinf(power_moment(0.5 * s, s)):
            violations.append((i, power_moment(0.5 * s, s), INF))
        if not math.isinf(generalized_moment(s, power_measure(s), cfg)):
            violations.append((i, 0.0, INF))
    out.append(TargetResult(_entry(
        "cor1", {"check": "infinite-flags"}, None,
        "certified" if not violations else "violated",
        1.0 if not violations else -1.0, violations,
        3 * len(d["decrease_s"]), t0)))

    # power_log sits exactly on its boundary and stays finite there.
    t0 = time.perf_counter()
    violations = []
    values = []
    for i, s in enumerate(d["powerlog_boundary_s"]):
        val = generalized_moment(s, power_log_measure(s), cfg)
        values.append((float(s), val))
        if not math.isfinite(val) or val <= 0.0:
            violations.append((i, val, 0.0))
    out.append(TargetResult(_entry(
        "cor1", {"check": "powerlog-boundary"}, None,
        "certified" if not violations else "violated",
        1.0 if not violations else -1.0, violations,
        len(d["powerlog_boundary_s"]), t0), tuple(values)))

    # The generic measure certifier on a named family and on a pure atom.
    t0 = time.perf_counter()
    grid = _pgrid(d["monotone_measure_grid"], profile)
    rep = certify_moment_monotone(power_measure(2.0), grid, cfg, include_infinite=True)
    out.append(_from_report("cor1", {"check": "measure-monotone", "measure": "pow:2"},
                            grid, rep, t0))
    t0 = time.perf_counter()
    grid2 = _pgrid(GridSpec(0.5, 50.0, 10, "log"), profile)
    rep2 = certify_moment_monotone(atoms_measure([(1.0, 1.0)], "atom@1"), grid2, cfg,
                                   include_infinite=True)
    out.append(_from_report("cor1", {"check": "measure-monotone", "measure": "atom@1"},
                            grid2, rep2, t0))
    return out


def run_cor2(cfg, profile):
    d = DEFAULTS["cor2"]
    out = []
    from .monotonicity import DECREASING, check_monotone

    for s, t in d["pairs"]:
        t0 = time.perf_counter()
        grid = _pgrid(GridSpec(t + d["grid_lo_offset"], d["grid_hi"],
                               d["grid_count"], "log"), profile)
        pts = [float(v) for v in grid.points()] + [INF]
        vals = [(pp, power_moment(pp, t) / power_moment(pp, s)) for pp in pts]
        rep = check_monotone(vals, DECREASING)
        out.append(_from_report("cor2", {"check": "power-ratio", "s": s, "t": t},
                                grid, rep, t0))

    # Quadrature-route certifier with explicit Stieltjes density rho = db/da.
    t0 = time.perf_counter()
    s, t = 1.0, 2.0
    grid = _pgrid(GridSpec(t + 0.5, 50.0, 8, "log"), profile)
    rep = certify_ratio_monotone(
        power_measure(s), power_measure(t),
        lambda x, s=s, t=t: (t / s) * np.asarray(x, dtype=float) ** (t - s),
        grid, cfg, include_infinite=True)
    out.append(_from_report("cor2", {"check": "measure-ratio", "s": s, "t": t},
                            grid, rep, t0))

    # Correlation identity on a 3-atom measure.
    t0 = time.perf_counter()
    mu = atoms_measure(d["identity_atoms"], "atoms3")
    pp, qq = d["identity_pq"]
    lhs, rhs = correlation_identity(mu, lambda x: np.asarray(x, dtype=float) ** 2, pp, qq)
    gap = abs(lhs - rhs)
    violations = [] if gap <= d["identity_tol"] else [(0, lhs, rhs)]
    out.append(TargetResult(_entry(
        "cor2", {"check": "correlation-identity", "p": pp, "q": qq}, None,
        "certified" if not violations else "violated",
        d["identity_tol"] - gap, violations, 1, t0),
        ((0.0, lhs), (1.0, rhs))))
    return out


def _prop1_inputs(part: str):
    fns = DEFAULTS["prop1"]["functions"][part]
    if part in ("i", "ii"):
        return {"b": parse_function(fns["b"])}
    side = "below" if part == "iii" else "above"
    return {"spec": PlusPartSpec(side, parse_function(fns["a"]), parse_function(fns["r"]))}


def run_prop1(cfg, profile, part, p_grid=None, fn_b=None, fn_a=None, fn_r=None):
    d = DEFAULTS["prop1"]
    grid = p_grid or _pgrid(d["p_grid"], profile)
    if fn_b or (fn_a and fn_r):
        if part in ("i", "ii"):
            inputs = {"b": parse_function(fn_b)}
        else:
            side = "below" if part == "iii" else "above"
            inputs = {"spec": PlusPartSpec(side, parse_function(fn_a), parse_function(fn_r))}
    else:
        inputs = _prop1_inputs(part)
    t0 = time.perf_counter()
    rep = certify_prop1(part, grid, cfg=cfg, include_infinite=True, **inputs)
    fns = {k: (v if isinstance(v, str) else getattr(v, "token", "custom"))
           for k, v in (DEFAULTS["prop1"]["functions"][part] if not (fn_b or fn_a) else
                        {"b": fn_b} if fn_b else {"a": fn_a, "r": fn_r}).items()}
    results = [_from_report(f"prop1-{part}", fns, grid, rep, t0)]

    if part == "i" and not fn_b:
        # Part (i) is the special case of part (iii) with a = 1{t > 0} and
        # r = b; both routes must agree numerically.
        t0 = time.perf_counter()
        b = parse_function(d["functions"]["i"]["b"])
        spec = PlusPartSpec("below", parse_function("ind:0"), b)
        violations = []
        checked = []
        for pp in (0.5, 3.0, INF):
            lhs = conditional_below(pp, b, cfg, validate=False)
            rhs = plus_ratio(pp, spec, cfg)
            checked.append((0.0 if math.isinf(pp) else pp, abs(lhs - rhs)))
            if abs(lhs - rhs) > d["reduction_tol"]:
                violations.append((len(checked) - 1, lhs, rhs))
        results.append(TargetResult(_entry(
            "prop1-i", {"check": "reduction-to-iii"}, None,
            "certified" if not violations else "violated",
            d["reduction_tol"] - max(g for _, g in checked),
            violations, len(checked), t0)))
    return results


def run_prop2(cfg, profile, part, p_grid=None, fn_b=None, fn_a=None, fn_r=None):
    d = DEFAULTS["prop2"]
    grid = p_grid or _pgrid(d["p_grid"], profile)
    out = []
    if part == "i":
        tokens = (fn_b,) if fn_b else d["part_i_b"]
        for token in tokens:
            t0 = time.perf_counter()
            rep = certify_prop2("i", grid, b=parse_function(token), cfg=cfg)
            out.append(_from_report("prop2-i", {"b": token}, grid, rep, t0))
    elif part == "ii":
        pairs = ((fn_a, fn_r),) if fn_a and fn_r else d["part_ii"]
        for tok_a, tok_r in pairs:
            t0 = time.perf_counter()
            rep = certify_prop2("ii", grid, a=parse_function(tok_a),
                                r=parse_function(tok_r), cfg=cfg)
            out.append(_from_report("prop2-ii", {"a": tok_a, "r": tok_r}, grid, rep, t0))
    else:
        raise ValueError(f"unknown prop2 part {part!r}")
    return out


def run_oracle_tail(cfg, profile, p=None, x_grid=None):
    d = DEFAULTS["oracle-tail"]
    grid = x_grid or scale_grid(d["x_grid"], profile)
    pset = (float(p),) if p is not None else densify_pset(d["p_set"], profile)
    out = []
    for pp in pset:
        t0 = time.perf_counter()
        xs = grid.points()
        violations = []
        margins = []
        samples = []
        for i, x in enumerate(xs):
            closed = tail(pp, float(x)).tail
            if closed < d["tail_floor"]:
                continue
            oracle = tail_quadrature_oracle(pp, float(x), cfg)
            rel = abs(closed - oracle) / closed
            margins.append(d["rel_tol"] - rel)
            samples.append((float(x), rel))
            if rel > d["rel_tol"]:
                violations.append((i, closed, oracle))
        entry = _entry("oracle-tail", {"p": pp}, grid,
                       "certified" if not violations else "violated",
                       min(margins), violations, len(samples), t0)
        out.append(TargetResult(entry, tuple(samples)))
    return out


def run_oracle_moment(cfg, profile):
    d = DEFAULTS["oracle-moment"]
    out = []
    cases = []
    for s in d["power_s"]:
        for pp in (s + 1.0, 2.0 * s + 2.0, INF):
            cases.append((power_measure(s), pp))
    for c in d["indicator_c"]:
        for pp in d["indicator_p"]:
            cases.append((indicator_measure(c), pp))
    for measure, pp in cases:
        t0 = time.perf_counter()
        via_tail = generalized_moment(pp, measure, cfg)
        via_density = direct_moment_oracle(
            pp, measure.cumulative, cfg,
            breakpoints=tuple(loc for loc, _ in measure.atoms),
            known_finite=True)
        rel = abs(via_tail - via_density) / abs(via_density)
        violations = [] if rel <= d["rel_tol"] else [(0, via_tail, via_density)]
        entry = _entry("oracle-moment",
                       {"measure": measure.description, "p": _fmt_p(pp)}, None,
                       "certified" if not violations else "violated",
                       d["rel_tol"] - rel, violations, 2, t0)
        out.append(TargetResult(entry, ((0.0, via_tail), (1.0, via_density))))
    return out


# --------------------------------------------------------------------------
# Dispatch
# --------------------------------------------------------------------------

TARGETS = (
    "mtr", "sm", "stp2", "mlr-shape", "lemma1", "rho-prime", "r-decreasing",
    "gqgp-integral", "cor1", "cor2",
    "prop1-i", "prop1-ii", "prop1-iii", "prop1-iv",
    "prop2-i", "prop2-ii",
    "oracle-tail", "oracle-moment",
)


def run_target(name: str, cfg: QuadratureConfig = DEFAULT_CONFIG,
               profile: Profile | str = "quick", **overrides) -> list[TargetResult]:
    if isinstance(profile, str):
        profile = PROFILES[profile]
    if name == "mtr":
        return run_mtr(cfg, profile, **overrides)
    if name == "sm":
        return run_sm(cfg, profile, **overrides)
    if name == "stp2":
        return run_stp2(cfg, profile, **overrides)
    if name == "mlr-shape":
        return run_mlr_shape(cfg, profile, **overrides)
    if name == "lemma1":
        return run_lemma1(cfg, profile, **overrides)
    if name == "rho-prime":
        return run_rho_prime(cfg, profile, **overrides)
    if name == "r-decreasing":
        return run_r_decreasing(cfg, profile, **overrides)
    if name == "gqgp-integral":
        return run_gqgp_integral(cfg, profile, **overrides)
    if name == "cor1":
        return run_cor1(cfg, profile, **overrides)
    if name == "cor2":
        return run_cor2(cfg, profile, **overrides)
    if name.startswith("prop1-"):
        return run_prop1(cfg, profile, name.split("-", 1)[1], **overrides)
    if name.startswith("prop2-"):
        return run_prop2(cfg, profile, name.split("-", 1)[1], **overrides)
    if name == "oracle-tail":
        return run_oracle_tail(cfg, profile, **overrides)
    if name == "oracle-moment":
        return run_oracle_moment(cfg, profile, **overrides)
    raise ValueError(f"unknown target {name!r}")


def run_all(cfg: QuadratureConfig = DEFAULT_CONFIG,
            profile: Profile | str = "quick") -> list[TargetResult]:
    results = []
    for name in TARGETS:
        results.extend(run_target(name, cfg, profile))
    return results
