"""Command-line front end.

Subcommands:

* ``eval``       -- point evaluation of densities and tails.
* ``moments``    -- one generalized moment (Stieltjes route or density oracle).
* ``certify``    -- run one certification target, with parameter overrides.
* ``report-all`` -- run the whole certification matrix for a profile.

Reports go to stdout (canonical JSON, or CSV with one row per target and
parameter tuple); diagnostics go to stderr.  Exit status: 0 all
certifications passed, 2 at least one violation, 1 input or numerical error.
Quadrature tolerances can be overridden through flags or the environment
variables STUDENTFAM_ABS_TOL, STUDENTFAM_REL_TOL, STUDENTFAM_TAIL_CUT_TOL,
and STUDENTFAM_MAX_SUBDIVISIONS (flags win).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from . import __version__
from .defaults import PROFILES
from .errors import StudentFamilyError
from .moments import direct_moment_oracle, generalized_moment, parse_measure
from .monotonicity import GridSpec
from .quadrature import QuadratureConfig
from .reporting import canonical_json, report_csv
from .runner import TARGETS, run_all, run_target
from .student import density, log_density, tail
from .chi import chi_density

_ENV_PREFIX = "STUDENTFAM_"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of exiting with code 2."""

    def error(self, message):
        raise _UsageError(message)


def _parse_dof(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return math.inf
    return float(text)


def _parse_grid(text: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise _UsageError(f"grid must look like lo:hi:count[:log], got {text!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    spacing = "linear"
    if len(parts) == 4:
        token = parts[3].lower()
        if token in ("log", "logarithmic"):
            spacing = "log"
        elif token in ("lin", "linear"):
            spacing = "linear"
        else:
            raise _UsageError(f"unknown grid spacing {parts[3]!r}")
    return GridSpec(lo, hi, count, spacing)


def _config_tokens(path: str) -> list[str]:
    tokens: list[str] = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise _UsageError(f"config line must be key=value, got {line!r}")
        tokens.extend([f"--{key.strip()}", value.strip()])
    return tokens


def _quad_config(args) -> QuadratureConfig:
    def pick(flag_value, env_name, cast, default):
        if flag_value is not None:
            return cast(flag_value)
        env = os.environ.get(_ENV_PREFIX + env_name)
        if env is not None:
            return cast(env)
        return default

    base = QuadratureConfig()
    return QuadratureConfig(
        abs_tol=pick(args.abs_tol, "ABS_TOL", float, base.abs_tol),
        rel_tol=pick(args.rel_tol, "REL_TOL", float, base.rel_tol),
        max_subdivisions=pick(args.max_subdivisions, "MAX_SUBDIVISIONS", int,
                              base.max_subdivisions),
        tail_cut_tol=pick(args.tail_cut_tol, "TAIL_CUT_TOL", float, base.tail_cut_tol),
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="studentfam",
                     description="Student-t family evaluation and certification")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    def add_common(p):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--abs-tol", dest="abs_tol", help="quadrature absolute tolerance")
        p.add_argument("--rel-tol", dest="rel_tol", help="quadrature relative tolerance")
        p.add_argument("--tail-cut-tol", dest="tail_cut_tol",
                       help="relative tail truncation threshold")
        p.add_argument("--max-subdivisions", dest="max_subdivisions",
                       help="adaptive subdivision budget")
        p.add_argument("--output", choices=("json", "csv"), default="json")

    p_eval = sub.add_parser("eval", help="evaluate a density or tail at a point")
    add_common(p_eval)
    p_eval.add_argument("--dist", choices=("student", "chi"), default="student")
    p_eval.add_argument("--p", required=True, help="degrees of freedom (or 'inf')")
    p_eval.add_argument("--what", default="tail",
                        choices=("density", "log-density", "tail", "log-tail"))
    p_eval.add_argument("--x", required=True, type=float)

    p_mom = sub.add_parser("moments", help="evaluate a generalized moment")
    add_common(p_mom)
    p_mom.add_argument("--p", required=True, help="degrees of freedom (or 'inf')")
    p_mom.add_argument("--measure", required=True,
                       help="pow:s | powlog:s | ind:c | atoms:<csv-path>")
    p_mom.add_argument("--oracle", action="store_true",
                       help="use the density-side quadrature oracle instead")

    p_cert = sub.add_parser("certify", help="run one certification target")
    add_common(p_cert)
    p_cert.add_argument("--target", required=True, choices=TARGETS)
    p_cert.add_argument("--p", help="degrees of freedom (or 'inf')")
    p_cert.add_argument("--q", help="second degrees of freedom (or 'inf')")
    p_cert.add_argument("--x", type=float, help="abscissa (gqgp-integral)")
    p_cert.add_argument("--x-grid", dest="x_grid", help="lo:hi:count[:log]")
    p_cert.add_argument("--p-grid", dest="p_grid", help="lo:hi:count[:log]")
    p_cert.add_argument("--grid-lo", dest="grid_lo", help="lo:hi:count[:log]")
    p_cert.add_argument("--grid-hi", dest="grid_hi", help="lo:hi:count[:log]")
    p_cert.add_argument("--count", type=int, help="tuple count (stp2)")
    p_cert.add_argument("--seed", type=int, help="random seed (stp2)")
    p_cert.add_argument("--fn-b", dest="fn_b", help="function token for b")
    p_cert.add_argument("--fn-a", dest="fn_a", help="function token for a")
    p_cert.add_argument("--fn-r", dest="fn_r", help="function token for r")
    p_cert.add_argument("--figures", help="directory for rendered figures")

    p_all = sub.add_parser("report-all", help="run the full certification matrix")
    add_common(p_all)
    p_all.add_argument("--profile", choices=tuple(PROFILES), default="quick")
    p_all.add_argument("--figures", help="directory for rendered figures")

    return parser


_TARGET_OVERRIDES = {
    "mtr": ("p", "q", "x_grid"),
    "sm": ("p", "q", "x_grid"),
    "stp2": ("count", "seed"),
    "mlr-shape": ("p", "q", "grid_lo", "grid_hi"),
    "lemma1": ("p_grid",),
    "rho-prime": ("p", "x_grid"),
    "r-decreasing": ("p", "x_grid"),
    "gqgp-integral": ("p", "q", "x"),
    "cor1": (),
    "cor2": (),
    "prop1-i": ("p_grid", "fn_b"),
    "prop1-ii": ("p_grid", "fn_b"),
    "prop1-iii": ("p_grid", "fn_a", "fn_r"),
    "prop1-iv": ("p_grid", "fn_a", "fn_r"),
    "prop2-i": ("p_grid", "fn_b"),
    "prop2-ii": ("p_grid", "fn_a", "fn_r"),
    "oracle-tail": ("p", "x_grid"),
    "oracle-moment": (),
}

_GRID_KEYS = ("x_grid", "p_grid", "grid_lo", "grid_hi")
_DOF_KEYS = ("p", "q")


def _collect_overrides(args) -> dict:
    allowed = _TARGET_OVERRIDES[args.target]
    overrides = {}
    for key in allowed:
        value = getattr(args, key, None)
        if value is None:
            continue
        if key in _GRID_KEYS:
            value = _parse_grid(value)
        elif key in _DOF_KEYS:
            value = _parse_dof(value)
        overrides[key] = value
    return overrides


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _exit_status(entries: list[dict]) -> int:
    return 0 if all(e["status"] == "certified" for e in entries) else 2


def _cmd_eval(args, cfg) -> int:
    p = _parse_dof(args.p)
    if args.dist == "chi":
        if args.what != "density":
            raise _UsageError("chi evaluation supports --what density only")
        value = chi_density(p, args.x)
    elif args.what == "density":
        value = density(p, args.x)
    elif args.what == "log-density":
        value = log_density(p, args.x)
    elif args.what == "tail":
        value = tail(p, args.x).tail
    else:
        value = tail(p, args.x).log_tail
    _emit(canonical_json({"value": float(value)}))
    return 0


def _cmd_moments(args, cfg) -> int:
    p = _parse_dof(args.p)
    measure = parse_measure(args.measure)
    if args.oracle:
        if measure.cumulative is None:
            raise _UsageError(f"measure {args.measure!r} has no evaluable b for the oracle")
        value = direct_moment_oracle(
            p, measure.cumulative, cfg,
            breakpoints=tuple(loc for loc, _ in measure.atoms))
    else:
        value = generalized_moment(p, measure, cfg)
    _emit(canonical_json({"value": value}))
    return 0


def _cmd_certify(args, cfg) -> int:
    results = run_target(args.target, cfg, "quick", **_collect_overrides(args))
    entries = [r.entry for r in results]
    if args.figures:
        from .figures import render_figures

        render_figures(results, args.figures)
    if args.output == "csv":
        _emit(report_csv(entries))
    elif len(entries) == 1:
        _emit(canonical_json(entries[0]))
    else:
        _emit(canonical_json({"reports": entries}))
    return _exit_status(entries)


def _cmd_report_all(args, cfg) -> int:
    results = run_all(cfg, args.profile)
    entries = [r.entry for r in results]
    status = _exit_status(entries)
    if args.figures:
        from .figures import render_figures

        render_figures(results, args.figures)
    if args.output == "csv":
        _emit(report_csv(entries))
    else:
        document = {
            "library_version": __version__,
            "profile": args.profile,
            "status": "certified" if status == 0 else "violated",
            "targets_reported": len({e["target"] for e in entries}),
            "reports": entries,
        }
        _emit(canonical_json(document))
    return status


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        if not argv:
            parser.print_usage(sys.stderr)
            return 1
        # A config file supplies defaults; explicit flags win because they
        # come later on the synthesized command line.
        if "--config" in argv:
            idx = argv.index("--config")
            try:
                cfg_path = argv[idx + 1]
            except IndexError:
                raise _UsageError("--config needs a path") from None
            command, rest = argv[0], argv[1:]
            argv = [command] + _config_tokens(cfg_path) + rest
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 1
        cfg = _quad_config(args)
        if args.command == "eval":
            return _cmd_eval(args, cfg)
        if args.command == "moments":
            return _cmd_moments(args, cfg)
        if args.command == "certify":
            return _cmd_certify(args, cfg)
        return _cmd_report_all(args, cfg)
    except _UsageError as exc:
        print(f"studentfam: error: {exc}", file=sys.stderr)
        return 1
    except StudentFamilyError as exc:
        print(f"studentfam: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"studentfam: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
