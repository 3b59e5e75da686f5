"""Central table of default parameter sets, grids, and tolerances.

Every certification target reads its defaults from here so that report runs
are reproducible; the ``full`` profile densifies every grid fivefold and
doubles every p set (geometric midpoints inserted between consecutive finite
entries) without changing any verdict thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .monotonicity import GridSpec

__all__ = ["Profile", "PROFILES", "scale_grid", "densify_pset", "DEFAULTS"]

INF = math.inf


@dataclass(frozen=True)
class Profile:
    name: str
    grid_factor: int = 1
    pset_doubled: bool = False


PROFILES = {
    "quick": Profile("quick"),
    "full": Profile("full", grid_factor=5, pset_doubled=True),
}


def scale_grid(grid: GridSpec, profile: Profile) -> GridSpec:
    if profile.grid_factor == 1:
        return grid
    return GridSpec(grid.lo, grid.hi, grid.count * profile.grid_factor, grid.spacing)


def densify_pset(pset: tuple[float, ...], profile: Profile) -> tuple[float, ...]:
    """Insert geometric midpoints between consecutive finite entries."""
    if not profile.pset_doubled:
        return pset
    out: list[float] = []
    for a, b in zip(pset[:-1], pset[1:]):
        out.append(a)
        if math.isfinite(a) and math.isfinite(b):
            out.append(math.sqrt(a * b))
    out.append(pset[-1])
    return tuple(out)


DEFAULTS: dict = {
    # Theorem-level pair set: every p < q pair is certified.
    "p_set": (0.3, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 50.0, INF),
    "mtr": {
        "x_grid": GridSpec(0.0, 10.0, 200),
        "min_margin_required": 1e-12,
    },
    "sm": {
        # Grid over (0, 8]: first point 8/100.
        "x_grid": GridSpec(0.08, 8.0, 100),
        "equality_at_zero_tol": 1e-14,
    },
    "stp2": {
        "count": 100,
        "seed": 314159,
        "hand_value": {
            "args": (1.0, 2.0, -1.0, 0.0),
            # G_1(1) G_2(0) - G_1(0) G_2(1) = 1/8 - (1 - 1/sqrt(3))/4
            "expected": 0.125 - 0.25 * (1.0 - 1.0 / math.sqrt(3.0)),
            "tol": 1e-6,
        },
    },
    "mlr-shape": {
        "pairs": ((1.0, 2.0), (1.0, INF), (2.0, 7.0)),
        "grid_lo": GridSpec(0.0, 1.0, 50),
        "grid_hi": GridSpec(1.0, 6.0, 100),
    },
    "lemma1": {
        "p_grid": GridSpec(0.01, 1000.0, 40, "log"),
        "identity_tol": 1e-9,
        "anchor_p": 1.0,
        "anchor_value": 2.0 * math.log(2.0) - 1.0,
        "anchor_tol": 1e-10,
    },
    "rho-prime": {
        "p_set": (1.0, 3.0, 10.0),
        "x_grid": GridSpec(0.1, 5.0, 50),
        "fd_tol": 1e-6,
    },
    "r-decreasing": {
        "p_set": (0.5, 1.0, 2.0, 5.0, 50.0),
        "x_grid": GridSpec(0.1, 10.0, 100),
        "origin_x": 1e-8,
        "origin_tol": 1e-8,
    },
    "gqgp-integral": {
        "p": 1.0,
        "q": 2.0,
        "x": 1.5,
        "nodes": 15,
        "tol": 1e-6,
    },
    "cor1": {
        "square_moment_p": (2.5, 3.0, 4.0, 10.0, 100.0),
        "square_moment_tol": 1e-9,
        "decrease_s": (0.5, 1.0, 2.0),
        "decrease_grid_lo_offset": 0.5,
        "decrease_grid_hi": 300.0,
        "decrease_grid_count": 12,
        "powerlog_boundary_s": (1.0, 2.0),
        "monotone_measure_grid": GridSpec(3.0, 100.0, 10, "log"),
    },
    "cor2": {
        "pairs": ((0.5, 1.0), (1.0, 2.0), (1.0, 3.0)),
        "grid_lo_offset": 0.5,
        "grid_hi": 300.0,
        "grid_count": 10,
        "identity_atoms": ((0.5, 0.4), (1.5, 1.0), (3.0, 0.6)),
        "identity_pq": (1.5, 4.0),
        "identity_tol": 1e-10,
    },
    "prop1": {
        "p_grid": GridSpec(0.3, 300.0, 12, "log"),
        "functions": {
            "i": {"b": "pow:1"},
            "ii": {"b": "cap:1"},
            "iii": {"a": "pow:1", "r": "pow:1"},
            "iv": {"a": "cap:1", "r": "cap:1"},
        },
        "reduction_tol": 1e-9,
    },
    "prop2": {
        "p_grid": GridSpec(1.0, 300.0, 10, "log"),
        # Part (i) functions must be non-constant on [0, inf); a step at a
        # negative threshold would be constant there and the strict decrease
        # would (correctly) fail below p = 1 + threshold^2.
        "part_i_b": ("shiftind:0.25", "shiftind:1", "tanhstep"),
        "part_ii": (("shiftind:0", "cap:1"), ("cap:1", "tanhstep")),
    },
    "oracle-tail": {
        "p_set": (0.5, 1.0, 2.5, 4.0, 30.0),
        "x_grid": GridSpec(0.0, 12.0, 25),
        "rel_tol": 1e-9,
        "tail_floor": 1e-12,
    },
    "oracle-moment": {
        "power_s": (0.5, 1.0, 2.0, 3.0),
        "indicator_c": (0.5, 1.0, 2.0),
        "indicator_p": (1.0, 5.0),
        "rel_tol": 1e-8,
    },
}
