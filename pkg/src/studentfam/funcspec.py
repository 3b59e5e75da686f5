"""Tiny function mini-language shared by the CLI and the certifiers.

Tokens:

* ``pow:s``      -- t |-> max(t, 0)^s, s > 0
* ``cap:c``      -- t |-> min(max(t, 0), c), c > 0
* ``ind:c``      -- t |-> 1{t > c}, c >= 0
* ``shiftind:t`` -- z |-> 1{z > t}, any real t (chi-family preset)
* ``tanhstep``   -- z |-> (tanh z + 1)/2
* ``const:c``    -- t |-> c, c >= 0

Each spec carries its kink locations so quadrature can seed breakpoints, and
whether it is bounded.  Arbitrary callables remain a library-level feature;
the mini-language only covers what the command line can name.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

__all__ = ["FunctionSpec", "parse_function", "sampled_sup", "validate_monotone_samples"]


@dataclass(frozen=True)
class FunctionSpec:
    token: str
    fn: Callable
    breakpoints: tuple[float, ...] = ()
    bounded: bool = True

    def __call__(self, t):
        return self.fn(t)


def parse_function(token: str) -> FunctionSpec:
    name, _, arg = token.partition(":")
    name = name.strip().lower()
    if name == "tanhstep":
        return FunctionSpec(token="tanhstep", fn=lambda z: 0.5 * (np.tanh(z) + 1.0))
    if name == "const":
        c = float(arg)
        if c < 0:
            raise DomainError(f"const requires c >= 0, got {c}")
        return FunctionSpec(token=f"const:{arg}", fn=lambda t, c=c: np.full_like(np.asarray(t, dtype=float), c))
    if not arg:
        raise DomainError(f"function token {token!r} needs a parameter")
    value = float(arg)
    if name == "pow":
        if value <= 0:
            raise DomainError(f"pow requires s > 0, got {value}")
        return FunctionSpec(
            token=f"pow:{arg}",
            fn=lambda t, s=value: np.maximum(np.asarray(t, dtype=float), 0.0) ** s,
            breakpoints=(0.0,),
            bounded=False,
        )
    if name == "cap":
        if value <= 0:
            raise DomainError(f"cap requires c > 0, got {value}")
        return FunctionSpec(
            token=f"cap:{arg}",
            fn=lambda t, c=value: np.minimum(np.maximum(np.asarray(t, dtype=float), 0.0), c),
            breakpoints=(0.0, value),
        )
    if name in ("ind", "shiftind"):
        if name == "ind" and value < 0:
            raise DomainError(f"ind requires c >= 0, got {value}")
        return FunctionSpec(
            token=f"{name}:{arg}",
            fn=lambda t, c=value: (np.asarray(t, dtype=float) > c).astype(float),
            breakpoints=(value,),
        )
    raise DomainError(f"unknown function token {token!r}")


def sampled_sup(fn: Callable, lo: float, hi: float, samples: int = 1000) -> float:
    """Sampled upper bound for a nondecreasing bounded function."""
    ts = np.linspace(lo, hi, samples)
    return float(np.max(np.asarray(fn(ts), dtype=float)))


def validate_monotone_samples(
    fn: Callable,
    lo: float,
    hi: float,
    samples: int = 1000,
    name: str = "function",
    require_nonnegative: bool = True,
) -> None:
    """Sample-based validation that fn is nondecreasing (and >= 0).

    Black-box monotonicity cannot be verified exactly; this checks 1000
    sampled points and raises DomainError on any decrease beyond roundoff.
    """
    ts = np.linspace(lo, hi, samples)
    vals = np.asarray(fn(ts), dtype=float)
    if require_nonnegative and np.any(vals < 0.0):
        t_bad = float(ts[np.argmax(vals < 0.0)])
        raise DomainError(f"{name} must be nonnegative; negative at t={t_bad:.6g}")
    diffs = np.diff(vals)
    if np.any(diffs < -1e-12 * np.maximum(1.0, np.abs(vals[:-1]))):
        i = int(np.argmax(diffs < -1e-12 * np.maximum(1.0, np.abs(vals[:-1]))))
        raise DomainError(
            f"{name} must be nondecreasing; decreases near t={float(ts[i]):.6g}"
        )
    if math.isnan(float(np.sum(vals))):
        raise DomainError(f"{name} produced NaN on the sampled domain")
