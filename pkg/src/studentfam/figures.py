"""Figure rendering for certification runs.

Each report entry that carries evaluated samples becomes one PNG: the sampled
curve with the certification verdict and realized minimal margin in the
title.  Rendering is opt-in from the CLI (``--figures DIR``) and uses the
Agg backend so it works headless.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

__all__ = ["render_figures"]

_RC = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.4,
}


def _slug(entry: dict) -> str:
    params = entry.get("params") or {}
    parts = [entry["target"]]
    for key in sorted(params):
        parts.append(f"{key}-{params[key]}")
    slug = "__".join(str(p) for p in parts)
    return re.sub(r"[^A-Za-z0-9._-]+", "_", slug)[:120]


def _param_label(entry: dict) -> str:
    params = entry.get("params") or {}
    return ", ".join(f"{k}={params[k]}" for k in sorted(params))


def render_figures(results, outdir: str | Path) -> list[Path]:
    """Render one figure per sampled entry; returns the written paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    with plt.rc_context(_RC):
        for result in results:
            samples = [
                (x, y) for x, y in result.samples
                if math.isfinite(x) and math.isfinite(y)
            ]
            if len(samples) < 2:
                continue
            entry = result.entry
            xs = [s[0] for s in samples]
            ys = [s[1] for s in samples]
            fig, ax = plt.subplots()
            ax.plot(xs, ys, marker="." if len(xs) <= 60 else None, markersize=3)
            ax.set_xlabel("grid point")
            ax.set_ylabel("certified quantity")
            verdict = entry["status"]
            ax.set_title(
                f"{entry['target']} [{_param_label(entry)}]\n"
                f"{verdict}, min margin {entry['min_margin']:.3g}"
            )
            if entry["violations"]:
                bad = {v[0] for v in entry["violations"] if isinstance(v[0], int) and v[0] >= 0}
                ax.plot(
                    [xs[i] for i in bad if i < len(xs)],
                    [ys[i] for i in bad if i < len(ys)],
                    "rx", markersize=6, label="violation",
                )
                ax.legend(fontsize=8)
            path = outdir / f"{_slug(entry)}.png"
            fig.tight_layout()
            fig.savefig(path)
            plt.close(fig)
            written.append(path)
    return written
