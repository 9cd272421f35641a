"""Scaling figures for benchmark output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from mpiso.bench import loglog_slope, medians  # noqa: E402
from mpiso.formats import BenchRecord  # noqa: E402


def plot_scaling(records: list[BenchRecord], path: str | Path, title: str | None = None) -> Path:
    """Log-log median wall time per size, one line per family, with an M^2 guide."""
    meds = medians(records)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    families = sorted({m.family for m in meds})
    for fam in families:
        rows = [m for m in meds if m.family == fam]
        ms = np.array([m.M for m in rows], float)
        ts = np.array([m.wall_time_us for m in rows], float) / 1e3
        label = fam
        if len(rows) >= 2:
            label += f" (slope {loglog_slope(ms, ts):.2f})"
        ax.loglog(ms, ts, "o-", label=label)
    if meds:
        ms = np.array(sorted({m.M for m in meds}), float)
        top = max(m.wall_time_us for m in meds) / 1e3
        ax.loglog(ms, top * (ms / ms[-1]) ** 2, "k--", lw=0.8, label=r"$\propto M^2$")
    ax.set_xlabel("number of nodes M")
    ax.set_ylabel("median wall time [ms]")
    ax.set_title(title or "Matching time vs graph size")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
