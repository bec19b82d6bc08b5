"""Figures for catalog reports.  Uses the non-interactive Agg backend."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

GOLDEN = (math.sqrt(5) - 1.0) / 2.0
LEMMA_COLORS = {"L1": "#9e9e9e", "L2": "#4c72b0", "L3": "#dd8452", "candidate": "#c44e52"}


def new_figure(width: float = 6.0, height: float | None = None):
    fig, ax = plt.subplots(figsize=(width, height or width * GOLDEN), facecolor="w")
    ax.tick_params(labelsize=9)
    return fig, ax


def save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # no Software/date metadata, so reruns give the same bytes
    fig.savefig(path, dpi=120, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_class_counts(counts: list[int], path: Path) -> Path:
    fig, ax = new_figure()
    levels = list(range(len(counts)))
    ax.bar(levels, counts, color="#4c72b0")
    if max(counts, default=0) > 50:
        ax.set_yscale("log")
    for x, y in zip(levels, counts):
        ax.annotate(str(y), (x, y), ha="center", va="bottom", fontsize=8)
    ax.set_xlabel("number of lines")
    ax.set_ylabel("classes")
    ax.set_xticks(levels)
    ax.set_title("Arrangement classes per level", fontsize=10)
    return save(fig, path)


def plot_filter_breakdown(breakdown: list[dict[str, int]], path: Path) -> Path:
    """Stacked bars: classes per level split by the first filter that excludes them."""
    fig, ax = new_figure()
    levels = list(range(len(breakdown)))
    bottom = [0] * len(levels)
    for name in ("L1", "L2", "L3", "candidate"):
        heights = [b.get(name, 0) for b in breakdown]
        ax.bar(levels, heights, bottom=bottom, color=LEMMA_COLORS[name],
               label="surviving candidates" if name == "candidate" else f"excluded by {name}")
        bottom = [u + v for u, v in zip(bottom, heights)]
    ax.set_xlabel("number of lines")
    ax.set_ylabel("classes")
    ax.set_xticks(levels)
    ax.legend(fontsize=8, frameon=False)
    ax.set_title("Minimality filters", fontsize=10)
    return save(fig, path)
