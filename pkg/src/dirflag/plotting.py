"""Matplotlib rendering of barcodes and experiment summaries.

All functions write figures to files; the Agg backend is forced so the
CLI works on headless machines.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .digraph import is_finite

DEGREE_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red",
                 "tab:purple", "tab:brown")


def _finite_horizon(bars):
    finite = [float(b.death) for b in bars if is_finite(b.death)]
    finite += [float(b.birth) for b in bars]
    hi = max(finite, default=1.0)
    lo = min((float(b.birth) for b in bars), default=0.0)
    span = hi - lo
    return lo, hi + (0.25 * span if span else 1.0)


def plot_barcode(barcode, path, title=None):
    """Horizontal-interval plot, one row per bar, grouped by degree.

    Infinite bars run to the right edge and are drawn with an arrowhead.
    """
    bars = sorted(barcode.bars,
                  key=lambda b: (b.degree, b.birth,
                                 float(b.death) if is_finite(b.death) else
                                 float("inf")))
    fig, ax = plt.subplots(figsize=(6.4, max(2.0, 0.28 * len(bars) + 1.2)))
    lo, horizon = _finite_horizon(bars)
    for row, bar in enumerate(bars):
        color = DEGREE_COLORS[bar.degree % len(DEGREE_COLORS)]
        birth = float(bar.birth)
        if is_finite(bar.death):
            ax.hlines(row, birth, float(bar.death), color=color, lw=3)
        else:
            ax.hlines(row, birth, horizon, color=color, lw=3)
            ax.annotate("", xy=(horizon, row), xytext=(horizon - 1e-9, row),
                        arrowprops=dict(arrowstyle="->", color=color))
        ax.plot([birth], [row], marker="|", color=color, ms=8)
    degrees = sorted({b.degree for b in bars})
    handles = [plt.Line2D([0], [0], color=DEGREE_COLORS[d % len(DEGREE_COLORS)],
                          lw=3, label=f"degree {d}") for d in degrees]
    if handles:
        ax.legend(handles=handles, loc="lower right", fontsize=8)
    ax.set_xlabel("filtration time")
    ax.set_yticks([])
    ax.set_xlim(lo - 0.05 * max(horizon - lo, 1.0), horizon)
    ax.set_ylim(-1, max(len(bars), 1))
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_bound_scatter(pairs, path, title, xlabel, ylabel):
    """Scatter of (bound, observed) with the y=x guide line."""
    fig, ax = plt.subplots(figsize=(4.8, 4.2))
    xs = [float(x) for x, _ in pairs]
    ys = [float(y) for _, y in pairs]
    top = max(xs + ys + [1.0]) * 1.1
    ax.plot([0, top], [0, top], ls="--", color="gray", lw=1,
            label="bound = observed")
    ax.scatter(xs, ys, s=18, color="tab:blue", alpha=0.7)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_xlim(0, top)
    ax.set_ylim(0, top)
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_value_table(labels, computed, expected, path, title):
    """Side-by-side bars of computed versus expected integer values."""
    fig, ax = plt.subplots(figsize=(4.8, 3.2))
    xs = range(len(labels))
    width = 0.38
    ax.bar([x - width / 2 for x in xs], computed, width, label="computed",
           color="tab:blue")
    ax.bar([x + width / 2 for x in xs], expected, width, label="expected",
           color="tab:orange", alpha=0.8)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels)
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
