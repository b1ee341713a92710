"""Static SVG figures for the experiment runners.

All figures are simple line/band charts rendered headlessly with
matplotlib; every helper takes explicit data and writes one SVG file.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _finish(ax, path, xlabel, ylabel, title, logx=False, logy=False):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend()
    ax.figure.tight_layout()
    ax.figure.savefig(path, format="svg")
    plt.close(ax.figure)


def line_plot(path, series, xlabel, ylabel, title, logx=False, logy=False):
    """Plain multi-line chart; series is {label: (x, y)}."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, (x, y) in series.items():
        ax.plot(x, y, marker="o", label=label)
    _finish(ax, path, xlabel, ylabel, title, logx, logy)


def band_plot(path, series, xlabel, ylabel, title, logx=False, logy=False):
    """Mean line with a +-std band; series is {label: (x, mean, std)}."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, (x, mean, std) in series.items():
        line, = ax.plot(x, mean, marker="o", label=label)
        lo = [m - s for m, s in zip(mean, std)]
        hi = [m + s for m, s in zip(mean, std)]
        ax.fill_between(x, lo, hi, alpha=0.2, color=line.get_color())
    _finish(ax, path, xlabel, ylabel, title, logx, logy)
