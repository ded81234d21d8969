"""Figure files rendered next to CLI reports.

All rendering uses the Agg backend and fixed sizes, so runs on headless
machines produce the same set of files for the same configuration.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_FIGSIZE = (7.0, 4.2)
_DPI = 130


def _finish(fig, ax, path, title):
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return str(path)


def residual_scatter(groups, tolerance, path, title, ylabel="relative residual"):
    """Per-point residuals on a log scale, one column per entry."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    floor = 1e-18
    labels = []
    for col, (label, values) in enumerate(groups.items()):
        vals = np.maximum(np.abs(np.asarray(values, dtype=float)), floor)
        x = np.full(vals.shape, col, dtype=float)
        x += np.linspace(-0.18, 0.18, num=vals.size) if vals.size > 1 else 0.0
        ax.semilogy(x, vals, ".", markersize=5)
        labels.append(label)
    ax.axhline(tolerance, color="crimson", linestyle="--", linewidth=1.2,
               label=f"tolerance {tolerance:g}")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel(ylabel)
    ax.legend(loc="upper right", fontsize=8)
    return _finish(fig, ax, path, title)


def refinement_plot(histories, references, path, title):
    """Euler-number estimates against nodes per axis, with targets."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for label, hist in histories.items():
        nodes = [n for n, _ in hist]
        vals = [v for _, v in hist]
        ax.plot(nodes, vals, "o-", label=label)
        ref = references.get(label)
        if ref is not None:
            ax.axhline(ref, color="gray", linestyle=":", linewidth=0.8)
    ax.set_xlabel("nodes per axis")
    ax.set_ylabel("Euler number estimate")
    ax.legend(fontsize=8)
    return _finish(fig, ax, path, title)


def convergence_plot(step_errors, path, title):
    """Finite-difference error against step size with a slope-2 guide."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    all_steps = []
    for label, (steps, errors) in step_errors.items():
        steps = np.asarray(steps, dtype=float)
        errors = np.maximum(np.asarray(errors, dtype=float), 1e-18)
        ax.loglog(steps, errors, "o-", label=label, alpha=0.85)
        all_steps.extend(steps)
    if all_steps:
        s = np.array(sorted(set(all_steps)))
        ref = [(steps, errors) for steps, errors in step_errors.values()][0]
        anchor = max(np.max(e) for _, e in step_errors.values())
        guide = anchor * (s / s.max()) ** 2
        ax.loglog(s, guide, "k--", linewidth=1.0, label="slope 2")
    ax.set_xlabel("step")
    ax.set_ylabel("max abs error")
    ax.legend(fontsize=8)
    return _finish(fig, ax, path, title)


def comparison_bars(pairs, tolerance_map, path, title):
    """Absolute differences per check with their tolerances."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    labels = list(pairs)
    diffs = np.maximum([abs(pairs[k]) for k in labels], 1e-18)
    tols = [tolerance_map[k] for k in labels]
    x = np.arange(len(labels))
    ax.bar(x, diffs, width=0.55, label="|lhs - rhs|")
    ax.plot(x, tols, "r_", markersize=22, label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.legend(fontsize=8)
    return _finish(fig, ax, path, title)
