"""Static matplotlib renderings written next to the delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def _finish(fig, ax, path, xlabel, ylabel, title):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def line_plot(path, x, series, xlabel, ylabel, title, logy=False, logx=False):
    """series: mapping label -> y array over the common x grid."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, y in series.items():
        ax.plot(x, y, label=label, linewidth=1.4)
    if logy:
        ax.set_yscale("log")
    if logx:
        ax.set_xscale("log")
    if len(series) > 1:
        ax.legend(fontsize=8)
    return _finish(fig, ax, path, xlabel, ylabel, title)


def bar_plot(path, labels, values, ylabel, title, logy=False):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    pos = np.arange(len(labels))
    ax.bar(pos, values, width=0.6)
    ax.set_xticks(pos)
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    if logy:
        ax.set_yscale("log")
    return _finish(fig, ax, path, "", ylabel, title)


def membership_plot(path, z, margin, member, epsilon, title):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(z, margin, linewidth=1.4, label="margin min|z - lambda|")
    ax.axhline(epsilon, color="tab:red", linestyle="--", label=f"epsilon = {epsilon:g}")
    member = np.asarray(member, dtype=bool)
    ax.fill_between(z, 0, np.max(margin), where=member, alpha=0.15,
                    color="tab:green", label="member")
    ax.legend(fontsize=8)
    return _finish(fig, ax, path, "z", "margin", title)


def coefficient_plot(path, powers, coeffs, title):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.bar(powers, coeffs, width=0.6)
    return _finish(fig, ax, path, "power of s", "coefficient", title)
