"""Report figures for the dichotomy and null-recurrence command paths.

Rendering is file-only (Agg backend, no display) and sits behind the
``figures`` config key on the two report commands; every other command
emits CSV and manifest only.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .metastate import DichotomyReport, NullRecurrenceProfile
from .toy import variance_scaling


def lambda_histograms_figure(report: DichotomyReport, path: Path) -> None:
    """One panel per alpha: the lambda histogram at the report volume."""
    n = len(report.rows)
    fig, axes = plt.subplots(1, n, figsize=(3.2 * n, 3.0), sharey=True)
    if n == 1:
        axes = [axes]
    for ax, row, hist in zip(axes, report.rows, report.histograms):
        centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
        ax.bar(centers, hist.masses, width=0.01, color="#1f77b4")
        ax.set_title(f"alpha = {row.alpha:g}")
        ax.set_xlabel("lambda")
        ax.set_xlim(0.0, 1.0)
    axes[0].set_ylabel("mass")
    fig.suptitle(
        f"lambda at N = {report.N}, beta = {report.beta:g}, "
        f"{report.eta_samples} draws"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def variance_loglog_figure(
    alphas: Sequence[float], var_grid: Sequence[int], J: float, path: Path
) -> None:
    """Exact Var W_N against N on log-log axes, one line per alpha."""
    fig, ax = plt.subplots(figsize=(4.8, 3.6))
    for alpha in alphas:
        Ns, variances, slope = variance_scaling(alpha, var_grid, J)
        ax.plot(
            np.log2(np.asarray(Ns, dtype=float)),
            np.log2(variances),
            marker="o",
            label=f"alpha = {alpha:g} (slope {slope:.3f})",
        )
    ax.set_xlabel("log2 N")
    ax.set_ylabel("log2 Var W_N")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def null_recurrence_figure(profile: NullRecurrenceProfile, path: Path) -> None:
    """Running ball frequencies along the volume sequence."""
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.semilogx(profile.n, profile.freq_plus, label="plus ball")
    ax.semilogx(profile.n, profile.freq_minus, label="minus ball")
    ax.semilogx(profile.n, profile.freq_mixed, label="mixed ball")
    ax.set_xlabel("N")
    ax.set_ylabel("running frequency")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(
        f"alpha = {profile.alpha:g}, beta = {profile.beta:g}, "
        f"tau = {profile.tau:g}, seed = {profile.seed}"
    )
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
