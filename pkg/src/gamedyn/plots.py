"""Matplotlib rendering for the CLI report paths.

Figures are written next to the delimited outputs they visualize; the
library itself never imports this module, so headless data-only use stays
free of a matplotlib dependency at runtime.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

HIST_BINS = 50


def ratio_histograms(columns: dict, out_dir) -> list[Path]:
    """One histogram per ratio column, 50 bins over [0, 1]."""
    out_dir = Path(out_dir)
    paths = []
    for name, values in columns.items():
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.hist(np.asarray(values), bins=HIST_BINS, range=(0.0, 1.0), color="#4878d0")
        ax.set_xlabel("ratio")
        ax.set_ylabel("frequency")
        ax.set_title(name)
        ax.set_xlim(0.0, 1.0)
        fig.tight_layout()
        path = out_dir / f"ratios_{name}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths


def trajectory_figure(traj, out_path, title: str = "") -> Path:
    """Semilog convergence plot: distance, field norm and H against t."""
    out_path = Path(out_path)
    fig, ax = plt.subplots(figsize=(6, 4))
    t = np.arange(len(traj))
    if traj.distances is not None:
        ax.semilogy(t, np.maximum(traj.distances, 1e-300), label="distance to solution")
    ax.semilogy(t, np.maximum(traj.field_norms, 1e-300), label="field norm")
    ax.semilogy(t, np.maximum(traj.h_values, 1e-300), label="H value")
    ax.set_xlabel("step")
    ax.set_ylabel("magnitude")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
