"""Figure rendering for the report CSVs.

Figures are rendered to files next to the delimited output; they are a
presentation layer only and never feed back into the data path.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(c) for c in row] for row in reader if row]
    return header, np.array(rows, dtype=float)


def _read_sweep(path, n_numeric: int) -> np.ndarray:
    """Numeric leading columns of a sweep CSV; the error column is text."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        rows = [[float(c) for c in row[:n_numeric]] for row in reader if row]
    return np.array(rows, dtype=float)


def render_fig4(csv_path, png_path) -> Path:
    """Trace plot of the monitored density-matrix entries."""
    header, data = _read_csv(csv_path)
    t = data[:, 0]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    styles = [("tab:blue", "-"), ("tab:red", ":"), ("tab:green", "--"),
              ("black", "-.")]
    col = 1
    k = 0
    while col + 1 < len(header) - 2:
        name = header[col][:-3]  # strip _re
        color, ls = styles[k % len(styles)]
        ax.plot(t, data[:, col], color=color, linestyle=ls, label=name)
        col += 2
        k += 1
    ax.set_xlabel("t (ps)")
    ax.set_ylabel("density-matrix element")
    ax.legend(fontsize=7, loc="center right")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    png_path = Path(png_path)
    fig.savefig(png_path, dpi=160)
    plt.close(fig)
    return png_path


def render_fig5(csv_path, png_path) -> Path:
    """Contour map of fidelity over field and inverse pulse width."""
    data = _read_sweep(csv_path, 3)
    b_values = np.unique(data[:, 0])
    s_values = np.unique(data[:, 1])
    grid = data[:, 2].reshape(len(b_values), len(s_values))
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    mesh = ax.contourf(s_values, b_values, grid, levels=20, cmap="viridis")
    cont = ax.contour(s_values, b_values, grid, levels=[0.90, 0.95],
                      colors="white", linewidths=0.8)
    ax.clabel(cont, fmt="%.2f", fontsize=7)
    fig.colorbar(mesh, ax=ax, label="fidelity")
    ax.set_xlabel(r"$s^{-1}$ (THz)")
    ax.set_ylabel("B (T)")
    fig.tight_layout()
    png_path = Path(png_path)
    fig.savefig(png_path, dpi=160)
    plt.close(fig)
    return png_path


def render_eta(csv_path, png_path) -> Path:
    """Fidelity versus timing-error factor."""
    data = _read_sweep(csv_path, 2)
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(data[:, 0], data[:, 1], marker="o", ms=3.5, color="tab:blue")
    ax.set_xlabel(r"timing error $\eta$")
    ax.set_ylabel("fidelity")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    png_path = Path(png_path)
    fig.savefig(png_path, dpi=160)
    plt.close(fig)
    return png_path
