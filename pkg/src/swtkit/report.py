"""File artifacts for the verification path: delimited data and figures.

``swt verify`` writes its scaling-law measurements both as a CSV (one row
per V octave) and as a log-log matplotlib figure with V^2 / V^3 reference
slopes, next to the JSON report.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["write_scaling_csv", "render_scaling_figure"]

SCALING_FIELDS = ("V_scale", "V_max", "offdiag_norm", "heff_error", "sector_max_delta")


def write_scaling_csv(path: str | Path, rows: list[dict]) -> Path:
    """One row per V octave; header is written even when there are no rows."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCALING_FIELDS)
        for row in rows:
            writer.writerow(
                [
                    row["V_scale"],
                    max(row["V"]),
                    row["offdiag_norm"],
                    row["heff_error"],
                    row["sector_max_delta"],
                ]
            )
    return path


def render_scaling_figure(path: str | Path, rows: list[dict]) -> Path | None:
    """Two-panel log-log figure of the first- and second-order scaling laws.

    Returns None (and renders nothing) when fewer than two octaves are
    available.
    """
    if len(rows) < 2:
        return None
    path = Path(path)
    v = [max(r["V"]) for r in rows]
    offdiag = [r["offdiag_norm"] for r in rows]
    err = [r["heff_error"] for r in rows]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.loglog(v, offdiag, "o-", label="offdiag of $e^S H e^{-S}$")
    ax1.loglog(v, [offdiag[0] * (x / v[0]) ** 2 for x in v], "k--", lw=0.8, label=r"$\propto V^2$")
    ax1.set_xlabel("V")
    ax1.set_ylabel("spectral norm")
    ax1.set_title("residual off-diagonal coupling")
    ax1.legend(fontsize=8)
    ax1.grid(True, which="both", alpha=0.3)

    ax2.loglog(v, err, "s-", color="tab:red", label=r"$\|e^S H e^{-S} - H_{eff}\|$")
    ax2.loglog(v, [err[0] * (x / v[0]) ** 3 for x in v], "k--", lw=0.8, label=r"$\propto V^3$")
    ax2.set_xlabel("V")
    ax2.set_ylabel("spectral norm")
    ax2.set_title("truncation error of $H_{eff}$")
    ax2.legend(fontsize=8)
    ax2.grid(True, which="both", alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
