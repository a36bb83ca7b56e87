"""Figure rendering for the CLI report paths (written next to the CSV/JSON)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_error_curve_figure",
    "save_wedge_energy_figure",
    "save_slice_figure",
    "save_hypercube_figure",
]

_DPI = 140


def save_error_curve_figure(path, curves, fits=None, title="N-term approximation error"):
    """curves: iterable of (label, ns, err2); fits: optional RateReports."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label, ns, err2 in curves:
        ax.loglog(ns, err2, "o-", base=2, markersize=4, label=label)
    for rep in fits or []:
        ns = np.array([rep.n_lo, rep.n_hi], dtype=float)
        ax.loglog(
            ns,
            2.0 ** (rep.slope * np.log2(ns) + rep.intercept),
            "--",
            base=2,
            color="gray",
            label=f"fit slope {rep.slope:.2f}",
        )
    ax.set_xlabel("N (terms kept)")
    ax.set_ylabel("squared L2 error")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return Path(path)


def save_wedge_energy_figure(path, table, fit_exponent=None):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(table.ell_geom, table.energies, "o", label="raw")
    order = np.argsort(table.ell_geom)
    if fit_exponent is not None:
        lg = table.ell_geom[order]
        ref = table.energies[order][0] * (lg / lg[0]) ** fit_exponent
        ax.loglog(lg, ref, "--", color="gray", label=f"slope {fit_exponent:.2f}")
    ax.set_xlabel("angular distance measure")
    ax.set_ylabel("wedge energy")
    ax.set_title(f"wedge energies at scale {table.j}")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return Path(path)


def save_slice_figure(path, etas, energies, j):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.semilogy(etas, energies, "o-")
    ax.set_xlabel("ray angle (rad)")
    ax.set_ylabel("slice energy")
    ax.set_title(f"radial slice energies, band {j}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return Path(path)


def save_hypercube_figure(path, ks, ms, deltas, p_fitted=None, p_reference=None):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(1.0 / np.asarray(deltas), ms, "o-", label="family")
    label = []
    if p_fitted is not None:
        label.append(f"fitted p = {p_fitted:.3f}")
    if p_reference is not None:
        label.append(f"reference {p_reference:.3f}")
    if label:
        ax.set_title(", ".join(label))
    ax.set_xlabel("1 / sidelength")
    ax.set_ylabel("hypercube dimension")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return Path(path)
