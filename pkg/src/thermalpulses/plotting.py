"""Matplotlib rendering of the report outputs.

Figures accompany the delimited output of the CLI: the spectral window over
the thermal energy distribution, field envelopes of pulse sets and selected
single pulses, the eigen-spectrum of the kernel, and refinement convergence.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fields import FieldProfile, planck_weight
from .modes import SpectralWindow
from .thermal import ThermalContext

__all__ = ["plot_field", "plot_spectrum", "plot_convergence"]


def _window_panel(ax, ctx: ThermalContext, window: SpectralWindow):
    lo = window.k_center - np.pi / window.lattice_const
    hi = window.k_center + np.pi / window.lattice_const
    k = np.linspace(max(1e-3, 0.02 * lo), 1.6 * hi, 400)
    ax.plot(k, planck_weight(ctx, k), color="0.2")
    ax.axvspan(lo, hi, color="tab:orange", alpha=0.3, label="window")
    ax.set_xlabel("k")
    ax.set_ylabel("thermal energy per mode")
    ax.legend(frameon=False)


def plot_field(
    path,
    profile: FieldProfile,
    ctx: ThermalContext,
    window: SpectralWindow,
    singles: dict[int, FieldProfile] | None = None,
    contrast: FieldProfile | None = None,
):
    """Window panel plus envelope panel(s), Fig.-style field summary."""
    n_rows = 2 if contrast is not None else 1
    fig, axes = plt.subplots(n_rows, 2, figsize=(10, 3.2 * n_rows), squeeze=False)
    _window_panel(axes[0][0], ctx, window)
    ax = axes[0][1]
    ax.plot(profile.z, profile.envelope.real, color="tab:blue", lw=1.0, label="Re envelope")
    ax.plot(profile.z, np.abs(profile.envelope), color="0.4", lw=0.8, ls="--", label="|envelope|")
    for s, sp in (singles or {}).items():
        ax.plot(sp.z, sp.envelope.real, lw=0.8, alpha=0.7, label=f"pulse s={s}")
    ax.set_xlabel("z")
    ax.set_ylabel("field envelope")
    ax.legend(frameon=False, fontsize=8)
    if contrast is not None:
        axes[1][0].axis("off")
        axc = axes[1][1]
        axc.plot(contrast.z, contrast.envelope.real, color="tab:green", lw=1.0)
        axc.set_xlabel("z")
        axc.set_ylabel("wider-window envelope")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_spectrum(path, theta: np.ndarray, lag_values: np.ndarray):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.2))
    ax1.plot(np.arange(len(theta)), theta, "o-", ms=3)
    ax1.set_xlabel("r")
    ax1.set_ylabel(r"eigenvalue $\theta_r$")
    ax1.set_yscale("log")
    lags = np.arange(len(lag_values))
    ax2.plot(lags, np.abs(lag_values), "s-", ms=3)
    ax2.set_xlabel("lag s - s'")
    ax2.set_ylabel(r"$|\Lambda|$ by lag")
    ax2.set_yscale("log")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_convergence(path, rows: list[dict]):
    j = [r["j"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.semilogy(j, [max(r["gamma_error"], 1e-17) for r in rows], "o-", label=r"$|\Gamma_j - \Gamma_\infty|$")
    ax.semilogy(j, [max(r["lambda_max_lag_error"], 1e-17) for r in rows], "s-", label=r"max lag $\Lambda$ error")
    ax.set_xlabel("refinement step j")
    ax.set_ylabel("error vs continuum")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
