"""Matplotlib rendering of the report outputs.

Every CLI command writes its delimited output first and then, unless told
not to, renders the matching figure next to it with these helpers.  All
rendering goes through the Agg backend so headless runs behave.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .propagation import PGM_DYNAMIC_RANGE_DB, FieldMap
from .trajectory import TrajectoryParams, caustic_x

_DPI = 150


def _power_db(fmap: FieldMap) -> np.ndarray:
    power = np.where(fmap.valid, fmap.power, 0.0)
    peak = power.max()
    floor = -PGM_DYNAMIC_RANGE_DB
    if peak <= 0:
        return np.full(power.shape, floor)
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(power / peak)
    return np.clip(db, floor, 0.0)


def _overlay_caustic(ax, fmap: FieldMap, trajectory: TrajectoryParams | None):
    if trajectory is None:
        return
    z = fmap.grid.z_coords
    x = caustic_x(trajectory, z)
    inside = (x >= fmap.grid.x_min) & (x <= fmap.grid.x_max)
    if inside.any():
        ax.plot(x[inside], z[inside], "w--", linewidth=0.8, label="caustic")
        ax.legend(loc="upper right", fontsize=8)


def render_field_png(fmap: FieldMap, path, trajectory: TrajectoryParams | None = None,
                     rx=None, title: str = "") -> None:
    """Log-power heat map of a field map, caustic and receiver overlaid."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    extent = (fmap.grid.x_min, fmap.grid.x_max, fmap.grid.z_min, fmap.grid.z_max)
    im = ax.imshow(_power_db(fmap), origin="lower", extent=extent, aspect="auto",
                   cmap="inferno")
    fig.colorbar(im, ax=ax, label="power density below peak (dB)")
    _overlay_caustic(ax, fmap, trajectory)
    if rx is not None:
        ax.plot([rx.x], [rx.z], "c^", markersize=6)
    ax.set_xlabel("x (m)")
    ax.set_ylabel("z (m)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_secrecy_png(grid, secrecy: np.ndarray, s_max: float, path,
                       rx=None, title: str = "") -> None:
    """Secrecy-rate map; diverging scale centred on S = 0."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    extent = (grid.x_min, grid.x_max, grid.z_min, grid.z_max)
    im = ax.imshow(secrecy, origin="lower", extent=extent, aspect="auto",
                   cmap="RdYlGn", vmin=-s_max, vmax=s_max)
    fig.colorbar(im, ax=ax, label="secrecy rate (bits/s/Hz)")
    if rx is not None:
        ax.plot([rx.x], [rx.z], "k^", markersize=6)
    ax.set_xlabel("x (m)")
    ax.set_ylabel("z (m)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_los_png(results, path, title: str = "") -> None:
    """Line-of-sight sweep: power ratio on top, secrecy rate below.

    `results` is a list of (label, LosSweepResult); one curve per entry.
    """
    fig, (ax_ratio, ax_s) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    for label, result in results:
        with np.errstate(divide="ignore"):
            ratio_db = 10.0 * np.log10(result.power_ratio)
        ax_ratio.plot(result.z_eve, ratio_db, label=label)
        ax_s.plot(result.z_eve, result.secrecy, label=label)
    ax_ratio.set_ylabel("eavesdropper/receiver power (dB)")
    ax_ratio.axhline(0.0, color="gray", linewidth=0.6)
    ax_s.set_ylabel("secrecy rate (bits/s/Hz)")
    ax_s.set_xlabel("eavesdropper depth z (m)")
    if len(results) > 1:
        ax_ratio.legend(fontsize=8)
    if title:
        ax_ratio.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_beta_png(result, path, title: str = "") -> None:
    """Curvature sweep: receiver power curve, plus the secrecy map if swept."""
    panels = 2 if result.secrecy is not None else 1
    fig, axes = plt.subplots(panels, 1, figsize=(6.0, 3.2 * panels), squeeze=False)
    ax = axes[0][0]
    ax.plot(result.beta, 1e3 * result.p_rx_density, color="tab:blue")
    ax.set_xlabel("curvature beta (1/m)")
    ax.set_ylabel("receiver power density (mW/m$^2$)")
    if title:
        ax.set_title(title)
    if result.secrecy is not None:
        ax2 = axes[1][0]
        mesh = ax2.pcolormesh(result.beta, result.z_eve, result.secrecy.T,
                              cmap="RdYlGn", shading="nearest")
        fig.colorbar(mesh, ax=ax2, label="secrecy rate (bits/s/Hz)")
        ax2.set_xlabel("curvature beta (1/m)")
        ax2.set_ylabel("eavesdropper depth z (m)")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_coverage_png(rows, path, sweep_label: str, title: str = "") -> None:
    """Coverage probabilities with error bars, one curve per threshold."""
    values = [value for value, result, _ in rows if result is not None]
    results = [result for _, result, _ in rows if result is not None]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if results:
        thresholds = results[0].thresholds
        for idx, m in enumerate(thresholds):
            probs = [r.probabilities[idx] for r in results]
            errs = [r.standard_errors[idx] for r in results]
            ax.errorbar(values, probs, yerr=errs, capsize=2,
                        label=f"M = {m:g}")
    ax.set_xlabel(sweep_label)
    ax.set_ylabel("Pr[S > M $\\cdot$ S$_{max}$]")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
