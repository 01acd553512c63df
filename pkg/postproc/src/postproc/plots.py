"""Figure rendering in the style of the benchmark write-ups."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .artifacts import ArtifactError, RunArtifacts


def _ensure_out(out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def plot_energy(artifacts: RunArtifacts, out_dir, rate_guides=()) -> list[Path]:
    """Log of mean and variance of the field energy, with slope guide lines."""
    series = artifacts.energy()
    out = _ensure_out(out_dir)
    written = []
    panels = [("mean", series.mean, r"$\log\,\mathrm{E}[\mathcal{E}]$"),
              ("variance", series.variance, r"$\log\,\mathrm{Var}[\mathcal{E}]$")]
    for name, values, label in panels:
        fig, ax = plt.subplots(figsize=(5.2, 3.6))
        positive = values > 0
        ax.semilogy(series.times[positive], values[positive], lw=1.2, color="tab:blue")
        for gamma in rate_guides:
            # Anchor each guide at the first positive sample.
            t0 = series.times[positive][0]
            v0 = values[positive][0]
            scale = 1.0 if name == "mean" else 2.0  # variance decays twice as fast
            ax.semilogy(series.times, v0 * np.exp(scale * gamma * (series.times - t0)),
                        "--", color="tab:red", lw=1.0, label=rf"$\gamma={gamma:+.4f}$")
        if rate_guides:
            ax.legend(frameon=False, fontsize=8)
        ax.set_xlabel(r"$t$")
        ax.set_ylabel(label)
        fig.tight_layout()
        path = out / f"energy_{name}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written


def plot_phase_space(artifacts: RunArtifacts, out_dir, times=None) -> list[Path]:
    """Heatmaps of the mean and variance of the reconstructed density."""
    available = artifacts.dump_times("density_mean")
    if not available:
        raise ArtifactError("run has no phase-space dumps")
    times = available if times is None else list(times)
    (v_lo, v_hi), _ = artifacts.v_grid
    x_lo, x_hi = artifacts.domain
    out = _ensure_out(out_dir)
    written = []
    for t in times:
        for stat in ("mean", "var"):
            matrix = artifacts.density(stat, t)
            fig, ax = plt.subplots(figsize=(4.6, 3.6))
            im = ax.imshow(matrix.T, origin="lower", aspect="auto",
                           extent=(x_lo, x_hi, v_lo, v_hi), cmap="viridis")
            fig.colorbar(im, ax=ax, shrink=0.85)
            ax.set_xlabel(r"$x$")
            ax.set_ylabel(r"$v$")
            ax.set_title(f"{stat} of f at t={t:g}", fontsize=10)
            fig.tight_layout()
            path = out / f"phase_{stat}_t{t:g}.png"
            fig.savefig(path, dpi=150)
            plt.close(fig)
            written.append(path)
    return written


def plot_sod(artifacts: RunArtifacts, reference: RunArtifacts, out_dir, time=None) -> list[Path]:
    """Density and temperature profiles with min/max bands over a reference."""
    times = artifacts.dump_times("moments")
    if not times:
        raise ArtifactError("run has no moment dumps")
    t = times[-1] if time is None else time
    if artifacts.n_cells != reference.n_cells or artifacts.domain != reference.domain:
        raise ArtifactError(
            f"grid mismatch: run has {artifacts.n_cells} cells on {artifacts.domain}, "
            f"reference {reference.n_cells} on {reference.domain}"
        )
    mom = artifacts.moments(t)
    ref = reference.moments(t)
    out = _ensure_out(out_dir)
    written = []
    for name, label in (("rho", r"$\mathrm{E}[\rho]$"), ("T", r"$\mathrm{E}[T]$")):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        x = mom["x_center"]
        ax.fill_between(x, mom[f"{name}_min"], mom[f"{name}_max"],
                        alpha=0.25, color="tab:blue", label="min/max over nodes")
        ax.plot(x, mom[f"{name}_mean"], color="tab:blue", lw=1.3, label="run")
        ax.plot(ref["x_center"], ref[f"{name}_mean"], "k--", lw=1.0, label="reference")
        ax.set_xlabel(r"$x$")
        ax.set_ylabel(label)
        ax.legend(frameon=False, fontsize=8)
        fig.tight_layout()
        path = out / f"sod_{name}_t{t:g}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written


def plot_convergence(artifacts: RunArtifacts, out_dir) -> list[Path]:
    """Semilog decay of the L2 error against the chaos order."""
    orders, errors = artifacts.convergence()
    out = _ensure_out(out_dir)
    fig, ax = plt.subplots(figsize=(4.6, 3.6))
    ax.semilogy(orders, errors, "o-", color="tab:blue", lw=1.2)
    ax.set_xlabel("chaos order")
    ax.set_ylabel(r"$L^2$ error")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    path = out / "convergence.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]
