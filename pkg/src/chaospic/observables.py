"""Quantities of interest and their statistics over the random input.

Statistics are always computed on node-evaluated values with the quadrature
weights (the energy and the reconstructed density are nonlinear in the
particle coefficients, so expanding the quantity itself would be wrong).
Variances use the centered sum sum_k w_k (q_k - mean)^2, never a difference
of squares, so they cannot go negative.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import FitError, UsageError
from .fields import NodeFieldSet, SpatialGrid
from .gpc import GpcBasis
from .particles import ChaosEnsemble


def node_statistics(values: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature mean and variance along the node axis (last axis)."""
    mean = values @ weights
    centered = values - mean[..., None]
    return mean, (centered * centered) @ weights


def electric_energy(fields: NodeFieldSet, grid: SpatialGrid) -> np.ndarray:
    """L2 norm of the electric field per node: sqrt(sum_l E_l^2 dx)."""
    return np.sqrt(np.sum(fields.e_field**2, axis=1) * grid.dx)


@dataclass
class EnergyTimeSeries:
    """Electric-energy history: per-node values plus quadrature statistics."""

    times: np.ndarray
    per_node: np.ndarray
    weights: np.ndarray
    mean: np.ndarray = field(init=False)
    variance: np.ndarray = field(init=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.per_node = np.atleast_2d(np.asarray(self.per_node, dtype=float))
        self.mean, self.variance = node_statistics(self.per_node, self.weights)

    def write_csv(self, path) -> None:
        k = self.per_node.shape[1]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "mean_E", "var_E"] + [f"node_{j}" for j in range(k)])
            for i, t in enumerate(self.times):
                row = [t, self.mean[i], self.variance[i], *self.per_node[i]]
                writer.writerow([repr(float(v)) for v in row])

    @classmethod
    def read_csv(cls, path, weights=None) -> "EnergyTimeSeries":
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        data = np.atleast_2d(data)
        k = data.shape[1] - 3
        if weights is None:
            # Plain averaging fallback for post-hoc fits on a bare file.
            weights = np.full(k, 1.0 / k)
        series = cls(times=data[:, 0], per_node=data[:, 3:], weights=np.asarray(weights))
        return series


@dataclass
class PhaseSpaceDensity:
    """Reconstructed phase-space density statistics on an (x, v) grid."""

    x_edges: np.ndarray
    v_edges: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    per_node: np.ndarray | None = None
    clipped_mass: float = 0.0


def reconstruct_density(ens: ChaosEnsemble, basis: GpcBasis, node: int, grid: SpatialGrid,
                        v_cells: int, v_range: tuple[float, float]) -> tuple[np.ndarray, float]:
    """Linear (cloud-in-cell) phase-space histogram at one quadrature node.

    Particles outside v_range are dropped and their mass returned as the
    second value; kernel spill at non-periodic edges is clamped into the edge
    cell so the deposited mass integrates exactly to the kept mass.
    """
    if not 0 <= node < basis.node_count:
        raise UsageError(f"node index {node} outside 0..{basis.node_count - 1}")
    row = basis.node_table[node]
    x = ens.x_coeffs @ row
    v = ens.v_coeffs @ row
    weight = float(ens.node_weight[node])
    v_min, v_max = v_range
    dv = (v_max - v_min) / v_cells

    keep = (v >= v_min) & (v <= v_max)
    clipped = weight * int(np.count_nonzero(~keep))
    x = x[keep]
    v = v[keep]

    gx = (x - grid.x_min) / grid.dx - 0.5
    ix = np.floor(gx).astype(np.int64)
    fx = gx - ix
    gv = (v - v_min) / dv - 0.5
    iv = np.floor(gv).astype(np.int64)
    fv = gv - iv

    if grid.bc == "periodic":
        ix0 = np.mod(ix, grid.n_cells)
        ix1 = np.mod(ix + 1, grid.n_cells)
    else:
        ix0 = np.clip(ix, 0, grid.n_cells - 1)
        ix1 = np.clip(ix + 1, 0, grid.n_cells - 1)
    iv0 = np.clip(iv, 0, v_cells - 1)
    iv1 = np.clip(iv + 1, 0, v_cells - 1)

    hist = np.zeros(grid.n_cells * v_cells)
    for xi, wx in ((ix0, 1.0 - fx), (ix1, fx)):
        for vi, wv in ((iv0, 1.0 - fv), (iv1, fv)):
            hist += np.bincount(xi * v_cells + vi, weights=wx * wv,
                                minlength=grid.n_cells * v_cells)
    hist = hist.reshape(grid.n_cells, v_cells) * (weight / (grid.dx * dv))
    return hist, clipped


def phase_space_density(ens: ChaosEnsemble, basis: GpcBasis, grid: SpatialGrid, v_cells: int,
                        v_range: tuple[float, float], keep_nodes: bool = False) -> PhaseSpaceDensity:
    """Mean/variance over the random input of the reconstructed density."""
    frames = np.empty((basis.node_count, grid.n_cells, v_cells))
    clipped = 0.0
    for k in range(basis.node_count):
        frames[k], miss = reconstruct_density(ens, basis, k, grid, v_cells, v_range)
        clipped += basis.weights[k] * miss
    mean = np.tensordot(basis.weights, frames, axes=(0, 0))
    centered = frames - mean
    variance = np.tensordot(basis.weights, centered * centered, axes=(0, 0))
    return PhaseSpaceDensity(
        x_edges=grid.stagger.copy(),
        v_edges=np.linspace(v_range[0], v_range[1], v_cells + 1),
        mean=mean,
        variance=variance,
        per_node=frames if keep_nodes else None,
        clipped_mass=clipped,
    )


@dataclass
class MomentProfiles:
    """Per-cell statistics of the fluid moments over the random input."""

    x_centers: np.ndarray
    stats: dict  # name -> dict with mean/variance/lo/hi arrays

    def write_csv(self, path) -> None:
        names = list(self.stats)
        header = ["cell", "x_center"]
        for name in names:
            header += [f"{name}_{s}" for s in ("mean", "var", "min", "max")]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for i, xc in enumerate(self.x_centers):
                row = [i, repr(float(xc))]
                for name in names:
                    s = self.stats[name]
                    row += [repr(float(s[key][i])) for key in ("mean", "variance", "lo", "hi")]
                writer.writerow(row)


def moment_profiles(moments, basis: GpcBasis, grid: SpatialGrid) -> MomentProfiles:
    """Quadrature mean/variance plus min/max-across-nodes bands per cell."""
    stats = {}
    for name, values in (("rho", moments.rho), ("U", moments.U), ("T", moments.T)):
        mean, variance = node_statistics(values.T, basis.weights)
        stats[name] = {
            "mean": mean,
            "variance": variance,
            "lo": values.min(axis=0),
            "hi": values.max(axis=0),
        }
    return MomentProfiles(x_centers=grid.centers, stats=stats)


def fit_exponential_rate(series: EnergyTimeSeries, window: tuple[float, float],
                         mode: str = "damping", allow_all_points: bool = False) -> float:
    """Exponential rate of the mean energy: slope of a line through log peaks.

    Local maxima of log mean energy inside the window are detected with
    non-strict comparisons (a flat series is all peaks, slope zero) and a
    least-squares line is fitted through them.  Fewer than three peaks raises
    FitError.  With allow_all_points every window sample enters the fit
    instead: purely growing signals have no oscillation envelope, and their
    few noise blips would otherwise masquerade as the peak train.
    """
    if mode not in ("damping", "growth"):
        raise UsageError(f"unknown fit mode {mode!r}")
    t0, t1 = window
    sel = (series.times >= t0) & (series.times <= t1)
    t = series.times[sel]
    e = series.mean[sel]
    if t.size < 3:
        raise FitError(f"window [{t0}, {t1}] holds only {t.size} samples")
    if np.any(e <= 0.0):
        raise FitError("mean energy is not strictly positive on the window")
    y = np.log(e)
    if allow_all_points:
        return float(np.polyfit(t, y, 1)[0])
    interior = np.arange(1, t.size - 1)
    is_peak = (y[interior] >= y[interior - 1]) & (y[interior] >= y[interior + 1])
    peaks = interior[is_peak]
    if peaks.size < 3:
        raise FitError(
            f"only {peaks.size} log-energy peaks in [{t0}, {t1}]; "
            "need 3 (or pass allow_all_points for monotone signals)"
        )
    return float(np.polyfit(t[peaks], y[peaks], 1)[0])
