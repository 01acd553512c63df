"""Relaxation collision step projected onto the chaos basis.

One exponential-relaxation event is drawn per particle per step and shared
across the random input: with probability exp(-nu dt) the particle keeps its
velocity expansion, otherwise every coefficient is replaced by the quadrature
projection of the cell Maxwellian sample U + sqrt(T) * v_i evaluated node by
node.  The same rescaled normal draw v_i enters at every node, which is what
makes the relaxation exact in time for any dt and nu.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SamplingError
from .fields import SpatialGrid, cell_index
from .gpc import GpcBasis, project_rows
from .particles import STREAM_COLLISION_POOL, ChaosEnsemble, stream


@dataclass
class NodeCellMoments:
    """Per-node, per-cell empirical moments.

    rho is a physical mass density (weight * count / dx); U and T are the
    count-normalized cell mean velocity and temperature.  Empty cells carry
    zero moments.
    """

    rho: np.ndarray
    U: np.ndarray
    T: np.ndarray
    counts: np.ndarray


@dataclass
class MaxwellianPool:
    """Standard-normal draws rescaled to exact sample mean 0 and energy 1/2."""

    values: np.ndarray


def _moments_from_nodes(idx: np.ndarray, velocities: np.ndarray, node_weight: np.ndarray,
                        grid: SpatialGrid) -> NodeCellMoments:
    n_nodes = idx.shape[1]
    n_cells = grid.n_cells
    counts = np.empty((n_nodes, n_cells), dtype=np.int64)
    rho = np.empty((n_nodes, n_cells))
    mean_v = np.zeros((n_nodes, n_cells))
    temp = np.zeros((n_nodes, n_cells))
    for k in range(n_nodes):
        cells = idx[:, k]
        v = velocities[:, k]
        c = np.bincount(cells, minlength=n_cells)
        occupied = c > 0
        u_k = np.zeros(n_cells)
        u_k[occupied] = np.bincount(cells, weights=v, minlength=n_cells)[occupied] / c[occupied]
        dev = v - u_k[cells]
        t_k = np.zeros(n_cells)
        t_k[occupied] = np.bincount(cells, weights=dev * dev, minlength=n_cells)[occupied] / c[occupied]
        counts[k] = c
        rho[k] = node_weight[k] * c / grid.dx
        mean_v[k] = u_k
        temp[k] = t_k
    return NodeCellMoments(rho=rho, U=mean_v, T=temp, counts=counts)


def compute_node_moments(ens: ChaosEnsemble, basis: GpcBasis, grid: SpatialGrid) -> NodeCellMoments:
    """Cell moments at every quadrature node of the current ensemble."""
    positions = ens.positions_at_nodes(basis)
    velocities = ens.velocities_at_nodes(basis)
    idx = cell_index(positions, grid)
    return _moments_from_nodes(idx, velocities, ens.node_weight, grid)


def build_maxwellian_pool(count: int, rng) -> MaxwellianPool:
    """Draw and rescale the shared normal samples.

    rng may be a Generator or an integer seed.  The rescaling
    v -> (v - lambda)/tau with tau^2 = 2*E - V^2 and lambda = V pins the
    sample mean to 0 and the sample energy sum(v^2)/(2N) to 1/2 exactly;
    being linear it leaves the draws normally distributed.
    """
    if count < 2:
        raise SamplingError(f"Maxwellian pool needs at least 2 samples, got {count}")
    if not hasattr(rng, "standard_normal"):
        rng = stream(int(rng), STREAM_COLLISION_POOL)
    raw = rng.standard_normal(count)
    vbar = raw.mean()
    ebar = (raw @ raw) / (2.0 * count)
    tau_sq = 2.0 * ebar - vbar * vbar
    if tau_sq <= 0.0:
        raise SamplingError("zero-variance normal sample; retry with the next stream")
    return MaxwellianPool(values=(raw - vbar) / np.sqrt(tau_sq))


def bgk_step(ens: ChaosEnsemble, basis: GpcBasis, grid: SpatialGrid, dt: float, nu: float,
             pool: MaxwellianPool, rng) -> float:
    """Advance the collision dynamics over dt in place; returns the replaced fraction.

    Positions are untouched, so per-node cell counts are conserved exactly.
    """
    keep_prob = np.exp(-nu * dt)
    xi = rng.random(ens.count)
    replace = xi >= keep_prob
    n_replace = int(np.count_nonzero(replace))
    if n_replace == 0:
        return 0.0

    positions = ens.positions_at_nodes(basis)
    velocities = ens.velocities_at_nodes(basis)
    idx = cell_index(positions, grid)
    moments = _moments_from_nodes(idx, velocities, ens.node_weight, grid)

    temp = moments.T
    negative = temp < 0.0
    if np.any(negative):
        ens.clamped_temperature += int(np.count_nonzero(negative))
        temp = np.maximum(temp, 0.0)

    idx_r = idx[replace]
    cols = np.arange(basis.node_count)
    u_vals = moments.U[cols, idx_r]
    t_vals = temp[cols, idx_r]
    node_vals = u_vals + np.sqrt(t_vals) * pool.values[replace][:, None]
    ens.v_coeffs[replace] = project_rows(node_vals, basis)
    return n_replace / ens.count
