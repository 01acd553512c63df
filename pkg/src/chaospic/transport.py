"""Projected drift-kick-drift transport with boundary projections.

Drifts are exact in coefficient space (the advection is linear in z).  The
kick and both boundary treatments act node-wise: evaluate the expansion at
the quadrature nodes, apply the deterministic rule per node, and project the
modified node values back onto the basis.  Rows whose nodes all stay inside
the domain are left untouched bit for bit.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .fields import NodeFieldSet, SpatialGrid, cell_index, fields_at_all_nodes
from .gpc import GpcBasis, project_rows
from .particles import STREAM_COLLISION_POOL, STREAM_COLLISION_XI, ChaosEnsemble, stream


def half_drift(ens: ChaosEnsemble, dt: float) -> None:
    """x += v * dt/2 for every coefficient (exact in coefficient space)."""
    ens.x_coeffs += ens.v_coeffs * (0.5 * dt)


def gather_field(positions: np.ndarray, e_field: np.ndarray, grid: SpatialGrid,
                 gather: str = "linear") -> np.ndarray:
    """Field values at node-evaluated positions; e_field rows are per node.

    gather='linear' interpolates between adjacent cell-centered values (the
    force is then continuous in x, hence in z, which the spectral accuracy in
    the random input depends on); gather='cell' is the raw indicator lookup.
    """
    cols = np.arange(e_field.shape[0])
    if gather == "cell":
        return e_field[cols, cell_index(positions, grid)]
    if gather != "linear":
        raise ConfigurationError(f"unknown field gather {gather!r}")
    offsets = positions - (grid.x_min + 0.5 * grid.dx)
    if grid.bc == "periodic":
        g = np.mod(offsets, grid.length) / grid.dx
        i0 = np.floor(g).astype(np.int64)
        frac = g - i0
        i0 = np.mod(i0, grid.n_cells)
        i1 = np.mod(i0 + 1, grid.n_cells)
    else:
        # Constant extrapolation in the half-cells next to the walls.
        g = np.clip(offsets / grid.dx, 0.0, float(grid.n_cells - 1))
        i0 = np.minimum(np.floor(g).astype(np.int64), grid.n_cells - 2) \
            if grid.n_cells > 1 else np.zeros_like(g, dtype=np.int64)
        frac = g - i0
        i1 = np.minimum(i0 + 1, grid.n_cells - 1)
    return (1.0 - frac) * e_field[cols, i0] + frac * e_field[cols, i1]


def kick(ens: ChaosEnsemble, fields: NodeFieldSet, basis: GpcBasis, grid: SpatialGrid, dt: float,
         gather: str = "linear") -> None:
    """v_h += dt * sum_k w_k E(z_k, x(z_k)) psi_h(z_k)."""
    positions = ens.positions_at_nodes(basis)
    e_vals = gather_field(positions, fields.e_field, grid, gather)
    ens.v_coeffs += dt * project_rows(e_vals, basis)


def apply_periodic_bc(ens: ChaosEnsemble, basis: GpcBasis, grid: SpatialGrid,
                      mode: str = "shift") -> None:
    """Wrap positions back into [x_min, x_max).

    mode='shift' (default) wraps the mode-0 coefficient only: a shift by a
    whole number of periods is exact in coefficient space, and the residual
    z-spread of a particle is handled by the modular cell lookup, so nothing
    is ever lost to re-projection.  mode='project' is the literal node-wise
    rule (wrap every node value, project back); once a particle's expansion
    straddles the boundary at some z the projected jump contaminates its node
    values with Gibbs oscillations of the size of the domain, so this mode is
    kept for comparison, not production.
    """
    if mode == "shift":
        offsets = ens.x_coeffs[:, 0] - grid.x_min
        span = grid.length
        rows = (offsets < 0.0) | (offsets >= span)
        if not np.any(rows):
            return
        far = (offsets < -span) | (offsets >= 2.0 * span)
        ens.multi_period_wraps += int(np.count_nonzero(far))
        ens.x_coeffs[rows, 0] = grid.x_min + np.mod(offsets[rows], span)
        return
    if mode != "project":
        raise ConfigurationError(f"unknown periodic bc mode {mode!r}")
    positions = ens.positions_at_nodes(basis)
    outside = (positions < grid.x_min) | (positions >= grid.x_max)
    rows = np.flatnonzero(outside.any(axis=1))
    if rows.size == 0:
        return
    span = grid.length
    offsets = positions[rows] - grid.x_min
    far = (offsets < -span) | (offsets >= 2.0 * span)
    if np.any(far):
        ens.multi_period_wraps += int(np.count_nonzero(far))
    wrapped = grid.x_min + np.mod(offsets, span)
    ens.x_coeffs[rows] = project_rows(wrapped, basis)


def apply_reflecting_bc(ens: ChaosEnsemble, basis: GpcBasis, grid: SpatialGrid,
                        rule: str = "fold") -> None:
    """Reflect node positions at the walls, flipping the node velocity.

    rule='fold' mirrors the position back inside (x -> 2 x_wall - x, possibly
    repeated for large excursions).  rule='sign' applies the literal
    x -> wall - |x - wall| * sgn(v) variant; values it leaves outside are
    folded afterwards and counted as multi-period events.
    """
    if rule not in ("fold", "sign"):
        raise ConfigurationError(f"unknown reflecting rule {rule!r}")
    positions = ens.positions_at_nodes(basis)
    outside = (positions < grid.x_min) | (positions > grid.x_max)
    rows = np.flatnonzero(outside.any(axis=1))
    if rows.size == 0:
        return
    span = grid.length
    x = positions[rows]
    v = ens.velocities_at_nodes(basis)[rows]
    out = outside[rows]
    x_out = x[out]
    v_out = v[out]

    def fold(vals):
        offsets = np.mod(vals - grid.x_min, 2.0 * span)
        return grid.x_min + np.where(offsets > span, 2.0 * span - offsets, offsets)

    far = (x_out < grid.x_min - span) | (x_out > grid.x_max + span)
    ens.multi_period_wraps += int(np.count_nonzero(far))

    if rule == "sign":
        below = x_out < grid.x_min
        wall = np.where(below, grid.x_min, grid.x_max)
        x_new = wall - np.abs(x_out - wall) * np.sign(v_out)
        # The sign variant leaves outward-moving particles outside; fold those.
        still = (x_new < grid.x_min) | (x_new > grid.x_max)
        if np.any(still):
            x_new[still] = fold(x_new[still])
            ens.multi_period_wraps += int(np.count_nonzero(still))
    else:
        x_new = fold(x_out)

    x[out] = x_new
    v[out] = -v_out
    ens.x_coeffs[rows] = project_rows(x, basis)
    ens.v_coeffs[rows] = project_rows(v, basis)


def apply_bc(ens: ChaosEnsemble, basis: GpcBasis, grid: SpatialGrid, particle_bc: str,
             reflect_rule: str = "fold", periodic_mode: str = "shift") -> None:
    if particle_bc == "periodic":
        apply_periodic_bc(ens, basis, grid, mode=periodic_mode)
    elif particle_bc == "reflecting":
        apply_reflecting_bc(ens, basis, grid, rule=reflect_rule)
    else:
        raise ConfigurationError(f"unknown particle bc {particle_bc!r}")


def transport_step(ens: ChaosEnsemble, basis: GpcBasis, grid: SpatialGrid, dt: float,
                   particle_bc: str = "periodic", reflect_rule: str = "fold",
                   periodic_mode: str = "shift", gather: str = "linear",
                   kernel: str = "linear", workers: int = 1,
                   disable_field: bool = False) -> NodeFieldSet:
    """Drift dt/2, boundary, per-node field solve, kick dt, drift dt/2, boundary.

    Returns the mid-step field set (the one the kick used).  disable_field is
    a test hook that replaces the solve by a zero field.
    """
    half_drift(ens, dt)
    apply_bc(ens, basis, grid, particle_bc, reflect_rule, periodic_mode)
    if disable_field:
        fields = NodeFieldSet(
            rho=np.zeros((basis.node_count, grid.n_cells)),
            phi=np.zeros((basis.node_count, grid.n_cells + 1)),
            e_field=np.zeros((basis.node_count, grid.n_cells)),
        )
    else:
        fields = fields_at_all_nodes(ens, basis, grid, workers=workers, kernel=kernel)
        kick(ens, fields, basis, grid, dt, gather=gather)
    half_drift(ens, dt)
    apply_bc(ens, basis, grid, particle_bc, reflect_rule, periodic_mode)
    return fields


def strang_step(ens: ChaosEnsemble, basis: GpcBasis, grid: SpatialGrid, dt: float, nu: float,
                step_index: int, seed: int, particle_bc: str = "periodic",
                reflect_rule: str = "fold", periodic_mode: str = "shift",
                gather: str = "linear", kernel: str = "linear",
                pool_mode: str = "per-step", pool=None,
                workers: int = 1, splitting: str = "strang",
                disable_field: bool = False) -> tuple[NodeFieldSet, float]:
    """One full time step: collision half, transport, collision half.

    Collision substreams are keyed by (seed, tag, 2*step_index + half) so a
    rerun of any step range reproduces the same draws.  splitting='lie'
    applies a single collision of length dt before the transport instead.
    Returns the mid-step fields and the mean replaced fraction.
    """
    from .collision import bgk_step, build_maxwellian_pool

    if splitting not in ("strang", "lie"):
        raise ConfigurationError(f"unknown splitting {splitting!r}")

    def collide(half: int, length: float) -> float:
        sub = 2 * step_index + half
        xi_rng = stream(seed, STREAM_COLLISION_XI, sub)
        if pool_mode == "initial":
            step_pool = pool
        else:
            step_pool = build_maxwellian_pool(ens.count, stream(seed, STREAM_COLLISION_POOL, sub))
        return bgk_step(ens, basis, grid, length, nu, step_pool, xi_rng)

    fractions = []
    if nu > 0:
        fractions.append(collide(0, 0.5 * dt if splitting == "strang" else dt))
    fields = transport_step(ens, basis, grid, dt, particle_bc, reflect_rule, periodic_mode,
                            gather, kernel, workers, disable_field)
    if nu > 0 and splitting == "strang":
        fractions.append(collide(1, 0.5 * dt))
    replaced = float(np.mean(fractions)) if fractions else 0.0
    return fields, replaced
