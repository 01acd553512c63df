"""Charge deposition and the per-quadrature-node electrostatic field solve.

The potential satisfies phi'' = 1 - rho (motionless neutralizing ion
background of unit density) and the force field is E = -phi'.  phi lives on
the staggered grid of cell edges (n_cells + 1 points); E is returned at cell
centers so the velocity kick can use a plain cell lookup.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import ConfigurationError, LogicError
from .gpc import GpcBasis


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform cells on [x_min, x_max] plus the staggered edge grid.

    bc selects the Poisson boundary treatment: 'periodic' (gauge phi[0] = 0,
    mean source removed) or 'dirichlet-zero' (phi = 0 at both ends).
    """

    x_min: float
    x_max: float
    n_cells: int
    bc: str = "periodic"
    dx: float = field(init=False)
    stagger: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_cells < 1:
            raise ConfigurationError(f"n_cells must be >= 1, got {self.n_cells}")
        if not self.x_max > self.x_min:
            raise ConfigurationError(f"degenerate domain [{self.x_min}, {self.x_max}]")
        if self.bc not in ("periodic", "dirichlet-zero"):
            raise ConfigurationError(f"unknown grid bc {self.bc!r}")
        object.__setattr__(self, "dx", (self.x_max - self.x_min) / self.n_cells)
        object.__setattr__(self, "stagger", np.linspace(self.x_min, self.x_max, self.n_cells + 1))

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def centers(self) -> np.ndarray:
        return self.stagger[:-1] + 0.5 * self.dx


@dataclass
class NodeFieldSet:
    """Per-quadrature-node density, potential and electric field.

    rho: (K, n_cells) cell densities; phi: (K, n_cells + 1) potentials on the
    staggered points; e_field: (K, n_cells) cell-centered field values.
    """

    rho: np.ndarray
    phi: np.ndarray
    e_field: np.ndarray


def cell_index(positions: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """Cell index of each position; x_max itself maps into the last cell.

    Periodic grids reduce positions modulo the domain length first: position
    enters the dynamics only through this lookup, so periodic runs never need
    to re-project wrapped coefficients.  Non-periodic grids clamp outside
    values into the boundary cell; a reflecting projection cannot pin every
    node evaluation of a truncated expansion inside the domain once a
    reflection makes x(z) discontinuous, and the overshoots belong physically
    to the cell at the wall they crossed.
    """
    offsets = np.asarray(positions) - grid.x_min
    if grid.bc == "periodic":
        offsets = np.mod(offsets, grid.length)
    idx = (offsets / grid.dx).astype(np.int64)
    return np.clip(idx, 0, grid.n_cells - 1)


def deposit_density(positions: np.ndarray, weight: float, grid: SpatialGrid) -> np.ndarray:
    """Top-hat deposition: rho[l] = weight * count_l / dx.

    Rejects out-of-domain positions: callers must apply boundary conditions
    first.  (The node-resolved pipeline deposits through _deposit, which
    clamps truncation overshoots instead; see cell_index.)
    """
    positions = np.asarray(positions)
    if positions.size and (positions.min() < grid.x_min or positions.max() > grid.x_max):
        raise LogicError("position outside the domain: apply boundary conditions before depositing")
    return _deposit(positions, weight, grid)


def _deposit(positions: np.ndarray, weight: float, grid: SpatialGrid,
             kernel: str = "tophat") -> np.ndarray:
    """Deposit one realization onto the cells.

    kernel='tophat' counts particles per cell; kernel='linear' splits each
    particle between the two nearest cell centers (the density then varies
    continuously with position, which the spectral accuracy of the field
    chain in the random input relies on).  Both conserve mass exactly:
    periodic grids wrap the stencil, others clamp the spill into the edge
    cell.
    """
    if kernel == "tophat":
        counts = np.bincount(cell_index(positions, grid), minlength=grid.n_cells)
        return weight * counts / grid.dx
    if kernel != "linear":
        raise LogicError(f"unknown deposit kernel {kernel!r}")
    n = grid.n_cells
    offsets = positions - (grid.x_min + 0.5 * grid.dx)
    if grid.bc == "periodic":
        g = np.mod(offsets, grid.length) / grid.dx
        i0 = np.floor(g).astype(np.int64)
        frac = g - i0
        i0 = np.mod(i0, n)
        i1 = np.mod(i0 + 1, n)
    else:
        g = np.clip(offsets / grid.dx, 0.0, float(n - 1))
        i0 = np.minimum(np.floor(g).astype(np.int64), max(n - 2, 0))
        frac = g - i0
        i1 = np.minimum(i0 + 1, n - 1)
    rho = np.bincount(i0, weights=1.0 - frac, minlength=n)
    rho += np.bincount(i1, weights=frac, minlength=n)
    return weight * rho / grid.dx


def solve_poisson(rho: np.ndarray, grid: SpatialGrid) -> tuple[np.ndarray, np.ndarray]:
    """Solve phi'' = 1 - rho on the staggered points; return (phi, E at centers).

    The cell-centered source is averaged onto interior staggered points
    (second order).  Periodic runs remove the mean source first (the discrete
    problem is singular otherwise) and fix the gauge phi[0] = 0; an all-zero
    right-hand side short-circuits to phi = E = 0.
    """
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (grid.n_cells,):
        raise LogicError(f"expected {grid.n_cells} cell densities, got {rho.shape}")
    n = grid.n_cells
    dx = grid.dx
    phi = np.zeros(n + 1)

    if grid.bc == "periodic":
        # Source on staggered points 0..n-1 (point n aliases point 0).
        src = 1.0 - 0.5 * (rho + np.roll(rho, 1))
        src -= src.mean()
        if not np.any(src):
            return phi, np.zeros(n)
        # Gauge phi[0] = 0 turns the cyclic system into a plain tridiagonal
        # one for phi[1..n-1]; the dropped row is implied by the zero-mean
        # source (the periodic Laplacian rows sum to zero).
        m = n - 1
        ab = np.zeros((3, m))
        ab[0, 1:] = 1.0
        ab[1, :] = -2.0
        ab[2, :-1] = 1.0
        phi[1:n] = solve_banded((1, 1), ab, src[1:n] * dx * dx)
        phi[n] = phi[0]
    else:
        src = 1.0 - 0.5 * (rho[:-1] + rho[1:])
        m = n - 1
        ab = np.zeros((3, m))
        ab[0, 1:] = 1.0
        ab[1, :] = -2.0
        ab[2, :-1] = 1.0
        phi[1:n] = solve_banded((1, 1), ab, src * dx * dx)

    e_field = -(phi[1:] - phi[:-1]) / dx
    return phi, e_field


def node_field_set(
    positions_by_node: np.ndarray,
    weights_by_node: np.ndarray,
    grid: SpatialGrid,
    workers: int = 1,
    kernel: str = "linear",
) -> NodeFieldSet:
    """Deposit and solve independently for each realization column.

    positions_by_node has shape (N, J): column j holds every particle's
    position at realization j.  weights_by_node gives the particle weight per
    realization (scalar weight broadcast as a length-J array).
    """
    n_part, n_real = positions_by_node.shape
    rho = np.empty((n_real, grid.n_cells))
    phi = np.empty((n_real, grid.n_cells + 1))
    e_field = np.empty((n_real, grid.n_cells))

    def solve_one(j: int) -> None:
        rho[j] = _deposit(positions_by_node[:, j], weights_by_node[j], grid, kernel)
        phi[j], e_field[j] = solve_poisson(rho[j], grid)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(solve_one, range(n_real)))
    else:
        for j in range(n_real):
            solve_one(j)
    return NodeFieldSet(rho=rho, phi=phi, e_field=e_field)


def fields_at_all_nodes(ens, basis: GpcBasis, grid: SpatialGrid, workers: int = 1,
                        kernel: str = "linear") -> NodeFieldSet:
    """Field set at every quadrature node of the basis."""
    positions = ens.x_coeffs @ basis.node_table.T
    return node_field_set(positions, ens.node_weight, grid, workers=workers, kernel=kernel)


def fields_at(ens, basis: GpcBasis, grid: SpatialGrid, z_values: np.ndarray,
              kernel: str = "linear") -> NodeFieldSet:
    """Field set at arbitrary realizations of the random input.

    Used by the spectral-convergence study, which evaluates a low-order
    ensemble on a finer reference rule.
    """
    from .gpc import basis_matrix

    table = basis_matrix(basis.order, basis.support, z_values)
    positions = ens.x_coeffs @ table.T
    weights = ens.weight_at(np.asarray(z_values, dtype=float))
    return node_field_set(positions, weights, grid, kernel=kernel)
