"""Orthonormal chaos basis on a uniform random input.

The random input z is uniform on a finite interval [a, b].  The matching
orthonormal polynomial family is the shifted Legendre basis

    psi_h(z) = sqrt(2h + 1) * P_h(2 (z - a)/(b - a) - 1),

normalized against the probability density 1/(b - a), together with the
Gauss-Legendre rule mapped to [a, b] whose weights sum to one.  Everything
downstream (projection of particle coefficients, node moments, per-node
Poisson solves) evaluates through the cached node table of this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, UsageError

# A chaos vector is a plain 1-D float array of length order+1; coefficient h
# multiplies psi_h.  Deterministic quantities have zeros beyond index 0.
ChaosVector = np.ndarray


@dataclass(frozen=True)
class GpcBasis:
    """Shifted-Legendre orthonormal basis with its Gauss quadrature rule.

    Attributes
    ----------
    order : int
        Highest polynomial degree M (>= 0).
    support : (float, float)
        Interval [a, b] of the uniform random input.
    node_count : int
        Number of quadrature nodes K (>= M + 1).
    nodes, weights : ndarray, shape (K,)
        Gauss-Legendre nodes mapped into [a, b]; weights normalized to sum 1.
    node_table : ndarray, shape (K, M + 1)
        Cached psi_h(z_k); inner loops reuse it N times per step.
    """

    order: int
    support: tuple[float, float]
    node_count: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    node_table: np.ndarray = field(repr=False)
    family: str = "legendre-uniform"


def build_basis(order: int, support: tuple[float, float], node_count: int | None = None) -> GpcBasis:
    """Construct the basis; node_count defaults to 2 (order + 1).

    Raises ConfigurationError for node_count < order + 1 or a degenerate
    support interval.
    """
    if order < 0:
        raise ConfigurationError(f"chaos order must be >= 0, got {order}")
    a, b = float(support[0]), float(support[1])
    if not b > a:
        raise ConfigurationError(f"degenerate support interval [{a}, {b}]")
    if node_count is None:
        node_count = 2 * (order + 1)
    if node_count < order + 1:
        raise ConfigurationError(
            f"node_count={node_count} below order+1={order + 1}: quadrature cannot resolve the basis"
        )
    ref_nodes, ref_weights = np.polynomial.legendre.leggauss(node_count)
    nodes = a + (b - a) * 0.5 * (ref_nodes + 1.0)
    weights = ref_weights / ref_weights.sum()
    table = basis_matrix(order, (a, b), nodes)
    return GpcBasis(
        order=order,
        support=(a, b),
        node_count=node_count,
        nodes=nodes,
        weights=weights,
        node_table=table,
    )


def basis_matrix(order: int, support: tuple[float, float], z: np.ndarray) -> np.ndarray:
    """Evaluate psi_0..psi_order at points z; returns shape (len(z), order+1).

    Uses the Legendre three-term recurrence on the mapped variable
    zeta = 2 (z - a)/(b - a) - 1.
    """
    a, b = support
    z = np.atleast_1d(np.asarray(z, dtype=float))
    zeta = 2.0 * (z - a) / (b - a) - 1.0
    table = np.empty((z.size, order + 1))
    table[:, 0] = 1.0
    if order >= 1:
        table[:, 1] = zeta
    for h in range(1, order):
        table[:, h + 1] = ((2 * h + 1) * zeta * table[:, h] - h * table[:, h - 1]) / (h + 1)
    table *= np.sqrt(2.0 * np.arange(order + 1) + 1.0)
    return table


def eval_basis(basis: GpcBasis, h: int, z: float) -> float:
    """psi_h(z) for a single mode and point; psi_0 is identically 1."""
    if not 0 <= h <= basis.order:
        raise UsageError(f"mode index {h} outside 0..{basis.order}")
    return float(basis_matrix(basis.order, basis.support, np.array([z]))[0, h])


def eval_at_nodes(vec: ChaosVector, basis: GpcBasis) -> np.ndarray:
    """Realize a chaos vector at every quadrature node: out[k] = sum_h c_h psi_h(z_k)."""
    vec = np.asarray(vec, dtype=float)
    if vec.shape != (basis.order + 1,):
        raise UsageError(f"coefficient length {vec.shape} does not match order {basis.order}")
    return basis.node_table @ vec


def project(node_values: np.ndarray, basis: GpcBasis) -> ChaosVector:
    """Weighted projection of node values onto the basis.

    coeffs[h] = sum_k w_k * values[k] * psi_h(z_k), the quadrature form of
    the expectation E_z[value * psi_h].
    """
    node_values = np.asarray(node_values, dtype=float)
    if node_values.shape != (basis.node_count,):
        raise UsageError(f"expected {basis.node_count} node values, got {node_values.shape}")
    return (node_values * basis.weights) @ basis.node_table


def project_rows(node_values: np.ndarray, basis: GpcBasis) -> np.ndarray:
    """Row-wise projection: (N, K) node values -> (N, M+1) coefficients."""
    return (node_values * basis.weights) @ basis.node_table


def mean_variance(vec: ChaosVector) -> tuple[float, float]:
    """Mean and variance of the expanded quantity over the random input.

    Orthonormality makes these coeffs[0] and sum of squared higher modes.
    """
    vec = np.asarray(vec, dtype=float)
    return float(vec[0]), float(np.sum(vec[1:] ** 2))
