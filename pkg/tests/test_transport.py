"""Drift, kick, boundary projections, and the split step."""

import numpy as np
import pytest

from chaospic.collision import build_maxwellian_pool
from chaospic.fields import NodeFieldSet, SpatialGrid, fields_at_all_nodes
from chaospic.gpc import build_basis, project_rows
from chaospic.observables import electric_energy
from chaospic.particles import AffineLaw, ChaosEnsemble, InitialCondition, sample_initial
from chaospic.transport import (
    apply_periodic_bc,
    apply_reflecting_bc,
    gather_field,
    half_drift,
    kick,
    strang_step,
    transport_step,
)

L = 4.0 * np.pi
SQRT3 = np.sqrt(3.0)


def single_particle(basis, x_coeffs, v_coeffs):
    m1 = basis.order + 1
    x = np.zeros((1, m1))
    v = np.zeros((1, m1))
    x[0, : len(x_coeffs)] = x_coeffs
    v[0, : len(v_coeffs)] = v_coeffs
    return ChaosEnsemble(x_coeffs=x, v_coeffs=v, particle_weight=1.0,
                         node_weight=np.ones(basis.node_count),
                         mass_law=AffineLaw(1.0), seed=0)


def landau_ensemble(basis, n=20_000, seed=5, alpha=AffineLaw(0.05, 0.1)):
    ic = InitialCondition(kind="perturbed-maxwellian", domain=(0.0, L), wave_number=0.5,
                          amplitude=alpha, temperature=AffineLaw(1.0))
    return sample_initial(ic, basis, n, seed)


class TestDrift:
    def test_zero_velocity_is_identity(self):
        basis = build_basis(2, (0.0, 1.0), 6)
        ens = single_particle(basis, [1.0, 0.2, 0.0], [0.0, 0.0, 0.0])
        half_drift(ens, 2.0)
        assert np.array_equal(ens.x_coeffs, [[1.0, 0.2, 0.0]])

    def test_direct_arithmetic(self):
        basis = build_basis(1, (0.0, 1.0), 2)
        ens = single_particle(basis, [0.0, 0.0], [1.0, SQRT3])
        half_drift(ens, 2.0)
        assert ens.x_coeffs[0] == pytest.approx([1.0, SQRT3])

    def test_nodewise_linearity(self):
        basis = build_basis(3, (0.0, 1.0), 8)
        ens = landau_ensemble(basis, n=200)
        x0 = ens.positions_at_nodes(basis)
        v0 = ens.velocities_at_nodes(basis)
        half_drift(ens, 0.3)
        x1 = ens.positions_at_nodes(basis)
        assert np.abs(x1 - (x0 + 0.15 * v0)).max() < 1e-13


class TestKick:
    def test_zero_field_is_identity(self):
        basis = build_basis(2, (0.0, 1.0), 6)
        grid = SpatialGrid(0.0, L, 10, bc="periodic")
        ens = landau_ensemble(basis, n=500)
        v_before = ens.v_coeffs.copy()
        zero = NodeFieldSet(rho=np.zeros((6, 10)), phi=np.zeros((6, 11)),
                            e_field=np.zeros((6, 10)))
        kick(ens, zero, basis, grid, 0.1)
        assert np.array_equal(ens.v_coeffs, v_before)

    def test_uniform_field_adds_to_mode_zero_only(self):
        basis = build_basis(3, (0.0, 1.0), 8)
        grid = SpatialGrid(0.0, L, 10, bc="periodic")
        ens = single_particle(basis, [3.0], [0.5])
        fields = NodeFieldSet(rho=np.ones((8, 10)), phi=np.zeros((8, 11)),
                              e_field=np.full((8, 10), 2.0))
        kick(ens, fields, basis, grid, 0.1)
        assert ens.v_coeffs[0, 0] == pytest.approx(0.5 + 0.1 * 2.0, abs=1e-13)
        assert np.abs(ens.v_coeffs[0, 1:]).max() < 1e-12

    def test_two_node_quadrature_by_hand(self):
        # M=1, K=2, cell-constant gather: particle sits in different cells at
        # the two nodes; the increment is the two-term weighted sum.
        basis = build_basis(1, (0.0, 1.0), 2)
        grid = SpatialGrid(0.0, 1.0, 2, bc="dirichlet-zero")
        ens = single_particle(basis, [0.5, 0.2], [0.0, 0.0])
        e = np.array([[1.0, -2.0], [1.0, -2.0]])
        fields = NodeFieldSet(rho=np.zeros((2, 2)), phi=np.zeros((2, 3)), e_field=e)
        x_nodes = ens.positions_at_nodes(basis)[0]
        cells = (x_nodes >= 0.5).astype(int)
        expected = np.zeros(2)
        for k in range(2):
            expected += 0.1 * basis.weights[k] * e[k, cells[k]] * basis.node_table[k]
        kick(ens, fields, basis, grid, 0.1, gather="cell")
        assert ens.v_coeffs[0] == pytest.approx(expected, abs=1e-14)

    def test_linear_gather_matches_interpolated_field(self):
        grid = SpatialGrid(0.0, 1.0, 4, bc="dirichlet-zero")
        e = np.array([[1.0, 2.0, 3.0, 4.0]])
        # between centers of cells 1 and 2
        out = gather_field(np.array([[0.5]]), e, grid, "linear")
        assert out[0, 0] == pytest.approx(2.5)
        # inside the wall half-cell: constant extrapolation
        out = gather_field(np.array([[0.05]]), e, grid, "linear")
        assert out[0, 0] == pytest.approx(1.0)
        out = gather_field(np.array([[0.99]]), e, grid, "linear")
        assert out[0, 0] == pytest.approx(4.0)

    def test_periodic_linear_gather_wraps(self):
        grid = SpatialGrid(0.0, 1.0, 4, bc="periodic")
        e = np.array([[1.0, 2.0, 3.0, 4.0]])
        out = gather_field(np.array([[0.0]]), e, grid, "linear")
        assert out[0, 0] == pytest.approx(2.5)  # midway between centers 3 and 0


class TestPeriodicBc:
    def test_inside_is_untouched_bitwise(self):
        basis = build_basis(3, (0.0, 1.0), 8)
        grid = SpatialGrid(0.0, L, 10, bc="periodic")
        ens = landau_ensemble(basis, n=300)
        before = ens.x_coeffs.copy()
        apply_periodic_bc(ens, basis, grid)
        assert np.array_equal(ens.x_coeffs, before)
        apply_periodic_bc(ens, basis, grid, mode="project")
        assert np.array_equal(ens.x_coeffs, before)

    def test_deterministic_shift_down(self):
        basis = build_basis(2, (0.0, 1.0), 6)
        grid = SpatialGrid(0.0, L, 10, bc="periodic")
        for mode in ("shift", "project"):
            ens = single_particle(basis, [L + 0.1], [0.0])
            apply_periodic_bc(ens, basis, grid, mode=mode)
            assert ens.x_coeffs[0, 0] == pytest.approx(0.1, abs=1e-12)
            assert np.abs(ens.x_coeffs[0, 1:]).max() < 1e-12

    def test_project_mode_matches_nodewise_oracle(self):
        # One node barely outside: wrapped value changes only that quadrature
        # contribution.
        basis = build_basis(2, (0.0, 1.0), 6)
        grid = SpatialGrid(0.0, L, 10, bc="periodic")
        ens = single_particle(basis, [L - 0.01, 0.05, 0.0], [0.0])
        vals = ens.positions_at_nodes(basis)[0]
        assert (vals >= L).sum() >= 1 and (vals < L).sum() >= 1
        wrapped = np.where(vals >= L, vals - L, vals)
        expected = project_rows(wrapped[None, :], basis)[0]
        apply_periodic_bc(ens, basis, grid, mode="project")
        assert ens.x_coeffs[0] == pytest.approx(expected, abs=1e-13)

    def test_multi_period_wrap_counted(self):
        basis = build_basis(1, (0.0, 1.0), 2)
        grid = SpatialGrid(0.0, L, 10, bc="periodic")
        ens = single_particle(basis, [2.5 * L], [0.0])
        apply_periodic_bc(ens, basis, grid)
        assert ens.x_coeffs[0, 0] == pytest.approx(0.5 * L)
        assert ens.multi_period_wraps == 1

    def test_idempotent(self):
        basis = build_basis(2, (0.0, 1.0), 6)
        grid = SpatialGrid(0.0, L, 10, bc="periodic")
        for mode in ("shift", "project"):
            ens = single_particle(basis, [-0.3, 0.02, 0.0], [0.0])
            apply_periodic_bc(ens, basis, grid, mode=mode)
            once = ens.x_coeffs.copy()
            apply_periodic_bc(ens, basis, grid, mode=mode)
            assert np.abs(ens.x_coeffs - once).max() < 1e-13


class TestReflectingBc:
    def grid(self):
        return SpatialGrid(0.0, 1.0, 10, bc="dirichlet-zero")

    def test_inside_identity(self):
        basis = build_basis(2, (0.0, 1.0), 6)
        ens = single_particle(basis, [0.4, 0.01, 0.0], [1.0, 0.1, 0.0])
        before_x, before_v = ens.x_coeffs.copy(), ens.v_coeffs.copy()
        apply_reflecting_bc(ens, basis, self.grid())
        assert np.array_equal(ens.x_coeffs, before_x)
        assert np.array_equal(ens.v_coeffs, before_v)

    def test_fold_arithmetic(self):
        basis = build_basis(1, (0.0, 1.0), 2)
        ens = single_particle(basis, [-0.05], [-1.0])
        apply_reflecting_bc(ens, basis, self.grid())
        assert ens.x_coeffs[0, 0] == pytest.approx(0.05, abs=1e-13)
        assert ens.v_coeffs[0, 0] == pytest.approx(1.0, abs=1e-13)

    def test_fold_at_right_wall(self):
        basis = build_basis(1, (0.0, 1.0), 2)
        ens = single_particle(basis, [1.07], [0.8])
        apply_reflecting_bc(ens, basis, self.grid())
        assert ens.x_coeffs[0, 0] == pytest.approx(0.93, abs=1e-13)
        assert ens.v_coeffs[0, 0] == pytest.approx(-0.8, abs=1e-13)

    def test_mixed_nodes_match_nodewise_oracle(self):
        basis = build_basis(2, (0.0, 1.0), 6)
        ens = single_particle(basis, [0.995, 0.02, 0.0], [0.5, 0.0, 0.0])
        x = ens.positions_at_nodes(basis)[0].copy()
        v = ens.velocities_at_nodes(basis)[0].copy()
        out = x > 1.0
        assert out.any() and (~out).any()
        x[out] = 2.0 - x[out]
        v[out] = -v[out]
        expected_x = project_rows(x[None, :], basis)[0]
        expected_v = project_rows(v[None, :], basis)[0]
        apply_reflecting_bc(ens, basis, self.grid())
        assert ens.x_coeffs[0] == pytest.approx(expected_x, abs=1e-13)
        assert ens.v_coeffs[0] == pytest.approx(expected_v, abs=1e-13)

    def test_sign_rule_inward_matches_fold(self):
        basis = build_basis(1, (0.0, 1.0), 2)
        fold = single_particle(basis, [-0.05], [-1.0])
        sign = single_particle(basis, [-0.05], [-1.0])
        apply_reflecting_bc(fold, basis, self.grid(), rule="fold")
        apply_reflecting_bc(sign, basis, self.grid(), rule="sign")
        assert np.allclose(fold.x_coeffs, sign.x_coeffs, atol=1e-13)
        assert np.allclose(fold.v_coeffs, sign.v_coeffs, atol=1e-13)

    def test_sign_rule_outward_mover_is_folded_back(self):
        # The literal sign rule would leave an outward-moving particle
        # outside; the safeguard folds it in and counts the event.
        basis = build_basis(1, (0.0, 1.0), 2)
        ens = single_particle(basis, [-0.05], [1.0])
        apply_reflecting_bc(ens, basis, self.grid(), rule="sign")
        assert 0.0 <= ens.x_coeffs[0, 0] <= 1.0
        assert ens.multi_period_wraps >= 1

    def test_idempotent(self):
        basis = build_basis(2, (0.0, 1.0), 6)
        ens = single_particle(basis, [1.02, 0.005, 0.0], [0.3, 0.0, 0.0])
        apply_reflecting_bc(ens, basis, self.grid())
        once_x = ens.x_coeffs.copy()
        apply_reflecting_bc(ens, basis, self.grid())
        assert np.abs(ens.x_coeffs - once_x).max() < 1e-13


class TestStrangStep:
    def test_free_streaming_exactness(self):
        # E suppressed, nu=0, no wraps: coefficients advance ballistically.
        basis = build_basis(3, (0.0, 1.0), 8)
        grid = SpatialGrid(0.0, L, 10, bc="periodic")
        ens = landau_ensemble(basis, n=2000, seed=11)
        ens.v_coeffs *= 0.01  # keep everything inside over the test horizon
        x0, v0 = ens.x_coeffs.copy(), ens.v_coeffs.copy()
        for step in range(20):
            strang_step(ens, basis, grid, 0.05, 0.0, step, 11, disable_field=True)
        assert np.abs(ens.x_coeffs - (x0 + 1.0 * v0)).max() < 1e-12
        assert np.array_equal(ens.v_coeffs, v0)

    def test_pure_transport_when_collisionless(self):
        basis = build_basis(2, (0.0, 1.0), 6)
        grid = SpatialGrid(0.0, L, 20, bc="periodic")
        a = landau_ensemble(basis, n=5000, seed=2)
        b = a.copy()
        strang_step(a, basis, grid, 0.1, 0.0, 0, 2)
        transport_step(b, basis, grid, 0.1)
        assert np.array_equal(a.x_coeffs, b.x_coeffs)
        assert np.array_equal(a.v_coeffs, b.v_coeffs)

    def test_energy_conservation_deterministic(self):
        # Collisionless periodic leapfrog: kinetic + electrostatic energy
        # drift stays below 1% over 50 time units.
        basis = build_basis(0, (0.0, 1.0), 1)
        grid = SpatialGrid(0.0, L, 100, bc="periodic")
        ens = landau_ensemble(basis, n=100_000, seed=3, alpha=AffineLaw(0.1, 0.0))
        w = ens.particle_weight

        def total_energy():
            fs = fields_at_all_nodes(ens, basis, grid)
            es = 0.5 * electric_energy(fs, grid)[0] ** 2
            ke = 0.5 * w * np.sum(ens.v_coeffs[:, 0] ** 2)
            return ke + es

        e0 = total_energy()
        for step in range(500):
            strang_step(ens, basis, grid, 0.1, 0.0, step, 3)
        assert abs(total_energy() - e0) / e0 < 0.01

    def test_nodewise_equivalence_interpolatory(self):
        # With K = M+1 every coefficient-space operation evaluated at the
        # nodes equals the node-wise deterministic update of node values.
        basis = build_basis(3, (0.0, 1.0), 4)
        grid = SpatialGrid(0.0, L, 30, bc="periodic")
        ens = landau_ensemble(basis, n=3000, seed=6)
        x_nodes = ens.positions_at_nodes(basis).copy()
        v_nodes = ens.velocities_at_nodes(basis).copy()
        half_drift(ens, 0.2)
        assert np.abs(ens.positions_at_nodes(basis) - (x_nodes + 0.1 * v_nodes)).max() < 1e-12
