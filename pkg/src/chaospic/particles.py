"""Chaos-expanded particle ensemble and initial-condition samplers.

Each particle carries one row of position coefficients and one row of
velocity coefficients.  Initialization uses common random numbers: a single
uniform (and a single standard normal, plus a beam bit for counter-streaming
setups) is drawn per particle and reused at every quadrature node, so the
node-wise samples vary smoothly with z and the higher chaos modes carry
signal instead of sampling noise.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import erf, erfinv

from .errors import ConfigurationError, UsageError
from .gpc import GpcBasis, project_rows

# Stream tags: every generator in a run is keyed by (seed, tag, index) so any
# parallel schedule reproduces the serial result.
STREAM_INIT = 0
STREAM_COLLISION_XI = 1
STREAM_COLLISION_POOL = 2

INVERSE_CDF_TOL = 1e-12


def stream(seed: int, tag: int, index: int = 0) -> np.random.Generator:
    """Deterministic generator keyed by (seed, tag, index)."""
    return np.random.default_rng((int(seed), int(tag), int(index)))


@dataclass(frozen=True)
class AffineLaw:
    """Affine map of the random input: law(z) = const + slope * z."""

    const: float
    slope: float = 0.0

    def __call__(self, z):
        return self.const + self.slope * np.asarray(z, dtype=float)

    def range_on(self, support: tuple[float, float]) -> tuple[float, float]:
        vals = (self(support[0]), self(support[1]))
        return min(vals), max(vals)


@dataclass(frozen=True)
class InitialCondition:
    """Initial phase-space law for one scenario family.

    kinds:
      perturbed-maxwellian  density (1 + amplitude(z) cos(k x)) on a
                            whole number of wavelengths, Maxwellian
                            velocities with temperature(z)
      two-stream            same density; velocities split evenly between
                            two beams drifting at +-drift
      gaussian-bump         Gaussian density bump (center/sigma), Maxwellian
                            velocities with temperature(z)
      sod-riemann           piecewise-constant density/temperature with the
                            interface at interface(z)
    """

    kind: str
    domain: tuple[float, float]
    wave_number: float = 0.0
    amplitude: AffineLaw = AffineLaw(0.0)
    temperature: AffineLaw = AffineLaw(1.0)
    temperature_right: AffineLaw = AffineLaw(1.0)
    drift: float = 0.0
    interface: AffineLaw = AffineLaw(0.5)
    density_left: float = 1.0
    density_right: float = 0.125
    bump_center: float = 6.0
    bump_sigma: float = np.sqrt(0.5)

    KINDS = ("perturbed-maxwellian", "two-stream", "gaussian-bump", "sod-riemann")

    def validate(self, support: tuple[float, float]) -> None:
        if self.kind not in self.KINDS:
            raise ConfigurationError(f"unknown initial-condition kind {self.kind!r}")
        x_min, x_max = self.domain
        if not x_max > x_min:
            raise ConfigurationError(f"degenerate domain [{x_min}, {x_max}]")
        if self.kind in ("perturbed-maxwellian", "two-stream"):
            if self.wave_number <= 0:
                raise ConfigurationError("wave_number must be positive for periodic kinds")
            periods = self.wave_number * (x_max - x_min) / (2.0 * np.pi)
            if abs(periods - round(periods)) > 1e-9 or round(periods) < 1:
                raise ConfigurationError(
                    f"domain must span a whole number of wavelengths (got {periods:.6g})"
                )
            lo, _ = self.amplitude.range_on(support)
            if lo <= -1.0:
                raise ConfigurationError("amplitude law reaches -1: density would go negative")
        if self.kind == "sod-riemann":
            s_lo, s_hi = self.interface.range_on(support)
            if s_lo <= x_min or s_hi >= x_max:
                raise ConfigurationError("interface law leaves the domain interior")
            if self.density_left <= 0 or self.density_right <= 0:
                raise ConfigurationError("sod densities must be positive")
            t_lo, _ = self.temperature_right.range_on(support)
            if t_lo <= 0:
                raise ConfigurationError("right temperature law must stay positive")
        t_lo, _ = self.temperature.range_on(support)
        if t_lo <= 0:
            raise ConfigurationError("temperature law must stay positive")

    def mass_law(self) -> AffineLaw:
        """Total physical mass of the initial density as a function of z."""
        x_min, x_max = self.domain
        if self.kind in ("perturbed-maxwellian", "two-stream"):
            # Whole periods: the cosine perturbation integrates to zero.
            return AffineLaw(x_max - x_min)
        if self.kind == "gaussian-bump":
            scale = np.sqrt(2.0) * self.bump_sigma
            mass = 0.5 * (erf((x_max - self.bump_center) / scale) - erf((x_min - self.bump_center) / scale))
            return AffineLaw(float(mass))
        # sod-riemann: rho_L (s - x_min) + rho_R (x_max - s), affine in s(z).
        const = (
            self.density_left * (self.interface.const - x_min)
            + self.density_right * (x_max - self.interface.const)
        )
        slope = (self.density_left - self.density_right) * self.interface.slope
        return AffineLaw(const, slope)


@dataclass
class ChaosEnsemble:
    """N particles with chaos-expanded positions and velocities.

    node_weight[k] is the physical mass carried per particle at quadrature
    node k; it differs across nodes only when the total initial mass depends
    on z (uncertain Sod interface).  particle_weight is the value at the
    support midpoint and satisfies particle_weight * count = mean total mass.
    """

    x_coeffs: np.ndarray
    v_coeffs: np.ndarray
    particle_weight: float
    node_weight: np.ndarray
    mass_law: AffineLaw
    seed: int
    clamped_temperature: int = 0
    multi_period_wraps: int = 0

    @property
    def count(self) -> int:
        return self.x_coeffs.shape[0]

    @property
    def order(self) -> int:
        return self.x_coeffs.shape[1] - 1

    def positions_at_nodes(self, basis: GpcBasis) -> np.ndarray:
        return self.x_coeffs @ basis.node_table.T

    def velocities_at_nodes(self, basis: GpcBasis) -> np.ndarray:
        return self.v_coeffs @ basis.node_table.T

    def weight_at(self, z) -> np.ndarray:
        return self.mass_law(z) / self.count

    def copy(self) -> "ChaosEnsemble":
        return replace(self, x_coeffs=self.x_coeffs.copy(), v_coeffs=self.v_coeffs.copy())


def _invert_cosine_cdf(u: np.ndarray, alpha: float, k: float, domain: tuple[float, float]) -> np.ndarray:
    """Invert F(x) = [x - x_min + (alpha/k)(sin kx - sin k x_min)] / L_F by bisection.

    F is monotone because the density 1 + alpha cos(kx) stays nonnegative;
    bisection is safe where the density nearly vanishes, which Newton is not.
    """
    x_min, x_max = domain
    span = x_max - x_min

    def cdf_raw(x):
        return (x - x_min) + (alpha / k) * (np.sin(k * x) - np.sin(k * x_min))

    total = cdf_raw(x_max)
    target = u * total
    lo = np.full_like(u, x_min)
    hi = np.full_like(u, x_max)
    n_iter = int(np.ceil(np.log2(span / INVERSE_CDF_TOL)))
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        below = cdf_raw(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def _node_sample(cfg: InitialCondition, z: float, u: np.ndarray, normals: np.ndarray,
                 beam_sign: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    """One node-wise realization (x, v) from the shared per-particle draws."""
    x_min, x_max = cfg.domain
    if cfg.kind in ("perturbed-maxwellian", "two-stream"):
        alpha = float(cfg.amplitude(z))
        x = _invert_cosine_cdf(u, alpha, cfg.wave_number, cfg.domain)
        v = np.sqrt(cfg.temperature(z)) * normals
        if cfg.kind == "two-stream":
            v = v + beam_sign * cfg.drift
        return x, v
    if cfg.kind == "gaussian-bump":
        scale = np.sqrt(2.0) * cfg.bump_sigma
        lo = 0.5 * (1.0 + erf((x_min - cfg.bump_center) / scale))
        hi = 0.5 * (1.0 + erf((x_max - cfg.bump_center) / scale))
        x = cfg.bump_center + scale * erfinv(2.0 * (lo + u * (hi - lo)) - 1.0)
        v = np.sqrt(cfg.temperature(z)) * normals
        return x, v
    # sod-riemann
    s = float(cfg.interface(z))
    mass_left = cfg.density_left * (s - x_min)
    mass = mass_left + cfg.density_right * (x_max - s)
    t = u * mass
    x = np.where(
        t < mass_left,
        x_min + t / cfg.density_left,
        s + (t - mass_left) / cfg.density_right,
    )
    temp = np.where(x < s, cfg.temperature(z), cfg.temperature_right(z))
    return x, np.sqrt(temp) * normals


def sample_initial(cfg: InitialCondition, basis: GpcBasis, count: int, seed: int) -> ChaosEnsemble:
    """Draw the ensemble and project the node-wise samples onto the basis.

    Draw order from the init stream is fixed: uniforms, normals, then the
    beam bits (two-stream only); downstream reproducibility depends on it.
    """
    if count < 1:
        raise ConfigurationError(f"particle count must be >= 1, got {count}")
    cfg.validate(basis.support)
    rng = stream(seed, STREAM_INIT)
    u = rng.random(count)
    normals = rng.standard_normal(count)
    beam_sign = None
    if cfg.kind == "two-stream":
        beam_sign = np.where(rng.random(count) < 0.5, 1.0, -1.0)

    positions = np.empty((count, basis.node_count))
    velocities = np.empty((count, basis.node_count))
    for k, z in enumerate(basis.nodes):
        positions[:, k], velocities[:, k] = _node_sample(cfg, z, u, normals, beam_sign)

    mass_law = cfg.mass_law()
    mid = 0.5 * (basis.support[0] + basis.support[1])
    return ChaosEnsemble(
        x_coeffs=project_rows(positions, basis),
        v_coeffs=project_rows(velocities, basis),
        particle_weight=float(mass_law(mid)) / count,
        node_weight=mass_law(basis.nodes) / count,
        mass_law=mass_law,
        seed=seed,
    )


def evaluate_ensemble_at_node(ens: ChaosEnsemble, basis: GpcBasis, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Node-wise realization of every particle (pure read)."""
    if not 0 <= k < basis.node_count:
        raise UsageError(f"node index {k} outside 0..{basis.node_count - 1}")
    row = basis.node_table[k]
    return ens.x_coeffs @ row, ens.v_coeffs @ row


def save_ensemble(ens: ChaosEnsemble, basis: GpcBasis, path) -> None:
    """Snapshot dump: header metadata, then one row per particle."""
    m1 = ens.order + 1
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["# N", ens.count, "M", ens.order, "K", basis.node_count,
                         "seed", ens.seed, "mass_const", repr(ens.mass_law.const),
                         "mass_slope", repr(ens.mass_law.slope)])
        writer.writerow(["index"] + [f"x{h}" for h in range(m1)] + [f"v{h}" for h in range(m1)])
        for i in range(ens.count):
            writer.writerow([i] + [repr(float(v)) for v in ens.x_coeffs[i]]
                            + [repr(float(v)) for v in ens.v_coeffs[i]])


def load_ensemble(path, basis: GpcBasis) -> ChaosEnsemble:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        meta = {header[i].lstrip("# "): header[i + 1] for i in range(0, len(header) - 1, 2)}
        next(reader)
        rows = [[float(v) for v in row[1:]] for row in reader]
    data = np.asarray(rows)
    m1 = int(meta["M"]) + 1
    if data.shape != (int(meta["N"]), 2 * m1):
        raise UsageError(f"snapshot shape {data.shape} does not match header {meta}")
    mass_law = AffineLaw(float(meta["mass_const"]), float(meta["mass_slope"]))
    count = int(meta["N"])
    mid = 0.5 * (basis.support[0] + basis.support[1])
    return ChaosEnsemble(
        x_coeffs=np.ascontiguousarray(data[:, :m1]),
        v_coeffs=np.ascontiguousarray(data[:, m1:]),
        particle_weight=float(mass_law(mid)) / count,
        node_weight=mass_law(basis.nodes) / count,
        mass_law=mass_law,
        seed=int(meta["seed"]),
    )
