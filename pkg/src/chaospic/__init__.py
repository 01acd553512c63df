"""Stochastic-Galerkin particle solver for the 1D-1V Vlasov-Poisson-BGK system.

Particles carry truncated chaos expansions of position and velocity in one
uniform random input; a splitting of a projected relaxation collision step
and a projected transport step (with a Poisson solve per quadrature node)
advances the coefficients.
"""

from .collision import (
    MaxwellianPool,
    NodeCellMoments,
    bgk_step,
    build_maxwellian_pool,
    compute_node_moments,
)
from .errors import (
    ChaospicError,
    ConfigurationError,
    FitError,
    LogicError,
    NumericalError,
    SamplingError,
    UsageError,
)
from .fields import (
    NodeFieldSet,
    SpatialGrid,
    deposit_density,
    fields_at,
    fields_at_all_nodes,
    solve_poisson,
)
from .gpc import (
    ChaosVector,
    GpcBasis,
    build_basis,
    eval_at_nodes,
    eval_basis,
    mean_variance,
    project,
)
from .observables import (
    EnergyTimeSeries,
    PhaseSpaceDensity,
    electric_energy,
    fit_exponential_rate,
    moment_profiles,
    phase_space_density,
    reconstruct_density,
)
from .particles import (
    AffineLaw,
    ChaosEnsemble,
    InitialCondition,
    evaluate_ensemble_at_node,
    load_ensemble,
    sample_initial,
    save_ensemble,
)
from .scenarios import (
    RunResult,
    ScenarioConfig,
    convergence_study,
    load_config,
    preset_config,
    preset_names,
    run,
)
from .transport import (
    apply_periodic_bc,
    apply_reflecting_bc,
    half_drift,
    kick,
    strang_step,
    transport_step,
)

__version__ = "0.1.0"
