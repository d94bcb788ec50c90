"""Variational ground states of the 1-D Schrodinger-Coulomb system.

A mobile charge density u^2 of unit mass binds to a fixed background
charge (point -z delta_0 or a sampled nonpositive density) through the
one-dimensional Coulomb kernel -|x-y|.  The package evaluates the energy
functional and its kernel identities by exact prefix-sum quadrature,
computes ground states by damped SCF eigen-iteration or projected
gradient descent, and verifies the rearrangement, positivity and
concentration inequalities the theory predicts.
"""

from .background import (
    BackgroundCharge,
    PointCharge,
    SampledCharge,
    abs_moment,
    background_potential,
    delta_approximant,
    jensen_lower_bound_check,
    load_background,
    recenter_shift,
    total_charge,
)
from .diagnostics import (
    ConcentrationProfile,
    CounterexampleMetrics,
    UnboundednessScanResult,
    concentration_profile,
    counterexample_un,
    grid_for_counterexample,
    moment,
    tail_mass,
    tightness_lower_bound,
    unboundedness_scan,
)
from .energy import (
    EnergyBreakdown,
    boundary_flux_diagnostic,
    effective_potential,
    el_residual,
    solver_objective,
    total_energy,
)
from .errors import (
    CoulombiumError,
    DivergingEnergyError,
    GridMismatchError,
    GridTooSmallError,
    LineSearchStalledError,
    MaxIterExceededError,
    NegativeInputError,
    NoConvergenceError,
    NonZeroMeanError,
    NormalizationWarning,
    NotNormalizedError,
    SolverError,
    UnderResolvedError,
)
from .grid import (
    Grid,
    Samples,
    from_function,
    integrate,
    kinetic_energy,
    make_grid,
    normalize,
    reflect,
)
from .kernel import (
    CPlusForm,
    b_form,
    b_norm,
    c_functional,
    c_plus,
    coulomb_pair_energy,
    dense_c_functional,
    dense_c_plus,
    dense_coulomb_pair_energy,
    dense_potential_from_density,
    g_kernel,
    min_kernel,
    neg_kernel_inner_product,
    potential_from_density,
    reflected_half_sum,
)
from .rearrange import (
    RearrangementReport,
    double_rearrangement_check,
    hardy_littlewood_check,
    symmetric_decreasing_rearrangement,
)
from .solver import (
    GroundState,
    SolverConfig,
    default_initial_guess,
    gradient_solve,
    ground_eigenpair,
    scf_solve,
)

__version__ = "0.1.0"
