"""decosense: phase-space dynamics and detection limits for diffusing test masses.

Simulates frictionless quantum Brownian motion of a free mass in phase
space, computes the standard quantum limits for weak-force and
momentum-diffusion sensing, and quantifies how superposition states detect
diffusion that remains invisible to any classical-like probe.
"""

__version__ = "0.1.0"

from .detection import (
    DecoherenceFactor,
    SampledDistribution,
    TwoLevelChannel,
    apply_channel,
    chernoff_exponent,
    decoherence_factor_from_config,
    detection_error_exponent,
    interferometer_probabilities,
    optimize_gaussian_preparation,
)
from .dynamics import (
    EvolvedCat,
    PropagatorKernel,
    decoherence_time,
    off_diagonal_decay,
    propagate_cat,
    propagate_gaussian,
    propagate_gaussian_with_force,
    propagator_kernel,
    shear_matrix,
)
from .grid import (
    GridInstability,
    MarginalSamples,
    PeriodNotResolved,
    PositionDensityMatrix,
    WignerGrid,
    WindowTooSmall,
    auto_window,
    density_from_wigner,
    evolve_grid,
    fringe_visibility,
    grid_moments,
    marginal_moments,
    momentum_marginal,
    position_marginal,
    rasterize,
    suggest_window,
    wigner_from_density,
)
from .limits import (
    DiffusionSpreads,
    ExperimentConfig,
    HbarScaling,
    OptimalWidths,
    d_min,
    decoherence_exponents,
    diffusion_spreads,
    diffusion_sql,
    force_sql,
    hbar_scaling,
    optimal_widths,
)
from .perturbation import (
    BipartiteSystem,
    first_order_state,
    peeled_evolution,
    purity_deficit,
    random_system,
    reduced_probe_state,
    zassenhaus_terms,
)
from .qbm import (
    LindbladSpec,
    QBMParams,
    ValidityReport,
    diagonalize_diffusion,
    qbm_from_lindblad,
    rotation,
    validate_qbm,
)
from .states import (
    CatState,
    ComponentState,
    GaussianState,
    cat_wigner_value,
    gaussian_wavepacket,
)

__all__ = [
    "__version__",
    # states
    "GaussianState",
    "CatState",
    "ComponentState",
    "gaussian_wavepacket",
    "cat_wigner_value",
    # qbm
    "LindbladSpec",
    "QBMParams",
    "ValidityReport",
    "qbm_from_lindblad",
    "validate_qbm",
    "diagonalize_diffusion",
    "rotation",
    # limits
    "ExperimentConfig",
    "OptimalWidths",
    "DiffusionSpreads",
    "HbarScaling",
    "force_sql",
    "diffusion_sql",
    "d_min",
    "optimal_widths",
    "diffusion_spreads",
    "decoherence_exponents",
    "hbar_scaling",
    # dynamics
    "PropagatorKernel",
    "EvolvedCat",
    "shear_matrix",
    "propagator_kernel",
    "propagate_gaussian",
    "propagate_gaussian_with_force",
    "propagate_cat",
    "decoherence_time",
    "off_diagonal_decay",
    # grid
    "WignerGrid",
    "PositionDensityMatrix",
    "MarginalSamples",
    "WindowTooSmall",
    "GridInstability",
    "PeriodNotResolved",
    "suggest_window",
    "auto_window",
    "rasterize",
    "wigner_from_density",
    "density_from_wigner",
    "evolve_grid",
    "position_marginal",
    "momentum_marginal",
    "grid_moments",
    "marginal_moments",
    "fringe_visibility",
    # detection
    "DecoherenceFactor",
    "TwoLevelChannel",
    "SampledDistribution",
    "apply_channel",
    "decoherence_factor_from_config",
    "interferometer_probabilities",
    "chernoff_exponent",
    "detection_error_exponent",
    "optimize_gaussian_preparation",
    # perturbation
    "BipartiteSystem",
    "random_system",
    "zassenhaus_terms",
    "peeled_evolution",
    "purity_deficit",
    "first_order_state",
    "reduced_probe_state",
]
