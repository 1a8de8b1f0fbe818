"""Simulation and analysis of d-level open quantum systems under random
telegraph noise: vectorized Liouvillians, the doubled noise-correlated state
space, biorthogonal spectral and perturbative mode analysis, three
independent propagators, and anomalous-relaxation (Mpemba) diagnostics."""

from .policy import DEFAULT_POLICY, NumericPolicy
from .exceptions import (
    ConfigurationError,
    ConventionMismatchError,
    DefectiveGeneratorError,
    DimensionMismatchError,
    MultipleSteadyStatesError,
    NonHermitianError,
    NonPhysicalStateError,
    QmpembaError,
    SmallDenominatorError,
)
from .lindblad import (
    JumpChannel,
    build_liouvillian,
    devectorize,
    dissipator_superoperator,
    element_order,
    hamiltonian_superoperator,
    hermiticity_defect,
    population_trace,
    trace_functional,
    vectorize,
)
from .telegraph import RtnSpec, coupling_matrix, embed, extended_generator, project
from .spectral import (
    ModeCoefficients,
    SpectralData,
    decompose,
    mode_coefficients,
    propagate_spectral,
    steady_state,
    unit_left_overlaps,
)
from .perturbation import (
    MixingCoefficients,
    PerturbationResult,
    first_order_vectors,
    mixing_coefficient,
    mixing_coefficients,
    normalization_factor,
    perturbative_trajectory,
    second_order_eigenvalue,
)
from .dynamics import (
    McConfig,
    TimeGrid,
    Trajectory,
    propagate_expm,
    propagate_montecarlo,
    sample_telegraph,
    white_noise_generator,
)
from .mpemba import (
    CoherenceSeries,
    CrossingReport,
    DistanceSeries,
    NORM_KINDS,
    classify_case,
    coherence_entropy,
    coherence_series,
    detect_crossings,
    distance,
    distance_series,
    fit_tail_rate,
    positive_prefix,
    turning_point,
)
from .threelevel import (
    NamedState,
    SCENARIOS,
    STATE_LABELS,
    ThreeLevelParams,
    build_reference_system,
    initial_state,
    initial_states,
    run_scenario,
)
from .config import AnalysisOptions, ScenarioConfig, load_config

__version__ = "0.1.0"
