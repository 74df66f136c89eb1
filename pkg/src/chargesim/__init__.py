"""chargesim: coupled charge-qubit arrays under realistic gate noise.

A numpy/scipy toolkit for arrays of Cooper-pair boxes sharing a gate line and
a coupling capacitor: circuit construction, mean-field ground-state maps,
noisy Schrodinger-trajectory dynamics (Rabi/Ramsey), relaxation and
correlation analysis, and localization diagnostics for disordered arrays.
"""

__version__ = "0.1.0"

from .circuit import (
    CircuitParams,
    DisorderSpec,
    apply_hamiltonian,
    build_circuit,
    dense_hamiltonian,
    eta_to_Cc,
    sample_disorder,
)
from .meanfield import (
    GroundState,
    GroundStateMap,
    charge_bias,
    charge_step_boundaries,
    collective_hamiltonian,
    exact_ground_state,
    ground_state_map,
    mean_field_energy,
    solve_ground_state,
)
from .noise import (
    NoiseModel,
    NoiseSeries,
    averaged_periodogram,
    band_variance,
    default_noise_model,
    periodogram,
    resample_hold,
    synthesize_noise,
    target_psd,
)
from .dynamics import (
    PropagationConfig,
    ProtocolSpec,
    RamseySignal,
    TrajectoryRecord,
    default_time_step,
    evolve_trajectory,
    initial_state_vector,
    pair_columns,
    run_rabi_ensemble,
    run_ramsey,
)
from .analysis import (
    DecayFit,
    EnsembleStats,
    HistogramSnapshot,
    SteadyStateResult,
    compute_czz,
    ensemble_statistics,
    fit_T1,
    fit_T2,
    histogram_jz,
    steady_state_detect,
)
from .mbl import (
    POISSON_MEAN_RATIO,
    HammingSignal,
    IsingModel,
    LocalizationFit,
    MblResult,
    RatioStatistics,
    dense_ising_hamiltonian,
    fit_localization_rate,
    hamming_distance_run,
    hamming_trajectory,
    ising_map,
    level_spacing_ratios,
    localization_diagnostics,
    metastable_hamming,
    neel_pattern,
    neel_state,
    poisson_ratio_density,
    ratio_chi_square,
    ratio_values,
)
from .config import (
    EXPERIMENT_KINDS,
    ExperimentConfig,
    config_hash,
    load_config,
    validate_config,
)
from .experiments import run_experiment
from .errors import (
    ChargingLimitWarning,
    ConfigError,
    FitFailureError,
    IntegrationError,
    InvalidParameterError,
)
from .seeding import DISORDER_STREAM, NOISE_STREAM, derive_seed

__all__ = [
    "CircuitParams",
    "DisorderSpec",
    "apply_hamiltonian",
    "build_circuit",
    "dense_hamiltonian",
    "eta_to_Cc",
    "sample_disorder",
    "GroundState",
    "GroundStateMap",
    "charge_bias",
    "charge_step_boundaries",
    "collective_hamiltonian",
    "exact_ground_state",
    "ground_state_map",
    "mean_field_energy",
    "solve_ground_state",
    "NoiseModel",
    "NoiseSeries",
    "averaged_periodogram",
    "band_variance",
    "default_noise_model",
    "periodogram",
    "resample_hold",
    "synthesize_noise",
    "target_psd",
    "PropagationConfig",
    "ProtocolSpec",
    "RamseySignal",
    "TrajectoryRecord",
    "default_time_step",
    "evolve_trajectory",
    "initial_state_vector",
    "pair_columns",
    "run_rabi_ensemble",
    "run_ramsey",
    "DecayFit",
    "EnsembleStats",
    "HistogramSnapshot",
    "SteadyStateResult",
    "compute_czz",
    "ensemble_statistics",
    "fit_T1",
    "fit_T2",
    "histogram_jz",
    "steady_state_detect",
    "POISSON_MEAN_RATIO",
    "HammingSignal",
    "IsingModel",
    "LocalizationFit",
    "MblResult",
    "RatioStatistics",
    "dense_ising_hamiltonian",
    "fit_localization_rate",
    "hamming_distance_run",
    "hamming_trajectory",
    "ising_map",
    "level_spacing_ratios",
    "localization_diagnostics",
    "metastable_hamming",
    "neel_pattern",
    "neel_state",
    "poisson_ratio_density",
    "ratio_chi_square",
    "ratio_values",
    "DISORDER_STREAM",
    "NOISE_STREAM",
    "derive_seed",
    "EXPERIMENT_KINDS",
    "ExperimentConfig",
    "config_hash",
    "load_config",
    "validate_config",
    "run_experiment",
    "ChargingLimitWarning",
    "ConfigError",
    "FitFailureError",
    "IntegrationError",
    "InvalidParameterError",
    "__version__",
]
