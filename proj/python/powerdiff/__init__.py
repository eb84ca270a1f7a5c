"""Simulation and pathwise estimation for diffusions dy = f dt + sigma y^gamma dw."""

from ._core import (
    AuxSeries,
    ConfigError,
    CsvError,
    DegenerateError,
    DelayDriftSpec,
    DelayRule,
    DomainError,
    EstimateResult,
    Method,
    ModelSpec,
    NoSolutionError,
    ObjectiveScale,
    SamplePath,
    SimConfig,
    TrialStats,
    cir_backout,
    cir_moments,
    compute_aux,
    error_stats,
    euler_maruyama,
    eval_drift,
    gamma_known_sigma,
    gamma_ratio_estimate,
    integrated_sigma_sq,
    joint_estimate,
    log_modulus_complex_oracle,
    read_path_csv,
    reproduce_table,
    sample_delay_drift,
    sigma_known_gamma,
    simulate_random_delay,
    write_path_csv,
)

__version__ = "0.1.0"
