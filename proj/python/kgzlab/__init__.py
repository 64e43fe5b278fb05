"""Klein-Gordon-Zakharov simulator and scattering analysis."""

from ._core import (
    ConfigError,
    DivergenceError,
    asymptotic_gap,
    audit_names,
    bessel_j0,
    bessel_j1,
    bessel_j2,
    check_config,
    experiment_names,
    phase_value,
    run_audit,
    run_config,
    set_threads,
    sine_bessel_integral,
    theta_moment_part,
)

__all__ = [
    "ConfigError",
    "DivergenceError",
    "asymptotic_gap",
    "audit_names",
    "bessel_j0",
    "bessel_j1",
    "bessel_j2",
    "check_config",
    "experiment_names",
    "phase_value",
    "run_audit",
    "run_config",
    "set_threads",
    "sine_bessel_integral",
    "theta_moment_part",
]
