"""Decoupled SAV pressure-correction solver for the NS-PNP system."""

from ._nspnp import (
    ERROR_COLUMNS,
    Case,
    ConfigError,
    DataTime,
    ErrorMetric,
    Field,
    RunConfig,
    StepError,
    VelocityBoundary,
    convergence,
    default_config,
    exact_eval,
    load_config,
    mesh_counts,
    parse_config,
    run,
    selfcheck,
    solve_sav_quadratic,
    source_eval,
)

__all__ = [
    "ERROR_COLUMNS",
    "Case",
    "ConfigError",
    "DataTime",
    "ErrorMetric",
    "Field",
    "RunConfig",
    "StepError",
    "VelocityBoundary",
    "convergence",
    "default_config",
    "exact_eval",
    "load_config",
    "mesh_counts",
    "parse_config",
    "run",
    "selfcheck",
    "solve_sav_quadratic",
    "source_eval",
]
