"""Randomized neural network DG solvers for KdV and Burgers problems."""

from ._core import (
    RUN_CSV_COLUMNS,
    ConfigError,
    burgers_exact,
    characteristic_mesh_json,
    check,
    gauss_legendre,
    gkdv_soliton,
    least_squares,
    mark,
    parse_config,
    run,
    run_config,
    uniform_mesh_json,
)

__all__ = [
    "RUN_CSV_COLUMNS",
    "ConfigError",
    "burgers_exact",
    "characteristic_mesh_json",
    "check",
    "gauss_legendre",
    "gkdv_soliton",
    "least_squares",
    "mark",
    "parse_config",
    "run",
    "run_config",
    "uniform_mesh_json",
]
