"""Generalized ADMM with soft consensus constraints.

Configs are plain dicts with the same keys as the JSON files the command-line
tool reads; see README.md.
"""

import json as _json

from . import _gadmm
from ._gadmm import (
    ConfigError,
    GadmmError,
    NotConverged,
    StepSearchFailed,
    compute_delta,
    generate_synthetic,
    hyperplane_update,
    is_p_matrix,
    projection_update,
    solve_centralized,
    tikhonov_step_valid,
    tikhonov_update,
)

__all__ = [
    "ConfigError",
    "GadmmError",
    "NotConverged",
    "StepSearchFailed",
    "compute_delta",
    "diagnose",
    "generate_synthetic",
    "hyperplane_update",
    "is_p_matrix",
    "normalize_config",
    "projection_update",
    "run",
    "run_sweep",
    "solve_centralized",
    "tikhonov_step_valid",
    "tikhonov_update",
]


def _dump(config):
    return config if isinstance(config, str) else _json.dumps(config)


def run(config, datasets=None):
    return _gadmm.run(_dump(config), datasets)


def run_sweep(config, workers=1, out_dir=None):
    return _gadmm.run_sweep(_dump(config), workers, None if out_dir is None else str(out_dir))


def diagnose(config):
    return _json.loads(_gadmm.diagnose(_dump(config)))


def normalize_config(config):
    """The config with every default filled in."""
    return _json.loads(_gadmm.normalize_config(_dump(config)))
