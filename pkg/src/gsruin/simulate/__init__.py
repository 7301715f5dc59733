"""Monte Carlo oracle for the perturbed risk process."""
from __future__ import annotations

from .core import (
    PathOutcome,
    SimConfig,
    SimEstimate,
    available_kernels,
    default_kernel,
    estimate,
    kernel_params,
    run_paths,
    sample_path,
    suggest_level_cap,
)

__all__ = [
    "PathOutcome",
    "SimConfig",
    "SimEstimate",
    "available_kernels",
    "default_kernel",
    "estimate",
    "kernel_params",
    "run_paths",
    "sample_path",
    "suggest_level_cap",
]
