"""Gerber-Shiu functions for a diffusion-perturbed renewal risk model with
phase-type interclaim times and rational-family claim sizes."""
from __future__ import annotations

from . import claims, phase_type
from .claims import Penalty, RationalClaim
from .errors import GSRuinError, ModelError, NumericalError, SpecFileError
from .exppoly import ExpPoly
from .gerber_shiu import GerberShiuSolution, laplace_solution, ruin_prob_special, solve
from .lundberg import LundbergRoots, find_roots
from .model import RiskModel
from .phase_type import PhaseType

__version__ = "0.1.0"

__all__ = [
    "claims",
    "phase_type",
    "Penalty",
    "RationalClaim",
    "GSRuinError",
    "ModelError",
    "NumericalError",
    "SpecFileError",
    "ExpPoly",
    "GerberShiuSolution",
    "laplace_solution",
    "ruin_prob_special",
    "solve",
    "LundbergRoots",
    "find_roots",
    "RiskModel",
    "PhaseType",
]
