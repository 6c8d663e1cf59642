"""Regularized HCMA geodesics on the flat torus and the checks around them."""

from .continuation import sweep
from .equation import HcmaProblem, apply_D, residual
from .errors import (
    ConfigError,
    DegenerateStateError,
    HcmaError,
    LinearSolveFailure,
    NonConvergenceError,
    OracleViolation,
)
from .grid import TorusGrid
from .newton import SolverOptions, solve
from .path import GeodesicPath, initial_guess
from .potentials import KahlerPotential, classify, smooth_approx

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateStateError",
    "GeodesicPath",
    "HcmaError",
    "HcmaProblem",
    "KahlerPotential",
    "LinearSolveFailure",
    "NonConvergenceError",
    "OracleViolation",
    "SolverOptions",
    "TorusGrid",
    "apply_D",
    "classify",
    "initial_guess",
    "residual",
    "smooth_approx",
    "solve",
    "sweep",
]
