"""
Domain exceptions for the thermal machine simulator.

Each exception derives from a built-in so callers that only know about
ValueError / RuntimeError keep working. The command-line entry point maps
them to exit codes.
"""

from typing import Optional


class ConfigError(ValueError):
    """Invalid network description or scenario configuration."""


class RegimeError(ValueError):
    """A performance quantity is undefined at the requested point."""


class ConvergenceError(RuntimeError):
    """Limit cycle (or steady state) not reached."""

    def __init__(self, message: str, residual: float = float('nan'), periods: int = 0):
        super().__init__(message)
        self.residual = residual
        self.periods = periods


class IntegrationError(RuntimeError):
    """Integrator produced non-finite values."""

    def __init__(self, message: str, t: float = float('nan')):
        super().__init__(message)
        self.t = t


class PhysicalityError(ValueError):
    """Covariance matrix violates the uncertainty bound."""

    def __init__(self, message: str, min_eigenvalue: Optional[float] = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class TruncationError(RuntimeError):
    """Fock-space truncation too small for the populated levels."""

    def __init__(self, message: str, suggested_dim: int = 0):
        super().__init__(message)
        self.suggested_dim = suggested_dim
