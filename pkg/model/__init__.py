"""
Domain types and matrix builders for driven oscillator networks.
"""

from .exceptions import (
    ConfigError,
    ConvergenceError,
    IntegrationError,
    PhysicalityError,
    RegimeError,
    TruncationError
)
from .network import (
    OscillatorSpec,
    BathSpec,
    NetworkSpec,
    build_network,
    chain_coupling,
    thermal_occupation
)
from .matrices import (
    MatrixSet,
    build_matrices,
    drive_frequency,
    drive_frequencies,
    excitation_number,
    excitation_numbers,
    symplectic_form
)

__all__ = [
    'ConfigError',
    'ConvergenceError',
    'IntegrationError',
    'PhysicalityError',
    'RegimeError',
    'TruncationError',
    'OscillatorSpec',
    'BathSpec',
    'NetworkSpec',
    'build_network',
    'chain_coupling',
    'thermal_occupation',
    'MatrixSet',
    'build_matrices',
    'drive_frequency',
    'drive_frequencies',
    'excitation_number',
    'excitation_numbers',
    'symplectic_form'
]
