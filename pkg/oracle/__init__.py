"""
Truncated Fock-space Lindblad oracle for the one-oscillator machine.
"""

from .fock_oracle import (
    FockState,
    compare_with_gaussian,
    excess_kurtosis,
    lindblad_step,
    moments,
    run_oracle,
    thermal_fock_state
)

__all__ = [
    'FockState',
    'compare_with_gaussian',
    'excess_kurtosis',
    'lindblad_step',
    'moments',
    'run_oracle',
    'thermal_fock_state'
]
