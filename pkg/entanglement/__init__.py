"""
Squeezed-bath mapping and two-mode Gaussian entanglement.
"""

from .squeezed_bath import effective_beta, effective_occupation
from .log_negativity import (
    SymplecticSpectrum,
    closed_form_nu_minus,
    log_negativity,
    symplectic_spectrum
)

__all__ = [
    'effective_beta',
    'effective_occupation',
    'SymplecticSpectrum',
    'closed_form_nu_minus',
    'log_negativity',
    'symplectic_spectrum'
]
