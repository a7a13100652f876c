"""
Time evolution of Gaussian states: RK4 integration of the moment equations,
Gibbs initialization, steady states and limit-cycle detection.
"""

from .state import (
    CovarianceState,
    Trajectory,
    check_physical,
    quadrature_labels,
    sigma_columns,
    symplectic_eigenvalues
)
from .integrator import advance, dt_max, evolve, initial_gibbs, steady_state, step
from .limit_cycle import find_limit_cycle, period_grid

__all__ = [
    'CovarianceState',
    'Trajectory',
    'check_physical',
    'quadrature_labels',
    'sigma_columns',
    'symplectic_eigenvalues',
    'advance',
    'dt_max',
    'evolve',
    'initial_gibbs',
    'steady_state',
    'step',
    'find_limit_cycle',
    'period_grid'
]
