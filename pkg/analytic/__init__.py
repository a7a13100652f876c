"""
Closed-form slow-driving solutions used as oracles for the dynamics.
"""

from .slow_driving import (
    SlowSolution,
    delta_cop,
    delta_eta,
    is_resonant,
    large_coupling_limit,
    slow_cop,
    slow_cycle_average,
    slow_efficiency,
    slow_flows,
    slow_flows_1osc,
    slow_flows_2osc,
    slow_regime,
    slow_state_1osc
)

__all__ = [
    'SlowSolution',
    'delta_cop',
    'delta_eta',
    'is_resonant',
    'large_coupling_limit',
    'slow_cop',
    'slow_cycle_average',
    'slow_efficiency',
    'slow_flows',
    'slow_flows_1osc',
    'slow_flows_2osc',
    'slow_regime',
    'slow_state_1osc'
]
