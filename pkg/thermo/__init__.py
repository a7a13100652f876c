"""
Thermodynamics of driven oscillator machines.

This module provides:
- Instantaneous heat currents, power and internal energy
- Cycle averages and regime classification
- Efficiency / COP metrics and reference values
"""

from .flows import (
    ThermoRecord,
    energy_rate,
    heat_current,
    heat_currents,
    internal_energy,
    power,
    power_adiabatic,
    power_two_oscillator,
    thermo_record
)
from .performance import (
    CycleSummary,
    ReferenceMetrics,
    Regime,
    average_flows,
    classify_regime,
    cop_instant,
    cycle_average,
    efficiency_instant,
    entropy_production,
    generate_cycle_report,
    reference_metrics,
    summarize_flows
)

__all__ = [
    'ThermoRecord',
    'energy_rate',
    'heat_current',
    'heat_currents',
    'internal_energy',
    'power',
    'power_adiabatic',
    'power_two_oscillator',
    'thermo_record',
    'CycleSummary',
    'ReferenceMetrics',
    'Regime',
    'average_flows',
    'classify_regime',
    'cop_instant',
    'cycle_average',
    'efficiency_instant',
    'entropy_production',
    'generate_cycle_report',
    'reference_metrics',
    'summarize_flows'
]
