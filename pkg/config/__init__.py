"""
Scenario configuration and figure presets.
"""

from .simulation_config import (
    FIGURE_IDS,
    BathConfig,
    LoggingConfig,
    NetworkConfig,
    OscillatorConfig,
    OutputConfig,
    RunControls,
    ScenarioConfig,
    SweepAxis,
    load_preset,
    setup_logging
)

__all__ = [
    'FIGURE_IDS',
    'BathConfig',
    'LoggingConfig',
    'NetworkConfig',
    'OscillatorConfig',
    'OutputConfig',
    'RunControls',
    'ScenarioConfig',
    'SweepAxis',
    'load_preset',
    'setup_logging'
]
