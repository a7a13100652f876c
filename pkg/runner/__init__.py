"""
Scenario execution and CSV output.
"""

__version__ = '1.0.0'

from .csv_writer import read_meta, write_csv
from .scenario_runner import (
    RunResult,
    evaluate_point,
    execute,
    reproduce,
    run_oracle,
    run_scenario,
    run_sweep
)

__all__ = [
    '__version__',
    'RunResult',
    'evaluate_point',
    'execute',
    'read_meta',
    'reproduce',
    'run_oracle',
    'run_scenario',
    'run_sweep',
    'write_csv'
]
