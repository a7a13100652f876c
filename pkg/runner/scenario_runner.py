"""
Scenario runner: single runs, parameter sweeps and figure reproduction.

Each grid point of a sweep is an independent single-threaded simulation.
Points run in a process pool and are written back in grid order, so the
output does not depend on the number of workers.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from analytic.slow_driving import slow_cycle_average, slow_flows
from config.simulation_config import ScenarioConfig, load_preset
from dynamics.integrator import dt_max, evolve, initial_gibbs
from dynamics.limit_cycle import find_limit_cycle, period_grid
from dynamics.state import Trajectory
from entanglement.log_negativity import log_negativity
from model.network import NetworkSpec
from oracle.fock_oracle import compare_with_gaussian
from runner.csv_writer import write_csv
from thermo.flows import ThermoRecord
from thermo.performance import (
    CycleSummary,
    average_flows,
    cop_instant,
    cycle_average,
    efficiency_instant,
    entropy_production,
    generate_cycle_report,
    reference_metrics
)

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    """Table produced by one command plus its convergence diagnostics."""
    frame: pd.DataFrame
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    report: Optional[str] = None


def _nan(value: Optional[float]) -> float:
    return math.nan if value is None else float(value)


def _numeric_trajectory(config: ScenarioConfig, net: NetworkSpec, transient: bool = True) -> Trajectory:
    run = config.run
    init = initial_gibbs(net, config.beta_init())

    if run.t_end is None or not transient:
        return find_limit_cycle(
            net,
            init,
            rel_tol=run.rel_tol,
            max_periods=run.max_periods,
            dt_factor=run.dt_factor,
            samples_per_period=run.samples_per_period
        )

    t_end = run.t_end / config.network.reference_omega
    period = net.common_period()
    if period is not None:
        dt, _, stride = period_grid(period, net, run.dt_factor, run.samples_per_period)
    else:
        dt = run.dt_factor * dt_max(net)
        stride = max(1, int(t_end / dt) // run.samples_per_period)
    return evolve(init, net, t_end, dt, stride)


def _performance_columns(df: pd.DataFrame, records: List[ThermoRecord], net: NetworkSpec) -> pd.DataFrame:
    if net.n_baths != 2:
        return df
    cold, hot = net.cold_hot_indices()
    df['eta'] = [_nan(efficiency_instant(rec, hot)) for rec in records]
    df['cop'] = [_nan(cop_instant(rec, cold)) for rec in records]
    return df


def _slow_frame(config: ScenarioConfig, net: NetworkSpec) -> pd.DataFrame:
    solution = slow_flows(net, 0.0)
    period = net.common_period()
    n = config.run.slow_samples
    times = [0.0] if period is None else list(np.arange(n + 1) * period / n)

    records = []
    for t in times:
        q_c, q_h = solution.heat(t)
        q_dot = [0.0, 0.0]
        q_dot[solution.cold_index] = q_c
        q_dot[solution.hot_index] = q_h
        records.append(ThermoRecord(t=t, q_dot=tuple(q_dot), w_dot=solution.w_dot(t), u=math.nan))

    df = pd.DataFrame({
        't': times,
        'q_dot_0': [rec.q_dot[0] for rec in records],
        'q_dot_1': [rec.q_dot[1] for rec in records],
        'w_dot': [rec.w_dot for rec in records]
    })
    return _performance_columns(df, records, net)


def run_scenario(config: ScenarioConfig) -> RunResult:
    """
    Time series of one scenario.

    The numeric method samples one limit-cycle period (or a transient up to
    run.t_end); the slow method samples the closed forms over one period.
    """
    net = config.network_spec()
    if config.run.method == 'slow':
        summary = slow_cycle_average(net, n_samples=config.run.slow_samples, eps_idle=config.run.eps_idle)
        return RunResult(
            frame=_slow_frame(config, net),
            diagnostics={'method': 'slow'},
            report=generate_cycle_report(summary, reference_metrics(net, strict=False))
        )

    traj = _numeric_trajectory(config, net)
    df = _performance_columns(traj.to_frame(), traj.records, net)
    worst = float(np.nanmax(np.abs([rec.relative_residual() for rec in traj.records])))
    diagnostics = {
        'method': 'numeric',
        'dt': traj.dt,
        'stride': traj.stride,
        'periods': traj.periods_to_converge,
        'residual': traj.residual,
        'max_relative_first_law_residual': worst
    }
    logger.info("Run %s: %d samples, %d periods to converge", config.name, len(df), traj.periods_to_converge)
    report = None
    if config.run.t_end is None and net.n_baths == 2:
        summary = cycle_average(traj, eps_idle=config.run.eps_idle)
        report = generate_cycle_report(summary, reference_metrics(net, strict=False))
    return RunResult(frame=df, diagnostics=diagnostics, report=report)


def _flow_row(avg_q: Tuple[float, ...], avg_w: float, net: NetworkSpec) -> Dict[str, Any]:
    row: Dict[str, Any] = {f'avg_q_{a}': q for a, q in enumerate(avg_q)}
    row['avg_w'] = avg_w
    row['entropy_production'] = entropy_production(avg_q, net)
    return row


def _summary_row(summary: CycleSummary, net: NetworkSpec) -> Dict[str, Any]:
    metrics = reference_metrics(net, strict=False)
    row = {f'avg_q_{a}': q for a, q in enumerate(summary.avg_q)}
    row.update({
        'avg_q_c': summary.avg_q_c,
        'avg_q_h': summary.avg_q_h,
        'avg_w': summary.avg_w,
        'regime': summary.regime.value,
        'eta': _nan(summary.avg_efficiency),
        'cop': _nan(summary.avg_cop),
        'instant_eta_max': _nan(summary.instant_eta_max),
        'instant_eta_mean': _nan(summary.instant_eta_mean),
        'instant_cop_max': _nan(summary.instant_cop_max),
        'instant_cop_mean': _nan(summary.instant_cop_mean),
        'eta_otto': metrics.eta_otto,
        'cop_otto': metrics.cop_otto,
        'eta_carnot': metrics.eta_carnot,
        'eta_carnot_eff': metrics.eta_carnot_eff,
        'eta_curzon_ahlborn': metrics.eta_curzon_ahlborn,
        'entropy_production': entropy_production(summary, net)
    })
    return row


def evaluate_point(config: ScenarioConfig) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    """
    Period-averaged thermodynamics of one grid point.

    Returns:
        (summary row, convergence diagnostics)
    """
    net = config.network_spec()
    if config.run.method == 'slow':
        summary = slow_cycle_average(net, n_samples=config.run.slow_samples, eps_idle=config.run.eps_idle)
        return _summary_row(summary, net), {'periods': 0, 'residual': 0.0}

    traj = _numeric_trajectory(config, net, transient=False)
    if net.n_baths == 2:
        row = _summary_row(cycle_average(traj, eps_idle=config.run.eps_idle), net)
    else:
        # No cold/hot labels, so no regime or reference metrics
        avg_q, avg_w, _ = average_flows(traj)
        row = _flow_row(avg_q, avg_w, net)
    if net.n_oscillators == 2:
        e_n = [log_negativity(state) for state in traj.states]
        row['e_n_max'] = float(max(e_n))
        row['e_n_mean'] = float(np.mean(e_n[:-1] if len(e_n) > 1 else e_n))
    return row, {'periods': traj.periods_to_converge, 'residual': traj.residual}


def _sweep_task(config_data: Dict[str, Any], point: Dict[str, float]) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    config = ScenarioConfig.from_dict(config_data).with_overrides(point)
    return evaluate_point(config)


def run_sweep(config: ScenarioConfig, workers: int = 1, progress: bool = True) -> RunResult:
    """
    Evaluate every grid point and collect one summary row per point.

    Rows are ordered by grid position regardless of completion order.
    """
    grid = config.grid()
    data = config.to_dict()
    results: List[Optional[Tuple[Dict[str, Any], Dict[str, Any]]]] = [None] * len(grid)
    logger.info("Sweep %s: %d grid points, %d worker(s)", config.name, len(grid), workers)

    bar = tqdm(total=len(grid), desc=config.name, unit="point", disable=not progress)
    if workers <= 1:
        for idx, point in enumerate(grid):
            results[idx] = _sweep_task(data, point)
            bar.update(1)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = {ex.submit(_sweep_task, data, point): idx for idx, point in enumerate(grid)}
            for fut in as_completed(futures):
                results[futures[fut]] = fut.result()
                bar.update(1)
    bar.close()

    rows = []
    diagnostics = []
    for idx, (point, (row, diag)) in enumerate(zip(grid, results)):
        swept = {axis.column: point[axis.paths[0]] for axis in config.sweeps}
        rows.append({**swept, **row})
        diagnostics.append({'index': idx, **swept, **diag})
    return RunResult(frame=pd.DataFrame(rows), diagnostics={'points': diagnostics})


def run_oracle(config: ScenarioConfig, periods: int = 5) -> RunResult:
    """Fock-space versus Gaussian comparison for a one-oscillator scenario."""
    net = config.network_spec()
    df = compare_with_gaussian(
        net,
        config.beta_init(),
        periods=periods,
        dt_factor=config.run.dt_factor,
        samples_per_period=config.run.samples_per_period
    )
    diagnostics = {
        'periods': periods,
        'max_abs_diff_n': float(df['diff_n'].abs().max()),
        'max_abs_diff_sigma_xx': float(df['diff_sigma_xx'].abs().max()),
        'max_abs_diff_sigma_pp': float(df['diff_sigma_pp'].abs().max())
    }
    return RunResult(frame=df, diagnostics=diagnostics)


def execute(config: ScenarioConfig, out: Optional[Path] = None, workers: int = 1) -> Path:
    """Run or sweep a scenario, depending on whether it declares sweep axes, and write the CSV."""
    result = run_sweep(config, workers) if config.sweeps else run_scenario(config)
    path = Path(out) if out is not None else Path(config.output.path)
    write_csv(result.frame, path, config, result.diagnostics)
    return path


def reproduce(figure_id: str, out_dir: Optional[Path] = None, workers: int = 1) -> Path:
    """Emit the data behind one figure preset."""
    config = load_preset(figure_id)
    out = Path(out_dir) / f'{figure_id}.csv' if out_dir is not None else None
    logger.info("Reproducing %s", figure_id)
    return execute(config, out, workers)
