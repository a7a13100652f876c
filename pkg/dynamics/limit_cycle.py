"""
Limit-cycle detection for periodically driven networks.

Whole modulation periods are integrated until the covariance matrix at
consecutive period boundaries stops changing; one more period is then
sampled densely and returned.
"""

import logging
import math
from typing import Tuple

import numpy as np

from dynamics.integrator import advance, dt_max, evolve, steady_state
from dynamics.state import CovarianceState, Trajectory, check_physical
from model.exceptions import ConfigError, ConvergenceError
from model.network import NetworkSpec
from thermo.flows import thermo_record

logger = logging.getLogger(__name__)

DEFAULT_REL_TOL = 1e-8
DEFAULT_MAX_PERIODS = 10_000
DEFAULT_SAMPLES_PER_PERIOD = 400


def period_grid(
    period: float,
    net: NetworkSpec,
    dt_factor: float = 1.0,
    samples_per_period: int = DEFAULT_SAMPLES_PER_PERIOD
) -> Tuple[float, int, int]:
    """
    Step size aligned with the period boundaries.

    Returns:
        (dt, steps_per_period, stride) with steps_per_period a multiple of stride
        and dt <= dt_factor * dt_max(net)
    """
    if not 0 < dt_factor <= 1:
        raise ConfigError(f"dt_factor = {dt_factor} must be in (0, 1]")
    if samples_per_period < 1:
        raise ConfigError(f"samples_per_period = {samples_per_period} must be positive")

    target = dt_factor * dt_max(net)
    n_steps = int(math.ceil(period / target))
    stride = max(1, n_steps // samples_per_period)
    n_steps = int(math.ceil(n_steps / stride)) * stride
    return period / n_steps, n_steps, stride


def relative_change(new: np.ndarray, old: np.ndarray) -> float:
    """||new - old||_max / ||old||_max."""
    return float(np.max(np.abs(new - old)) / np.max(np.abs(old)))


def find_limit_cycle(
    net: NetworkSpec,
    init: CovarianceState,
    rel_tol: float = DEFAULT_REL_TOL,
    max_periods: int = DEFAULT_MAX_PERIODS,
    dt_factor: float = 1.0,
    samples_per_period: int = DEFAULT_SAMPLES_PER_PERIOD
) -> Trajectory:
    """
    Evolve whole periods until the cycle repeats, then sample one period.

    A network with no driven oscillator returns its static steady state as a
    one-sample cycle with zero residual.

    Args:
        net: Network description
        init: Initial state (usually initial_gibbs)
        rel_tol: Convergence threshold on the normalized change of sigma
        max_periods: Give up after this many periods
        dt_factor: Step size as a fraction of dt_max
        samples_per_period: Approximate number of stored samples in the cycle

    Returns:
        Trajectory spanning exactly one period (both end points included)

    Raises:
        ConvergenceError: If the residual is still above rel_tol after max_periods
        ConfigError: If modulation frequencies are incommensurate
    """
    period = net.common_period()
    if period is None:
        return _static_cycle(net, init)

    dt, n_steps, stride = period_grid(period, net, dt_factor, samples_per_period)
    logger.debug(
        "Limit cycle search: period %.6g, dt %.3g, %d steps/period, stride %d",
        period, dt, n_steps, stride
    )

    state = init
    residual = math.inf
    periods = 0
    while periods < max_periods:
        previous = state.sigma
        state = advance(state, net, dt, n_steps)
        periods += 1
        state.t = init.t + periods * period
        residual = relative_change(state.sigma, previous)
        logger.debug("Period %d: residual %.3e", periods, residual)
        if residual < rel_tol:
            break
    else:
        raise ConvergenceError(
            f"Limit cycle not reached after {periods} periods (residual {residual:.3e})",
            residual=residual,
            periods=periods
        )

    logger.info("Limit cycle reached after %d periods (residual %.2e)", periods, residual)
    traj = evolve(state, net, state.t + period, dt, stride)
    traj.period = period
    traj.periods_to_converge = periods
    traj.residual = residual
    return traj


def _static_cycle(net: NetworkSpec, init: CovarianceState) -> Trajectory:
    state = steady_state(net, init.t)
    check_physical(state)
    rec = thermo_record(state, net)
    # Stationary U_S, so the residual is the exact rate itself
    rec.first_law_residual = -(rec.w_dot + rec.total_heat)
    logger.info("Static network: using the Lyapunov steady state")
    return Trajectory(
        states=[state],
        records=[rec],
        net=net,
        dt=0.0,
        stride=1,
        period=0.0,
        periods_to_converge=0,
        residual=0.0
    )
