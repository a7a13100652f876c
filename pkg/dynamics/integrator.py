"""
Fixed-step integration of the Gaussian moment equations.

    d<R>/dt = D(t) <R>
    d(sigma)/dt = D(t) sigma + sigma D(t)^T + T(t)

Classical 4th-order Runge-Kutta with D and T re-evaluated at the substage
times; sigma is symmetrized after every step.
"""

import logging
import math
from collections import deque
from typing import Deque, List, Tuple

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from dynamics.state import CovarianceState, Trajectory, check_physical
from model.exceptions import ConfigError, ConvergenceError, IntegrationError
from model.matrices import build_matrices, drive_frequencies
from model.network import NetworkSpec, thermal_occupation
from thermo.flows import ThermoRecord, internal_energy, thermo_record

logger = logging.getLogger(__name__)

# Fraction of the fastest time scale used as the largest allowed step
STEP_FRACTION = 1.0 / 200.0
# Drift eigenvalues must have real parts below -STABILITY_MARGIN
STABILITY_MARGIN = 1e-12


def dt_max(net: NetworkSpec) -> float:
    """
    Largest allowed step: (1/200) * min(2 pi / omega_max, 1 / gamma_max, 2 pi / theta_max).

    omega_max includes the strongest inter-oscillator coupling, so strongly
    coupled networks resolve their normal-mode splitting.
    """
    omega_top = max(osc.omega0 + osc.delta_omega for osc in net.oscillators)
    omega_top += float(np.max(np.abs(net.coupling).sum(axis=1)))
    scales = [2 * math.pi / omega_top]

    gamma_max = float(np.max(net.damping)) if net.n_baths else 0.0
    if gamma_max > 0:
        scales.append(1.0 / gamma_max)

    thetas = [osc.theta for osc in net.oscillators if osc.is_driven]
    if thetas:
        scales.append(2 * math.pi / max(thetas))

    return STEP_FRACTION * min(scales)


def initial_gibbs(net: NetworkSpec, beta_init: float) -> CovarianceState:
    """
    Product Gibbs state of the uncoupled oscillators at t = 0.

    Each oscillator has sigma_xx = (2 n0 + 1) / (2 omega(0)),
    sigma_pp = omega(0) (2 n0 + 1) / 2 with n0 = 1 / (e^{beta omega(0)} - 1).

    Args:
        net: Network description
        beta_init: Inverse temperature of the initial state (may be inf)

    Returns:
        CovarianceState at t = 0 with zero first moments
    """
    if not beta_init > 0:
        raise ConfigError(f"beta_init = {beta_init} must be positive")

    omegas, _ = drive_frequencies(net, 0.0)
    n = net.n_oscillators
    diag = np.empty(2 * n)
    for i, omega in enumerate(omegas):
        factor = 2 * thermal_occupation(beta_init, float(omega)) + 1
        diag[2 * i] = factor / (2 * omega)
        diag[2 * i + 1] = omega * factor / 2
    return CovarianceState(t=0.0, mean=np.zeros(2 * n), sigma=np.diag(diag))


def _derivatives(
    net: NetworkSpec,
    t: float,
    mean: np.ndarray,
    sigma: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    m = build_matrices(net, t)
    drift = m.drift
    return drift @ mean, drift @ sigma + sigma @ drift.T + m.noise


def _rk4(state: CovarianceState, net: NetworkSpec, dt: float, t_new: float) -> CovarianceState:
    """One RK4 step of signed size dt; the result is stamped with t_new."""
    t = state.t
    m0, s0 = state.mean, state.sigma

    k1m, k1s = _derivatives(net, t, m0, s0)
    k2m, k2s = _derivatives(net, t + dt / 2, m0 + dt / 2 * k1m, s0 + dt / 2 * k1s)
    k3m, k3s = _derivatives(net, t + dt / 2, m0 + dt / 2 * k2m, s0 + dt / 2 * k2s)
    k4m, k4s = _derivatives(net, t + dt, m0 + dt * k3m, s0 + dt * k3s)

    mean = m0 + dt / 6 * (k1m + 2 * k2m + 2 * k3m + k4m)
    sigma = s0 + dt / 6 * (k1s + 2 * k2s + 2 * k3s + k4s)
    sigma = 0.5 * (sigma + sigma.T)

    if not (np.all(np.isfinite(sigma)) and np.all(np.isfinite(mean))):
        raise IntegrationError(f"Non-finite state after step to t = {t_new}", t=t_new)
    return CovarianceState(t=t_new, mean=mean, sigma=sigma)


def step(state: CovarianceState, net: NetworkSpec, dt: float) -> CovarianceState:
    """
    Advance a state by one RK4 step.

    Raises:
        ConfigError: If dt is not in (0, dt_max(net)]
        IntegrationError: If the step produces non-finite values
    """
    limit = dt_max(net)
    if not 0 < dt <= limit * (1 + 1e-12):
        raise ConfigError(f"dt = {dt} outside (0, {limit}]")
    return _rk4(state, net, dt, state.t + dt)


def advance(state: CovarianceState, net: NetworkSpec, dt: float, n_steps: int) -> CovarianceState:
    """Take n_steps RK4 steps without recording anything."""
    t0 = state.t
    current = state
    for k in range(1, n_steps + 1):
        current = _rk4(current, net, dt, t0 + k * dt)
    return current


def _energy_derivative(window: Deque[CovarianceState], net: NetworkSpec, dt: float) -> float:
    """Five-point centred difference of U_S at the middle of the window."""
    u = [internal_energy(s, net) for s in window]
    return (u[0] - 8 * u[1] + 8 * u[3] - u[4]) / (12 * dt)


def evolve(
    init: CovarianceState,
    net: NetworkSpec,
    t_end: float,
    dt: float,
    stride: int = 1,
    check_physicality: bool = True
) -> Trajectory:
    """
    Integrate from init to t_end and record every stride-th step.

    Each sample carries a ThermoRecord whose first-law residual compares a
    centred finite difference of U_S with W_dot + sum Q_dot.

    Args:
        init: Initial state
        net: Network description
        t_end: Final time (rounded up to a whole number of steps)
        dt: Step size
        stride: Steps between samples
        check_physicality: Verify the uncertainty bound at every sample

    Returns:
        Trajectory starting at init.t
    """
    if not t_end > init.t:
        raise ConfigError(f"t_end = {t_end} must exceed the initial time {init.t}")
    if dt <= 0 or stride < 1:
        raise ConfigError(f"Invalid dt = {dt} or stride = {stride}")

    t0 = init.t
    n_steps = int(math.ceil((t_end - t0) / dt - 1e-9))

    # Two backward steps feed the finite-difference stencil at the first sample
    back1 = _rk4(init, net, -dt, t0 - dt)
    back2 = _rk4(back1, net, -dt, t0 - 2 * dt)
    window: Deque[CovarianceState] = deque([back2, back1, init], maxlen=5)

    states: List[CovarianceState] = []
    records: List[ThermoRecord] = []
    current = init
    for k in range(1, n_steps + 3):
        current = _rk4(current, net, dt, t0 + k * dt)
        window.append(current)
        j = k - 2
        if j < 0 or j % stride != 0 or j > n_steps:
            continue

        centre = window[2]
        rec = thermo_record(centre, net)
        rec.first_law_residual = _energy_derivative(window, net, dt) - rec.w_dot - rec.total_heat
        if check_physicality:
            check_physical(centre)
        states.append(centre)
        records.append(rec)

    traj = Trajectory(states=states, records=records, net=net, dt=dt, stride=stride)
    traj.validate()
    logger.debug("Evolved %d steps to t = %.6g (%d samples)", n_steps, t0 + n_steps * dt, len(states))
    return traj


def steady_state(net: NetworkSpec, t: float = 0.0) -> CovarianceState:
    """
    Instantaneous steady state: D(t) sigma + sigma D(t)^T + T(t) = 0.

    For a static network this is the exact long-time state; for a driven one
    it is the state the oscillators follow under quasi-static driving.

    Raises:
        ConvergenceError: If D(t) is not strictly stable
    """
    m = build_matrices(net, t)
    growth = float(np.max(np.linalg.eigvals(m.drift).real))
    if growth > -STABILITY_MARGIN:
        raise ConvergenceError(
            f"Drift matrix not stable at t = {t} (max real eigenvalue {growth:.3g}); "
            "no unique steady state",
            residual=math.inf
        )
    sigma = solve_continuous_lyapunov(m.drift, -m.noise)
    sigma = 0.5 * (sigma + sigma.T)
    return CovarianceState(t=t, mean=np.zeros(2 * net.n_oscillators), sigma=sigma)
