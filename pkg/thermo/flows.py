"""
Instantaneous thermodynamic flows of a Gaussian state.

Sign convention: heat flowing into the system and work done on the system
are positive, so the first law reads dU/dt = W_dot + sum_alpha Q_dot_alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from model.exceptions import ConfigError
from model.matrices import MatrixSet, build_matrices, excitation_numbers
from model.network import NetworkSpec

if TYPE_CHECKING:
    from dynamics.state import CovarianceState


@dataclass
class ThermoRecord:
    """Thermodynamic snapshot at one time."""
    t: float
    q_dot: Tuple[float, ...]
    w_dot: float
    u: float
    first_law_residual: float = math.nan

    @property
    def total_heat(self) -> float:
        return float(sum(self.q_dot))

    def relative_residual(self, eps: float = 1e-300) -> float:
        """|first-law residual| / max(|W_dot|, |Q_dot_alpha|, eps)."""
        scale = max([abs(self.w_dot)] + [abs(q) for q in self.q_dot] + [eps])
        return abs(self.first_law_residual) / scale


def heat_currents(state: CovarianceState, net: NetworkSpec) -> np.ndarray:
    """
    Heat current from every bath into the system.

    Q_dot_alpha = sum_i g^2_{i,alpha} Omega_alpha [n_alpha^(eff) - <a_i^dag a_i>]
    """
    if net.n_baths == 0:
        return np.zeros(0)
    g2 = net.coupling_squared
    occupations = excitation_numbers(state, net)
    omega_bath = np.array([bath.omega_bath for bath in net.baths])
    n_eff = net.effective_occupations
    return omega_bath * (n_eff * g2.sum(axis=0) - g2.T @ occupations)


def heat_current(state: CovarianceState, net: NetworkSpec, alpha: int) -> float:
    """Heat current from bath alpha into the system."""
    if not 0 <= alpha < net.n_baths:
        raise ConfigError(f"Bath index {alpha} out of range for {net.n_baths} baths")
    return float(heat_currents(state, net)[alpha])


def internal_energy(
    state: CovarianceState,
    net: NetworkSpec,
    matrices: Optional[MatrixSet] = None
) -> float:
    """U_S = (1/2) tr(A_S sigma) + (1/2) <R>^T A_S <R>."""
    m = matrices if matrices is not None else build_matrices(net, state.t)
    a_s = m.a_s
    return float(0.5 * np.trace(a_s @ state.sigma) + 0.5 * state.mean @ a_s @ state.mean)


def energy_rate(
    state: CovarianceState,
    net: NetworkSpec,
    matrices: Optional[MatrixSet] = None
) -> float:
    """
    Exact dU_S/dt along the flow.

    Combines the explicit modulation term (1/2) tr(dA_S/dt sigma) with the
    change of the state under the moment equations.
    """
    m = matrices if matrices is not None else build_matrices(net, state.t)
    sigma = state.sigma
    mean = state.mean
    sigma_dot = m.drift @ sigma + sigma @ m.drift.T + m.noise
    mean_dot = m.drift @ mean
    return float(
        0.5 * np.trace(m.a_s_dot @ sigma)
        + 0.5 * np.trace(m.a_s @ sigma_dot)
        + 0.5 * mean @ m.a_s_dot @ mean
        + mean @ m.a_s @ mean_dot
    )


def power(state: CovarianceState, net: NetworkSpec) -> float:
    """
    Power done on the system, W_dot = dU_S/dt - sum_alpha Q_dot_alpha.

    Satisfies the first law identically. For one oscillator it is the
    covariance-level expression
    -gamma sigma_pp/2 + omega omega_dot sigma_xx + gamma omega (2 nbar + 1 - omega sigma_xx)/2 - sum Q_dot.
    """
    m = build_matrices(net, state.t)
    return energy_rate(state, net, m) - float(np.sum(heat_currents(state, net)))


def power_adiabatic(state: CovarianceState, net: NetworkSpec) -> float:
    """
    Mode-sum power expression.

    W_dot = sum_i sum_alpha g^2_{i,alpha} (omega_i - Omega_alpha)(n_alpha^(eff) - <a_i^dag a_i>)
            + sum_i omega_dot_i (2 <a_i^dag a_i> + 1) / 2

    Agrees with power() for one oscillator in slow driving and for resonant
    networks at their instantaneous steady state; it ignores local squeezing
    of the oscillators, so it departs from the exact power under fast driving.
    """
    m = build_matrices(net, state.t)
    occupations = excitation_numbers(state, net)
    g2 = net.coupling_squared
    omega_bath = np.array([bath.omega_bath for bath in net.baths])
    n_eff = net.effective_occupations

    detuning = m.omegas[:, None] - omega_bath[None, :]
    imbalance = n_eff[None, :] - occupations[:, None]
    exchange = float(np.sum(g2 * detuning * imbalance))
    modulation = float(np.sum(m.omega_dots * (2 * occupations + 1) / 2))
    return exchange + modulation


def power_two_oscillator(state: CovarianceState, net: NetworkSpec) -> float:
    """
    Two-oscillator power from the local oscillator energies.

    W_dot = sum_i (g_i^2/2)[omega_i (1 + 2 n_i - omega_i sigma_xixi) - sigma_pipi]
            + sum_i omega_i omega_dot_i sigma_xixi
            + lambda (omega_1 - omega_2)/sqrt(omega_1 omega_2) (omega_1 sigma_x1p2 - omega_2 sigma_x2p1)
            - sum_alpha Q_dot_alpha

    where oscillator i is attached to a single bath with coupling g_i and
    occupation n_i. Matches power() when the coupling energy is stationary,
    e.g. resonant oscillators at their instantaneous steady state.
    """
    if net.n_oscillators != 2:
        raise ConfigError("power_two_oscillator needs exactly two oscillators")

    m = build_matrices(net, state.t)
    sigma = state.sigma
    omegas = m.omegas
    lam = net.coupling[0, 1]

    total = 0.0
    for i in range(2):
        alpha = net.attached_bath(i)
        g2 = net.coupling_squared[i, alpha]
        n = net.effective_occupations[alpha]
        x, p = 2 * i, 2 * i + 1
        total += 0.5 * g2 * (omegas[i] * (1 + 2 * n - omegas[i] * sigma[x, x]) - sigma[p, p])
        total += omegas[i] * m.omega_dots[i] * sigma[x, x]

    total += (
        lam * (omegas[0] - omegas[1]) / np.sqrt(omegas[0] * omegas[1])
        * (omegas[0] * sigma[0, 3] - omegas[1] * sigma[2, 1])
    )
    return float(total - np.sum(heat_currents(state, net)))


def thermo_record(
    state: CovarianceState,
    net: NetworkSpec,
    first_law_residual: float = math.nan
) -> ThermoRecord:
    """Evaluate heat currents, power and internal energy of a state."""
    m = build_matrices(net, state.t)
    q_dot = heat_currents(state, net)
    u_rate = energy_rate(state, net, m)
    return ThermoRecord(
        t=state.t,
        q_dot=tuple(float(q) for q in q_dot),
        w_dot=u_rate - float(np.sum(q_dot)),
        u=internal_energy(state, net, m),
        first_law_residual=first_law_residual
    )
