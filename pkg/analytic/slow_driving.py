"""
Closed-form slow-driving solutions.

When the modulation is slow compared with the relaxation rates the
covariance follows its instantaneous steady state. Heat currents and power
then have closed forms that serve as oracles for the numerical dynamics.

Notation: g_c, g_h couplings to the cold and hot bath, n_c, n_h their
(effective) occupations, P = g_c^2 g_h^2, G = g_c^2 + g_h^2.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from dynamics.integrator import steady_state
from model.exceptions import ConfigError, RegimeError
from model.matrices import drive_frequencies, drive_frequency
from model.network import NetworkSpec
from thermo.flows import ThermoRecord
from thermo.performance import CycleSummary, Regime, summarize_flows

logger = logging.getLogger(__name__)


@dataclass
class SlowSolution:
    """
    Slow-driving limit-cycle flows.

    q_dot_c / q_dot_h are evaluated at the time the solution was built;
    heat(t), w_dot(t) and sigma_slow(t) give the time-resolved values.
    """
    q_dot_c: float
    q_dot_h: float
    w_dot: Callable[[float], float]
    sigma_slow: Callable[[float], np.ndarray]
    heat: Callable[[float], Tuple[float, float]]
    cold_index: int = 0
    hot_index: int = 1
    nbar: Optional[float] = None

    @property
    def avg_w(self) -> float:
        """Non-oscillating part of the power, -(Q_dot_c + Q_dot_h)."""
        return -(self.q_dot_c + self.q_dot_h)


@dataclass
class _BathPair:
    cold: int
    hot: int
    n_c: float
    n_h: float
    omega_c: float
    omega_h: float


def _bath_pair(net: NetworkSpec) -> _BathPair:
    cold, hot = net.cold_hot_indices()
    n_eff = net.effective_occupations
    return _BathPair(
        cold=cold,
        hot=hot,
        n_c=float(n_eff[cold]),
        n_h=float(n_eff[hot]),
        omega_c=net.baths[cold].omega_bath,
        omega_h=net.baths[hot].omega_bath
    )


def slow_state_1osc(omega: float, nbar: float) -> Tuple[float, float, float]:
    """
    Instantaneous steady state of one damped oscillator.

    Returns:
        (sigma_xx, sigma_xp, sigma_pp) = ((2 nbar + 1)/(2 omega), 0, omega (2 nbar + 1)/2)
    """
    factor = 2 * nbar + 1
    return factor / (2 * omega), 0.0, omega * factor / 2


def slow_flows_1osc(net: NetworkSpec) -> SlowSolution:
    """
    One oscillator between two baths.

    Q_dot_c = Omega_c P (n_c - n_h) / G,  Q_dot_h = Omega_h P (n_h - n_c) / G,
    W_dot(t) = -(Q_dot_c + Q_dot_h) + (2 nbar + 1) omega_dot(t) / 2,
    with nbar = (g_c^2 n_c + g_h^2 n_h) / G the weighted bath occupation.
    """
    if net.n_oscillators != 1 or net.n_baths != 2:
        raise ConfigError("slow_flows_1osc needs one oscillator and two baths")

    pair = _bath_pair(net)
    g2c = float(net.coupling_squared[0, pair.cold])
    g2h = float(net.coupling_squared[0, pair.hot])
    gamma = g2c + g2h

    if gamma > 0:
        nbar = (g2c * pair.n_c + g2h * pair.n_h) / gamma
        exchange = g2c * g2h * (pair.n_c - pair.n_h) / gamma
    else:
        nbar = 0.0
        exchange = 0.0
    q_c = pair.omega_c * exchange
    q_h = -pair.omega_h * exchange
    osc = net.oscillators[0]

    def w_dot(t: float) -> float:
        _, omega_dot = drive_frequency(osc, t)
        return -(q_c + q_h) + (2 * nbar + 1) * omega_dot / 2

    def sigma_slow(t: float) -> np.ndarray:
        omega, _ = drive_frequency(osc, t)
        sxx, sxp, spp = slow_state_1osc(omega, nbar)
        return np.array([[sxx, sxp], [sxp, spp]])

    return SlowSolution(
        q_dot_c=q_c,
        q_dot_h=q_h,
        w_dot=w_dot,
        sigma_slow=sigma_slow,
        heat=lambda t: (q_c, q_h),
        cold_index=pair.cold,
        hot_index=pair.hot,
        nbar=nbar
    )


def _two_oscillator_layout(net: NetworkSpec) -> Tuple[_BathPair, int, int, float, float, float]:
    """Oscillator attached to the cold bath, the one attached to the hot bath, g_c^2, g_h^2, lambda."""
    if net.n_oscillators != 2 or net.n_baths != 2:
        raise ConfigError("two-oscillator formulas need two oscillators and two baths")

    pair = _bath_pair(net)
    attached = [net.attached_bath(i) for i in range(2)]
    if sorted(attached) != [0, 1]:
        raise ConfigError("each oscillator must be coupled to a different bath")
    i_c = attached.index(pair.cold)
    i_h = attached.index(pair.hot)
    g2c = float(net.coupling_squared[i_c, pair.cold])
    g2h = float(net.coupling_squared[i_h, pair.hot])
    lam = float(net.coupling[0, 1])
    return pair, i_c, i_h, g2c, g2h, lam


def is_resonant(net: NetworkSpec) -> bool:
    """True when both oscillators share the same modulation, so omega_1(t) = omega_2(t)."""
    first, second = net.oscillators[0], net.oscillators[1]
    return (
        first.omega0 == second.omega0
        and first.delta_omega == second.delta_omega
        and (first.theta == second.theta or first.delta_omega == 0)
    )


def slow_flows_2osc(net: NetworkSpec, t: float = 0.0) -> SlowSolution:
    """
    Two coupled oscillators, each attached to its own bath.

    Q_dot_c = 4 Omega_c lambda^2 P G (n_c - n_h)
              / [G^2 (4 lambda^2 + P) + 4 P (omega_1 - omega_2)^2],
    Q_dot_h = -(Omega_h / Omega_c) Q_dot_c.

    For resonant oscillators this is the one-oscillator current divided by
    1 + P / (4 lambda^2), and the power has the closed form

    W_dot = [(P G S / lambda^2 + 4 E) omega_dot - 4 P (n_c - n_h)(Omega_c - Omega_h)]
            / [G (4 + P / lambda^2)]

    with S = 1 + n_c + n_h and E = g_c^2 (1 + 2 n_c) + g_h^2 (1 + 2 n_h).
    Detuned oscillators use W_dot = sum_i omega_dot_i (2 N_i + 1)/2 - sum Q_dot,
    the local occupations N_i following from the excitation flux balance.
    sigma_slow(t) is the numerical instantaneous steady state.
    """
    pair, i_c, i_h, g2c, g2h, lam = _two_oscillator_layout(net)
    p = g2c * g2h
    g = g2c + g2h
    delta_n = pair.n_c - pair.n_h
    resonant = is_resonant(net)

    def heat(time: float) -> Tuple[float, float]:
        omegas, _ = drive_frequencies(net, time)
        detuning = omegas[i_c] - omegas[i_h]
        denominator = g ** 2 * (4 * lam ** 2 + p) + 4 * p * detuning ** 2
        if lam == 0 or p == 0:
            return 0.0, 0.0
        q_c = 4 * pair.omega_c * lam ** 2 * p * g * delta_n / denominator
        return q_c, -pair.omega_h / pair.omega_c * q_c

    def w_dot_flux(time: float) -> float:
        q_c, q_h = heat(time)
        _, omega_dots = drive_frequencies(net, time)
        flux = q_c / pair.omega_c
        occ_c = pair.n_c - flux / g2c if g2c > 0 else pair.n_c
        occ_h = pair.n_h + flux / g2h if g2h > 0 else pair.n_h
        modulation = (omega_dots[i_c] * (2 * occ_c + 1) + omega_dots[i_h] * (2 * occ_h + 1)) / 2
        return modulation - q_c - q_h

    def w_dot_resonant(time: float) -> float:
        _, omega_dots = drive_frequencies(net, time)
        s = 1 + pair.n_c + pair.n_h
        e = g2c * (1 + 2 * pair.n_c) + g2h * (1 + 2 * pair.n_h)
        # Multiplied through by lambda^2 so lambda = 0 stays finite
        numerator = (
            (p * g * s + 4 * e * lam ** 2) * omega_dots[i_c]
            - 4 * p * delta_n * (pair.omega_c - pair.omega_h) * lam ** 2
        )
        return numerator / (g * (4 * lam ** 2 + p))

    use_closed_form = resonant and g > 0 and (p > 0 or lam != 0)
    q_c, q_h = heat(t)
    return SlowSolution(
        q_dot_c=q_c,
        q_dot_h=q_h,
        w_dot=w_dot_resonant if use_closed_form else w_dot_flux,
        sigma_slow=lambda time: steady_state(net, time).sigma,
        heat=heat,
        cold_index=pair.cold,
        hot_index=pair.hot
    )


def slow_flows(net: NetworkSpec, t: float = 0.0) -> SlowSolution:
    """Dispatch to the one- or two-oscillator closed forms."""
    if net.n_oscillators == 1:
        return slow_flows_1osc(net)
    if net.n_oscillators == 2:
        return slow_flows_2osc(net, t)
    raise ConfigError(f"No slow-driving closed form for N = {net.n_oscillators}")


def large_coupling_limit(net: NetworkSpec) -> SlowSolution:
    """
    lambda -> infinity limit of the resonant two-oscillator solution.

    The heat currents and the constant part of the power reduce to the
    one-oscillator values; the modulation term becomes (2 nbar + 1) omega_dot,
    twice the one-oscillator term because both oscillators are driven.
    """
    pair, i_c, _, g2c, g2h, _ = _two_oscillator_layout(net)
    p = g2c * g2h
    g = g2c + g2h
    if g == 0:
        raise ConfigError("large-coupling limit needs at least one bath coupling")
    exchange = p * (pair.n_c - pair.n_h) / g
    e = g2c * (1 + 2 * pair.n_c) + g2h * (1 + 2 * pair.n_h)
    q_c = pair.omega_c * exchange
    q_h = -pair.omega_h * exchange

    def w_dot(time: float) -> float:
        _, omega_dots = drive_frequencies(net, time)
        return -(q_c + q_h) + e / g * omega_dots[i_c]

    return SlowSolution(
        q_dot_c=q_c,
        q_dot_h=q_h,
        w_dot=w_dot,
        sigma_slow=lambda time: steady_state(net, time).sigma,
        heat=lambda time: (q_c, q_h),
        cold_index=pair.cold,
        hot_index=pair.hot,
        nbar=(g2c * pair.n_c + g2h * pair.n_h) / g
    )


def delta_eta(net: NetworkSpec, t: float, order: int = 1) -> float:
    """
    Oscillating correction to the instantaneous efficiency, eta(t) = eta_Otto + delta_eta(t).

    order 1 (one oscillator):
        delta_eta = omega_dot (2 nbar + 1)(1/g_c^2 + 1/g_h^2) / (2 Omega_h (n_c - n_h))
    order 2 (two resonant oscillators):
        delta_eta = G S omega_dot / (4 lambda^2 Omega_h (n_c - n_h)) + 2 delta_eta^(1)

    Both average to zero over a period.

    Raises:
        RegimeError: At the Carnot point n_c = n_h, or for lambda = 0
    """
    if order == 1:
        if net.n_oscillators != 1:
            raise ConfigError("first-order correction needs one oscillator")
        pair = _bath_pair(net)
        g2c = float(net.coupling_squared[0, pair.cold])
        g2h = float(net.coupling_squared[0, pair.hot])
        _, omega_dot = drive_frequency(net.oscillators[0], t)
    elif order == 2:
        pair, i_c, _, g2c, g2h, lam = _two_oscillator_layout(net)
        if not is_resonant(net):
            raise ConfigError("second-order correction needs resonant oscillators")
        if lam == 0:
            raise RegimeError("second-order correction undefined for lambda = 0")
        _, omega_dot = drive_frequency(net.oscillators[i_c], t)
    else:
        raise ConfigError(f"order must be 1 or 2, got {order}")

    delta_n = pair.n_c - pair.n_h
    if delta_n == 0:
        raise RegimeError("efficiency correction undefined at the Carnot point (n_c = n_h)")
    if g2c == 0 or g2h == 0:
        raise RegimeError("efficiency correction undefined with a decoupled bath")

    g = g2c + g2h
    nbar = (g2c * pair.n_c + g2h * pair.n_h) / g
    first = omega_dot * (2 * nbar + 1) * (1 / g2c + 1 / g2h) / (2 * pair.omega_h * delta_n)
    if order == 1:
        return float(first)

    s = 1 + pair.n_c + pair.n_h
    return float(g * s * omega_dot / (4 * lam ** 2 * pair.omega_h * delta_n) + 2 * first)


def delta_cop(net: NetworkSpec, t: float, order: int = 1) -> float:
    """
    Oscillating COP correction: 1/COP(t) = 1/COP_Otto + 1/delta_cop(t).

    1/delta_cop = (Omega_h / Omega_c) delta_eta; infinite where omega_dot = 0.
    """
    pair = _bath_pair(net)
    inverse = pair.omega_h / pair.omega_c * delta_eta(net, t, order)
    if inverse == 0:
        return math.inf
    return 1.0 / inverse


def slow_efficiency(net: NetworkSpec, t: float, order: int = 1) -> float:
    """Instantaneous slow-driving efficiency eta_Otto + delta_eta(t)."""
    pair = _bath_pair(net)
    return 1 - pair.omega_c / pair.omega_h + delta_eta(net, t, order)


def slow_cop(net: NetworkSpec, t: float, order: int = 1) -> float:
    """Instantaneous slow-driving COP from 1/COP = 1/COP_Otto + 1/delta_cop."""
    pair = _bath_pair(net)
    if pair.omega_h == pair.omega_c:
        raise RegimeError("COP_Otto undefined for Omega_h = Omega_c")
    inverse = (pair.omega_h - pair.omega_c) / pair.omega_c + 1.0 / delta_cop(net, t, order)
    return 1.0 / inverse


def slow_cycle_average(net: NetworkSpec, n_samples: int = 256, eps_idle: float = 1e-10) -> CycleSummary:
    """
    Period averages of the slow-driving flows.

    Samples the closed forms at n_samples evenly spaced instants of one
    period; a static network gives a single sample.
    """
    period = net.common_period()
    times = [0.0] if period is None else list(np.arange(n_samples) * period / n_samples)

    solution = slow_flows(net, 0.0)
    records = []
    for time in times:
        q_c, q_h = solution.heat(time)
        q_dot = [0.0, 0.0]
        q_dot[solution.cold_index] = q_c
        q_dot[solution.hot_index] = q_h
        records.append(ThermoRecord(t=time, q_dot=tuple(q_dot), w_dot=solution.w_dot(time), u=math.nan))

    avg_q = tuple(float(np.mean([rec.q_dot[a] for rec in records])) for a in range(2))
    avg_w = float(np.mean([rec.w_dot for rec in records]))
    return summarize_flows(avg_q, avg_w, records, period or 0.0, net, eps_idle)


def slow_regime(net: NetworkSpec, eps_idle: float = 1e-10) -> Regime:
    """Operating regime predicted by the slow-driving flows."""
    return slow_cycle_average(net, eps_idle=eps_idle).regime
