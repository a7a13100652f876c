"""
Time-dependent matrices of the Gaussian dynamics.

With R = (x1, p1, x2, p2, ...) the system Hamiltonian is H = (1/2) R^T A_S R
and the moments obey

    d<R>/dt = D <R>,    d(sigma)/dt = D sigma + sigma D^T + T,

with D = S_N A_S - K. All builders are pure functions of their inputs.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from model.exceptions import ConfigError
from model.network import NetworkSpec, OscillatorSpec


@dataclass
class MatrixSet:
    """Matrices defining the flow at one instant."""
    a_s: np.ndarray
    drift: np.ndarray
    noise: np.ndarray
    dissipation: np.ndarray
    a_s_dot: np.ndarray
    omegas: np.ndarray
    omega_dots: np.ndarray


def drive_frequency(osc: OscillatorSpec, t: float) -> Tuple[float, float]:
    """
    Instantaneous frequency of a modulated oscillator.

    Args:
        osc: Oscillator description
        t: Time

    Returns:
        (omega, omega_dot) with omega = omega0 + delta_omega * sin(theta t)
    """
    omega = osc.omega0 + osc.delta_omega * np.sin(osc.theta * t)
    omega_dot = osc.delta_omega * osc.theta * np.cos(osc.theta * t)
    return float(omega), float(omega_dot)


def drive_frequencies(net: NetworkSpec, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """Vector form of drive_frequency over every oscillator of the network."""
    omega0, delta, theta = _oscillator_arrays(net)
    phase = theta * t
    return omega0 + delta * np.sin(phase), delta * theta * np.cos(phase)


def _oscillator_arrays(net: NetworkSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    omega0 = np.array([osc.omega0 for osc in net.oscillators], dtype=float)
    delta = np.array([osc.delta_omega for osc in net.oscillators], dtype=float)
    theta = np.array([osc.theta for osc in net.oscillators], dtype=float)
    return omega0, delta, theta


@lru_cache(maxsize=16)
def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal S_N with blocks [[0, 1], [-1, 0]] (read-only, cached)."""
    s = np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    s.setflags(write=False)
    return s


def dissipation_matrix(net: NetworkSpec) -> np.ndarray:
    """K = diag over oscillators of (1/2) sum_alpha g^2_{i,alpha} * I_2."""
    return np.diag(np.repeat(0.5 * net.damping, 2))


def build_matrices(net: NetworkSpec, t: float) -> MatrixSet:
    """
    Build A_S, D, T and K at time t.

    A_S = B + C where B is block-diagonal diag(omega_i^2, 1) and the
    off-diagonal blocks are C_ij = diag(lambda_ij sqrt(omega_i omega_j),
    lambda_ij / sqrt(omega_i omega_j)). The time derivative of A_S is also
    returned for the power evaluation.

    Args:
        net: Network description
        t: Time

    Returns:
        MatrixSet at time t

    Raises:
        ConfigError: If any matrix entry is non-finite
    """
    n = net.n_oscillators
    omegas, omega_dots = drive_frequencies(net, t)
    lam = net.coupling

    root = np.sqrt(np.outer(omegas, omegas))
    root_dot = (np.outer(omega_dots, omegas) + np.outer(omegas, omega_dots)) / (2 * root)

    a_s = np.zeros((2 * n, 2 * n))
    a_s[0::2, 0::2] = lam * root + np.diag(omegas ** 2)
    a_s[1::2, 1::2] = lam / root + np.eye(n)

    a_s_dot = np.zeros((2 * n, 2 * n))
    a_s_dot[0::2, 0::2] = lam * root_dot + np.diag(2 * omegas * omega_dots)
    a_s_dot[1::2, 1::2] = -lam * root_dot / root ** 2

    dissipation = dissipation_matrix(net)
    drift = symplectic_form(n) @ a_s - dissipation

    wx, wp = net.noise_weights
    noise_diag = np.empty(2 * n)
    noise_diag[0::2] = wx / omegas
    noise_diag[1::2] = wp * omegas
    noise = np.diag(noise_diag)

    if not (np.all(np.isfinite(a_s)) and np.all(np.isfinite(noise))):
        raise ConfigError(f"Non-finite matrix entries at t = {t}")

    return MatrixSet(
        a_s=a_s,
        drift=drift,
        noise=noise,
        dissipation=dissipation,
        a_s_dot=a_s_dot,
        omegas=omegas,
        omega_dots=omega_dots
    )


def excitation_number(state, net: NetworkSpec, i: int) -> float:
    """
    Mean excitation number <a_i^dag a_i> of oscillator i.

    <a^dag a> = [sigma_pp + omega^2 sigma_xx + <p>^2 + omega^2 <x>^2] / (2 omega) - 1/2
    with omega the instantaneous frequency at state.t.
    """
    omega, _ = drive_frequency(net.oscillators[i], state.t)
    x, p = 2 * i, 2 * i + 1
    sigma = state.sigma
    mean = state.mean
    energy = sigma[p, p] + omega ** 2 * sigma[x, x] + mean[p] ** 2 + omega ** 2 * mean[x] ** 2
    return float(energy / (2 * omega) - 0.5)


def excitation_numbers(state, net: NetworkSpec) -> np.ndarray:
    """Excitation numbers of every oscillator."""
    omegas, _ = drive_frequencies(net, state.t)
    sigma = state.sigma
    mean = state.mean
    sxx = np.diag(sigma)[0::2]
    spp = np.diag(sigma)[1::2]
    energy = spp + omegas ** 2 * sxx + mean[1::2] ** 2 + omegas ** 2 * mean[0::2] ** 2
    return energy / (2 * omegas) - 0.5
