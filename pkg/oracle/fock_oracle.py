"""
Brute-force one-oscillator validator in a truncated number basis.

The density matrix lives in the number basis of a fixed reference frequency
omega_ref = omega(0), so the initial Gibbs state is diagonal. At time t

    H(t) = omega (a^dag a + 1/2) = (P^2 + omega^2 X^2) / 2,
    a(t) = sqrt(omega/2) X + i P / sqrt(2 omega),

and the bath acts through gamma (nbar + 1) D[a] + gamma nbar D[a^dag].
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np
import pandas as pd

from dynamics.integrator import evolve, initial_gibbs
from dynamics.limit_cycle import period_grid
from dynamics.state import CovarianceState
from model.exceptions import ConfigError, TruncationError
from model.matrices import drive_frequency, excitation_number
from model.network import NetworkSpec, OscillatorSpec, thermal_occupation
from thermo.flows import heat_currents

logger = logging.getLogger(__name__)

DEFAULT_DIM = 40
MAX_DIM = 320
OVERFLOW_TOL = 1e-8


@dataclass
class FockState:
    """Density matrix in the fixed number basis."""
    t: float
    rho: np.ndarray

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def validate(self, herm_tol: float = 1e-10, trace_tol: float = 1e-8, eig_tol: float = 1e-8):
        """Check hermiticity, unit trace and positivity."""
        errors = []
        if np.max(np.abs(self.rho - self.rho.conj().T)) > herm_tol:
            errors.append("density matrix is not Hermitian")
        if abs(self.trace - 1) > trace_tol:
            errors.append(f"trace {self.trace:.12g} differs from 1")
        if np.min(np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T))) < -eig_tol:
            errors.append("density matrix has negative eigenvalues")
        if errors:
            raise ValueError(f"Invalid Fock state at t = {self.t}: " + "; ".join(errors))


@dataclass(frozen=True)
class _Operators:
    x: np.ndarray
    p: np.ndarray
    xx: np.ndarray
    pp: np.ndarray


@lru_cache(maxsize=8)
def _operators(dim: int, omega_ref: float) -> _Operators:
    """Truncated position and momentum operators of the reference basis."""
    b = np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)
    bd = b.conj().T
    x = (b + bd) / math.sqrt(2 * omega_ref)
    p = 1j * math.sqrt(omega_ref / 2) * (bd - b)
    ops = _Operators(x=x, p=p, xx=x @ x, pp=p @ p)
    for arr in (ops.x, ops.p, ops.xx, ops.pp):
        arr.setflags(write=False)
    return ops


def thermal_fock_state(dim: int, omega: float, beta: float, t: float = 0.0) -> FockState:
    """Gibbs state of frequency omega, truncated to dim levels and renormalized."""
    n0 = thermal_occupation(beta, omega)
    levels = np.arange(dim)
    populations = (n0 / (1 + n0)) ** levels / (1 + n0)
    populations /= populations.sum()
    return FockState(t=t, rho=np.diag(populations).astype(complex))


def _generator(
    rho: np.ndarray,
    t: float,
    osc: OscillatorSpec,
    gamma: float,
    nbar: float,
    omega_ref: float
) -> np.ndarray:
    ops = _operators(rho.shape[0], omega_ref)
    omega, _ = drive_frequency(osc, t)
    hamiltonian = 0.5 * (ops.pp + omega ** 2 * ops.xx)
    a = math.sqrt(omega / 2) * ops.x + 1j * ops.p / math.sqrt(2 * omega)

    L = np.array([a, a.conj().T])
    L_dagger = L.conj().transpose(0, 2, 1)
    L_squared = L_dagger @ L
    rates = np.array([gamma * (nbar + 1), gamma * nbar]).reshape(-1, 1, 1)

    rho_dot = -1j * (hamiltonian @ rho - rho @ hamiltonian)
    rho_dot += np.sum(
        rates * (L @ rho @ L_dagger - 0.5 * (L_squared @ rho + rho @ L_squared)),
        axis=0
    )
    return rho_dot


def lindblad_step(
    state: FockState,
    osc: OscillatorSpec,
    gamma: float,
    nbar: float,
    dt: float,
    omega_ref: float = None,
    overflow_tol: float = OVERFLOW_TOL
) -> FockState:
    """
    One RK4 step of the one-oscillator Lindblad equation.

    Args:
        state: Current density matrix
        osc: Modulated oscillator
        gamma: Total damping rate
        nbar: Weighted bath occupation
        dt: Step size
        omega_ref: Frequency of the number basis (default omega(0))
        overflow_tol: Largest tolerated population of the top level

    Raises:
        TruncationError: If the top level population exceeds overflow_tol
    """
    if omega_ref is None:
        omega_ref, _ = drive_frequency(osc, 0.0)
    rho, t = state.rho, state.t

    k1 = _generator(rho, t, osc, gamma, nbar, omega_ref)
    k2 = _generator(rho + dt / 2 * k1, t + dt / 2, osc, gamma, nbar, omega_ref)
    k3 = _generator(rho + dt / 2 * k2, t + dt / 2, osc, gamma, nbar, omega_ref)
    k4 = _generator(rho + dt * k3, t + dt, osc, gamma, nbar, omega_ref)
    rho_new = rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    rho_new = 0.5 * (rho_new + rho_new.conj().T)

    top = float(rho_new[-1, -1].real)
    if top > overflow_tol:
        raise TruncationError(
            f"Top level population {top:.3e} exceeds {overflow_tol:.0e} at d = {rho.shape[0]}",
            suggested_dim=2 * rho.shape[0]
        )
    return FockState(t=t + dt, rho=rho_new)


def moments(state: FockState, omega: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    First and second moments of the quadratures.

    Args:
        state: Density matrix
        omega: Reference frequency of the number basis

    Returns:
        (mean [<x>, <p>], 2x2 symmetrized covariance matrix)
    """
    ops = _operators(state.dim, omega)
    rho = state.rho

    def expect(op: np.ndarray) -> float:
        return float(np.trace(rho @ op).real)

    mx, mp = expect(ops.x), expect(ops.p)
    sxx = expect(ops.xx) - mx ** 2
    spp = expect(ops.pp) - mp ** 2
    sxp = expect(0.5 * (ops.x @ ops.p + ops.p @ ops.x)) - mx * mp
    return np.array([mx, mp]), np.array([[sxx, sxp], [sxp, spp]])


def excess_kurtosis(state: FockState, omega: float) -> float:
    """<dx^4> - 3 <dx^2>^2, zero for a Gaussian state."""
    ops = _operators(state.dim, omega)
    mean, cov = moments(state, omega)
    shifted = ops.x - mean[0] * np.eye(state.dim)
    fourth = float(np.trace(state.rho @ np.linalg.matrix_power(shifted, 4)).real)
    return fourth - 3 * cov[0, 0] ** 2


def _effective_bath(net: NetworkSpec) -> Tuple[float, float]:
    if net.n_oscillators != 1:
        raise ConfigError("The Fock oracle covers one oscillator only")
    if net.squeeze_correlations and any(b.squeeze_r > 0 for b in net.baths):
        raise ConfigError("The Fock oracle does not model squeezed-noise correlations")
    gamma = float(net.damping[0])
    if gamma == 0:
        return 0.0, 0.0
    nbar = float(net.coupling_squared[0] @ net.effective_occupations / gamma)
    return gamma, nbar


def run_oracle(
    net: NetworkSpec,
    beta_init: float,
    t_end: float,
    dt: float,
    stride: int = 1,
    dim: int = DEFAULT_DIM,
    max_dim: int = MAX_DIM
) -> List[FockState]:
    """
    Integrate the Lindblad equation from the Gibbs state and sample every stride steps.

    The truncation is doubled on overflow, up to max_dim.
    """
    gamma, nbar = _effective_bath(net)
    osc = net.oscillators[0]
    omega_ref, _ = drive_frequency(osc, 0.0)
    n_steps = int(math.ceil(t_end / dt - 1e-9))

    while True:
        try:
            state = thermal_fock_state(dim, omega_ref, beta_init)
            samples = [state]
            for k in range(1, n_steps + 1):
                state = lindblad_step(state, osc, gamma, nbar, dt, omega_ref)
                state.t = k * dt
                if k % stride == 0:
                    samples.append(state)
            return samples
        except TruncationError as e:
            if e.suggested_dim > max_dim:
                raise
            logger.warning("Fock truncation d = %d too small, retrying with d = %d", dim, e.suggested_dim)
            dim = e.suggested_dim


def compare_with_gaussian(
    net: NetworkSpec,
    beta_init: float,
    periods: int = 5,
    dt_factor: float = 1.0,
    samples_per_period: int = 50,
    dim: int = DEFAULT_DIM
) -> pd.DataFrame:
    """
    Run the Fock oracle and the covariance dynamics on the same time grid.

    Returns:
        DataFrame with the oracle and Gaussian values of <a^dag a>, sigma_xx,
        sigma_pp and the heat currents, their differences and the excess
        kurtosis of the oracle state.
    """
    osc = net.oscillators[0]
    omega_ref, _ = drive_frequency(osc, 0.0)
    period = net.common_period() or 2 * math.pi / osc.omega0
    dt, _, stride = period_grid(period, net, dt_factor, samples_per_period)
    t_end = periods * period

    gaussian = evolve(initial_gibbs(net, beta_init), net, t_end, dt, stride)
    fock = run_oracle(net, beta_init, t_end, dt, stride, dim)

    rows = []
    for g_state, f_state in zip(gaussian.states, fock):
        mean, cov = moments(f_state, omega_ref)
        f_cov_state = CovarianceState(t=g_state.t, mean=mean, sigma=cov)
        row = {
            't': g_state.t,
            'n_fock': excitation_number(f_cov_state, net, 0),
            'n_gauss': excitation_number(g_state, net, 0),
            'sigma_xx_fock': cov[0, 0],
            'sigma_xx_gauss': g_state.sigma[0, 0],
            'sigma_pp_fock': cov[1, 1],
            'sigma_pp_gauss': g_state.sigma[1, 1],
            'excess_kurtosis': excess_kurtosis(f_state, omega_ref)
        }
        for alpha, (q_f, q_g) in enumerate(zip(heat_currents(f_cov_state, net), heat_currents(g_state, net))):
            row[f'q_dot_{alpha}_fock'] = q_f
            row[f'q_dot_{alpha}_gauss'] = q_g
        rows.append(row)

    df = pd.DataFrame(rows)
    df['diff_n'] = df['n_fock'] - df['n_gauss']
    df['diff_sigma_xx'] = df['sigma_xx_fock'] - df['sigma_xx_gauss']
    df['diff_sigma_pp'] = df['sigma_pp_fock'] - df['sigma_pp_gauss']
    logger.info(
        "Oracle comparison: max |dn| = %.3e, max |dsigma_xx| = %.3e, max |dsigma_pp| = %.3e",
        df['diff_n'].abs().max(), df['diff_sigma_xx'].abs().max(), df['diff_sigma_pp'].abs().max()
    )
    return df
