"""
Logarithmic negativity of two-mode Gaussian states.

The covariance matrix is rescaled as sigma_tilde = 2 sigma so that the
vacuum has symplectic eigenvalue 1. With the 2x2 blocks

    sigma_tilde = [[A, C], [C^T, B]],
    I1 = det A, I2 = det B, I3 = det C, I4 = det sigma_tilde,

the partially transposed state has symplectic eigenvalues
nu_tilde_(+/-) = sqrt((L +/- sqrt(L^2 - 4 I4)) / 2) with L = I1 + I2 - 2 I3,
and E_N = max(0, -ln nu_tilde_-).
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from dynamics.state import symplectic_eigenvalues
from model.exceptions import PhysicalityError

PHYSICALITY_TOL = 1e-9


@dataclass
class SymplecticSpectrum:
    """Symplectic data of a partially transposed two-mode state."""
    nu_tilde_plus: float
    nu_tilde_minus: float
    i1: float
    i2: float
    i3: float
    i4: float
    lambda_tilde: float

    @property
    def log_negativity(self) -> float:
        return max(0.0, -math.log(self.nu_tilde_minus))


def _pair(total: float, i4: float):
    # nu_+ nu_- = sqrt(I4)
    root = math.sqrt(max(total ** 2 - 4 * i4, 0.0))
    plus = math.sqrt(max((total + root) / 2, 0.0))
    minus = math.sqrt(max(i4, 0.0)) / plus if plus > 0 else 0.0
    return plus, minus


def symplectic_spectrum(sigma: np.ndarray, tol: float = PHYSICALITY_TOL) -> SymplecticSpectrum:
    """
    Compute the partially transposed symplectic spectrum of a 4x4 covariance.

    Args:
        sigma: Covariance matrix in (x1, p1, x2, p2) order, unscaled convention
        tol: Allowed violation of the uncertainty bound

    Raises:
        PhysicalityError: If the untransposed state has a symplectic eigenvalue
            below 1 - tol (rescaled convention)
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise ValueError(f"Expected a 4x4 covariance matrix, got shape {sigma.shape}")

    scaled = 2 * sigma
    i1 = float(np.linalg.det(scaled[0:2, 0:2]))
    i2 = float(np.linalg.det(scaled[2:4, 2:4]))
    i3 = float(np.linalg.det(scaled[0:2, 2:4]))
    i4 = float(np.linalg.det(scaled))

    nu_min = float(symplectic_eigenvalues(sigma)[0])
    if 2 * nu_min < 1 - tol:
        raise PhysicalityError(
            f"Non-physical two-mode state: symplectic eigenvalue {2 * nu_min:.12g} < 1",
            min_eigenvalue=nu_min
        )

    lambda_tilde = i1 + i2 - 2 * i3
    plus, minus = _pair(lambda_tilde, i4)
    return SymplecticSpectrum(
        nu_tilde_plus=plus,
        nu_tilde_minus=minus,
        i1=i1,
        i2=i2,
        i3=i3,
        i4=i4,
        lambda_tilde=lambda_tilde
    )


def log_negativity(state: Union[np.ndarray, object]) -> float:
    """
    E_N of a two-mode Gaussian state.

    Args:
        state: CovarianceState (or a bare 4x4 covariance matrix)

    Returns:
        max(0, -ln nu_tilde_minus)
    """
    sigma = getattr(state, 'sigma', state)
    return symplectic_spectrum(sigma).log_negativity


def closed_form_nu_minus(g: float, lam: float, n_c: float, n_h: float) -> float:
    """
    nu_tilde_minus of the resonant slow-driving state with g_c = g_h = g, no squeezing.

    Equals 1 at n_c = n_h = 0 and tends to 1 + n_c + n_h as |lambda| grows; it
    never drops below 1, so these states are never entangled.
    """
    g4 = g ** 4
    g8 = g ** 8
    lam2 = lam ** 2
    s = 1 + n_c + n_h
    mixed = 2 + n_c * (4 + n_c) + n_h * (4 + n_h) + 6 * n_c * n_h

    leading = (
        g8 * (1 + 2 * n_c * (1 + n_c) + 2 * n_h * (1 + n_h))
        + 4 * g4 * lam2 * mixed
        + 16 * lam2 ** 2 * s ** 2
    )
    root = math.sqrt(
        g8 * (n_c - n_h) ** 2 * (g8 * s ** 2 + 4 * g4 * lam2 * mixed + 16 * lam2 ** 2 * s ** 2)
    )
    return math.sqrt(max(leading - 2 * root, 0.0)) / (g4 + 4 * lam2)
