"""
Gaussian state containers.

A CovarianceState is the complete Gaussian state at one time: first
moments <R> and the symmetrized covariance matrix sigma. A Trajectory is a
uniformly sampled sequence of states with their thermodynamic records.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List, Optional

import numpy as np
import pandas as pd

from model.exceptions import PhysicalityError

if TYPE_CHECKING:
    from model.network import NetworkSpec
    from thermo.flows import ThermoRecord


# Uncertainty bound on symplectic eigenvalues of sigma (hbar = 1, unscaled quadratures)
SYMPLECTIC_BOUND = 0.5
PHYSICALITY_TOL = 1e-9


@dataclass
class CovarianceState:
    """Time, first moments and covariance matrix of a Gaussian state."""
    t: float
    mean: np.ndarray
    sigma: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.sigma.shape[0] // 2


def symplectic_eigenvalues(sigma: np.ndarray) -> np.ndarray:
    """
    Symplectic eigenvalues of a covariance matrix, ascending.

    They are the moduli of the eigenvalues of i S_N sigma, which come in
    +/- pairs; one of each pair is returned.
    """
    from model.matrices import symplectic_form

    n = sigma.shape[0] // 2
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ sigma)))
    return moduli[0::2]


def check_physical(state: CovarianceState, tol: float = PHYSICALITY_TOL) -> float:
    """
    Check the uncertainty principle for a state.

    Returns:
        Smallest symplectic eigenvalue

    Raises:
        PhysicalityError: If it lies below 1/2 - tol
    """
    nu_min = float(symplectic_eigenvalues(state.sigma)[0])
    if nu_min < SYMPLECTIC_BOUND - tol:
        raise PhysicalityError(
            f"Symplectic eigenvalue {nu_min:.12g} below {SYMPLECTIC_BOUND} at t = {state.t}",
            min_eigenvalue=nu_min
        )
    return nu_min


def quadrature_labels(n_modes: int) -> List[str]:
    """Names of the quadratures in R order: x1, p1, x2, p2, ..."""
    labels = []
    for i in range(1, n_modes + 1):
        labels.extend([f"x{i}", f"p{i}"])
    return labels


def sigma_columns(n_modes: int) -> List[str]:
    """Column names of the flattened upper triangle of sigma, row by row."""
    labels = quadrature_labels(n_modes)
    return [
        f"sigma_{labels[k]}{labels[l]}"
        for k in range(2 * n_modes)
        for l in range(k, 2 * n_modes)
    ]


@dataclass
class Trajectory:
    """
    Uniformly sampled evolution.

    Attributes:
        states: Sampled Gaussian states
        records: Thermodynamic record of each sampled state
        net: Network that produced the trajectory
        dt: Integration step
        stride: Steps between stored samples
        period: Cycle period for limit-cycle trajectories (0 for a static steady state)
        periods_to_converge: Whole periods evolved before the cycle was accepted
        residual: Final limit-cycle residual
    """
    states: List[CovarianceState]
    records: List['ThermoRecord']
    net: 'NetworkSpec'
    dt: float
    stride: int
    period: Optional[float] = None
    periods_to_converge: int = 0
    residual: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    def validate(self, tol: float = 1e-12):
        """Check strictly increasing, uniformly spaced sample times."""
        if len(self.states) != len(self.records):
            raise ValueError("Trajectory has mismatched states and records")
        times = self.times
        if len(times) < 2:
            return
        steps = np.diff(times)
        if np.any(steps <= 0):
            raise ValueError("Trajectory times are not strictly increasing")
        spacing = self.dt * self.stride
        if np.max(np.abs(steps - spacing)) > tol * max(1.0, abs(times[-1])):
            raise ValueError("Trajectory samples are not uniformly spaced")

    def to_frame(self) -> pd.DataFrame:
        """
        Flatten the trajectory into a DataFrame.

        Columns: t, upper-triangle sigma entries (row-major over x1, p1, x2, ...),
        n_i per oscillator, q_dot_alpha per bath, w_dot, u, first_law_residual
        and, for two oscillators, the logarithmic negativity e_n.
        """
        from model.matrices import excitation_numbers

        n = self.net.n_oscillators
        upper = np.triu_indices(2 * n)
        rows = []
        for state, rec in zip(self.states, self.records):
            row = {'t': state.t}
            row.update(zip(sigma_columns(n), state.sigma[upper]))
            row.update({f"n_{i + 1}": v for i, v in enumerate(excitation_numbers(state, self.net))})
            row.update({f"q_dot_{a}": q for a, q in enumerate(rec.q_dot)})
            row['w_dot'] = rec.w_dot
            row['u'] = rec.u
            row['first_law_residual'] = rec.first_law_residual
            rows.append(row)

        df = pd.DataFrame(rows)
        if n == 2:
            # Lazy import to avoid circular dependency
            from entanglement.log_negativity import log_negativity
            df['e_n'] = [log_negativity(state) for state in self.states]
        return df
