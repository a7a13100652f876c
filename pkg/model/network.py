"""
Domain types describing a driven oscillator network.

A network is a set of parametrically modulated harmonic oscillators with
rotating-wave couplings between them, each oscillator attached to one or
more single-frequency baths. Units: hbar = k_B = mass = 1.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from model.exceptions import ConfigError


def thermal_occupation(beta: float, omega: float) -> float:
    """
    Bose-Einstein occupation of a mode.

    Args:
        beta: Inverse temperature
        omega: Mode frequency

    Returns:
        n = 1 / (exp(beta * omega) - 1)
    """
    x = beta * omega
    if x > 700:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class OscillatorSpec:
    """One modulated oscillator: omega(t) = omega0 + delta_omega * sin(theta * t)."""
    omega0: float
    delta_omega: float = 0.0
    theta: float = 0.0  # 0 means static

    def __post_init__(self):
        errors = []
        if not all(math.isfinite(v) for v in (self.omega0, self.delta_omega, self.theta)):
            errors.append("oscillator parameters must be finite")
        else:
            if self.omega0 <= 0:
                errors.append(f"omega0 = {self.omega0} must be positive")
            if self.delta_omega < 0:
                errors.append(f"delta_omega = {self.delta_omega} must be non-negative")
            if self.delta_omega >= self.omega0:
                errors.append(
                    f"delta_omega = {self.delta_omega} must be smaller than omega0 = {self.omega0}"
                )
            if self.theta < 0:
                errors.append(f"theta = {self.theta} must be non-negative")
        if errors:
            raise ConfigError("Invalid oscillator:\n" + "\n".join(f"  - {e}" for e in errors))

    @property
    def is_driven(self) -> bool:
        return self.theta > 0 and self.delta_omega > 0

    @property
    def period(self) -> Optional[float]:
        """Modulation period 2*pi/theta, or None for a static oscillator."""
        if not self.is_driven:
            return None
        return 2 * math.pi / self.theta


@dataclass(frozen=True)
class BathSpec:
    """
    Single-frequency (squeezed) thermal bath.

    couplings[i] is g_{i,alpha}, the coupling of system oscillator i to this
    bath. The squeezing phase is fixed to zero.
    """
    omega_bath: float
    beta: float
    couplings: Tuple[float, ...]
    squeeze_r: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'couplings', tuple(float(g) for g in self.couplings))

        errors = []
        values = (self.omega_bath, self.beta, self.squeeze_r) + self.couplings
        if not all(math.isfinite(v) for v in values):
            errors.append("bath parameters must be finite")
        else:
            if self.omega_bath <= 0:
                errors.append(f"omega_bath = {self.omega_bath} must be positive")
            if self.beta <= 0:
                errors.append(f"beta = {self.beta} must be positive")
            if self.squeeze_r < 0:
                errors.append(f"squeeze_r = {self.squeeze_r} must be non-negative")
            if any(g < 0 for g in self.couplings):
                errors.append(f"couplings {self.couplings} must be non-negative")
        if errors:
            raise ConfigError("Invalid bath:\n" + "\n".join(f"  - {e}" for e in errors))

    @property
    def occupation(self) -> float:
        """Thermal occupation n_alpha."""
        return thermal_occupation(self.beta, self.omega_bath)

    @property
    def effective_occupation(self) -> float:
        """Occupation of the squeezed thermal state, equal to n_alpha when r = 0."""
        # Lazy import to avoid circular dependency
        from entanglement.squeezed_bath import effective_occupation
        return effective_occupation(self.occupation, self.squeeze_r)

    @property
    def effective_beta(self) -> float:
        """Inverse temperature of the thermal bath with the same occupation."""
        from entanglement.squeezed_bath import effective_beta
        return effective_beta(self.beta, self.omega_bath, self.squeeze_r)


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    """
    Full machine description.

    Attributes:
        oscillators: System oscillators (length N)
        coupling: N x N real symmetric matrix lambda_ij with zero diagonal
        baths: Baths (length N_B), each with N couplings
        squeeze_correlations: If True, squeezed baths also inject
            position-squeezed noise into the covariance flow; if False
            squeezing only raises the occupation to n_eff.
    """
    oscillators: Tuple[OscillatorSpec, ...]
    coupling: np.ndarray
    baths: Tuple[BathSpec, ...]
    squeeze_correlations: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'oscillators', tuple(self.oscillators))
        object.__setattr__(self, 'baths', tuple(self.baths))

        n = len(self.oscillators)
        coupling = np.array(self.coupling if self.coupling is not None else [], dtype=float)
        if coupling.size == 0:
            coupling = np.zeros((n, n))
        coupling.setflags(write=False)
        object.__setattr__(self, 'coupling', coupling)

        errors = []
        if n == 0:
            errors.append("network needs at least one oscillator")
        if coupling.shape != (n, n):
            errors.append(f"coupling matrix has shape {coupling.shape}, expected ({n}, {n})")
        elif not np.all(np.isfinite(coupling)):
            errors.append("coupling matrix has non-finite entries")
        else:
            if not np.array_equal(coupling, coupling.T):
                errors.append("coupling matrix is not symmetric")
            if np.any(np.diag(coupling) != 0):
                errors.append("coupling matrix must have a zero diagonal")
        for alpha, bath in enumerate(self.baths):
            if len(bath.couplings) != n:
                errors.append(
                    f"bath {alpha} has {len(bath.couplings)} couplings, expected {n}"
                )
        if errors:
            raise ConfigError(
                "Network validation failed:\n" + "\n".join(f"  - {e}" for e in errors)
            )

    @property
    def n_oscillators(self) -> int:
        return len(self.oscillators)

    @property
    def n_baths(self) -> int:
        return len(self.baths)

    @property
    def is_driven(self) -> bool:
        return any(osc.is_driven for osc in self.oscillators)

    @cached_property
    def coupling_squared(self) -> np.ndarray:
        """g^2_{i,alpha} as an N x N_B array."""
        if not self.baths:
            return np.zeros((self.n_oscillators, 0))
        return np.array([bath.couplings for bath in self.baths], dtype=float).T ** 2

    @cached_property
    def damping(self) -> np.ndarray:
        """Total damping rate per oscillator, gamma_i = sum_alpha g^2_{i,alpha}."""
        return self.coupling_squared.sum(axis=1)

    @cached_property
    def effective_occupations(self) -> np.ndarray:
        """n_alpha^(eff) for each bath."""
        return np.array([bath.effective_occupation for bath in self.baths], dtype=float)

    @cached_property
    def noise_weights(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Position and momentum noise weights per oscillator.

        The noise block of oscillator i is diag(wx_i / omega_i, wp_i * omega_i).
        Without squeezing correlations wx = wp = (1/2) sum_alpha g^2 (2 n_eff + 1).
        """
        g2 = self.coupling_squared
        if not self.squeeze_correlations:
            w = 0.5 * g2 @ (2 * self.effective_occupations + 1)
            return w, w.copy()

        thermal = np.array([2 * bath.occupation + 1 for bath in self.baths], dtype=float)
        r = np.array([bath.squeeze_r for bath in self.baths], dtype=float)
        wx = 0.5 * g2 @ (thermal * np.exp(-2 * r))
        wp = 0.5 * g2 @ (thermal * np.exp(2 * r))
        return wx, wp

    def common_period(self, max_denominator: int = 1000) -> Optional[float]:
        """
        Common modulation period of all driven oscillators.

        Returns:
            Period, or None when nothing is driven

        Raises:
            ConfigError: If the modulation frequencies are incommensurate
        """
        thetas = [osc.theta for osc in self.oscillators if osc.is_driven]
        if not thetas:
            return None

        from fractions import Fraction

        theta_min = min(thetas)
        multiple = 1
        for theta in thetas:
            ratio = theta / theta_min
            frac = Fraction(ratio).limit_denominator(max_denominator)
            if abs(float(frac) - ratio) > 1e-9 * ratio:
                raise ConfigError(
                    f"Modulation frequencies {thetas} are incommensurate; no common period"
                )
            multiple = multiple * frac.denominator // math.gcd(multiple, frac.denominator)
        return 2 * math.pi * multiple / theta_min

    def cold_hot_indices(self) -> Tuple[int, int]:
        """
        Identify the cold and hot bath of a two-bath machine.

        The hot bath is the one with the smaller effective inverse temperature,
        so a squeezed bath can become the hot one. Equal temperatures keep the
        declared order (bath 0 cold).
        """
        if self.n_baths != 2:
            raise ConfigError(f"cold/hot labels need exactly 2 baths, got {self.n_baths}")
        beta0 = self.baths[0].effective_beta
        beta1 = self.baths[1].effective_beta
        if beta1 > beta0:
            return 1, 0
        return 0, 1

    def attached_bath(self, i: int) -> int:
        """Index of the single bath coupled to oscillator i."""
        attached = [alpha for alpha, bath in enumerate(self.baths) if bath.couplings[i] > 0]
        if len(attached) != 1:
            raise ConfigError(
                f"oscillator {i} is coupled to {len(attached)} baths, expected exactly one"
            )
        return attached[0]


def build_network(
    oscillators: Sequence[OscillatorSpec],
    baths: Sequence[BathSpec],
    coupling: Optional[Sequence[Sequence[float]]] = None,
    squeeze_correlations: bool = False
) -> NetworkSpec:
    """Convenience constructor accepting plain lists."""
    n = len(oscillators)
    matrix = np.zeros((n, n)) if coupling is None else np.array(coupling, dtype=float)
    return NetworkSpec(
        oscillators=tuple(oscillators),
        coupling=matrix,
        baths=tuple(baths),
        squeeze_correlations=squeeze_correlations
    )


def chain_coupling(n: int, strength: float) -> List[List[float]]:
    """Nearest-neighbour coupling matrix of an open chain with equal strengths."""
    matrix = [[0.0] * n for _ in range(n)]
    for i in range(n - 1):
        matrix[i][i + 1] = strength
        matrix[i + 1][i] = strength
    return matrix
