"""
Cycle averages, operating regime and performance metrics.

Period-averaged heat currents and power for any number of baths, and for a
two-bath machine:
- Operating regime (engine, refrigerator, accelerator, dissipator)
- Average and instantaneous efficiency / COP
- Otto, Carnot and Curzon-Ahlborn reference values
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid

from model.exceptions import ConvergenceError, RegimeError
from model.network import NetworkSpec
from thermo.flows import ThermoRecord

if TYPE_CHECKING:
    from dynamics.state import Trajectory

logger = logging.getLogger(__name__)

# Idle dead-band in units of omega0^2
DEFAULT_EPS_IDLE = 1e-10
DEFAULT_PERIODIC_TOL = 1e-6


class Regime(Enum):
    """Operating regime from the signs of (avg Q_c, avg Q_h, avg W)."""
    ENGINE = "engine"
    REFRIGERATOR = "refrigerator"
    ACCELERATOR = "accelerator"
    DISSIPATOR = "dissipator"
    IDLE = "idle"
    UNCLASSIFIED = "unclassified"


@dataclass
class CycleSummary:
    """Period-averaged thermodynamics of one limit cycle."""
    period: float
    avg_q: Tuple[float, ...]
    avg_w: float
    regime: Regime
    cold_index: int = 0
    hot_index: int = 1
    avg_efficiency: Optional[float] = None
    avg_cop: Optional[float] = None
    instant_eta_max: Optional[float] = None
    instant_eta_mean: Optional[float] = None
    instant_cop_max: Optional[float] = None
    instant_cop_mean: Optional[float] = None

    @property
    def avg_q_c(self) -> float:
        return self.avg_q[self.cold_index]

    @property
    def avg_q_h(self) -> float:
        return self.avg_q[self.hot_index]

    @property
    def energy_balance(self) -> float:
        """sum avg_q + avg_w, zero for a periodic internal energy."""
        return float(sum(self.avg_q) + self.avg_w)


@dataclass
class ReferenceMetrics:
    """Reference efficiencies of a two-bath machine."""
    eta_otto: float
    cop_otto: float
    eta_carnot: float
    eta_carnot_eff: float
    eta_curzon_ahlborn: float


def classify_regime(
    avg_q_c: float,
    avg_q_h: float,
    avg_w: float,
    eps_idle: float = DEFAULT_EPS_IDLE
) -> Regime:
    """
    Classify a cycle by the signs of its averaged flows.

    Engine (-, +, -), Refrigerator (+, -, +), Accelerator (-, +, +),
    Dissipator (-, -, +) in the order (avg_q_c, avg_q_h, avg_w); Idle when all
    three magnitudes are below eps_idle. Any other pattern is reported as
    UNCLASSIFIED with a warning.
    """
    if max(abs(avg_q_c), abs(avg_q_h), abs(avg_w)) < eps_idle:
        return Regime.IDLE

    if avg_q_h > 0 and avg_q_c < 0 and avg_w < 0:
        return Regime.ENGINE
    if avg_q_c > 0 and avg_q_h < 0 and avg_w > 0:
        return Regime.REFRIGERATOR
    if avg_q_h > 0 and avg_q_c < 0 and avg_w > 0:
        return Regime.ACCELERATOR
    if avg_q_c < 0 and avg_q_h < 0 and avg_w > 0:
        return Regime.DISSIPATOR

    logger.warning(
        "Unclassified sign pattern: avg_q_c=%.3e avg_q_h=%.3e avg_w=%.3e",
        avg_q_c, avg_q_h, avg_w
    )
    return Regime.UNCLASSIFIED


def efficiency_instant(rec: ThermoRecord, hot_index: int = 1) -> Optional[float]:
    """eta = -W_dot / Q_dot_h where W_dot < 0 and Q_dot_h > 0, else None."""
    q_h = rec.q_dot[hot_index]
    if rec.w_dot < 0 and q_h > 0:
        return -rec.w_dot / q_h
    return None


def cop_instant(rec: ThermoRecord, cold_index: int = 0) -> Optional[float]:
    """COP = Q_dot_c / W_dot where Q_dot_c > 0 and W_dot > 0, else None."""
    q_c = rec.q_dot[cold_index]
    if q_c > 0 and rec.w_dot > 0:
        return q_c / rec.w_dot
    return None


def _stats(values: List[Optional[float]]) -> Tuple[Optional[float], Optional[float]]:
    defined = [v for v in values if v is not None]
    if not defined:
        return None, None
    return float(max(defined)), float(np.mean(defined))


def summarize_flows(
    avg_q: Tuple[float, ...],
    avg_w: float,
    records: List[ThermoRecord],
    period: float,
    net: NetworkSpec,
    eps_idle: float = DEFAULT_EPS_IDLE
) -> CycleSummary:
    """
    Build a CycleSummary from averaged flows and one period of samples.

    records should hold distinct instants of one period (no duplicated end
    point). Instantaneous means run over the samples where the quantity is
    defined.
    """
    cold, hot = net.cold_hot_indices()
    regime = classify_regime(avg_q[cold], avg_q[hot], avg_w, eps_idle)

    summary = CycleSummary(
        period=period,
        avg_q=tuple(float(q) for q in avg_q),
        avg_w=float(avg_w),
        regime=regime,
        cold_index=cold,
        hot_index=hot
    )
    if regime == Regime.ENGINE:
        summary.avg_efficiency = -avg_w / avg_q[hot]
    elif regime == Regime.REFRIGERATOR:
        summary.avg_cop = avg_q[cold] / avg_w

    summary.instant_eta_max, summary.instant_eta_mean = _stats(
        [efficiency_instant(rec, hot) for rec in records]
    )
    summary.instant_cop_max, summary.instant_cop_mean = _stats(
        [cop_instant(rec, cold) for rec in records]
    )
    return summary


def cycle_average(
    traj: Trajectory,
    eps_idle: float = DEFAULT_EPS_IDLE,
    periodic_tol: float = DEFAULT_PERIODIC_TOL
) -> CycleSummary:
    """
    Average one limit-cycle period and classify it.

    Uses the trapezoidal rule on the stored samples divided by the period. A
    one-sample trajectory (static steady state) is its own average.

    Raises:
        ConvergenceError: If sigma at the two ends of the period differs by
            more than periodic_tol (relative)
    """
    avg_q, avg_w, period = average_flows(traj, periodic_tol)
    records = traj.records if len(traj.records) == 1 else traj.records[:-1]
    return summarize_flows(avg_q, avg_w, records, period, traj.net, eps_idle)


def average_flows(
    traj: Trajectory,
    periodic_tol: float = DEFAULT_PERIODIC_TOL
) -> Tuple[Tuple[float, ...], float, float]:
    """
    Period averages of every bath current and of the power, for any number of baths.

    Returns:
        (avg_q per bath, avg_w, period); period is 0 for a static steady state
    """
    records = traj.records
    if len(records) == 1:
        rec = records[0]
        return tuple(float(q) for q in rec.q_dot), float(rec.w_dot), 0.0

    first, last = traj.states[0].sigma, traj.states[-1].sigma
    mismatch = float(np.max(np.abs(last - first)) / np.max(np.abs(first)))
    if mismatch > periodic_tol:
        raise ConvergenceError(
            f"Trajectory is not periodic: end points differ by {mismatch:.3e}",
            residual=mismatch
        )

    t = traj.times
    period = float(t[-1] - t[0])
    q = np.array([rec.q_dot for rec in records])
    w = np.array([rec.w_dot for rec in records])
    avg_q = tuple(float(trapezoid(q[:, a], t) / period) for a in range(q.shape[1]))
    avg_w = float(trapezoid(w, t) / period)
    return avg_q, avg_w, period


def reference_metrics(net: NetworkSpec, strict: bool = True) -> ReferenceMetrics:
    """
    Otto, Carnot and Curzon-Ahlborn references of a two-bath machine.

    eta_Otto = 1 - Omega_c/Omega_h, COP_Otto = Omega_c/(Omega_h - Omega_c),
    eta_C = 1 - beta_h/beta_c, eta_C_eff = 1 - beta_h_eff/beta_c_eff,
    eta_CA = 1 - sqrt(beta_h/beta_c).

    Args:
        net: Two-bath network
        strict: Raise when COP_Otto is undefined instead of returning nan

    Raises:
        RegimeError: If Omega_h = Omega_c and strict is True
    """
    cold, hot = net.cold_hot_indices()
    bath_c, bath_h = net.baths[cold], net.baths[hot]
    omega_c, omega_h = bath_c.omega_bath, bath_h.omega_bath

    if omega_h == omega_c:
        if strict:
            raise RegimeError("COP_Otto undefined for Omega_h = Omega_c")
        cop_otto = math.nan
    else:
        cop_otto = omega_c / (omega_h - omega_c)

    return ReferenceMetrics(
        eta_otto=1 - omega_c / omega_h,
        cop_otto=cop_otto,
        eta_carnot=1 - bath_h.beta / bath_c.beta,
        eta_carnot_eff=1 - bath_h.effective_beta / bath_c.effective_beta,
        eta_curzon_ahlborn=1 - math.sqrt(bath_h.beta / bath_c.beta)
    )


def entropy_production(summary: Union[CycleSummary, Sequence[float]], net: NetworkSpec) -> float:
    """Average entropy production -sum_alpha beta_alpha <Q_alpha> (thermal baths)."""
    avg_q = getattr(summary, 'avg_q', summary)
    return float(-sum(bath.beta * q for bath, q in zip(net.baths, avg_q)))


def _fmt(value: Optional[float], spec: str = '.6g') -> str:
    return 'n/a' if value is None or (isinstance(value, float) and math.isnan(value)) else format(value, spec)


def generate_cycle_report(summary: CycleSummary, metrics: Optional[ReferenceMetrics] = None) -> str:
    """
    Generate formatted cycle report.

    Args:
        summary: Cycle summary
        metrics: Optional reference metrics

    Returns:
        Formatted report string
    """
    report = []
    report.append("=" * 80)
    report.append("LIMIT CYCLE REPORT")
    report.append("=" * 80)

    report.append("\nCYCLE:")
    report.append(f"  Period: {_fmt(summary.period)}")
    report.append(f"  Regime: {summary.regime.value}")

    report.append("\nAVERAGE FLOWS:")
    report.append(f"  Q_dot cold (bath {summary.cold_index}): {_fmt(summary.avg_q_c, '.6e')}")
    report.append(f"  Q_dot hot (bath {summary.hot_index}): {_fmt(summary.avg_q_h, '.6e')}")
    report.append(f"  W_dot: {_fmt(summary.avg_w, '.6e')}")
    report.append(f"  Energy balance: {_fmt(summary.energy_balance, '.3e')}")

    report.append("\nPERFORMANCE:")
    report.append(f"  Average efficiency: {_fmt(summary.avg_efficiency)}")
    report.append(f"  Average COP: {_fmt(summary.avg_cop)}")
    report.append(f"  Instantaneous efficiency max/mean: "
                  f"{_fmt(summary.instant_eta_max)} / {_fmt(summary.instant_eta_mean)}")
    report.append(f"  Instantaneous COP max/mean: "
                  f"{_fmt(summary.instant_cop_max)} / {_fmt(summary.instant_cop_mean)}")

    if metrics is not None:
        report.append("\nREFERENCE VALUES:")
        report.append(f"  Otto efficiency: {_fmt(metrics.eta_otto)}")
        report.append(f"  Otto COP: {_fmt(metrics.cop_otto)}")
        report.append(f"  Carnot efficiency: {_fmt(metrics.eta_carnot)}")
        report.append(f"  Effective Carnot efficiency: {_fmt(metrics.eta_carnot_eff)}")
        report.append(f"  Curzon-Ahlborn efficiency: {_fmt(metrics.eta_curzon_ahlborn)}")

    report.append("\n" + "=" * 80)

    return "\n".join(report)
