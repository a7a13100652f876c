"""
Scenario configuration for thermal machine runs and sweeps.

A scenario is one JSON file with nested sections. Every physical quantity is
given in units of network.reference_omega; to_spec() converts to absolute
units. Sweep axes address config entries by dotted path, e.g.
"network.baths.1.omega" or "network.oscillators.*.theta" ('*' means every
list element).
"""

import copy
import hashlib
import itertools
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from model.exceptions import ConfigError
from model.network import BathSpec, NetworkSpec, OscillatorSpec, build_network, chain_coupling

logger = logging.getLogger(__name__)

SCENARIO_DIR = Path(__file__).parent / 'scenarios'
FIGURE_IDS = (
    'fig2', 'fig4', 'fig5', 'fig6a', 'fig6b', 'fig6c', 'fig7', 'fig8', 'fig9a', 'fig9b',
    'pair_cop', 'pair_fast', 'pair_sweep_a', 'pair_sweep_b', 'pair_sweep_c'
)
METHODS = ('numeric', 'slow')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


@dataclass
class OscillatorConfig:
    """One oscillator; theta_pi, when set, gives theta in units of pi."""
    omega0: float
    delta_omega: float = 0.0
    theta: float = 0.0
    theta_pi: Optional[float] = None

    @property
    def theta_value(self) -> float:
        if self.theta_pi is not None:
            return self.theta_pi * math.pi
        return self.theta


@dataclass
class BathConfig:
    """Bath frequency, inverse temperature, couplings to each oscillator and squeezing."""
    omega: float
    beta: float
    couplings: List[float]
    squeeze_r: float = 0.0


@dataclass
class NetworkConfig:
    """
    Network section.

    Either give the full coupling matrix or chain_strength for an open chain
    with equal nearest-neighbour couplings.
    """
    oscillators: List[OscillatorConfig]
    baths: List[BathConfig]
    coupling: Optional[List[List[float]]] = None
    chain_strength: Optional[float] = None
    squeeze_correlations: bool = False
    reference_omega: float = 1.0

    def to_spec(self) -> NetworkSpec:
        """Build the NetworkSpec in absolute units."""
        w0 = self.reference_omega
        oscillators = [
            OscillatorSpec(
                omega0=osc.omega0 * w0,
                delta_omega=osc.delta_omega * w0,
                theta=osc.theta_value * w0
            )
            for osc in self.oscillators
        ]
        # g^2 carries the units of a rate
        baths = [
            BathSpec(
                omega_bath=bath.omega * w0,
                beta=bath.beta / w0,
                couplings=tuple(g * math.sqrt(w0) for g in bath.couplings),
                squeeze_r=bath.squeeze_r
            )
            for bath in self.baths
        ]
        if self.chain_strength is not None:
            coupling = chain_coupling(len(oscillators), self.chain_strength * w0)
        elif self.coupling is not None:
            coupling = [[lam * w0 for lam in row] for row in self.coupling]
        else:
            coupling = None
        return build_network(oscillators, baths, coupling, self.squeeze_correlations)


@dataclass
class RunControls:
    """
    Integration and convergence controls.

    beta_init (units of 1/reference_omega) defaults to the coldest bath.
    t_end, when set, makes `run` integrate a plain transient from the Gibbs
    state instead of searching for the limit cycle.
    """
    method: str = 'numeric'
    beta_init: Optional[float] = None
    dt_factor: float = 1.0
    rel_tol: float = 1e-8
    max_periods: int = 10_000
    samples_per_period: int = 400
    t_end: Optional[float] = None
    eps_idle: float = 1e-10
    slow_samples: int = 256


@dataclass
class SweepAxis:
    """Linear grid of `points` values from min to max, written to every path."""
    paths: List[str]
    min: float
    max: float
    points: int
    name: Optional[str] = None

    @property
    def column(self) -> str:
        return self.name or self.paths[0]

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.points)


@dataclass
class OutputConfig:
    path: str = 'results/scenario.csv'


@dataclass
class LoggingConfig:
    level: str = 'INFO'
    file: Optional[str] = None


def setup_logging(cfg: LoggingConfig):
    """Configure the root logger once from the entry point."""
    handlers = [logging.StreamHandler()]
    if cfg.file:
        Path(cfg.file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(cfg.file))
    logging.basicConfig(
        level=getattr(logging, cfg.level.upper(), logging.INFO),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        handlers=handlers,
        force=True
    )


def _check_keys(cls, data: Dict[str, Any], section: str):
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"Unknown keys in {section}: {', '.join(unknown)}")


def _build(cls, data: Any, section: str):
    if not isinstance(data, dict):
        raise ConfigError(f"Section {section} must be an object, got {type(data).__name__}")
    _check_keys(cls, data, section)
    try:
        return cls(**data)
    except TypeError as e:
        raise ConfigError(f"Invalid section {section}: {e}") from e


def _set_path(data: Dict[str, Any], path: str, value: Any):
    """Assign value at a dotted path; '*' fans out over list elements."""
    parts = path.split('.')

    def assign(node, remaining):
        key, rest = remaining[0], remaining[1:]
        if isinstance(node, list):
            if key == '*':
                targets = range(len(node))
            else:
                try:
                    targets = [int(key)]
                except ValueError:
                    raise ConfigError(f"Path {path}: '{key}' is not a list index")
            for idx in targets:
                if not 0 <= idx < len(node):
                    raise ConfigError(f"Path {path}: index {idx} out of range")
                if rest:
                    assign(node[idx], rest)
                else:
                    node[idx] = value
        elif isinstance(node, dict):
            if key not in node:
                raise ConfigError(f"Path {path}: unknown key '{key}'")
            if rest:
                assign(node[key], rest)
            else:
                node[key] = value
        else:
            raise ConfigError(f"Path {path}: cannot descend into a scalar at '{key}'")

    assign(data, parts)


@dataclass
class ScenarioConfig:
    """
    Master configuration of one scenario.

    Sections mirror the JSON file: network, run, sweeps, output, logging.
    """
    name: str
    network: NetworkConfig
    run: RunControls = field(default_factory=RunControls)
    sweeps: List[SweepAxis] = field(default_factory=list)
    output: OutputConfig = field(default_factory=OutputConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    description: str = ''

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ScenarioConfig':
        """Parse and validate a scenario dictionary."""
        if not isinstance(data, dict):
            raise ConfigError("Scenario must be a JSON object")
        _check_keys(cls, data, 'scenario')
        if 'name' not in data or 'network' not in data:
            raise ConfigError("Scenario needs 'name' and 'network'")

        net_data = dict(data['network']) if isinstance(data['network'], dict) else data['network']
        if not isinstance(net_data, dict):
            raise ConfigError("Section network must be an object")
        _check_keys(NetworkConfig, net_data, 'network')
        oscillators = [
            _build(OscillatorConfig, osc, f'network.oscillators.{i}')
            for i, osc in enumerate(net_data.get('oscillators', []))
        ]
        baths = [
            _build(BathConfig, bath, f'network.baths.{i}')
            for i, bath in enumerate(net_data.get('baths', []))
        ]
        net_data.update(oscillators=oscillators, baths=baths)
        network = _build(NetworkConfig, net_data, 'network')

        config = cls(
            name=data['name'],
            description=data.get('description', ''),
            network=network,
            run=_build(RunControls, data.get('run', {}), 'run'),
            sweeps=[_build(SweepAxis, axis, f'sweeps.{i}') for i, axis in enumerate(data.get('sweeps', []))],
            output=_build(OutputConfig, data.get('output', {}), 'output'),
            logging=_build(LoggingConfig, data.get('logging', {}), 'logging')
        )
        config._validate()
        return config

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        """Canonical JSON echo; re-parses to an identical scenario."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def sha256(self) -> str:
        return hashlib.sha256(self.to_json().encode('utf-8')).hexdigest()

    @classmethod
    def load(cls, path) -> 'ScenarioConfig':
        """Load a scenario from a JSON file."""
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
        logger.debug("Loaded scenario from %s", path)
        return cls.from_dict(data)

    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w') as f:
            f.write(self.to_json() + '\n')

    def with_overrides(self, overrides: Dict[str, Any]) -> 'ScenarioConfig':
        """New scenario with dotted-path overrides applied and re-validated."""
        data = copy.deepcopy(self.to_dict())
        for path, value in overrides.items():
            _set_path(data, path, value)
        return ScenarioConfig.from_dict(data)

    def with_run_controls(
        self,
        dt_factor: Optional[float] = None,
        rel_tol: Optional[float] = None
    ) -> 'ScenarioConfig':
        """Apply command-line run overrides."""
        overrides = {}
        if dt_factor is not None:
            overrides['run.dt_factor'] = dt_factor
        if rel_tol is not None:
            overrides['run.rel_tol'] = rel_tol
        return self.with_overrides(overrides) if overrides else self

    def grid(self) -> List[Dict[str, float]]:
        """Sweep grid points in row-major order, as {path: value} dictionaries."""
        if not self.sweeps:
            return [{}]
        points = []
        for combo in itertools.product(*(axis.values for axis in self.sweeps)):
            point = {}
            for axis, value in zip(self.sweeps, combo):
                for path in axis.paths:
                    point[path] = float(value)
            points.append(point)
        return points

    def network_spec(self) -> NetworkSpec:
        return self.network.to_spec()

    def beta_init(self) -> float:
        """Initial inverse temperature in absolute units."""
        if self.run.beta_init is not None:
            return self.run.beta_init / self.network.reference_omega
        return max(bath.beta for bath in self.network.baths) / self.network.reference_omega

    def _validate(self):
        """Collect every problem and raise one ConfigError."""
        errors = []

        if not self.name:
            errors.append("Scenario name is empty")
        if self.network.reference_omega <= 0:
            errors.append(f"reference_omega {self.network.reference_omega} must be positive")
        if not self.network.oscillators:
            errors.append("Network has no oscillators")
        if not self.network.baths:
            errors.append("Network has no baths")
        if self.network.coupling is not None and self.network.chain_strength is not None:
            errors.append("Give either coupling or chain_strength, not both")

        run = self.run
        if run.method not in METHODS:
            errors.append(f"Unknown method '{run.method}', expected one of {METHODS}")
        if run.method == 'slow':
            if len(self.network.oscillators) not in (1, 2) or len(self.network.baths) != 2:
                errors.append("Slow method needs one or two oscillators and two baths")
        if not 0 < run.dt_factor <= 1:
            errors.append(f"dt_factor {run.dt_factor} must be in (0, 1]")
        if not run.rel_tol > 0:
            errors.append(f"rel_tol {run.rel_tol} must be positive")
        if run.max_periods < 1:
            errors.append(f"max_periods {run.max_periods} must be at least 1")
        if run.samples_per_period < 1:
            errors.append(f"samples_per_period {run.samples_per_period} must be at least 1")
        if run.slow_samples < 1:
            errors.append(f"slow_samples {run.slow_samples} must be at least 1")
        if run.t_end is not None and not run.t_end > 0:
            errors.append(f"t_end {run.t_end} must be positive")
        if run.beta_init is not None and not run.beta_init > 0:
            errors.append(f"beta_init {run.beta_init} must be positive")
        if run.eps_idle < 0:
            errors.append(f"eps_idle {run.eps_idle} must be non-negative")

        for i, axis in enumerate(self.sweeps):
            if not axis.paths:
                errors.append(f"Sweep axis {i} has no paths")
            if axis.points < 1:
                errors.append(f"Sweep axis {i} needs at least one point")
            if axis.min > axis.max:
                errors.append(f"Sweep axis {i}: min {axis.min} > max {axis.max}")

        if self.logging.level.upper() not in LOG_LEVELS:
            errors.append(f"Unknown log level '{self.logging.level}'")

        if not errors:
            try:
                self.network_spec()
            except ConfigError as e:
                errors.append(str(e))

        if not errors and self.sweeps:
            data = self.to_dict()
            for point in (self.grid()[0], self.grid()[-1]):
                try:
                    trial = copy.deepcopy(data)
                    for path, value in point.items():
                        _set_path(trial, path, value)
                except ConfigError as e:
                    errors.append(str(e))
                    break

        if errors:
            raise ConfigError(
                "Configuration validation failed:\n" +
                "\n".join(f"  - {err}" for err in errors)
            )

    def print_summary(self):
        """Print configuration summary."""
        net = self.network
        print("=" * 80)
        print(f"SCENARIO: {self.name}")
        print("=" * 80)
        if self.description:
            print(f"\n{self.description}")
        print(f"\nReference frequency: {net.reference_omega}")
        print(f"Oscillators: {len(net.oscillators)}")
        for i, osc in enumerate(net.oscillators):
            print(f"  [{i}] omega0={osc.omega0} delta_omega={osc.delta_omega} theta={osc.theta_value:.6g}")
        print(f"Baths: {len(net.baths)}")
        for i, bath in enumerate(net.baths):
            print(f"  [{i}] Omega={bath.omega} beta={bath.beta} g={bath.couplings} r={bath.squeeze_r}")
        if net.chain_strength is not None:
            print(f"Chain coupling: {net.chain_strength}")
        elif net.coupling is not None:
            print(f"Coupling matrix: {net.coupling}")
        print(f"Squeezing correlations: {'ON' if net.squeeze_correlations else 'OFF'}")
        print(f"\nMethod: {self.run.method}")
        print(f"  dt factor: {self.run.dt_factor}")
        print(f"  Tolerance: {self.run.rel_tol:g}")
        print(f"  Max periods: {self.run.max_periods}")
        if self.sweeps:
            print(f"\nSweeps ({len(self.grid())} points):")
            for axis in self.sweeps:
                print(f"  {axis.column}: {axis.min} .. {axis.max} ({axis.points} points)")
        print(f"\nOutput: {self.output.path}")
        print("\n" + "=" * 80)


def load_preset(figure_id: str) -> ScenarioConfig:
    """Load one of the shipped figure presets."""
    if figure_id not in FIGURE_IDS:
        raise ConfigError(f"Unknown figure '{figure_id}', expected one of {', '.join(FIGURE_IDS)}")
    return ScenarioConfig.load(SCENARIO_DIR / f'{figure_id}.json')
