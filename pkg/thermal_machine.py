"""
THERMAL MACHINE SIMULATOR

Command-line entry point.

    python thermal_machine.py run --config config/scenarios/fig2.json --out results/fig2.csv
    python thermal_machine.py sweep --config config/scenarios/fig6b.json --workers 4
    python thermal_machine.py reproduce fig4
    python thermal_machine.py oracle --config config/scenarios/fig2.json
    python thermal_machine.py validate --config my_scenario.json

Exit codes: 0 success, 2 config error, 3 non-convergence, 4 physicality or
integration failure.
"""

import argparse
import logging
import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent))

from config.simulation_config import FIGURE_IDS, ScenarioConfig, load_preset, setup_logging
from model.exceptions import ConfigError, ConvergenceError, IntegrationError, PhysicalityError
from runner import __version__
from runner.csv_writer import write_csv
from runner.scenario_runner import execute, run_oracle, run_scenario, run_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_PHYSICALITY = 4


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description="Driven-oscillator thermal machine simulator.")
    p.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = p.add_subparsers(dest='command', required=True)

    def common(cmd, needs_config=True):
        cmd.add_argument('--config', required=needs_config, help="Scenario JSON file.")
        cmd.add_argument('--out', default=None, help="Output CSV path (default: from config).")
        cmd.add_argument('--dt-factor', type=float, default=None, help="Step size as a fraction of dt_max.")
        cmd.add_argument('--tol', type=float, default=None, help="Limit-cycle relative tolerance.")
        cmd.add_argument('--workers', type=int, default=1, help="Parallel workers for sweeps (default: 1).")

    common(sub.add_parser('run', help="Time series of one scenario."))
    common(sub.add_parser('sweep', help="Summary table over the sweep grid."))

    reproduce = sub.add_parser('reproduce', help="Emit the data behind a figure preset.")
    reproduce.add_argument('figure', choices=FIGURE_IDS)
    common(reproduce, needs_config=False)

    oracle = sub.add_parser('oracle', help="Compare the Fock-space oracle with the Gaussian dynamics.")
    common(oracle)
    oracle.add_argument('--periods', type=int, default=5, help="Modulation periods to compare (default: 5).")

    validate = sub.add_parser('validate', help="Check a scenario file.")
    validate.add_argument('--config', required=True, help="Scenario JSON file.")
    return p


def _load(args) -> ScenarioConfig:
    if getattr(args, 'figure', None):
        config = load_preset(args.figure)
    else:
        config = ScenarioConfig.load(args.config)
    return config.with_run_controls(dt_factor=args.dt_factor, rel_tol=args.tol)


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)

    try:
        if args.command == 'validate':
            config = ScenarioConfig.load(args.config)
            config.print_summary()
            print("\n✓ Configuration valid")
            return EXIT_OK

        config = _load(args)
        setup_logging(config.logging)
        if args.workers < 1:
            raise ConfigError(f"--workers {args.workers} must be at least 1")
        out = Path(args.out) if args.out else Path(config.output.path)

        if args.command == 'run':
            result = run_scenario(config)
            write_csv(result.frame, out, config, result.diagnostics)
            if result.report:
                print(result.report)
        elif args.command == 'sweep':
            if not config.sweeps:
                raise ConfigError(f"Scenario {config.name} declares no sweep axes")
            result = run_sweep(config, args.workers)
            write_csv(result.frame, out, config, result.diagnostics)
        elif args.command == 'reproduce':
            execute(config, out, args.workers)
        elif args.command == 'oracle':
            result = run_oracle(config, periods=args.periods)
            write_csv(result.frame, out, config, result.diagnostics)

        print(f"✓ Wrote {out}")
        return EXIT_OK

    except ConfigError as e:
        print(f"\n❌ Configuration Error:\n{e}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as e:
        print(f"\n❌ No convergence: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (PhysicalityError, IntegrationError) as e:
        print(f"\n❌ Physicality violation: {e}", file=sys.stderr)
        return EXIT_PHYSICALITY


if __name__ == "__main__":
    sys.exit(main())
