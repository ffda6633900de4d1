"""Command-line entry point: ``slowlight <subcommand> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import load_scenario, with_grid_points
from .errors import ConfigError, SlowLightError
from .runner import STAGES, run

# subcommand -> (default preset, stages)
COMMANDS = {
    "eit-spectrum": ("fig3_eit_sweep", ("spectrum", "lockin")),
    "dispersion": ("fig4_dispersion", ("spectrum", "homodyne")),
    "slowlight": ("fig5_slowlight", ("spectrum", "pulse")),
    "pc-spectrum": ("fig8_pc", ("spectrum", "fwm")),
    "gyro": ("fig7_gyro", ("gyro",)),
    "calibrate": ("calibrate", ("spectrum", "calibrate")),
    "run": (None, STAGES),
}

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slowlight", description="Slow-light EIT simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (preset, _) in COMMANDS.items():
        p = sub.add_parser(name, help=f"default scenario: {preset}" if preset else "run a scenario file")
        p.add_argument("--config", required=preset is None, default=preset,
                       help="scenario file or shipped preset name")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized optimizer starts")
        p.add_argument("--svg", choices=("on", "off"), default="off", help="write SVG plots")
        p.add_argument("--grid-points", type=int, default=None, help="override grid.points")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        scenario = load_scenario(args.config)
        if args.grid_points is not None:
            scenario = with_grid_points(scenario, args.grid_points)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run(scenario, args.out, stages=COMMANDS[args.command][1], seed=args.seed,
                     svg=args.svg == "on")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SlowLightError, ArithmeticError, ValueError) as exc:
        print(f"numeric error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for key, value in report.summary.items():
        print(f"{key} = {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
