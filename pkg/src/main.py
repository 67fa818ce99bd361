"""Command-line entry point: compile, simulate, verify and render.

Machine-readable results go to stdout (JSON lines, CSV, schedule JSON or
frames); diagnostics go to stderr. Exit codes: 0 success, 1 domain error,
2 usage error.
"""

import argparse
import json
import sys
from pathlib import Path

from src.config import Configuration
from src.models.patch import PatchKind
from src.services.circuit_parser import CircuitParseError, parse_circuit
from src.services.compiler import ScheduleConfig, ScheduleError, schedule
from src.services.decoder import DecoderError, logical_error_rate, write_rate_csv
from src.services.executor import ExecutionError, Tier, execute_schedule
from src.services.grid_registry import GridRegistry
from src.services.patch_builder import PatchError, build_patch
from src.services.renderer import RenderError, render_ascii, render_svg
from src.services.schedule_io import ScheduleFormatError, read_schedule, write_schedule
from src.services.verifier import SUITES, UnknownSuiteError, run_suite
from src.utils.logging import setup_logging

# Setup logging
logger = setup_logging()

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

DOMAIN_ERRORS = (
    CircuitParseError,
    ScheduleError,
    ScheduleFormatError,
    ExecutionError,
    DecoderError,
    PatchError,
    RenderError,
    UnknownSuiteError,
    OSError,
)


def build_parser(config: Configuration) -> argparse.ArgumentParser:
    """Argument parser with defaults taken from the environment configuration."""
    parser = argparse.ArgumentParser(
        prog="latsurg", description="Lattice-surgery compiler and simulator"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    comp = commands.add_parser("compile", help="compile a circuit into a surgery schedule")
    comp.add_argument("circuit", type=Path, help="circuit text file")
    comp.add_argument("-d", "--distance", type=int, default=config.distance)
    comp.add_argument("--grid", default=config.grid, help='"auto" or ROWSxCOLS tile slots')
    comp.add_argument("--trn", type=int, default=config.trn_count, help="number of TRN tiles")
    comp.add_argument("-o", "--output", type=Path, required=True, help="schedule JSON path")

    sim = commands.add_parser("simulate", help="execute a schedule")
    sim.add_argument("schedule", type=Path, help="schedule JSON file")
    sim.add_argument("--tier", choices=[t.value for t in Tier], default=Tier.LOGICAL.value)
    sim.add_argument("--seed", type=int, default=config.seed)
    sim.add_argument("--trials", type=int, default=1, help="runs with seeds seed, seed+1, ...")
    sim.add_argument(
        "--noise",
        type=float,
        default=None,
        help="instead of executing, estimate the logical error rate of one patch at this rate",
    )

    ver = commands.add_parser("verify", help="run a property suite")
    ver.add_argument("--suite", choices=sorted(SUITES), required=True)

    ren = commands.add_parser("render", help="draw schedule frames")
    ren.add_argument("schedule", type=Path, help="schedule JSON file")
    ren.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    ren.add_argument("--step", type=int, default=None, help="single step index (default: all)")
    ren.add_argument("-o", "--output", type=Path, default=None, help="output path (default stdout)")
    return parser


def cmd_compile(args: argparse.Namespace) -> int:
    circuit = parse_circuit(args.circuit.read_text(encoding="utf-8"))
    try:
        config = ScheduleConfig(distance=args.distance, grid=args.grid, trn_count=args.trn)
    except ValueError as e:
        raise ScheduleError(str(e)) from e
    result = schedule(circuit, config)
    write_schedule(result, args.output)
    print(json.dumps(result.metrics))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, config: Configuration) -> int:
    s = read_schedule(args.schedule)
    if args.trials < 1:
        raise ExecutionError(f"--trials must be >= 1, got {args.trials}")

    if args.noise is not None:
        d = s.distance
        registry = GridRegistry(2 * d + 1, 2 * d + 1)
        patch = build_patch(registry, PatchKind.ROTATED, d, (0, 0), patch_id="memory")
        estimate = logical_error_rate(patch, args.noise, args.trials, args.seed)
        write_rate_csv([estimate], sys.stdout)
        return EXIT_OK

    tier = Tier(args.tier)
    for trial in range(args.trials):
        seed = args.seed + trial
        result = execute_schedule(
            s, tier, seed=seed, rounds=config.rounds, dense_limit=config.dense_limit
        )
        for line in result.lines():
            record = json.loads(line)
            if args.trials > 1:
                record = {"trial": trial, **record}
            print(json.dumps(record))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_suite(args.suite)
    for r in results:
        print(json.dumps(r.to_dict()))
    failed = [r for r in results if not r.passed]
    print(
        json.dumps(
            {
                "summary": True,
                "suite": args.suite,
                "passed": len(results) - len(failed),
                "failed": len(failed),
            }
        )
    )
    for r in failed:
        print(f"FAIL {r.suite}: {r.name} ({r.detail})", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_DOMAIN


def cmd_render(args: argparse.Namespace) -> int:
    s = read_schedule(args.schedule)
    renderer = render_ascii if args.format == "ascii" else render_svg
    text = renderer(s, args.step)
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text, encoding="utf-8")
        logger.info("Wrote %s frames to %s", args.format, args.output)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Parse arguments and run one command.

    Returns:
        Process exit code
    """
    try:
        config = Configuration.from_env()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(config.log_level)
    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    try:
        if args.command == "compile":
            return cmd_compile(args)
        if args.command == "simulate":
            return cmd_simulate(args, config)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_render(args)
    except DOMAIN_ERRORS as e:
        logger.error("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except Exception as e:
        logger.exception("Unexpected failure in %s: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
