"""Command line interface: ``involab run``, ``involab suite``, ``involab oracle``.

Exit status is 0 when every certificate passes, 1 when a mathematical check
fails and 2 on usage, parse or scenario errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from involab.fields import ZeroDivisorError
from involab.scenarios import VERSION, run_scenario
from involab.suite import DEFAULT_SUITE_COUNT, theorem_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for the ``run``, ``oracle`` and ``suite`` commands.

    Returns:
        The configured :class:`argparse.ArgumentParser`.
    """
    parser = argparse.ArgumentParser(
        prog="involab",
        description="Alternator subalgebras of algebras with involution in characteristic 2.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run the tasks of a scenario file")
    run.add_argument("scenario", type=Path)
    run.add_argument("--seed", type=_non_negative, default=None)
    run.add_argument("--budget", type=_non_negative, default=None)
    run.add_argument("--out", type=Path, default=None, help="write the report here")
    run.add_argument(
        "--no-timings", action="store_true", help="omit timings for diffable output"
    )

    oracle = commands.add_parser(
        "oracle", help="run a scenario with the enumeration cross-check forced on"
    )
    oracle.add_argument("scenario", type=Path)
    oracle.add_argument("--seed", type=_non_negative, default=None)
    oracle.add_argument("--out", type=Path, default=None)
    oracle.add_argument("--no-timings", action="store_true")

    suite = commands.add_parser("suite", help="check randomly generated instances")
    suite.add_argument("--seed", type=_non_negative, default=0)
    suite.add_argument("--count", type=_non_negative, default=DEFAULT_SUITE_COUNT)
    suite.add_argument("--workers", type=_non_negative, default=1)
    suite.add_argument("--out", type=Path, default=None)
    return parser


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )

    try:
        if args.command == "suite":
            suite_report = theorem_suite(args.seed, args.count, workers=max(1, args.workers))
            _emit(suite_report.to_json(), args.out)
            return EXIT_OK if suite_report.passed else EXIT_CHECK_FAILED
        report = run_scenario(
            args.scenario,
            seed=args.seed,
            budget=getattr(args, "budget", None),
            force_oracle=args.command == "oracle",
        )
    except (OSError, ValueError, ZeroDivisorError) as e:
        # malformed input, including a reducible layer modulus
        sys.stderr.write(f"involab: error: {e}\n")
        return EXIT_USAGE
    except ArithmeticError as e:
        sys.stderr.write(f"involab: check failed: {e}\n")
        return EXIT_CHECK_FAILED

    _emit(report.to_json(timings=not args.no_timings), args.out)
    if not report.passed:
        logger.error("%s: a certificate failed", args.scenario)
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
