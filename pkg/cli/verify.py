#!/usr/bin/env python3
"""CLI for the oracle verification suites."""

import argparse
import logging
import os
import sys
from typing import List, Optional

# Add parent directory to path for imports
_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(_ROOT, "src"))
sys.path.insert(0, _ROOT)

from cli import EXIT_OK, EXIT_VERIFY_FAILED
from wasserstein_tradeoffs.utils.logging import setup_logging
from wasserstein_tradeoffs.validation.runner import SUITES, run_suites

log = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "suite",
        choices=[*SUITES, "all"],
        help="Which property suite to run"
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Seed for the random instances (default: 0)"
    )
    parser.add_argument(
        "--samples",
        type=int,
        default=10**7,
        help="Monte-Carlo samples per lemma1 grid point (default: 10^7)"
    )
    parser.add_argument(
        "-q", "--quiet",
        action="store_true",
        help="Print only failing checks"
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable verbose logging"
    )


def execute(args: argparse.Namespace) -> int:
    reports = run_suites(
        args.suite,
        seed=args.seed,
        progress=not args.quiet and sys.stderr.isatty(),
        overrides={"lemma1": {"n_samples": args.samples}},
    )
    for report in reports:
        lines = report.format_lines()
        if args.quiet:
            lines = [lines[0]] + [line for line in lines[1:] if "FAIL" in line]
        print("\n".join(lines))
    passed = all(report.passed for report in reports)
    print("all properties hold" if passed else "verification FAILED")
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the verify CLI."""
    parser = argparse.ArgumentParser(
        prog="wdro-tradeoffs-verify",
        description="Check the closed forms against brute-force oracles."
    )
    add_arguments(parser)
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    return execute(args)


if __name__ == "__main__":
    sys.exit(main())
