#!/usr/bin/env python3
"""Main CLI entry point for the wdro-tradeoffs tool."""

import argparse
import os
import sys
from typing import List, Optional

# Add parent directory to path for imports
_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(_ROOT, "src"))
sys.path.insert(0, _ROOT)

from wasserstein_tradeoffs.utils.logging import setup_logging


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the wdro-tradeoffs CLI."""
    from cli import history, run, verify

    parser = argparse.ArgumentParser(
        prog='wdro-tradeoffs',
        description='Standard vs. Wasserstein-adversarial risk tradeoff curves and their verification.'
    )

    subparsers = parser.add_subparsers(
        title='commands',
        dest='command',
        help='Available commands',
        required=True
    )

    # Run command
    run_parser = subparsers.add_parser(
        'run',
        help='Execute the sweep described by a run configuration'
    )
    run.add_arguments(run_parser)

    # Verify command
    verify_parser = subparsers.add_parser(
        'verify',
        help='Check the closed forms against brute-force oracles'
    )
    verify.add_arguments(verify_parser)

    # History command
    history_parser = subparsers.add_parser(
        'history',
        help='List runs recorded in the run ledger'
    )
    history.add_arguments(history_parser)

    args = parser.parse_args(argv)
    setup_logging(args.verbose, getattr(args, 'quiet', False))

    # Route to appropriate command handler
    handlers = {
        'run': run.execute,
        'verify': verify.execute,
        'history': history.execute,
    }
    return handlers[args.command](args)


if __name__ == '__main__':
    sys.exit(main())
