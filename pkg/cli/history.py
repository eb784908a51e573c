#!/usr/bin/env python3
"""CLI for listing recorded sweep runs."""

import argparse
import logging
import os
import sys
from typing import List, Optional

# Add parent directory to path for imports
_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(_ROOT, "src"))
sys.path.insert(0, _ROOT)

from cli import EXIT_CONFIG, EXIT_OK
from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.storage.sqlite_db import SQLiteDatabase
from wasserstein_tradeoffs.utils.logging import setup_logging

log = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--db",
        type=str,
        help=f"Run ledger SQLite file (default: {Config.get_sqlite_db_path()})"
    )
    parser.add_argument(
        "-n", "--limit",
        type=int,
        default=20,
        help="Number of recent runs to list (default: 20)"
    )
    parser.add_argument(
        "--status",
        choices=["running", "completed", "failed", "config_error"],
        help="Only list runs with this status"
    )
    parser.add_argument(
        "--run-id",
        type=str,
        help="Show the failed cells and provenance steps of one run"
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable verbose logging"
    )


def _format_run(run: dict) -> str:
    started = run["started_at"].strftime("%Y-%m-%d %H:%M:%S") if run["started_at"] else "-"
    duration = f"{run['duration_seconds']:.1f}s" if run["duration_seconds"] is not None else "-"
    return (f"{run['run_id']}  {started}  {run['status']:<12} {run['setting'] or '-':<9}"
            f"cells={run['n_cells'] or 0:<6} failed={run['n_failed'] or 0:<4} {duration:>8}  "
            f"{run['output_path'] or ''}")


def execute(args: argparse.Namespace) -> int:
    db_path = args.db or str(Config.get_sqlite_db_path())
    if not os.path.exists(db_path):
        print(f"error: no run ledger at {db_path}", file=sys.stderr)
        return EXIT_CONFIG
    db = SQLiteDatabase(db_path)

    if args.run_id:
        run = db.get_sweep_run(args.run_id)
        if run is None:
            print(f"error: run {args.run_id} not found", file=sys.stderr)
            return EXIT_CONFIG
        print(_format_run(run))
        if run["error_message"]:
            print(f"  error: {run['error_message']}")
        for cell in db.get_cell_results(args.run_id):
            if cell["status"] != "ok":
                print(f"  failed cell eps={cell['eps']:g} lambda={cell['lambda']:.6g} "
                      f"realization={cell['realization']} width={cell['width']}: {cell['error_message']}")
        for step in db.get_provenance_logs(args.run_id):
            print(f"  step {step['step_name']} at {step['step_timestamp']}")
        return EXIT_OK

    runs = db.list_sweep_runs(limit=args.limit, status=args.status)
    if not runs:
        print("no runs recorded")
    for run in runs:
        print(_format_run(run))
    stats = db.get_run_stats()
    log.info(f"Ledger totals: {stats}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the history CLI."""
    parser = argparse.ArgumentParser(
        prog="wdro-tradeoffs-history",
        description="List sweep runs recorded in the run ledger."
    )
    add_arguments(parser)
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    return execute(args)


if __name__ == "__main__":
    sys.exit(main())
