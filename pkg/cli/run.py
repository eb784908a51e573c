#!/usr/bin/env python3
"""CLI for executing a sweep described by a run configuration."""

import argparse
import logging
import os
import sys
import time
from datetime import datetime, timezone
from typing import List, Optional

# Add parent directory to path for imports
_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(_ROOT, "src"))
sys.path.insert(0, _ROOT)

from cli import EXIT_CONFIG, EXIT_OK, EXIT_SOLVER
from wasserstein_tradeoffs import __version__
from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.errors import ConfigError, InputError
from wasserstein_tradeoffs.processing.run_config import load_config
from wasserstein_tradeoffs.processing.sweeps import run_sweep
from wasserstein_tradeoffs.storage.sqlite_db import SQLiteDatabase
from wasserstein_tradeoffs.utils.logging import ProvenanceTracker, setup_logging
from wasserstein_tradeoffs.utils.output import write_csv, write_sidecar

log = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    """Arguments of the run command, shared with the main dispatcher."""
    parser.add_argument(
        "config",
        type=str,
        help="Run configuration (YAML or JSON), or a .meta.json sidecar from an earlier run"
    )
    parser.add_argument(
        "--seed",
        type=int,
        help="Override the configuration's seed (unsigned 64-bit)"
    )
    parser.add_argument(
        "-j", "--jobs",
        type=int,
        default=1,
        help="Number of worker threads for sweep cells (default: 1)"
    )
    parser.add_argument(
        "-o", "--out",
        type=str,
        help="Override the configuration's output CSV path"
    )
    parser.add_argument(
        "--db",
        type=str,
        help=f"Run ledger SQLite file (default: {Config.get_sqlite_db_path()})"
    )
    parser.add_argument(
        "--no-ledger",
        action="store_true",
        help="Do not record this run in the ledger"
    )
    parser.add_argument(
        "-q", "--quiet",
        action="store_true",
        help="Only warnings and errors; no progress bars"
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable verbose logging"
    )


def _open_ledger(db_path: Optional[str]) -> Optional[SQLiteDatabase]:
    try:
        if db_path is None:
            Config.ensure_directories()
            db_path = str(Config.get_sqlite_db_path())
        else:
            os.makedirs(os.path.dirname(os.path.abspath(db_path)), exist_ok=True)
        return SQLiteDatabase(db_path)
    except Exception as e:
        log.warning(f"Run ledger unavailable ({e}); continuing without it")
        return None


def _reject_config(args: argparse.Namespace, message: str,
                   tracker: Optional[ProvenanceTracker] = None) -> int:
    """Report a configuration problem and record it as a config_error run."""
    print(f"error: {message}", file=sys.stderr)
    if tracker is None and not args.no_ledger:
        tracker = ProvenanceTracker(_open_ledger(args.db))
        tracker.log_run_start(args.config, seed=args.seed)
    if tracker is not None:
        tracker.log_run_end("config_error", message=message)
    return EXIT_CONFIG


def execute(args: argparse.Namespace) -> int:
    """Run one configuration; returns the process exit status."""
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print(f"error: --seed must be an unsigned 64-bit integer, got {args.seed}", file=sys.stderr)
        return EXIT_CONFIG
    if args.jobs < 1:
        print(f"error: --jobs must be positive, got {args.jobs}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        cfg = load_config(args.config, seed=args.seed, output=args.out)
    except ConfigError as e:
        return _reject_config(args, str(e))
    if cfg.output is None:
        return _reject_config(args, f"{args.config}: no output path; set 'output' or pass --out")

    db = None if args.no_ledger else _open_ledger(args.db)
    tracker = ProvenanceTracker(db)
    tracker.log_run_start(args.config, setting=cfg.setting, config_hash=cfg.config_hash(), seed=cfg.seed)

    started = datetime.now(timezone.utc)
    t0 = time.time()
    progress = not args.quiet and sys.stderr.isatty()
    try:
        outcome = run_sweep(cfg, jobs=args.jobs, progress=progress)
    except InputError as e:
        return _reject_config(args, f"{cfg.source}: {e}", tracker)
    elapsed = time.time() - t0
    tracker.log_step("sweep_done", {"rows": len(outcome.rows), "failures": len(outcome.failures),
                                    "seconds": round(elapsed, 3)})

    csv_path = write_csv(cfg.output, outcome.rows)
    metadata = {
        "library_version": __version__,
        "run_id": tracker.run_id,
        "setting": cfg.setting,
        "seed": cfg.seed,
        "config_hash": cfg.config_hash(),
        "source": cfg.source,
        "started_at": started.isoformat(),
        "wall_clock_seconds": elapsed,
        "lambda_inf": {"requested": cfg.lambda_inf, "proxy": Config.LAMBDA_INF},
        "n_rows": len(outcome.rows),
        "n_failed": len(outcome.failures),
        "failures": outcome.failures,
        "diagnostics": outcome.diagnostics,
    }
    write_sidecar(csv_path, cfg.to_dict(), metadata)

    tracker.log_cells(outcome.rows)
    status = "failed" if outcome.failed else "completed"
    tracker.log_run_end(status, output_path=str(csv_path), n_cells=len(outcome.rows),
                        n_failed=len(outcome.failures))

    if outcome.failed:
        print(f"{len(outcome.failures)} cell(s) failed; partial results in {csv_path}", file=sys.stderr)
        for failure in outcome.failures:
            print(f"  {failure}", file=sys.stderr)
        return EXIT_SOLVER
    log.info(f"Wrote {len(outcome.rows)} rows to {csv_path} in {elapsed:.1f}s")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the run CLI."""
    parser = argparse.ArgumentParser(
        prog="wdro-tradeoffs-run",
        description="Compute standard/adversarial risk tradeoff curves from a run configuration."
    )
    add_arguments(parser)
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    return execute(args)


if __name__ == "__main__":
    sys.exit(main())
