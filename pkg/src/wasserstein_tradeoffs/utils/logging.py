#!/usr/bin/env python3

import logging
import time
import uuid
from typing import Any, Dict, Iterable, List, Optional

from wasserstein_tradeoffs import __version__

log = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Configure root logging for a CLI entry point.

    Args:
        verbose: DEBUG level for the package loggers
        quiet: Only warnings and errors
    """
    level = logging.DEBUG if verbose else (logging.WARNING if quiet else logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)
    logging.getLogger("wasserstein_tradeoffs").setLevel(level)
    # SQL echo stays off even in verbose mode
    logging.getLogger("sqlalchemy").setLevel(logging.WARNING)


class ProvenanceTracker:
    """Tracks one sweep run in the ledger: start, steps, cell outcomes and end.

    Without a database every call degrades to log lines, so callers never
    branch on ``--no-ledger``.
    """

    def __init__(self, db=None):
        """Initialize the provenance tracker.

        Args:
            db: A :class:`~wasserstein_tradeoffs.storage.sqlite_db.SQLiteDatabase`, or None
        """
        self.run_id = str(uuid.uuid4())
        self.run_timestamp = int(time.time())
        self.db = db
        self.steps: List[str] = []
        self._started = False
        log.info(f"Initialized ProvenanceTracker with run ID: {self.run_id}")

    def log_run_start(self, config_path: str, setting: Optional[str] = None,
                      config_hash: Optional[str] = None, seed: Optional[int] = None) -> str:
        """Record the start of a run.

        Returns:
            The run id
        """
        if self.db is not None:
            try:
                self.db.create_sweep_run(self.run_id, setting, config_path, config_hash, seed, __version__)
                self._started = True
            except Exception as e:
                log.error(f"Failed to record run start: {e}")
        self.log_step("run_start", {
            "config_path": config_path,
            "setting": setting,
            "seed": None if seed is None else str(seed),
            "start_date": time.strftime("%Y-%m-%d %H:%M:%S"),
        })
        return self.run_id

    def log_step(self, step_name: str, step_data: Dict[str, Any]) -> None:
        """Log a named step with its JSON payload."""
        self.steps.append(step_name)
        if self.db is None or not self._started:
            log.debug(f"step {step_name}: {step_data}")
            return
        try:
            self.db.create_provenance_log(self.run_id, step_name, {
                "timestamp": int(time.time()),
                "data": step_data,
            })
            log.debug(f"Logged step {step_name} for run {self.run_id}")
        except Exception as e:
            log.error(f"Failed to log step: {e}")

    def log_cells(self, rows: Iterable[Dict[str, Any]]) -> int:
        """Store sweep cell outcomes; returns the number stored."""
        rows = list(rows)
        if self.db is None or not self._started:
            return 0
        try:
            return self.db.store_cell_results(self.run_id, rows)
        except Exception as e:
            log.error(f"Failed to store cell results: {e}")
            return 0

    def log_run_end(self, status: str, output_path: Optional[str] = None, n_cells: int = 0,
                    n_failed: int = 0, message: Optional[str] = None) -> None:
        """Close the run with its final status."""
        self.log_step("run_end", {
            "status": status,
            "n_cells": n_cells,
            "n_failed": n_failed,
            "message": message,
            "end_date": time.strftime("%Y-%m-%d %H:%M:%S"),
        })
        if self.db is not None and self._started:
            try:
                self.db.finish_sweep_run(self.run_id, status, output_path, n_cells, n_failed, message)
            except Exception as e:
                log.error(f"Failed to record run end: {e}")
        elapsed = int(time.time()) - self.run_timestamp
        log.info(f"Run {self.run_id} finished with status {status} after {elapsed}s "
                 f"({n_cells} cells, {n_failed} failed)")
