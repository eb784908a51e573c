#!/usr/bin/env python3
"""
SQLite run ledger using SQLAlchemy ORM.
Records every sweep run, its cells and provenance steps; never read back by the solvers.
"""

import logging
import math
import time
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional

from sqlalchemy import create_engine, text
from sqlalchemy.orm import Session, sessionmaker

from .models import CellResult, LedgerBase, ProvenanceLog, SweepRun

log = logging.getLogger(__name__)


def _nullable_float(value: Optional[float]) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def _run_to_dict(run: SweepRun) -> Dict[str, Any]:
    return {
        "run_id": run.id,
        "setting": run.setting,
        "config_path": run.config_path,
        "config_hash": run.config_hash,
        "seed": run.seed,
        "status": run.status,
        "started_at": run.started_at,
        "finished_at": run.finished_at,
        "duration_seconds": run.duration_seconds,
        "output_path": run.output_path,
        "n_cells": run.n_cells,
        "n_failed": run.n_failed,
        "library_version": run.library_version,
        "error_message": run.error_message,
    }


class SQLiteDatabase:
    """Manages the local SQLite run ledger."""

    def __init__(self, db_path: str, echo: bool = False):
        """Initialize SQLite database connection.

        Args:
            db_path: Path to SQLite database file
            echo: Whether to echo SQL statements (for debugging)
        """
        self.db_path = db_path
        self.engine = create_engine(
            f'sqlite:///{db_path}',
            echo=echo,
            connect_args={
                'check_same_thread': False,
                'timeout': 30.0
            }
        )
        self.Session = sessionmaker(bind=self.engine, expire_on_commit=False)
        self._init_database()

    def _init_database(self):
        """Create tables and set pragmas."""
        LedgerBase.metadata.create_all(self.engine)
        with self.engine.connect() as conn:
            conn.execute(text("PRAGMA foreign_keys = ON"))
            conn.execute(text("PRAGMA journal_mode = WAL"))
            conn.execute(text("PRAGMA synchronous = NORMAL"))
            conn.execute(text("PRAGMA temp_store = MEMORY"))
            conn.commit()

    @contextmanager
    def get_session(self) -> Session:
        """Get a database session with automatic cleanup.

        Yields:
            Session: SQLAlchemy session
        """
        session = self.Session()
        try:
            yield session
            session.commit()
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()

    # ========================================================================
    # Sweep Runs
    # ========================================================================

    def create_sweep_run(self, run_id: str, setting: Optional[str], config_path: str,
                         config_hash: Optional[str], seed: Optional[int],
                         library_version: str) -> str:
        """Insert a run in 'running' state.

        Returns:
            str: The run id
        """
        with self.get_session() as session:
            session.add(SweepRun(
                id=run_id,
                setting=setting,
                config_path=config_path,
                config_hash=config_hash,
                seed=None if seed is None else str(seed),
                status='running',
                started_at=datetime.utcnow(),
                library_version=library_version,
            ))
        return run_id

    def finish_sweep_run(self, run_id: str, status: str, output_path: Optional[str] = None,
                         n_cells: int = 0, n_failed: int = 0,
                         error_message: Optional[str] = None) -> None:
        """Close a run with its final status and counts."""
        with self.get_session() as session:
            run = session.get(SweepRun, run_id)
            if run is None:
                log.warning(f"Sweep run {run_id} not found in ledger")
                return
            run.status = status
            run.finished_at = datetime.utcnow()
            if run.started_at is not None:
                run.duration_seconds = (run.finished_at - run.started_at).total_seconds()
            run.output_path = output_path
            run.n_cells = n_cells
            run.n_failed = n_failed
            run.error_message = error_message

    def get_sweep_run(self, run_id: str) -> Optional[Dict[str, Any]]:
        with self.get_session() as session:
            run = session.get(SweepRun, run_id)
            return _run_to_dict(run) if run is not None else None

    def list_sweep_runs(self, limit: int = 20, status: Optional[str] = None) -> List[Dict[str, Any]]:
        """Most recent runs first.

        Args:
            limit: Maximum number of runs
            status: Only runs with this status, when given
        """
        with self.get_session() as session:
            query = session.query(SweepRun)
            if status is not None:
                query = query.filter(SweepRun.status == status)
            runs = query.order_by(SweepRun.started_at.desc()).limit(limit).all()
            return [_run_to_dict(run) for run in runs]

    # ========================================================================
    # Cell Results
    # ========================================================================

    def store_cell_results(self, run_id: str, rows: Iterable[Dict[str, Any]]) -> int:
        """Bulk insert sweep cells.

        Args:
            run_id: Owning run
            rows: Dicts with setting, eps, lambda, realization, width, sr, ar, status

        Returns:
            int: Number of rows stored
        """
        count = 0
        with self.get_session() as session:
            for row in rows:
                status = row.get("status") or "ok"
                session.add(CellResult(
                    run_id=run_id,
                    setting=row["setting"],
                    eps=float(row["eps"]),
                    lam=float(row["lambda"]),
                    realization=row.get("realization"),
                    width=row.get("width"),
                    sr=_nullable_float(row.get("sr")),
                    ar=_nullable_float(row.get("ar")),
                    status="ok" if status == "ok" else "failed",
                    error_message=None if status == "ok" else status,
                ))
                count += 1
        return count

    def get_cell_results(self, run_id: str) -> List[Dict[str, Any]]:
        with self.get_session() as session:
            cells = (
                session.query(CellResult)
                .filter(CellResult.run_id == run_id)
                .order_by(CellResult.id)
                .all()
            )
            return [
                {
                    "setting": c.setting,
                    "eps": c.eps,
                    "lambda": c.lam,
                    "realization": c.realization,
                    "width": c.width,
                    "sr": c.sr,
                    "ar": c.ar,
                    "status": c.status,
                    "error_message": c.error_message,
                }
                for c in cells
            ]

    # ========================================================================
    # Provenance and Logging
    # ========================================================================

    def create_provenance_log(self, run_id: str, event_type: str,
                              event_data: Dict[str, Any]) -> int:
        """Create a provenance log entry.

        Args:
            run_id: Sweep run id
            event_type: Type of event (stored as step_name)
            event_data: Event data as JSON (stored as step_data)

        Returns:
            int: Created log ID
        """
        with self.get_session() as session:
            entry = ProvenanceLog(
                run_id=run_id,
                step_name=event_type,
                step_timestamp=int(time.time()),
                step_data=event_data,
                created_at=datetime.utcnow()
            )
            session.add(entry)
            session.flush()
            return entry.id

    def get_provenance_logs(self, run_id: str) -> List[Dict[str, Any]]:
        with self.get_session() as session:
            entries = (
                session.query(ProvenanceLog)
                .filter(ProvenanceLog.run_id == run_id)
                .order_by(ProvenanceLog.id)
                .all()
            )
            return [
                {"step_name": e.step_name, "step_timestamp": e.step_timestamp, "step_data": e.step_data}
                for e in entries
            ]

    # ========================================================================
    # Statistics and Reporting
    # ========================================================================

    def get_run_stats(self) -> Dict[str, Any]:
        """Run counts per status plus the total number of stored cells."""
        with self.get_session() as session:
            stats = {}
            for status in ['running', 'completed', 'failed', 'config_error']:
                stats[f'runs_{status}'] = session.query(SweepRun).filter(
                    SweepRun.status == status
                ).count()
            stats['total_cells'] = session.query(CellResult).count()
            stats['failed_cells'] = session.query(CellResult).filter(
                CellResult.status == 'failed'
            ).count()
            return stats
