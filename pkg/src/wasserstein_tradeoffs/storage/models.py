#!/usr/bin/env python3
"""
SQLAlchemy models for the sweep run ledger.
One row per `run` invocation, one per sweep cell, and free-form provenance steps.
"""

from datetime import datetime

from sqlalchemy import (
    Column, Integer, String, Text, Float, DateTime, ForeignKey,
    CheckConstraint, Index, JSON
)
from sqlalchemy.orm import declarative_base, relationship

LedgerBase = declarative_base()


class SweepRun(LedgerBase):
    """One execution of a run configuration"""
    __tablename__ = 'sweep_runs'
    __table_args__ = (
        CheckConstraint("status IN ('running', 'completed', 'failed', 'config_error')"),
        Index('idx_sweep_run_status', 'status'),
        Index('idx_sweep_run_started', 'started_at'),
    )

    id = Column(String, primary_key=True)  # run id (uuid4)
    setting = Column(String)
    config_path = Column(Text)
    config_hash = Column(String(64))
    seed = Column(String)  # u64 does not fit SQLite's signed INTEGER
    status = Column(String, nullable=False, default='running')
    started_at = Column(DateTime, default=datetime.utcnow)
    finished_at = Column(DateTime)
    duration_seconds = Column(Float)
    output_path = Column(Text)
    n_cells = Column(Integer, default=0)
    n_failed = Column(Integer, default=0)
    library_version = Column(String)
    error_message = Column(Text)

    # Relationships
    cells = relationship("CellResult", back_populates="run", cascade="all, delete-orphan")
    provenance_logs = relationship("ProvenanceLog", back_populates="run", cascade="all, delete-orphan")


class CellResult(LedgerBase):
    """One (eps, lambda, realization, width) row of a sweep"""
    __tablename__ = 'cell_results'
    __table_args__ = (
        Index('idx_cell_run', 'run_id'),
        Index('idx_cell_status', 'status'),
    )

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(String, ForeignKey('sweep_runs.id', ondelete='CASCADE'), nullable=False)
    setting = Column(String, nullable=False)
    eps = Column(Float, nullable=False)
    lam = Column('lambda', Float, nullable=False)
    realization = Column(Integer)
    width = Column(Integer)
    sr = Column(Float)
    ar = Column(Float)
    status = Column(String, nullable=False, default='ok')
    error_message = Column(Text)

    # Relationships
    run = relationship("SweepRun", back_populates="cells")


class ProvenanceLog(LedgerBase):
    """Tracking of processing steps within a run"""
    __tablename__ = 'provenance_logs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(String, ForeignKey('sweep_runs.id', ondelete='CASCADE'), nullable=False)
    step_name = Column(String, nullable=False)
    step_timestamp = Column(Integer, nullable=False)
    step_data = Column(JSON)  # JSON data for step details
    created_at = Column(DateTime, default=datetime.utcnow)

    # Relationships
    run = relationship("SweepRun", back_populates="provenance_logs")
