"""Configuration settings for the wasserstein-tradeoffs package."""

from pathlib import Path
from typing import Dict


class Config:
    """Single source of truth for all configuration values."""

    # === Gaussian Special Functions ===
    NORMAL_SATURATION = 40.0
    ERFC_BRANCH = 1.0
    SERIES_DELTA_MAX = 0.05
    SERIES_TERMS = 30

    # === Linear Regression Fixed Point ===
    FIXED_POINT_TOL = 1e-12
    DAMPING = 0.5
    DAMPED_MAX_ITER = 500
    GAMMA_MAX = 1e12
    GAMMA_MIN = 1e-14
    GAMMA_SCAN_POINTS = 400
    EIG_FLOOR = 1e-12

    # === Lambda ===
    LAMBDA_INF = 1e6

    # === Binary Classification ===
    INNER_BRACKET = (1e-8, 1e8)
    INNER_BRACKET_EXPANSIONS = 8
    INNER_REL_TOL = 1e-8
    INNER_GRID_POINTS = 161
    MULTIMODAL_TOL = 1e-4
    N_RANDOM_STARTS = 6
    SIMPLEX_MAX_ITER = 4000
    SIMPLEX_XATOL = 1e-9
    SIMPLEX_FATOL = 1e-13

    # === Random Features ===
    RF_N_MC = 20000
    RF_N_EVAL = 20000
    SQRT_SMOOTHING = 1e-12
    RF_MAX_ITER = 5000
    RF_GRAD_TOL = 1e-5
    LARGE_EPS_WARNING = 0.5
    THETA_GROWTH_FACTOR = 10.0

    # === Oracle ===
    PRIMAL_ITERS = 10000
    PRIMAL_RESTARTS = 10
    PRIMAL_STEP = 1.0
    PRIMAL_STALL_TOL = 1e-14
    MC_CHUNK = 1_000_000

    # === Output ===
    FLOAT_DIGITS = 17
    CSV_COLUMNS = (
        "setting", "eps", "lambda", "realization", "sr", "ar", "gamma_star",
        "a", "b", "branch", "theta_norm", "width", "status",
    )

    # === Project Root ===
    PROJECT_ROOT = Path.cwd()

    # === Data Directories ===
    DATA_ROOT = PROJECT_ROOT / "data"

    @classmethod
    def get_sqlite_db_path(cls) -> Path:
        """Get the run ledger SQLite file path."""
        return cls.DATA_ROOT / "wasserstein_tradeoffs.db"

    @classmethod
    def ensure_directories(cls):
        """Create the data directory holding the run ledger."""
        cls.DATA_ROOT.mkdir(parents=True, exist_ok=True)

    @classmethod
    def solver_tolerances(cls) -> Dict[str, float]:
        """Tolerances a run configuration may override, with their defaults."""
        return {
            "fixed_point_tol": cls.FIXED_POINT_TOL,
            "damping": cls.DAMPING,
            "gamma_max": cls.GAMMA_MAX,
            "inner_rel_tol": cls.INNER_REL_TOL,
            "rf_grad_tol": cls.RF_GRAD_TOL,
            "rf_max_iter": cls.RF_MAX_ITER,
        }
