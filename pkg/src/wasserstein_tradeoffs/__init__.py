"""Standard vs. Wasserstein-adversarial risk tradeoffs for three learning settings."""

__version__ = "0.1.0"

# Configuration
from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.errors import (
    ConfigError,
    DegenerateDirectionError,
    InputError,
    SolverError,
    TradeoffError,
)

# Core functionality
from wasserstein_tradeoffs.core.gauss_special import (
    normal_cdf,
    normal_pdf,
    ramp_expectation,
    std_normal_cdf,
    std_normal_pdf,
)
from wasserstein_tradeoffs.core.linreg import (
    Branch,
    GenerativeLinReg,
    LinRegSetting,
    ParetoPoint,
    adversarial_risk,
    ar1_covariance,
    dual_gamma_star,
    isotropic_pareto_point,
    pareto_sweep,
    robust_surrogate_phi,
    solve_pareto_point,
    standard_risk,
    weighted_gradient,
    weighted_objective,
)
from wasserstein_tradeoffs.core.binclass import (
    BinParetoPoint,
    DualRisk,
    GaussMixSetting,
    ThetaStats,
    adversarial_risk_bin,
    dual_objective,
    expected_phi,
    minimize_dual,
    objective_a_derivative,
    pareto_point_bin,
    pareto_sweep_bin,
    isotropic_collapse_point,
    standard_risk_bin,
    theta_stats,
)
from wasserstein_tradeoffs.core.random_features import (
    QuadraticTarget,
    RFModel,
    RFObjective,
    RFRecord,
    RFSetting,
    RFSweepResult,
    SampleBatch,
    ar_firstorder,
    make_batch,
    pareto_sweep_rf,
    sample_sphere,
    solve_pareto_rf,
    sr_empirical,
    target_eval,
)

# Processing
from wasserstein_tradeoffs.processing.run_config import SweepConfig, load_config, parse_config
from wasserstein_tradeoffs.processing.sweeps import SweepOutcome, run_sweep

# Storage
from wasserstein_tradeoffs.storage.sqlite_db import SQLiteDatabase
from wasserstein_tradeoffs.storage.models import CellResult, ProvenanceLog, SweepRun

# Validation
from wasserstein_tradeoffs.validation.oracle import (
    EmpiricalDist,
    PrimalResult,
    dual_ar_quadratic,
    fd_gradient_check,
    mc_expected_phi,
    primal_ar_quadratic,
)
from wasserstein_tradeoffs.validation.runner import PropertyCheck, SuiteReport, run_suites

# Utils
from wasserstein_tradeoffs.utils.logging import ProvenanceTracker, setup_logging
from wasserstein_tradeoffs.utils.output import write_csv, write_sidecar

__all__ = [
    # Configuration
    "Config",
    "TradeoffError",
    "InputError",
    "DegenerateDirectionError",
    "ConfigError",
    "SolverError",
    # Gaussian special functions
    "std_normal_cdf",
    "std_normal_pdf",
    "normal_cdf",
    "normal_pdf",
    "ramp_expectation",
    # Linear regression
    "Branch",
    "LinRegSetting",
    "GenerativeLinReg",
    "ParetoPoint",
    "ar1_covariance",
    "standard_risk",
    "adversarial_risk",
    "robust_surrogate_phi",
    "dual_gamma_star",
    "weighted_objective",
    "weighted_gradient",
    "solve_pareto_point",
    "isotropic_pareto_point",
    "pareto_sweep",
    # Binary classification
    "GaussMixSetting",
    "ThetaStats",
    "DualRisk",
    "BinParetoPoint",
    "theta_stats",
    "standard_risk_bin",
    "expected_phi",
    "dual_objective",
    "minimize_dual",
    "adversarial_risk_bin",
    "isotropic_collapse_point",
    "objective_a_derivative",
    "pareto_point_bin",
    "pareto_sweep_bin",
    # Random features
    "RFSetting",
    "RFModel",
    "QuadraticTarget",
    "SampleBatch",
    "RFObjective",
    "RFRecord",
    "RFSweepResult",
    "sample_sphere",
    "make_batch",
    "target_eval",
    "sr_empirical",
    "ar_firstorder",
    "solve_pareto_rf",
    "pareto_sweep_rf",
    # Processing
    "SweepConfig",
    "load_config",
    "parse_config",
    "SweepOutcome",
    "run_sweep",
    # Storage
    "SQLiteDatabase",
    "SweepRun",
    "CellResult",
    "ProvenanceLog",
    # Validation
    "EmpiricalDist",
    "PrimalResult",
    "primal_ar_quadratic",
    "dual_ar_quadratic",
    "mc_expected_phi",
    "fd_gradient_check",
    "PropertyCheck",
    "SuiteReport",
    "run_suites",
    # Utils
    "ProvenanceTracker",
    "setup_logging",
    "write_csv",
    "write_sidecar",
]
