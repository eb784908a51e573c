"""pytest configuration and fixtures for wasserstein-tradeoffs tests."""

import os
import shutil
import sys
import tempfile

import numpy as np
import pytest

# Add the repo root (for cli) and src (for the library) to the path
_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(_ROOT, "src"))
sys.path.insert(0, _ROOT)

from wasserstein_tradeoffs.core.binclass import GaussMixSetting
from wasserstein_tradeoffs.core.linreg import GenerativeLinReg, ar1_covariance
from wasserstein_tradeoffs.storage.sqlite_db import SQLiteDatabase
from wasserstein_tradeoffs.utils.logging import ProvenanceTracker


@pytest.fixture
def temp_dir():
    """Create a temporary working directory for tests."""
    temp_dir = tempfile.mkdtemp(prefix="test_tradeoffs_")
    yield temp_dir
    # Cleanup after test
    shutil.rmtree(temp_dir, ignore_errors=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def correlated_linreg():
    """d = 10 generative setting with Σ_ij = 0.5^|i−j|, σ = 1 and ε = 0.5."""
    theta0 = np.random.default_rng(7).standard_normal(10) / np.sqrt(10)
    model = GenerativeLinReg(theta0=theta0, Sigma=ar1_covariance(10, 0.5), noise_sigma=1.0)
    return model.to_setting(eps=0.5)


@pytest.fixture
def random_linreg_settings():
    """Ten random moment settings with d ≤ 6, varied ε."""
    rng = np.random.default_rng(2024)
    settings = []
    for k in range(10):
        d = 2 + k % 5
        A = rng.standard_normal((d, d))
        Sigma = A @ A.T / d + 0.05 * np.eye(d)
        theta0 = rng.standard_normal(d)
        noise = 0.3 + rng.uniform()
        eps = (0.05, 0.3, 1.0)[k % 3]
        settings.append(GenerativeLinReg(theta0=theta0, Sigma=Sigma, noise_sigma=noise).to_setting(eps))
    return settings


@pytest.fixture
def isotropic_mixture():
    """r = 2, Σ = I, d = 10 mixture with ‖μ‖ = 1 and ε = 0.5."""
    mu = np.random.default_rng(11).standard_normal(10)
    mu /= np.linalg.norm(mu)
    return GaussMixSetting(mu=mu, Sigma=np.eye(10), eps=0.5, r=2.0)


@pytest.fixture
def ledger(temp_dir):
    """Run ledger in a temporary SQLite file."""
    return SQLiteDatabase(os.path.join(temp_dir, "ledger.db"))


@pytest.fixture
def provenance_tracker(ledger):
    """ProvenanceTracker writing to the temporary ledger."""
    return ProvenanceTracker(ledger)


@pytest.fixture
def write_config(temp_dir):
    """Write YAML text to a file in the temp dir and return its path."""

    def _write(text: str, name: str = "run.yaml") -> str:
        path = os.path.join(temp_dir, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    return _write
