"""Verification suites run by ``wdro-tradeoffs verify``.

Each suite compares a closed form against an oracle over a fixed,
seed-derived set of instances and returns one :class:`PropertyCheck` per
comparison.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.core import binclass, linreg
from wasserstein_tradeoffs.core.random_features import (
    QuadraticTarget,
    RFModel,
    RFObjective,
    RFSetting,
    Seed,
    child_seed,
    make_batch,
)
from wasserstein_tradeoffs.errors import InputError
from wasserstein_tradeoffs.validation import oracle

log = logging.getLogger(__name__)

SUITES = ("duality", "lemma1", "gradients")

RAMP_GRID_A = (-0.5, 0.5, 1.5)
RAMP_GRID_B = (0.5, 1.0, 2.0)
RAMP_GRID_GAMMA = (0.5, 2.0, 8.0)


@dataclass(frozen=True)
class PropertyCheck:
    """One measured gap against its tolerance."""

    name: str
    gap: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return math.isfinite(self.gap) and self.gap <= self.tolerance


@dataclass
class SuiteReport:
    suite: str
    checks: List[PropertyCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[PropertyCheck]:
        return [check for check in self.checks if not check.passed]

    def max_gap(self, prefix: str = "") -> float:
        gaps = [c.gap for c in self.checks if c.name.startswith(prefix)]
        return max(gaps) if gaps else 0.0

    def format_lines(self) -> List[str]:
        lines = [f"[{self.suite}] {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks, {len(self.failures)} failed)"]
        for check in self.checks:
            status = "ok  " if check.passed else "FAIL"
            detail = f"  {check.detail}" if check.detail else ""
            lines.append(f"  {status} {check.name}: gap={check.gap:.3e} tol={check.tolerance:.1e}{detail}")
        return lines


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def duality_suite(
    n_instances: int = 20,
    m: int = 50,
    seed: Seed = 0,
    primal_iters: int = Config.PRIMAL_ITERS,
    primal_restarts: int = Config.PRIMAL_RESTARTS,
    progress: bool = False,
) -> SuiteReport:
    """Closed-form AR vs the 1-D dual vs primal ascent on random empirical instances.

    Instances cycle through d ∈ {2, 5} and ε ∈ {0.1, 1}.
    """
    report = SuiteReport("duality")
    for k in tqdm(range(n_instances), desc="duality", disable=not progress):
        d = (2, 5)[k % 2]
        eps = (0.1, 1.0)[(k // 2) % 2]
        dist = oracle.EmpiricalDist.sample_gaussian(m, d, child_seed(seed, 2 * k))
        theta = np.random.default_rng(np.random.SeedSequence(child_seed(seed, 2 * k + 1))).standard_normal(d)
        setting = dist.moments(eps)

        closed = linreg.adversarial_risk(setting, theta)
        dual, gamma = oracle.dual_ar_quadratic_with_gamma(dist, theta, eps)
        primal = oracle.primal_ar_quadratic(dist, theta, eps, iters=primal_iters,
                                            restarts=primal_restarts, seed=child_seed(seed, 2 * k))
        gamma_star = linreg.dual_gamma_star(setting, theta)
        tag = f"d={d} eps={eps:g}"

        report.checks.extend([
            PropertyCheck(f"dual_vs_closed[{k}]", _relative(dual, closed), 1e-8, tag),
            PropertyCheck(f"dual_gamma[{k}]", _relative(gamma, gamma_star), 1e-6, tag),
            PropertyCheck(f"primal_vs_closed[{k}]", _relative(primal.value, closed), 1e-3, tag),
            PropertyCheck(f"weak_duality[{k}]", max(0.0, primal.value - dual) / max(1.0, dual), 1e-9, tag),
            PropertyCheck(f"transport_budget[{k}]", max(0.0, primal.transport_cost - eps), 1e-8, tag),
        ])
    log.info(f"duality: max closed/primal gap {report.max_gap('primal_vs_closed'):.3e}")
    return report


def lemma1_suite(n_samples: int = 10**7, seed: Seed = 0, z: float = 3.0,
                 progress: bool = False) -> SuiteReport:
    """Analytic expected_phi vs Monte-Carlo of the piecewise ramp on a 27-point (a, b, γ) grid.

    The gap is measured in standard errors.
    """
    report = SuiteReport("lemma1")
    grid = list(itertools.product(RAMP_GRID_A, RAMP_GRID_B, RAMP_GRID_GAMMA))
    for k, (a, b, gamma) in enumerate(tqdm(grid, desc="lemma1", disable=not progress)):
        analytic = binclass.expected_phi(a, b, gamma)
        mean, se = oracle.mc_expected_phi(a, b, gamma, n_samples, child_seed(seed, k))
        gap = abs(analytic - mean) / se if se > 0 else (0.0 if analytic == mean else math.inf)
        report.checks.append(PropertyCheck(
            f"expected_phi(a={a:g}, b={b:g}, gamma={gamma:g})", gap, z,
            f"analytic={analytic:.10f} mc={mean:.10f} se={se:.2e}",
        ))
    return report


def _rf_gradient_problem(seed: Seed, d: int, N: int, n: int, eps: float, lam: float) -> RFObjective:
    setting = RFSetting(d=d, N=N, noise_sigma=0.5, eps=eps, n_mc=n, n_eval=n)
    target = QuadraticTarget.sample(d, child_seed(seed, 0))
    U = RFModel.sample_weights(N, d, child_seed(seed, 1))
    batch = make_batch(setting, target, n, child_seed(seed, 2))
    return RFObjective(setting, U, target, batch, lam)


def gradients_suite(
    n_points: int = 20,
    d: int = 10,
    N: int = 50,
    n: int = 2000,
    seed: Seed = 0,
    tol: float = 1e-5,
    progress: bool = False,
) -> SuiteReport:
    """Finite-difference checks of the random-features and linear-regression weighted objectives."""
    report = SuiteReport("gradients")
    objective = _rf_gradient_problem(seed, d, N, n, eps=0.1, lam=1.0)
    points_rng = np.random.default_rng(np.random.SeedSequence(child_seed(seed, 3)))
    for k in tqdm(range(n_points), desc="gradients", disable=not progress):
        theta = points_rng.standard_normal(N) / math.sqrt(N)
        err = oracle.fd_gradient_check(objective.value_and_grad, theta)
        report.checks.append(PropertyCheck(f"rf_objective[{k}]", err, tol, f"|theta|={np.linalg.norm(theta):.3f}"))

    lin_rng = np.random.default_rng(np.random.SeedSequence(child_seed(seed, 4)))
    for k in range(max(1, n_points // 2)):
        dim = 5
        A = lin_rng.standard_normal((dim, dim))
        theta0 = lin_rng.standard_normal(dim)
        setting = linreg.GenerativeLinReg(theta0=theta0, Sigma=A @ A.T / dim + 0.1 * np.eye(dim),
                                          noise_sigma=1.0).to_setting(eps=0.5)
        lam = float(10.0 ** lin_rng.uniform(-2, 2))
        theta = lin_rng.standard_normal(dim)

        def value_and_grad(t: np.ndarray, setting=setting, lam=lam):
            return linreg.weighted_objective(setting, lam, t), linreg.weighted_gradient(setting, lam, t)

        err = oracle.fd_gradient_check(value_and_grad, theta)
        report.checks.append(PropertyCheck(f"linreg_objective[{k}]", err, tol, f"lambda={lam:.3g}"))
    return report


def run_suites(suite: str, seed: Seed = 0, progress: bool = False,
               overrides: Optional[Dict[str, Dict]] = None) -> List[SuiteReport]:
    """Run one suite by name, or every suite for ``"all"``.

    ``overrides`` maps a suite name to extra keyword arguments for it.
    """
    runners: Dict[str, Callable[..., SuiteReport]] = {
        "duality": duality_suite,
        "lemma1": lemma1_suite,
        "gradients": gradients_suite,
    }
    names: Sequence[str] = SUITES if suite == "all" else (suite,)
    overrides = overrides or {}
    reports = []
    for name in names:
        if name not in runners:
            raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        log.info(f"Running {name} suite")
        report = runners[name](seed=seed, progress=progress, **overrides.get(name, {}))
        if report.passed:
            log.info(f"{name}: all {len(report.checks)} checks passed")
        else:
            log.warning(f"{name}: {len(report.failures)} of {len(report.checks)} checks failed")
        reports.append(report)
    return reports
