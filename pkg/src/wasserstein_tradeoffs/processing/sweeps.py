"""Execute a validated run configuration and build its CSV rows."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from tqdm import tqdm

from wasserstein_tradeoffs.core import binclass, linreg, random_features
from wasserstein_tradeoffs.errors import SolverError
from wasserstein_tradeoffs.processing.run_config import SweepConfig

log = logging.getLogger(__name__)

Row = Dict[str, Any]


@dataclass
class SweepOutcome:
    """Rows of one run plus everything that went wrong along the way."""

    rows: List[Row] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    diagnostics: List[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return bool(self.failures)


def _row(setting: str, eps: float, lam: float, **values: Any) -> Row:
    row: Row = {"setting": setting, "eps": float(eps), "lambda": float(lam), "realization": 0, "status": "ok"}
    row.update(values)
    return row


def _failed_row(setting: str, eps: float, lam: float, message: str, **values: Any) -> Row:
    return _row(setting, eps, lam, status=f"failed: {message}", **values)


def linreg_point_row(point: linreg.ParetoPoint, eps: float) -> Row:
    return _row(
        "linreg", eps, point.lam,
        sr=point.sr, ar=point.ar, gamma_star=point.gamma_star,
        branch=point.branch.value, theta_norm=point.theta_norm,
    )


def _run_linreg(cfg: SweepConfig, jobs: int, progress: bool) -> SweepOutcome:
    outcome = SweepOutcome()
    tol = cfg.tolerances
    for eps in tqdm(cfg.eps_list, desc="linreg eps", disable=not progress):
        setting = cfg.linreg.build(eps, cfg.seed)
        kwargs = dict(tol=tol["fixed_point_tol"], damping=tol["damping"], gamma_max=tol["gamma_max"])
        try:
            points = linreg.pareto_sweep(setting, cfg.lambdas, jobs=jobs, **kwargs)
            outcome.rows.extend(linreg_point_row(p, eps) for p in points)
            continue
        except SolverError as e:
            log.warning(f"eps={eps:g}: sweep failed ({e}); solving lambdas one by one")
        for lam in cfg.lambdas:
            try:
                point = linreg.solve_pareto_point(setting, lam, **kwargs)
            except SolverError as e:
                outcome.failures.append(f"linreg eps={eps:g} lambda={lam:.6g}: {e}")
                outcome.rows.append(_failed_row("linreg", eps, lam, str(e)))
                continue
            outcome.rows.append(linreg_point_row(point, eps))
    return outcome


def _run_binclass(cfg: SweepConfig, jobs: int, progress: bool) -> SweepOutcome:
    outcome = SweepOutcome()
    section = cfg.binclass
    rel_tol = cfg.tolerances["inner_rel_tol"]
    for eps in tqdm(cfg.eps_list, desc="binclass eps", disable=not progress):
        setting = section.build(eps, cfg.seed)
        try:
            points = binclass.pareto_sweep_bin(setting, cfg.lambdas, seed=cfg.seed, restarts=section.restarts,
                                               jobs=jobs, rel_tol=rel_tol)
        except SolverError as e:
            message = f"binclass eps={eps:g}: {e}"
            log.error(message)
            outcome.failures.append(message)
            outcome.rows.extend(_failed_row("binclass", eps, lam, str(e)) for lam in cfg.lambdas)
            continue
        for p in points:
            outcome.diagnostics.extend(f"eps={eps:g} lambda={p.lam:.6g}: {msg}" for msg in p.diagnostics)
            outcome.rows.append(_row(
                "binclass", eps, p.lam,
                sr=p.sr, ar=p.ar, gamma_star=p.gamma_star, a=p.a, b=p.b, theta_norm=p.theta_norm,
            ))
    return outcome


def _run_rf(cfg: SweepConfig, jobs: int, progress: bool) -> SweepOutcome:
    outcome = SweepOutcome()
    section = cfg.rf
    target = section.target(cfg.seed)
    for eps in cfg.eps_list:
        result = random_features.pareto_sweep_rf(
            section.build(eps), target, cfg.lambdas, section.widths, cfg.realizations, cfg.seed,
            jobs=jobs, grad_tol=cfg.tolerances["rf_grad_tol"], max_iter=int(cfg.tolerances["rf_max_iter"]),
            progress=progress,
        )
        outcome.diagnostics.extend(f"eps={eps:g} {msg}" for msg in result.diagnostics)
        for rec in result.records:
            values = dict(realization=rec.realization, width=rec.width)
            if rec.status == "ok":
                outcome.rows.append(_row("rf", eps, rec.lam, sr=rec.sr, ar=rec.ar,
                                         theta_norm=rec.theta_norm, **values))
            else:
                outcome.failures.append(f"rf eps={eps:g} N={rec.width} realization={rec.realization} "
                                        f"lambda={rec.lam:.6g}: {rec.status}")
                outcome.rows.append(_row("rf", eps, rec.lam, status=rec.status, **values))
    return outcome


def run_sweep(cfg: SweepConfig, jobs: int = 1, progress: bool = False) -> SweepOutcome:
    """All cells of a configuration, rows in CSV order.

    Solver failures do not abort the run; they come back as rows with a
    ``failed: ...`` status and as entries of ``failures``.
    """
    runners = {"linreg": _run_linreg, "binclass": _run_binclass, "rf": _run_rf}
    log.info(f"Running {cfg.setting} sweep: {len(cfg.eps_list)} eps x {len(cfg.lambdas)} lambdas")
    outcome = runners[cfg.setting](cfg, max(1, jobs), progress)
    outcome.rows.sort(key=_row_order)
    if outcome.failures:
        log.warning(f"{len(outcome.failures)} cell(s) failed")
    return outcome


def _row_order(row: Row):
    width: Optional[int] = row.get("width")
    return (row["eps"], row["lambda"], row.get("realization", 0), -math.inf if width is None else width)
