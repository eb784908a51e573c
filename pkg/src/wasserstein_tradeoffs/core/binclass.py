"""Gaussian-mixture binary classification under ℓr Wasserstein feature perturbations.

Labels are ±1 with features x ~ N(yμ, Σ); a linear classifier sign(xᵀθ) is
scored with 0-1 loss. Both risks depend on θ only through

    a = μᵀθ / ‖Σ^½θ‖₂        b = ‖Σ^½θ‖₂² / ‖θ‖_q²       (1/r + 1/q = 1)

with SR = Φ(−a) and AR = inf_γ≥0 [γε²/b + E_ν ramp_γ(ν)].
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, optimize

from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.core import pareto, scalar_search
from wasserstein_tradeoffs.core.gauss_special import (
    ramp_expectation,
    ramp_expectation_scalar,
    std_normal_cdf,
    std_normal_pdf,
)
from wasserstein_tradeoffs.core.linreg import _check_psd
from wasserstein_tradeoffs.errors import DegenerateDirectionError, InputError, SolverError

log = logging.getLogger(__name__)


def dual_exponent(r: float) -> float:
    """q with 1/r + 1/q = 1."""
    if r == 1.0:
        return math.inf
    if math.isinf(r):
        return 1.0
    return r / (r - 1.0)


@dataclass(frozen=True, eq=False)
class GaussMixSetting:
    """Two-class Gaussian mixture N(±μ, Σ) with an ℓr transport budget ε.

    ``class_prior`` is carried for completeness; neither risk depends on it.
    """

    mu: np.ndarray
    Sigma: np.ndarray
    eps: float = 0.0
    r: float = 2.0
    class_prior: float = 0.5
    _eigvals: np.ndarray = field(init=False, repr=False)
    _eigvecs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        Sigma = np.array(self.Sigma, dtype=float)
        mu = np.array(self.mu, dtype=float).ravel()
        eigvals, eigvecs = _check_psd(Sigma)
        if mu.shape[0] != Sigma.shape[0]:
            raise InputError(f"mu has length {mu.shape[0]}, expected {Sigma.shape[0]}")
        if not math.isfinite(self.eps) or self.eps < 0:
            raise InputError(f"eps must be finite and nonnegative, got {self.eps}")
        if not self.r >= 1.0:
            raise InputError(f"r must be >= 1, got {self.r}")
        if not 0.0 < self.class_prior < 1.0:
            raise InputError(f"class_prior must lie in (0, 1), got {self.class_prior}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "Sigma", Sigma)
        object.__setattr__(self, "eps", float(self.eps))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "_eigvals", np.where(eigvals < Config.EIG_FLOOR, 0.0, eigvals))
        object.__setattr__(self, "_eigvecs", eigvecs)

    @property
    def d(self) -> int:
        return self.mu.shape[0]

    @property
    def q(self) -> float:
        return dual_exponent(self.r)

    def with_eps(self, eps: float) -> "GaussMixSetting":
        return replace(self, eps=eps)

    def fisher_direction(self) -> np.ndarray:
        """Σ⁺μ, the direction maximizing a."""
        coords = self._eigvecs.T @ self.mu
        inv = np.divide(coords, self._eigvals, out=np.zeros_like(coords), where=self._eigvals > 0)
        return self._eigvecs @ inv

    def max_margin(self) -> float:
        """√(μᵀΣ⁺μ), the Cauchy-Schwarz bound on |a|."""
        return math.sqrt(max(float(self.mu @ self.fisher_direction()), 0.0))


@dataclass(frozen=True)
class ThetaStats:
    a: float
    b: float


@dataclass(frozen=True)
class DualRisk:
    """Adversarial risk with the located dual multiplier.

    ``gamma_star`` is +inf when ε = 0 (the infimum is the γ → ∞ limit).
    """

    value: float
    gamma_star: float
    diagnostics: Tuple[str, ...] = ()

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True, eq=False)
class BinParetoPoint:
    lam: float
    theta: np.ndarray
    a: float
    b: float
    gamma_star: float
    sr: float
    ar: float
    objective: float
    diagnostics: Tuple[str, ...] = ()

    @property
    def theta_norm(self) -> float:
        return float(np.linalg.norm(self.theta))


def theta_stats(setting: GaussMixSetting, theta) -> ThetaStats:
    """(a_θ, b_θ) for a direction θ.

    Raises:
        DegenerateDirectionError: Σ^½θ = 0
    """
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.shape[0] != setting.d:
        raise InputError(f"theta has length {theta.shape[0]}, expected {setting.d}")
    quad = float(theta @ setting.Sigma @ theta)
    scale = float(theta @ theta) * max(1.0, float(setting._eigvals[-1]))
    if not quad > 1e-14 * scale:
        raise DegenerateDirectionError("theta lies in the null space of Sigma")
    q = setting.q
    q_norm2 = float(theta @ theta) if q == 2.0 else float(np.linalg.norm(theta, ord=q)) ** 2
    return ThetaStats(a=float(setting.mu @ theta) / math.sqrt(quad), b=quad / q_norm2)


def standard_risk_bin(a: float) -> float:
    """SR = Φ(−a)."""
    return std_normal_cdf(-a)


def expected_phi(a: float, b: float, gamma: float) -> float:
    """Expected robust surrogate of the 0-1 loss at multiplier γ.

    E = Φ(δ − a) + (1/δ²){(a + δ)φ(a − δ) − aφ(a) + (a² + 1)[Φ(a − δ) − Φ(a)]},
    δ = √(2/(bγ)); stable series for small δ, Mills-ratio form when a > δ,
    saturated form for large δ.
    """
    if not gamma > 0:
        raise InputError(f"gamma must be positive, got {gamma}")
    if not b > 0:
        raise InputError(f"b must be positive, got {b}")
    return ramp_expectation_scalar(a, math.sqrt(2.0 / (b * gamma)))


def dual_objective(a: float, b: float, eps: float, gamma: float) -> float:
    """F(γ) = γε²/b + E_ν ramp with unit scale, whose infimum over γ is AR."""
    return gamma * eps * eps / b + ramp_expectation_scalar(a, math.sqrt(2.0 / gamma))


def _dual_objective_grid(a: float, b: float, eps: float, gammas: np.ndarray) -> np.ndarray:
    return gammas * eps * eps / b + ramp_expectation(a, np.sqrt(2.0 / gammas))


def minimize_dual(
    a: float,
    b: float,
    eps: float,
    rel_tol: float = Config.INNER_REL_TOL,
    check_modes: bool = True,
) -> DualRisk:
    """inf over γ of the dual objective, by golden-section search on log γ.

    With ``check_modes`` a coarse log grid over the final bracket guards
    against a second basin; if it beats the golden-section value by more
    than the multimodality tolerance, the grid basin is refined and used.
    """
    if eps == 0.0:
        return DualRisk(standard_risk_bin(a), math.inf)
    if not b > 0:
        raise InputError(f"b must be positive, got {b}")

    lo, hi = Config.INNER_BRACKET
    found = scalar_search.minimize_log_scale(
        lambda gamma: dual_objective(a, b, eps, gamma),
        lo,
        hi,
        rel_tol,
        Config.INNER_BRACKET_EXPANSIONS,
    )
    gamma_star, value = found.x, found.fx
    diagnostics: List[str] = []
    if found.hit_boundary:
        msg = f"inner minimum at bracket boundary [{found.lo:.3g}, {found.hi:.3g}] (a={a:.6g}, b={b:.6g})"
        log.debug(msg)
        diagnostics.append(msg)

    if check_modes:
        grid = np.geomspace(found.lo, found.hi, Config.INNER_GRID_POINTS)
        values = _dual_objective_grid(a, b, eps, grid)
        i = int(np.argmin(values))
        if values[i] < value - Config.MULTIMODAL_TOL:
            msg = (
                f"dual objective multimodal in gamma (a={a:.6g}, b={b:.6g}): "
                f"grid value {values[i]:.8g} beats golden-section {value:.8g}"
            )
            log.debug(msg)
            diagnostics.append(msg)
            s_lo = math.log(grid[max(i - 1, 0)])
            s_hi = math.log(grid[min(i + 1, len(grid) - 1)])
            s, fs, _ = scalar_search.golden_section(
                lambda s: dual_objective(a, b, eps, math.exp(s)), s_lo, s_hi, rel_tol
            )
            gamma_star, value = (math.exp(s), fs) if fs < values[i] else (float(grid[i]), float(values[i]))

    # AR lies in [Φ(−a), 1]
    value = min(max(value, standard_risk_bin(a)), 1.0)
    return DualRisk(value, gamma_star, tuple(diagnostics))


def adversarial_risk_bin(setting: GaussMixSetting, theta) -> DualRisk:
    """AR(θ) via the 1-D dual over γ."""
    stats = theta_stats(setting, theta)
    dual = minimize_dual(stats.a, stats.b, setting.eps)
    for msg in dual.diagnostics:
        log.warning(msg)
    return dual


def isotropic_collapse_point(setting: GaussMixSetting) -> Tuple[float, float]:
    """(SR, AR) of the single Pareto point when r = 2 and Σ = I (a = ‖μ‖, b = 1)."""
    if setting.r != 2.0 or not np.allclose(setting.Sigma, np.eye(setting.d), rtol=0.0, atol=1e-12):
        raise InputError("the single-point front requires r = 2 and Sigma = I")
    a = float(np.linalg.norm(setting.mu))
    return standard_risk_bin(a), minimize_dual(a, 1.0, setting.eps).value


def objective_a_derivative(a: float, gamma: float, lam: float) -> float:
    """∂/∂a of λΦ(−a) + γε² + E(a, 1, γ) at fixed γ.

    Equals −λφ(a) + γ{φ(δ − a) − φ(a) − a[Φ(δ − a) − Φ(−a)]} with δ = √(2/γ);
    the braces are ≤ 0, so the derivative is ≤ −λφ(a).
    """
    if not gamma > 0:
        raise InputError(f"gamma must be positive, got {gamma}")
    delta = math.sqrt(2.0 / gamma)
    braces = (
        std_normal_pdf(delta - a)
        - std_normal_pdf(a)
        - a * (std_normal_cdf(delta - a) - std_normal_cdf(-a))
    )
    return -lam * std_normal_pdf(a) + gamma * braces


def _unit(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x)


def _start_directions(setting: GaussMixSetting, seed: int, restarts: int) -> List[np.ndarray]:
    """μ, Σ⁺μ, then ``restarts`` random unit vectors from counter-derived streams."""
    starts = []
    for candidate in (setting.mu, setting.fisher_direction()):
        if np.linalg.norm(candidate) > 0:
            starts.append(_unit(candidate))
    for k in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
        starts.append(_unit(rng.standard_normal(setting.d)))
    return starts


class _SphereObjective:
    """λ·SR + AR as a function of a unit direction; degenerate directions map to +inf."""

    def __init__(self, setting: GaussMixSetting, lam: float, rel_tol: float):
        self.setting = setting
        self.lam = lam
        self.rel_tol = rel_tol

    def __call__(self, theta: np.ndarray) -> float:
        try:
            stats = theta_stats(self.setting, theta)
        except DegenerateDirectionError:
            return math.inf
        sr = standard_risk_bin(stats.a)
        if self.setting.eps == 0.0:
            return (1.0 + self.lam) * sr
        ar = minimize_dual(stats.a, stats.b, self.setting.eps, self.rel_tol, check_modes=False).value
        return self.lam * sr + ar


def _simplex_on_sphere(objective: _SphereObjective, start: np.ndarray, rounds: int = 2) -> Tuple[np.ndarray, float]:
    """Nelder-Mead over the tangent chart z ↦ normalize(θ0 + Nz), re-centred each round."""
    theta = start
    value = objective(theta)
    d = theta.shape[0]
    if d == 1:
        return theta, value
    step = 0.2
    for _ in range(rounds):
        basis = linalg.null_space(theta[None, :])
        chart = lambda z, t=theta, n=basis: _unit(t + n @ z)
        simplex = np.vstack([np.zeros(d - 1), step * np.eye(d - 1)])
        res = optimize.minimize(
            lambda z: objective(chart(z)),
            np.zeros(d - 1),
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": Config.SIMPLEX_XATOL,
                "fatol": Config.SIMPLEX_FATOL,
                "maxiter": Config.SIMPLEX_MAX_ITER,
                "maxfev": 2 * Config.SIMPLEX_MAX_ITER,
            },
        )
        if res.fun < value:
            theta, value = chart(res.x), float(res.fun)
        step = 0.02
    return theta, value


def pareto_point_bin(
    setting: GaussMixSetting,
    lam: float,
    seed: int = 0,
    restarts: int = Config.N_RANDOM_STARTS,
    rel_tol: float = Config.INNER_REL_TOL,
) -> BinParetoPoint:
    """Unit θ minimizing λΦ(−a_θ) + AR(θ), by multi-start simplex search on the sphere.

    Starts: the μ direction, the Fisher direction Σ⁺μ and ``restarts`` random
    directions. The best final objective wins; ties keep the earlier start.

    Raises:
        SolverError: no start produced a finite objective
    """
    if lam < 0 or not math.isfinite(lam):
        raise InputError(f"lambda must be finite and nonnegative, got {lam}")
    objective = _SphereObjective(setting, lam, rel_tol)

    best_theta: Optional[np.ndarray] = None
    best_value = math.inf
    for k, start in enumerate(_start_directions(setting, seed, restarts)):
        if not math.isfinite(objective(start)):
            log.debug(f"start {k} is degenerate, skipping")
            continue
        theta, value = _simplex_on_sphere(objective, start)
        log.debug(f"lambda={lam:.6g} start {k}: objective {value:.12g}")
        if value < best_value:
            best_theta, best_value = theta, value

    if best_theta is None:
        raise SolverError("every start direction was degenerate", lam=lam)

    stats = theta_stats(setting, best_theta)
    dual = minimize_dual(stats.a, stats.b, setting.eps, rel_tol)
    for msg in dual.diagnostics:
        log.warning(f"lambda={lam:.6g}: {msg}")
    sr = standard_risk_bin(stats.a)
    return BinParetoPoint(
        lam=lam,
        theta=best_theta,
        a=stats.a,
        b=stats.b,
        gamma_star=dual.gamma_star,
        sr=sr,
        ar=dual.value,
        objective=lam * sr + dual.value,
        diagnostics=dual.diagnostics,
    )


def pareto_sweep_bin(
    setting: GaussMixSetting,
    lambdas: Sequence[float],
    seed: int = 0,
    restarts: int = Config.N_RANDOM_STARTS,
    jobs: int = 1,
    rel_tol: float = Config.INNER_REL_TOL,
) -> List[BinParetoPoint]:
    """Pareto points over a λ grid, ordered by λ.

    Each λ's direction is also scored under every other λ's objective and
    replaced when beaten, so the curve is a consistent weighted-sum selection.
    """
    lams = pareto.validate_lambdas(lambdas)
    points = pareto.solve_each(
        lambda lam: pareto_point_bin(setting, lam, seed=seed, restarts=restarts, rel_tol=rel_tol),
        lams,
        jobs=jobs,
    )
    chosen = pareto.weighted_sum_selection(lams, lambda lam, j: lam * points[j].sr + points[j].ar)
    return [
        points[i] if j == i else replace(points[j], lam=lam, objective=lam * points[j].sr + points[j].ar)
        for i, (lam, j) in enumerate(zip(lams, chosen))
    ]
