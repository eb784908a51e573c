"""Brute-force verifiers for the closed forms in ``core``.

Nothing here is used by the solvers themselves. Each routine computes the
same quantity as a closed form by a different route (primal ascent, a 1-D
dual search, Monte-Carlo, finite differences) so the two can be compared.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize

from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.core.linreg import LinRegSetting, robust_surrogate_phi
from wasserstein_tradeoffs.core.random_features import Seed, child_seed
from wasserstein_tradeoffs.errors import InputError

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EmpiricalDist:
    """Finitely supported distribution over (x, y) pairs.

    Attributes:
        X: m×d features
        y: m responses
        weights: Probabilities per atom; uniform when omitted
    """

    X: np.ndarray
    y: np.ndarray
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if X.shape[0] != y.shape[0]:
            raise InputError(f"{X.shape[0]} feature rows but {y.shape[0]} responses")
        if X.shape[0] == 0:
            raise InputError("empirical distribution needs at least one point")
        if self.weights is None:
            w = np.full(X.shape[0], 1.0 / X.shape[0])
        else:
            w = np.asarray(self.weights, dtype=float).ravel()
            if w.shape[0] != X.shape[0]:
                raise InputError(f"{w.shape[0]} weights for {X.shape[0]} points")
            if np.any(w < 0):
                raise InputError("weights must be nonnegative")
            if abs(float(w.sum()) - 1.0) > 1e-12:
                raise InputError(f"weights sum to {w.sum():.15g}, expected 1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "weights", w)

    @classmethod
    def sample_gaussian(cls, m: int, d: int, seed: Seed, noise: float = 0.5) -> "EmpiricalDist":
        """m points with x ~ N(0, I) and y = xᵀβ + noise·w for a random β."""
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        X = rng.standard_normal((m, d))
        beta = rng.standard_normal(d)
        y = X @ beta + noise * rng.standard_normal(m)
        return cls(X=X, y=y)

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def moments(self, eps: float = 0.0) -> LinRegSetting:
        """Second moments (Σ, v, σ_y²) of this distribution as a regression setting."""
        wX = self.X * self.weights[:, None]
        Sigma = wX.T @ self.X
        Sigma = 0.5 * (Sigma + Sigma.T)
        return LinRegSetting(
            Sigma=Sigma,
            v=wX.T @ self.y,
            sigma_y2=float(self.weights @ (self.y * self.y)),
            eps=eps,
        )

    def residuals(self, theta) -> np.ndarray:
        return self.y - self.X @ np.asarray(theta, dtype=float).ravel()

    def standard_risk(self, theta) -> float:
        r = self.residuals(theta)
        return float(self.weights @ (r * r))


@dataclass(frozen=True, eq=False)
class PrimalResult:
    """Best feasible adversarial perturbation found by the primal ascent."""

    value: float
    perturbations: np.ndarray
    transport_cost: float
    restart: int = 0


def _project_budget(delta: np.ndarray, weights: np.ndarray, eps: float) -> np.ndarray:
    """Rescale onto {Σ w_i‖δ_i‖² ≤ ε²} when outside it."""
    cost = math.sqrt(float(weights @ np.sum(delta * delta, axis=1)))
    if cost <= eps:
        return delta
    if eps == 0.0:
        return np.zeros_like(delta)
    return delta * (eps / cost)


def _primal_value(dist: EmpiricalDist, theta: np.ndarray, delta: np.ndarray) -> Tuple[float, np.ndarray]:
    r = dist.y - (dist.X + delta) @ theta
    return float(dist.weights @ (r * r)), r


def _ascend(dist: EmpiricalDist, theta: np.ndarray, eps: float, delta: np.ndarray,
            iters: int, step: float) -> Tuple[float, np.ndarray]:
    """Projected gradient ascent on the per-atom perturbations.

    The step uses the w-weighted metric, in which the per-atom gradient is
    −2 r_i θ and the objective has curvature 2‖θ‖², so a step of 1/(2‖θ‖²)
    never decreases the objective.
    """
    value, r = _primal_value(dist, theta, delta)
    for _ in range(iters):
        candidate = _project_budget(delta - step * 2.0 * r[:, None] * theta[None, :], dist.weights, eps)
        new_value, new_r = _primal_value(dist, theta, candidate)
        if new_value < value:
            break
        gain = new_value - value
        delta, value, r = candidate, new_value, new_r
        if gain <= Config.PRIMAL_STALL_TOL * max(1.0, abs(value)):
            break
    return value, delta


def primal_ar_quadratic(
    dist: EmpiricalDist,
    theta,
    eps: float,
    iters: int = Config.PRIMAL_ITERS,
    restarts: int = Config.PRIMAL_RESTARTS,
    seed: Seed = 0,
    step_scale: float = Config.PRIMAL_STEP,
) -> PrimalResult:
    """Lower bound on the adversarial squared-loss risk by maximizing over transport maps.

    Maximizes Σ w_i (y_i − (x_i + δ_i)ᵀθ)² subject to Σ w_i‖δ_i‖² ≤ ε².
    Restart 0 starts from δ = 0; the others start from random points on the
    budget sphere seeded by (seed, restart). The best value wins, ties going
    to the lower restart index.

    Args:
        dist: Empirical distribution
        theta: Regression coefficients
        eps: Transport budget
        iters: Ascent iterations per restart
        restarts: Number of restarts (at least 1)
        seed: Master seed for the random starts
        step_scale: Multiplier in (0, 1] on the safe step 1/(2‖θ‖²)
    """
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.shape[0] != dist.d:
        raise InputError(f"theta has length {theta.shape[0]}, expected {dist.d}")
    if eps < 0:
        raise InputError(f"eps must be nonnegative, got {eps}")

    zero = np.zeros_like(dist.X)
    norm2 = float(theta @ theta)
    if eps == 0.0 or norm2 == 0.0:
        value, _ = _primal_value(dist, theta, zero)
        return PrimalResult(value=value, perturbations=zero, transport_cost=0.0)

    if not 0.0 < step_scale <= 1.0:
        raise InputError(f"step_scale must lie in (0, 1], got {step_scale}")
    step = step_scale / (2.0 * norm2)
    best: Optional[PrimalResult] = None
    for k in range(max(1, restarts)):
        if k == 0:
            start = zero
        else:
            rng = np.random.default_rng(np.random.SeedSequence(child_seed(seed, k)))
            start = rng.standard_normal(dist.X.shape)
            cost = math.sqrt(float(dist.weights @ np.sum(start * start, axis=1)))
            start = start * (eps / cost)
        value, delta = _ascend(dist, theta, eps, start, iters, step)
        if best is None or value > best.value:
            cost = math.sqrt(float(dist.weights @ np.sum(delta * delta, axis=1)))
            best = PrimalResult(value=value, perturbations=delta, transport_cost=cost, restart=k)
    log.debug(f"primal ascent: best value {best.value:.12g} from restart {best.restart}")
    return best


def dual_ar_quadratic_with_gamma(dist: EmpiricalDist, theta, eps: float) -> Tuple[float, float]:
    """Minimize γε² + Σ w_i φγ(θ; z_i) over γ > ‖θ‖².

    Searches s = log(γ − ‖θ‖²) with bounded Brent. Returns (value, γ);
    γ is +inf when the infimum is only approached (ε = 0) and 0 at θ = 0.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    if eps < 0:
        raise InputError(f"eps must be nonnegative, got {eps}")
    norm2 = float(theta @ theta)
    if eps == 0.0:
        return dist.standard_risk(theta), math.inf
    if norm2 == 0.0:
        return float(dist.weights @ (dist.y * dist.y)), 0.0

    def surrogate_mean(gamma: float) -> float:
        return sum(
            w * robust_surrogate_phi(theta, gamma, x, y)
            for w, x, y in zip(dist.weights, dist.X, dist.y)
        )

    def objective(s: float) -> float:
        gamma = norm2 + math.exp(s)
        return gamma * eps * eps + surrogate_mean(gamma)

    # γ* − ‖θ‖² = √SR·‖θ‖/ε lies well inside this window for any sane instance
    center = math.log(max(math.sqrt(dist.standard_risk(theta)) * math.sqrt(norm2) / eps, 1e-300))
    lo, hi = center - 30.0, center + 30.0
    res = optimize.minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-10, "maxiter": 2000})
    s = float(res.x)
    return float(res.fun), norm2 + math.exp(s)


def dual_ar_quadratic(dist: EmpiricalDist, theta, eps: float) -> float:
    """Dual value of the adversarial squared-loss risk; see :func:`dual_ar_quadratic_with_gamma`."""
    return dual_ar_quadratic_with_gamma(dist, theta, eps)[0]


def mc_expected_phi(a: float, b: float, gamma: float, n_samples: int, seed: Seed,
                    chunk: int = Config.MC_CHUNK) -> Tuple[float, float]:
    """Monte-Carlo mean and standard error of the piecewise ramp surrogate.

    Averages 1{ν ≤ −a} + (1 − (bγ/2)(ν + a)²)·1{−a < ν < √(2/(bγ)) − a}
    over ν ~ N(0, 1), drawn in chunks to bound memory.
    """
    if n_samples < 1:
        raise InputError(f"n_samples must be positive, got {n_samples}")
    if b <= 0 or gamma <= 0:
        raise InputError(f"b and gamma must be positive, got b={b}, gamma={gamma}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    half_bg = 0.5 * b * gamma
    upper = math.sqrt(2.0 / (b * gamma)) - a
    total = 0.0
    total_sq = 0.0
    remaining = n_samples
    while remaining > 0:
        n = min(chunk, remaining)
        nu = rng.standard_normal(n)
        shifted = nu + a
        loss = np.where(nu <= -a, 1.0, np.where(nu < upper, 1.0 - half_bg * shifted * shifted, 0.0))
        total += float(loss.sum())
        total_sq += float(loss @ loss)
        remaining -= n
    mean = total / n_samples
    if n_samples == 1:
        return mean, math.inf
    var = max(total_sq / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    return mean, math.sqrt(var / n_samples)


def fd_gradient_check(
    objective: Callable[[np.ndarray], Tuple[float, np.ndarray]],
    theta,
    h: float = 1e-6,
) -> float:
    """Normwise relative error between an analytic gradient and central differences.

    ``objective`` returns (value, gradient). Coordinate i is perturbed by
    h·(1 + |θ_i|). Returns 0 when both gradients vanish.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    _, grad = objective(theta)
    grad = np.asarray(grad, dtype=float).ravel()
    fd = np.empty_like(theta)
    for i in range(theta.shape[0]):
        step = h * (1.0 + abs(theta[i]))
        up = theta.copy()
        down = theta.copy()
        up[i] += step
        down[i] -= step
        fd[i] = (objective(up)[0] - objective(down)[0]) / (up[i] - down[i])
    scale = max(float(np.linalg.norm(grad)), float(np.linalg.norm(fd)))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(grad - fd)) / scale
