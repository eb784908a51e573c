"""Standard and 2-Wasserstein adversarial risk of linear regression, and its Pareto front.

The adversary moves features only, within an ℓ2 transport budget ε. For a
linear estimator θ under squared loss

    SR(θ) = σ_y² + θᵀΣθ − 2vᵀθ
    AR(θ) = (√SR(θ) + ε‖θ‖₂)²

and the minimizers of λ·SR + AR are either θ = 0 or ridge-like estimators
(Σ + γ*I)⁻¹v, with γ* a fixed point of γ = (ε² + εA)/(1 + λ + ε/A).
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy import linalg

from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.core import pareto, scalar_search
from wasserstein_tradeoffs.errors import InputError, SolverError

log = logging.getLogger(__name__)


class Branch(str, Enum):
    """Which candidate of the Pareto characterization won."""

    ZERO = "zero"
    STATIONARY = "stationary"


def ar1_covariance(d: int, rho: float) -> np.ndarray:
    """Toeplitz covariance Σ_ij = ρ^|i−j|."""
    if d < 1:
        raise InputError(f"dimension must be positive, got {d}")
    if not -1.0 < rho < 1.0:
        raise InputError(f"rho must lie in (-1, 1), got {rho}")
    return linalg.toeplitz(np.power(float(rho), np.arange(d)))


def _check_psd(Sigma: np.ndarray, name: str = "Sigma") -> Tuple[np.ndarray, np.ndarray]:
    """Validate a symmetric PSD matrix and return its eigendecomposition."""
    if Sigma.ndim != 2 or Sigma.shape[0] != Sigma.shape[1]:
        raise InputError(f"{name} must be square, got shape {Sigma.shape}")
    if not np.all(np.isfinite(Sigma)):
        raise InputError(f"{name} has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(Sigma)))) if Sigma.size else 1.0
    if np.max(np.abs(Sigma - Sigma.T), initial=0.0) > 1e-12 * scale:
        raise InputError(f"{name} is not symmetric")
    eigvals, eigvecs = linalg.eigh(Sigma)
    if eigvals.size and eigvals[0] < -1e-10 * scale:
        raise InputError(f"{name} is not positive semidefinite (min eigenvalue {eigvals[0]:.3e})")
    return eigvals, eigvecs


@dataclass(frozen=True, eq=False)
class LinRegSetting:
    """Second-moment description of a regression problem plus the adversary budget.

    Attributes:
        Sigma: E[xxᵀ]
        v: E[yx]
        sigma_y2: E[y²]
        eps: Transport budget ε (ℓ2 units on features)
    """

    Sigma: np.ndarray
    v: np.ndarray
    sigma_y2: float
    eps: float = 0.0
    _eigvals: np.ndarray = field(init=False, repr=False)
    _eigvecs: np.ndarray = field(init=False, repr=False)
    _coords: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        Sigma = np.array(self.Sigma, dtype=float)
        v = np.array(self.v, dtype=float).ravel()
        eigvals, eigvecs = _check_psd(Sigma)
        if v.shape[0] != Sigma.shape[0]:
            raise InputError(f"v has length {v.shape[0]}, expected {Sigma.shape[0]}")
        if not math.isfinite(self.eps) or self.eps < 0:
            raise InputError(f"eps must be finite and nonnegative, got {self.eps}")
        if self.sigma_y2 < 0:
            raise InputError(f"sigma_y2 must be nonnegative, got {self.sigma_y2}")
        # joint second moment of (x, y) must be PSD: σ_y² ≥ vᵀΣ⁺v
        coords = eigvecs.T @ v
        kept = eigvals > Config.EIG_FLOOR
        explained = float(np.sum(coords[kept] ** 2 / eigvals[kept]))
        if self.sigma_y2 - explained < -1e-10 * max(1.0, self.sigma_y2):
            raise InputError(
                f"sigma_y2={self.sigma_y2:.6g} is below v^T Sigma^+ v={explained:.6g}; "
                "the joint second-moment matrix is not PSD"
            )
        object.__setattr__(self, "Sigma", Sigma)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "sigma_y2", float(self.sigma_y2))
        object.__setattr__(self, "eps", float(self.eps))
        object.__setattr__(self, "_eigvals", np.where(eigvals < Config.EIG_FLOOR, 0.0, eigvals))
        object.__setattr__(self, "_eigvecs", eigvecs)
        object.__setattr__(self, "_coords", coords)

    @property
    def d(self) -> int:
        return self.v.shape[0]

    def with_eps(self, eps: float) -> "LinRegSetting":
        return replace(self, eps=eps)

    def min_standard_risk(self) -> float:
        """Least-squares risk σ_y² − vᵀΣ⁺v."""
        return standard_risk(self, self.ridge(0.0))

    def ridge(self, gamma: float) -> np.ndarray:
        """(Σ + γI)⁻¹v via the eigendecomposition; a pseudo-inverse at γ = 0."""
        return self._eigvecs @ self._ridge_coords(gamma)

    def _ridge_coords(self, gamma: float) -> np.ndarray:
        denom = self._eigvals + gamma
        return np.divide(self._coords, denom, out=np.zeros_like(self._coords), where=denom > Config.EIG_FLOOR)

    def _ridge_moments(self, gamma: float) -> Tuple[float, float]:
        """(SR(θγ), ‖θγ‖) for θγ = (Σ + γI)⁻¹v, computed in the eigenbasis."""
        inv = self._ridge_coords(gamma)
        sr = self.sigma_y2 + float(np.sum(self._eigvals * inv * inv)) - 2.0 * float(np.dot(self._coords, inv))
        return max(sr, 0.0), float(np.linalg.norm(inv))


@dataclass(frozen=True)
class GenerativeLinReg:
    """Linear data model y = xᵀθ0 + w with E[xxᵀ] = Σ and w ~ N(0, σ²)."""

    theta0: np.ndarray
    Sigma: np.ndarray
    noise_sigma: float

    def to_setting(self, eps: float = 0.0) -> LinRegSetting:
        theta0 = np.asarray(self.theta0, dtype=float).ravel()
        Sigma = np.asarray(self.Sigma, dtype=float)
        if self.noise_sigma < 0:
            raise InputError(f"noise_sigma must be nonnegative, got {self.noise_sigma}")
        v = Sigma @ theta0
        sigma_y2 = self.noise_sigma ** 2 + float(theta0 @ v)
        return LinRegSetting(Sigma=Sigma, v=v, sigma_y2=sigma_y2, eps=eps)


@dataclass(frozen=True, eq=False)
class ParetoPoint:
    """One point (λ, θλ, γ*, SR, AR) of the linear-regression tradeoff curve.

    ``gamma_star`` is +inf on the zero branch, the limit of (Σ + γI)⁻¹v → 0.
    """

    lam: float
    theta: np.ndarray
    gamma_star: float
    sr: float
    ar: float
    branch: Branch
    objective: float
    residual: float = 0.0

    @property
    def theta_norm(self) -> float:
        return float(np.linalg.norm(self.theta))


def _as_theta(setting: LinRegSetting, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.shape[0] != setting.d:
        raise InputError(f"theta has length {theta.shape[0]}, expected {setting.d}")
    if not np.all(np.isfinite(theta)):
        raise InputError("theta has non-finite entries")
    return theta


def standard_risk(setting: LinRegSetting, theta) -> float:
    """SR(θ) = σ_y² + θᵀΣθ − 2vᵀθ, clamped at 0."""
    theta = _as_theta(setting, theta)
    sr = setting.sigma_y2 + float(theta @ setting.Sigma @ theta) - 2.0 * float(setting.v @ theta)
    return max(sr, 0.0)


def adversarial_risk(setting: LinRegSetting, theta) -> float:
    """AR(θ) = (√SR(θ) + ε‖θ‖₂)²."""
    theta = _as_theta(setting, theta)
    root = math.sqrt(standard_risk(setting, theta)) + setting.eps * float(np.linalg.norm(theta))
    return root * root


def robust_surrogate_phi(theta, gamma: float, x0, y0: float) -> float:
    """Per-sample robust surrogate sup_x (y0 − xᵀθ)² − γ‖x − x0‖².

    Returns ``math.inf`` when γ < ‖θ‖², otherwise γ(y0 − x0ᵀθ)²/(γ − ‖θ‖²).
    """
    theta = np.asarray(theta, dtype=float).ravel()
    x0 = np.asarray(x0, dtype=float).ravel()
    if gamma < 0:
        raise InputError(f"gamma must be nonnegative, got {gamma}")
    norm2 = float(theta @ theta)
    resid2 = (float(y0) - float(x0 @ theta)) ** 2
    if norm2 == 0.0:
        return resid2
    if gamma < norm2:
        return math.inf
    if gamma == norm2:
        return 0.0 if resid2 == 0.0 else math.inf
    return gamma * resid2 / (gamma - norm2)


def dual_gamma_star(setting: LinRegSetting, theta) -> float:
    """Minimizer γ* = √SR·‖θ‖/ε + ‖θ‖² of the dual for AR(θ)."""
    theta = _as_theta(setting, theta)
    if setting.eps <= 0:
        raise InputError("the dual minimizer is only defined for eps > 0")
    norm = float(np.linalg.norm(theta))
    return math.sqrt(standard_risk(setting, theta)) * norm / setting.eps + norm * norm


def weighted_objective(setting: LinRegSetting, lam: float, theta) -> float:
    """λ·SR(θ) + AR(θ)."""
    if lam < 0:
        raise InputError(f"lambda must be nonnegative, got {lam}")
    return lam * standard_risk(setting, theta) + adversarial_risk(setting, theta)


def weighted_gradient(setting: LinRegSetting, lam: float, theta) -> np.ndarray:
    """Gradient of λ·SR + AR = (1+λ)SR + ε²‖θ‖² + 2ε‖θ‖√SR.

    At θ = 0 the ‖θ‖ term is not differentiable; its contribution is dropped
    there. The √SR term requires SR > 0 whenever ε‖θ‖ > 0.
    """
    theta = _as_theta(setting, theta)
    eps = setting.eps
    resid_grad = setting.Sigma @ theta - setting.v  # ½∇SR
    grad = 2.0 * (1.0 + lam) * resid_grad + 2.0 * eps * eps * theta
    norm = float(np.linalg.norm(theta))
    if eps > 0 and norm > 0:
        root_sr = math.sqrt(standard_risk(setting, theta))
        if root_sr == 0.0:
            raise InputError("gradient undefined where SR(theta) = 0 and eps*||theta|| > 0")
        grad = grad + 2.0 * eps * (theta / norm * root_sr + resid_grad * norm / root_sr)
    return grad


def _fixed_point_map(a_of_gamma: Callable[[float], float], eps: float, lam: float) -> Callable[[float], float]:
    """γ ↦ (ε² + εA)/(1 + λ + ε/A), in the form A(ε² + εA)/(A(1+λ) + ε) that stays finite at A = 0."""

    def rhs(gamma: float) -> float:
        A = a_of_gamma(gamma)
        if not math.isfinite(A):
            return math.inf
        return A * (eps * eps + eps * A) / (A * (1.0 + lam) + eps)

    return rhs


def _fixed_point_roots(
    rhs: Callable[[float], float],
    eps: float,
    tol: float,
    damping: float,
    gamma_max: float,
) -> Tuple[List[float], float, bool]:
    """All fixed points of γ = rhs(γ) found by damped iteration plus a log-grid scan.

    Returns:
        (roots, best residual seen, whether any sign change was found)
    """
    g = lambda gamma: gamma - rhs(gamma)
    roots: List[float] = []
    best_residual = math.inf

    # damped iteration
    gamma = eps * eps
    for _ in range(Config.DAMPED_MAX_ITER):
        target = rhs(gamma)
        if not math.isfinite(target):
            break
        residual = abs(gamma - target)
        best_residual = min(best_residual, residual)
        if residual <= tol * max(1.0, gamma):
            roots.append(gamma)
            break
        gamma = (1.0 - damping) * gamma + damping * target
    else:
        log.debug(f"Damped fixed-point iteration stalled at residual {best_residual:.3e}, scanning for sign changes")

    # bracket: widen until g turns positive or the cap is reached
    hint = roots[0] if roots else gamma
    hi = min(max(1.0, 4.0 * hint), gamma_max) if math.isfinite(hint) else 1.0
    while g(hi) <= 0.0 and hi < gamma_max:
        hi = min(2.0 * hi, gamma_max)
    grid = np.concatenate(([0.0], np.geomspace(Config.GAMMA_MIN, hi, Config.GAMMA_SCAN_POINTS)))
    brackets = scalar_search.find_sign_changes(g, grid)
    for lo_b, hi_b in brackets:
        try:
            root = scalar_search.refine_root(g, lo_b, hi_b, xtol=1e-300)
        except (ValueError, RuntimeError) as e:
            log.debug(f"Root refinement failed on [{lo_b:.3e}, {hi_b:.3e}]: {e}")
            continue
        residual = abs(g(root))
        best_residual = min(best_residual, residual)
        if residual <= tol * max(1.0, root):
            roots.append(root)
        else:
            log.debug(f"Discarding root {root:.6g} with residual {residual:.3e}")

    unique: List[float] = []
    for root in sorted(roots):
        if not unique or abs(root - unique[-1]) > 1e-9 * max(1.0, root):
            unique.append(root)
    return unique, best_residual, bool(brackets)


def solve_pareto_point(
    setting: LinRegSetting,
    lam: float,
    tol: float = Config.FIXED_POINT_TOL,
    damping: float = Config.DAMPING,
    gamma_max: float = Config.GAMMA_MAX,
) -> ParetoPoint:
    """Minimize λ·SR + AR by the fixed-point characterization.

    Every fixed point γ* found yields a candidate θ = (Σ + γ*I)⁻¹v; these are
    compared with θ = 0 under the weighted objective and the best is returned.
    The fixed-point residual criterion is |γ − RHS(γ)| ≤ tol·max(1, γ).

    Raises:
        SolverError: sign changes of γ − RHS(γ) exist but no root met the tolerance
    """
    if lam < 0 or not math.isfinite(lam):
        raise InputError(f"lambda must be finite and nonnegative, got {lam}")
    if tol <= 0:
        raise InputError(f"tol must be positive, got {tol}")

    zero = ParetoPoint(
        lam=lam,
        theta=np.zeros(setting.d),
        gamma_star=math.inf,
        sr=setting.sigma_y2,
        ar=setting.sigma_y2,
        branch=Branch.ZERO,
        objective=(1.0 + lam) * setting.sigma_y2,
    )

    if setting.eps == 0.0:
        theta = setting.ridge(0.0)
        sr = standard_risk(setting, theta)
        point = ParetoPoint(lam, theta, 0.0, sr, sr, Branch.STATIONARY, (1.0 + lam) * sr)
        return point if point.objective < zero.objective else zero

    def a_of_gamma(gamma: float) -> float:
        sr, norm = setting._ridge_moments(gamma)
        if norm == 0.0:
            return math.inf
        return math.sqrt(sr) / norm

    rhs = _fixed_point_map(a_of_gamma, setting.eps, lam)
    roots, best_residual, had_sign_change = _fixed_point_roots(rhs, setting.eps, tol, damping, gamma_max)
    if not roots and had_sign_change:
        raise SolverError(
            f"fixed point not resolved to tol={tol:.1e} (best residual {best_residual:.3e})",
            residual=best_residual,
            lam=lam,
        )
    if len(roots) > 1:
        log.info(f"lambda={lam:.6g}: {len(roots)} fixed points found, keeping the best objective")

    best = zero
    for gamma in roots:
        theta = setting.ridge(gamma)
        objective = weighted_objective(setting, lam, theta)
        if objective < best.objective:
            best = ParetoPoint(
                lam=lam,
                theta=theta,
                gamma_star=gamma,
                sr=standard_risk(setting, theta),
                ar=adversarial_risk(setting, theta),
                branch=Branch.STATIONARY,
                objective=objective,
                residual=abs(gamma - rhs(gamma)),
            )
    return best


def isotropic_pareto_point(theta0_norm: float, noise_sigma: float, eps: float, lam: float,
                           tol: float = Config.FIXED_POINT_TOL) -> Tuple[float, float, float, Branch]:
    """Pareto point for isotropic features, E[xxᵀ] = I, from the scalar fixed point

        A(γ) = (γ² + (1+γ)²σ²/‖θ0‖²)^½.

    Returns:
        (gamma_star, sr, ar, branch)
    """
    if theta0_norm <= 0:
        raise InputError("theta0_norm must be positive")
    sigma_y2 = noise_sigma ** 2 + theta0_norm ** 2
    zero = (math.inf, sigma_y2, sigma_y2, Branch.ZERO)
    if eps == 0.0:
        sr = noise_sigma ** 2
        return (0.0, sr, sr, Branch.STATIONARY) if (1 + lam) * sr < (1 + lam) * sigma_y2 else zero

    ratio2 = (noise_sigma / theta0_norm) ** 2
    a_of_gamma = lambda gamma: math.sqrt(gamma * gamma + (1.0 + gamma) ** 2 * ratio2)
    rhs = _fixed_point_map(a_of_gamma, eps, lam)
    roots, best_residual, had_sign_change = _fixed_point_roots(rhs, eps, tol, Config.DAMPING, Config.GAMMA_MAX)
    if not roots and had_sign_change:
        raise SolverError("isotropic fixed point not resolved", residual=best_residual, lam=lam)

    best, best_obj = zero, (1.0 + lam) * sigma_y2
    for gamma in roots:
        A = a_of_gamma(gamma)
        scale2 = theta0_norm ** 2 / (1.0 + gamma) ** 2
        sr, ar = A * A * scale2, (A + eps) ** 2 * scale2
        if lam * sr + ar < best_obj:
            best, best_obj = (gamma, sr, ar, Branch.STATIONARY), lam * sr + ar
    return best


def pareto_sweep(
    setting: LinRegSetting,
    lambdas: Sequence[float],
    tol: float = Config.FIXED_POINT_TOL,
    jobs: int = 1,
    damping: float = Config.DAMPING,
    gamma_max: float = Config.GAMMA_MAX,
) -> List[ParetoPoint]:
    """One Pareto point per λ, ordered by λ.

    Raises:
        SolverError: with ``lam`` set to the first λ that failed
    """
    lams = pareto.validate_lambdas(lambdas)
    points = pareto.solve_each(
        lambda lam: solve_pareto_point(setting, lam, tol=tol, damping=damping, gamma_max=gamma_max),
        lams,
        jobs=jobs,
    )

    def objective(lam: float, j: int) -> float:
        p = points[j]
        return lam * p.sr + p.ar

    chosen = pareto.weighted_sum_selection(lams, objective)
    return [
        points[i] if j == i else replace(points[j], lam=lam, objective=objective(lam, j))
        for i, (lam, j) in enumerate(zip(lams, chosen))
    ]
