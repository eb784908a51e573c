"""Random-features regression: Monte-Carlo standard risk, first-order adversarial risk, Pareto solves.

Data x are uniform on the sphere of radius √d, y = f(x) + w with the random
quadratic target f(x) = β0 + xᵀβ1 + (F*/d)(xᵀGx − tr G). The model is
θᵀσ(Ux) with frozen unit-norm rows u_i and σ = ReLU (σ′(0) := 0).

    SR(θ) = E(f − θᵀσ(Ux))² + σ_w²
    AR(θ) ≈ SR(θ) + 2ε (E[((f − θᵀσ(Ux))² + σ_w²)‖Uᵀdiag(σ′(Ux))θ‖²])^½

The O(ε²) remainder is dropped; values are first-order adversarial risks.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg, optimize
from tqdm import tqdm

from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.core import pareto
from wasserstein_tradeoffs.errors import InputError, SolverError

log = logging.getLogger(__name__)

Seed = Union[int, Sequence[int]]


def _rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def child_seed(seed: Seed, index: int) -> List[int]:
    """Counter-derived seed: the parent entropy words followed by ``index``."""
    base = [int(s) for s in seed] if isinstance(seed, (list, tuple)) else [int(seed)]
    return base + [int(index)]


@dataclass(frozen=True)
class RFSetting:
    """Random-features problem size, noise and adversary budget."""

    d: int
    N: int
    noise_sigma: float
    eps: float = 0.0
    n_mc: int = Config.RF_N_MC
    n_eval: int = Config.RF_N_EVAL
    activation: str = "relu"

    def __post_init__(self):
        if self.d < 2:
            raise InputError(f"d must be >= 2, got {self.d}")
        if self.N < 1:
            raise InputError(f"N must be positive, got {self.N}")
        if self.n_mc < 1 or self.n_eval < 1:
            raise InputError("n_mc and n_eval must be positive")
        if self.noise_sigma < 0:
            raise InputError(f"noise_sigma must be nonnegative, got {self.noise_sigma}")
        if not math.isfinite(self.eps) or self.eps < 0:
            raise InputError(f"eps must be finite and nonnegative, got {self.eps}")
        if self.activation != "relu":
            raise InputError(f"unsupported activation {self.activation!r}")
        if self.large_eps:
            log.warning(
                f"eps={self.eps} exceeds {Config.LARGE_EPS_WARNING}; "
                "the first-order adversarial risk may be inaccurate"
            )

    @property
    def large_eps(self) -> bool:
        return self.eps > Config.LARGE_EPS_WARNING


@dataclass(frozen=True, eq=False)
class RFModel:
    """Frozen first layer U (N×d, unit rows) and second layer θ."""

    U: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.U, dtype=float)
        theta = np.asarray(self.theta, dtype=float).ravel()
        if U.ndim != 2 or theta.shape[0] != U.shape[0]:
            raise InputError(f"theta has length {theta.shape[0]}, expected {U.shape[0]}")
        if np.max(np.abs(np.linalg.norm(U, axis=1) - 1.0)) > 1e-12:
            raise InputError("rows of U must have unit norm")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "theta", theta)

    @staticmethod
    def sample_weights(N: int, d: int, seed: Seed) -> np.ndarray:
        """N rows uniform on the unit sphere S^{d−1}."""
        W = _rng(seed).standard_normal((N, d))
        return W / np.linalg.norm(W, axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class QuadraticTarget:
    """f(x) = β0 + xᵀβ1 + (F*/d)(xᵀGx − tr G)."""

    beta0: float
    beta1: np.ndarray
    fstar: float
    G: np.ndarray

    @classmethod
    def sample(cls, d: int, seed: Seed, fstar: float = 1.0, beta0: float = 0.0,
               beta1_var: Optional[float] = None) -> "QuadraticTarget":
        """β1 ~ N(0, (beta1_var)·I), default variance 1/d; G with i.i.d. N(0, 1) entries."""
        rng = _rng(seed)
        var = 1.0 / d if beta1_var is None else beta1_var
        beta1 = math.sqrt(var) * rng.standard_normal(d)
        G = rng.standard_normal((d, d))
        return cls(beta0=beta0, beta1=beta1, fstar=fstar, G=G)

    @property
    def d(self) -> int:
        return self.beta1.shape[0]

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.d:
            raise InputError(f"points have dimension {X.shape[1]}, expected {self.d}")
        quad = np.einsum("ij,jk,ik->i", X, self.G, X) - np.trace(self.G)
        return self.beta0 + X @ self.beta1 + (self.fstar / self.d) * quad


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Sphere points X (rows of norm √d) and responses y = f(X) + w."""

    X: np.ndarray
    y: np.ndarray

    @property
    def n(self) -> int:
        return self.X.shape[0]


@dataclass(frozen=True, eq=False)
class RFSolveResult:
    theta: np.ndarray
    sr: float
    ar: float
    objective: float
    grad_norm: float
    train_sr: float
    train_ar: float
    iterations: int = 0

    @property
    def theta_norm(self) -> float:
        return float(np.linalg.norm(self.theta))


@dataclass(frozen=True)
class RFRecord:
    """One (N, realization, λ) cell of a random-features sweep."""

    width: int
    realization: int
    lam: float
    sr: float = math.nan
    ar: float = math.nan
    theta_norm: float = math.nan
    status: str = "ok"


@dataclass
class RFSweepResult:
    records: List[RFRecord]
    diagnostics: List[str] = field(default_factory=list)

    @property
    def failures(self) -> List[RFRecord]:
        return [rec for rec in self.records if rec.status != "ok"]


def sample_sphere(d: int, n: int, seed: Seed) -> np.ndarray:
    """n i.i.d. uniform points on the sphere of radius √d (normalized Gaussians)."""
    if d < 2:
        raise InputError(f"d must be >= 2, got {d}")
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    Z = _rng(seed).standard_normal((n, d))
    return math.sqrt(d) * Z / np.linalg.norm(Z, axis=1, keepdims=True)


def make_batch(setting: RFSetting, target: QuadraticTarget, n: int, seed: Seed) -> SampleBatch:
    """Sphere sample with responses; points and noise from two counter-derived streams of ``seed``."""
    X = sample_sphere(setting.d, n, child_seed(seed, 0))
    w = setting.noise_sigma * _rng(child_seed(seed, 1)).standard_normal(n)
    return SampleBatch(X=X, y=target.evaluate(X) + w)


def target_eval(target: QuadraticTarget, x) -> float:
    """f(x) for a single point."""
    return float(target.evaluate(np.asarray(x, dtype=float).reshape(1, -1))[0])


def _features(U: np.ndarray, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """ReLU features σ(XUᵀ) and activation pattern σ′(XUᵀ) with σ′(0) = 0."""
    pre = X @ U.T
    active = (pre > 0.0).astype(float)
    return pre * active, active


def _check_model(setting: RFSetting, model: RFModel):
    if model.U.shape[1] != setting.d:
        raise InputError(f"U has {model.U.shape[1]} columns, expected d={setting.d}")


def sr_empirical(setting: RFSetting, model: RFModel, target: QuadraticTarget, batch: SampleBatch) -> float:
    """Batch mean of (f(x) − θᵀσ(Ux))² plus σ_w²."""
    _check_model(setting, model)
    Z, _ = _features(model.U, batch.X)
    resid = target.evaluate(batch.X) - Z @ model.theta
    return float(np.mean(resid * resid)) + setting.noise_sigma ** 2


def _gradient_factor(U: np.ndarray, active: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Rows g_i = Uᵀ(σ′(Ux_i) ⊙ θ)."""
    return (active * theta) @ U


def ar_firstorder(setting: RFSetting, model: RFModel, target: QuadraticTarget, batch: SampleBatch) -> float:
    """SR + 2ε·√(mean over the batch of ((f − θᵀσ(Ux))² + σ_w²)·‖Uᵀdiag(σ′(Ux))θ‖²)."""
    _check_model(setting, model)
    Z, active = _features(model.U, batch.X)
    resid = target.evaluate(batch.X) - Z @ model.theta
    sr = float(np.mean(resid * resid)) + setting.noise_sigma ** 2
    g = _gradient_factor(model.U, active, model.theta)
    m = float(np.mean((resid * resid + setting.noise_sigma ** 2) * np.sum(g * g, axis=1)))
    return sr + 2.0 * setting.eps * math.sqrt(max(m, 0.0))


class RFObjective:
    """(1+λ)·SR(θ) + 2ε·√(m(θ) + s) on a fixed batch, with its gradient.

    With r = f − Zθ, g_i = Uᵀ(D_i ⊙ θ), q_i = ‖g_i‖² and w_i = r_i² + σ²:

        ∇SR = −(2/n) Zᵀr
        ∇m  = (1/n) [−2 Zᵀ(r ⊙ q) + 2 Σ_i w_i D_i ⊙ (U g_i)]
    """

    def __init__(self, setting: RFSetting, U: np.ndarray, target: QuadraticTarget, batch: SampleBatch,
                 lam: float, smoothing: float = Config.SQRT_SMOOTHING):
        self.setting = setting
        self.U = U
        self.lam = lam
        self.smoothing = smoothing
        self.noise2 = setting.noise_sigma ** 2
        self.Z, self.active = _features(U, batch.X)
        self.f = target.evaluate(batch.X)
        self.n = batch.n

    def parts(self, theta: np.ndarray) -> Tuple[float, float]:
        """(SR, m) at θ."""
        resid = self.f - self.Z @ theta
        g = _gradient_factor(self.U, self.active, theta)
        sr = float(np.mean(resid * resid)) + self.noise2
        m = float(np.mean((resid * resid + self.noise2) * np.sum(g * g, axis=1)))
        return sr, m

    def value(self, theta: np.ndarray) -> float:
        sr, m = self.parts(theta)
        return (1.0 + self.lam) * sr + 2.0 * self.setting.eps * math.sqrt(m + self.smoothing)

    def value_and_grad(self, theta: np.ndarray) -> Tuple[float, np.ndarray]:
        eps = self.setting.eps
        resid = self.f - self.Z @ theta
        grad_sr = -(2.0 / self.n) * (self.Z.T @ resid)
        sr = float(np.mean(resid * resid)) + self.noise2
        value = (1.0 + self.lam) * sr
        grad = (1.0 + self.lam) * grad_sr
        if eps > 0.0:
            g = _gradient_factor(self.U, self.active, theta)
            q = np.sum(g * g, axis=1)
            w = resid * resid + self.noise2
            m = float(np.mean(w * q))
            back = g @ self.U.T  # rows U g_i
            grad_m = (-2.0 * (self.Z.T @ (resid * q)) + 2.0 * np.sum((w[:, None] * self.active) * back, axis=0)) / self.n
            root = math.sqrt(m + self.smoothing)
            value += 2.0 * eps * root
            grad = grad + eps * grad_m / root
        return value, grad


def _lbfgs(fun, x0: np.ndarray, max_iter: int) -> optimize.OptimizeResult:
    return optimize.minimize(
        fun,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iter, "maxfun": 2 * max_iter, "gtol": 1e-12, "ftol": 1e-16, "maxcor": 30},
    )


def solve_pareto_rf(
    setting: RFSetting,
    model_weights_U: np.ndarray,
    target: QuadraticTarget,
    lam: float,
    seed: Seed = 0,
    train: Optional[SampleBatch] = None,
    evaluation: Optional[SampleBatch] = None,
    theta0: Optional[np.ndarray] = None,
    grad_tol: float = Config.RF_GRAD_TOL,
    max_iter: int = Config.RF_MAX_ITER,
) -> RFSolveResult:
    """θ minimizing (1+λ)·SR_emp + 2ε√m on the training batch; risks reported on the evaluation batch.

    Batches default to draws of size n_mc / n_eval from ``seed``. At ε = 0 the
    minimizer is the least-squares fit. Otherwise L-BFGS runs in coordinates
    whitened by the feature matrix, then polishes in θ-space.

    Raises:
        SolverError: gradient norm above grad_tol·(1 + objective) after the budget
    """
    if lam < 0 or not math.isfinite(lam):
        raise InputError(f"lambda must be finite and nonnegative, got {lam}")
    U = np.asarray(model_weights_U, dtype=float)
    if U.ndim != 2 or U.shape[1] != setting.d:
        raise InputError(f"U must have shape (N, {setting.d}), got {U.shape}")
    if train is None:
        train = make_batch(setting, target, setting.n_mc, child_seed(seed, 0))
    if evaluation is None:
        evaluation = make_batch(setting, target, setting.n_eval, child_seed(seed, 1))

    objective = RFObjective(setting, U, target, train, lam)
    iterations = 0

    if setting.eps == 0.0:
        theta, *_ = linalg.lstsq(objective.Z, objective.f)
        value, grad = objective.value_and_grad(theta)
    else:
        # whitening: θ = T φ with T = V S⁻¹ √n from the thin SVD of Z
        _, s, Vt = linalg.svd(objective.Z, full_matrices=False)
        keep = s > s[0] * 1e-10
        T = Vt[keep].T / s[keep] * math.sqrt(objective.n)

        def whitened(phi):
            val, g = objective.value_and_grad(T @ phi)
            return val, T.T @ g

        start = np.zeros(U.shape[0]) if theta0 is None else np.asarray(theta0, dtype=float)
        phi0 = linalg.lstsq(T, start)[0]
        res = _lbfgs(whitened, phi0, max_iter)
        iterations += res.nit
        theta = T @ res.x
        value, grad = objective.value_and_grad(theta)
        for _ in range(3):
            if np.linalg.norm(grad) <= grad_tol * (1.0 + value):
                break
            res = _lbfgs(objective.value_and_grad, theta, max_iter)
            iterations += res.nit
            if res.fun <= value:
                theta = res.x
                value, grad = objective.value_and_grad(theta)

    grad_norm = float(np.linalg.norm(grad))
    if grad_norm > grad_tol * (1.0 + value):
        raise SolverError(
            f"random-features solve did not reach gradient tolerance (|grad|={grad_norm:.3e}, objective={value:.6g})",
            residual=grad_norm,
            lam=lam,
        )

    model = RFModel(U=U, theta=theta)
    return RFSolveResult(
        theta=theta,
        sr=sr_empirical(setting, model, target, evaluation),
        ar=ar_firstorder(setting, model, target, evaluation),
        objective=value,
        grad_norm=grad_norm,
        train_sr=sr_empirical(setting, model, target, train),
        train_ar=ar_firstorder(setting, model, target, train),
        iterations=iterations,
    )


def _solve_cell(setting: RFSetting, U: np.ndarray, target: QuadraticTarget, lams: List[float],
                train: SampleBatch, evaluation: SampleBatch, realization: int,
                grad_tol: float, max_iter: int) -> Tuple[List[RFRecord], List[str]]:
    """All λ for one (N, realization): warm-started solves, then weighted-sum selection."""
    width = U.shape[0]
    solved: Dict[int, RFSolveResult] = {}
    records: List[Optional[RFRecord]] = [None] * len(lams)
    theta0 = None
    for i, lam in enumerate(lams):
        try:
            result = solve_pareto_rf(setting, U, target, lam, train=train, evaluation=evaluation,
                                     theta0=theta0, grad_tol=grad_tol, max_iter=max_iter)
        except SolverError as e:
            log.error(f"N={width} realization={realization} lambda={lam:.6g}: {e}")
            records[i] = RFRecord(width, realization, lam, status=f"failed: {e}")
            continue
        solved[i] = result
        theta0 = result.theta

    diagnostics: List[str] = []
    if solved:
        ok = sorted(solved)
        scorer = RFObjective(setting, U, target, train, 0.0, smoothing=0.0)
        parts = [scorer.parts(solved[i].theta) for i in ok]
        pos = pareto.weighted_sum_selection(
            [lams[i] for i in ok],
            lambda lam, j: (1.0 + lam) * parts[j][0] + 2.0 * setting.eps * math.sqrt(max(parts[j][1], 0.0)),
        )
        for idx, j in zip(ok, pos):
            chosen = solved[ok[j]]
            records[idx] = RFRecord(width, realization, lams[idx], chosen.sr, chosen.ar, chosen.theta_norm)

        norms = [records[i].theta_norm for i in ok]
        if norms[0] > 0 and max(norms) > Config.THETA_GROWTH_FACTOR * norms[0]:
            msg = (f"N={width} realization={realization}: ||theta|| grows from {norms[0]:.4g} "
                   f"to {max(norms):.4g} across the lambda grid")
            log.warning(msg)
            diagnostics.append(msg)
    return [rec for rec in records if rec is not None], diagnostics


def pareto_sweep_rf(
    setting: RFSetting,
    target: QuadraticTarget,
    lambdas: Sequence[float],
    widths: Sequence[int],
    realizations: int,
    seed: int,
    jobs: int = 1,
    grad_tol: float = Config.RF_GRAD_TOL,
    max_iter: int = Config.RF_MAX_ITER,
    progress: bool = False,
) -> RFSweepResult:
    """Records per (N, realization, λ), sorted by (N, realization, λ).

    Realization k draws its train/evaluation batches and a first layer of the
    largest width from counter-derived streams of ``seed``; narrower models use
    the leading rows of that layer, so batches and weights are shared across
    widths and λ. Cell failures are recorded and the sweep continues.
    """
    if realizations < 1:
        raise InputError(f"realizations must be >= 1, got {realizations}")
    lams = pareto.validate_lambdas(lambdas)
    widths = sorted({int(n) for n in widths})
    if not widths or widths[0] < 1:
        raise InputError("widths must be a nonempty list of positive integers")

    shared = {}
    for k in range(realizations):
        train = make_batch(setting, target, setting.n_mc, [seed, k, 0])
        evaluation = make_batch(setting, target, setting.n_eval, [seed, k, 1])
        U_full = RFModel.sample_weights(widths[-1], setting.d, [seed, k, 2])
        shared[k] = (train, evaluation, U_full)

    cells = [(n, k) for n in widths for k in range(realizations)]
    results: Dict[Tuple[int, int], Tuple[List[RFRecord], List[str]]] = {}
    bar = tqdm(total=len(cells), desc="Random-features cells", unit="cell", disable=not progress)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        future_to_cell = {
            executor.submit(
                _solve_cell, setting, shared[k][2][:n], target, lams, shared[k][0], shared[k][1], k,
                grad_tol, max_iter,
            ): (n, k)
            for n, k in cells
        }
        for future in as_completed(future_to_cell):
            cell = future_to_cell[future]
            results[cell] = future.result()
            bar.update(1)
            bar.set_postfix(width=cell[0], realization=cell[1])
    bar.close()

    records: List[RFRecord] = []
    diagnostics: List[str] = []
    for cell in cells:
        cell_records, cell_diag = results[cell]
        records.extend(cell_records)
        diagnostics.extend(cell_diag)
    records.sort(key=lambda rec: (rec.width, rec.realization, rec.lam))
    _log_realization_spread(records)
    return RFSweepResult(records=records, diagnostics=diagnostics)


def _log_realization_spread(records: List[RFRecord]):
    """Mean/std of SR and AR over realizations per (N, λ)."""
    groups: Dict[Tuple[int, float], List[RFRecord]] = {}
    for rec in records:
        if rec.status == "ok":
            groups.setdefault((rec.width, rec.lam), []).append(rec)
    for (width, lam), recs in sorted(groups.items()):
        sr = np.array([rec.sr for rec in recs])
        ar = np.array([rec.ar for rec in recs])
        log.info(
            f"N={width} lambda={lam:.4g}: sr {sr.mean():.5f} ± {sr.std():.5f}, "
            f"ar {ar.mean():.5f} ± {ar.std():.5f} over {len(recs)} realizations"
        )
