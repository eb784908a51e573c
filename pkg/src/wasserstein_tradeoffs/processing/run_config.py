"""Run configuration files: parsing, validation and generative shorthands.

A run configuration is YAML (JSON works too). Every error is reported as
``<path>:<line>: <problem>`` using the line of the offending key, and
unknown keys are rejected at every level. A metadata sidecar written by a
previous run is accepted as a configuration: its ``config`` member is used.
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.core.binclass import GaussMixSetting
from wasserstein_tradeoffs.core.linreg import GenerativeLinReg, LinRegSetting, ar1_covariance
from wasserstein_tradeoffs.core.random_features import QuadraticTarget, RFSetting
from wasserstein_tradeoffs.errors import ConfigError, InputError

log = logging.getLogger(__name__)

SETTINGS = ("linreg", "binclass", "rf")

TOP_KEYS = {
    "setting", "seed", "realizations", "output", "lambda_grid", "lambda_inf",
    "eps_list", "tolerances", *SETTINGS,
}
LINREG_KEYS = {"d", "sigma", "v", "sigma_y2", "rho", "noise_sigma", "theta0"}
BINCLASS_KEYS = {"d", "rho", "sigma", "mu", "r", "class_prior", "restarts"}
RF_KEYS = {"d", "widths", "noise_sigma", "n_mc", "n_eval", "fstar", "beta0", "beta1_scale"}
GAUSSIAN_KEYS = {"kind", "scale"}
GRID_KEYS = {"min", "max", "count"}

# Second seed word for generative draws; realization indices stay far below it
GENERATIVE_STREAM = 0x9E3779B9
THETA0_STREAM = 0
MU_STREAM = 1
TARGET_STREAM = 2

KeyPath = Tuple[Union[str, int], ...]


class _Context:
    """Source file and key-path → line map used to anchor errors."""

    def __init__(self, source: str, lines: Dict[KeyPath, int], prefix: KeyPath = ()):
        self.source = source
        self.lines = lines
        self.prefix = prefix

    def line(self, path: KeyPath) -> Optional[int]:
        path = self.prefix + tuple(path)
        while path:
            if path in self.lines:
                return self.lines[path]
            path = path[:-1]
        return self.lines.get((), None)

    def error(self, path: KeyPath, problem: str) -> ConfigError:
        return ConfigError(problem, path=self.source, line=self.line(path))


def _line_index(node: yaml.Node, prefix: KeyPath = ()) -> Dict[KeyPath, int]:
    lines: Dict[KeyPath, int] = {prefix: node.start_mark.line + 1}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = prefix + (key_node.value,)
            lines.update(_line_index(value_node, path))
            lines[path] = key_node.start_mark.line + 1
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            lines.update(_line_index(item, prefix + (i,)))
    return lines


# ============================================================================
# Field validation
# ============================================================================

def _check_keys(ctx: _Context, path: KeyPath, mapping: Any, allowed: set, what: str) -> Mapping[str, Any]:
    if not isinstance(mapping, dict):
        raise ctx.error(path, f"{what} must be a mapping")
    for key in mapping:
        if key not in allowed:
            raise ctx.error(path + (key,), f"unknown key {key!r} in {what}; allowed: {', '.join(sorted(allowed))}")
    return mapping


def _number(ctx: _Context, path: KeyPath, value: Any, minimum: Optional[float] = None,
            strict: bool = False, allow_inf: bool = False) -> float:
    # PyYAML resolves exponent literals without a dot (1e-12) to strings
    if isinstance(value, str):
        text = value.strip().lower()
        try:
            value = math.inf if text in ("inf", ".inf", "+inf", "infinity") else float(text)
        except ValueError:
            raise ctx.error(path, f"{path[-1]} must be a number, got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ctx.error(path, f"{path[-1]} must be a number, got {value!r}")
    value = float(value)
    if math.isnan(value) or (math.isinf(value) and not allow_inf):
        raise ctx.error(path, f"{path[-1]} must be finite, got {value}")
    if minimum is not None and (value <= minimum if strict else value < minimum):
        op = ">" if strict else ">="
        raise ctx.error(path, f"{path[-1]} must be {op} {minimum:g}, got {value:g}")
    return value


def _integer(ctx: _Context, path: KeyPath, value: Any, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ctx.error(path, f"{path[-1]} must be an integer, got {value!r}")
    if value < minimum:
        raise ctx.error(path, f"{path[-1]} must be >= {minimum}, got {value}")
    return value


def _vector(ctx: _Context, path: KeyPath, value: Any, length: Optional[int] = None) -> List[float]:
    if not isinstance(value, list):
        raise ctx.error(path, f"{path[-1]} must be a list of numbers")
    out = [_number(ctx, path + (i,), v) for i, v in enumerate(value)]
    if length is not None and len(out) != length:
        raise ctx.error(path, f"{path[-1]} has length {len(out)}, expected d={length}")
    return out


def _matrix(ctx: _Context, path: KeyPath, value: Any, d: int) -> List[List[float]]:
    if not isinstance(value, list) or len(value) != d:
        raise ctx.error(path, f"{path[-1]} must be a {d}x{d} list of rows")
    return [_vector(ctx, path + (i,), row, d) for i, row in enumerate(value)]


@dataclass(frozen=True)
class GaussianSpec:
    """Seeded N(0, scale²·I) vector; scale defaults to 1/√d."""

    scale: Optional[float] = None

    def draw(self, d: int, seed: Sequence[int]) -> np.ndarray:
        scale = 1.0 / math.sqrt(d) if self.scale is None else self.scale
        return scale * np.random.default_rng(np.random.SeedSequence(list(seed))).standard_normal(d)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": "gaussian"}
        if self.scale is not None:
            out["scale"] = self.scale
        return out


def _vector_or_gaussian(ctx: _Context, path: KeyPath, value: Any, d: int) -> Union[List[float], GaussianSpec]:
    if isinstance(value, dict):
        _check_keys(ctx, path, value, GAUSSIAN_KEYS, path[-1])
        if value.get("kind", "gaussian") != "gaussian":
            raise ctx.error(path + ("kind",), f"unsupported kind {value.get('kind')!r}; only 'gaussian'")
        scale = value.get("scale")
        if scale is not None:
            scale = _number(ctx, path + ("scale",), scale, minimum=0.0)
        return GaussianSpec(scale)
    return _vector(ctx, path, value, d)


# ============================================================================
# Setting sections
# ============================================================================

@dataclass(frozen=True)
class LinRegSection:
    """Regression setting, either as moments (Σ, v, σ_y²) or generative (ρ, σ, θ0)."""

    d: int
    sigma: Optional[List[List[float]]] = None
    v: Optional[List[float]] = None
    sigma_y2: Optional[float] = None
    rho: float = 0.0
    noise_sigma: float = 1.0
    theta0: Union[List[float], GaussianSpec, None] = None

    @property
    def generative(self) -> bool:
        return self.v is None

    @property
    def stochastic(self) -> bool:
        return self.generative and isinstance(self.theta0, GaussianSpec)

    def theta0_vector(self, seed: Optional[int]) -> np.ndarray:
        if isinstance(self.theta0, GaussianSpec):
            return self.theta0.draw(self.d, [int(seed), GENERATIVE_STREAM, THETA0_STREAM])
        return np.asarray(self.theta0, dtype=float)

    def covariance(self) -> np.ndarray:
        if self.sigma is not None:
            return np.asarray(self.sigma, dtype=float)
        return ar1_covariance(self.d, self.rho)

    def build(self, eps: float, seed: Optional[int]) -> LinRegSetting:
        if self.generative:
            model = GenerativeLinReg(theta0=self.theta0_vector(seed), Sigma=self.covariance(),
                                     noise_sigma=self.noise_sigma)
            return model.to_setting(eps)
        return LinRegSetting(Sigma=self.covariance(), v=np.asarray(self.v), sigma_y2=self.sigma_y2, eps=eps)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"d": self.d}
        if self.sigma is not None:
            out["sigma"] = self.sigma
        else:
            out["rho"] = self.rho
        if self.generative:
            out["noise_sigma"] = self.noise_sigma
            out["theta0"] = self.theta0.to_dict() if isinstance(self.theta0, GaussianSpec) else self.theta0
        else:
            out["v"] = self.v
            out["sigma_y2"] = self.sigma_y2
        return out


def _parse_linreg(ctx: _Context, raw: Any) -> LinRegSection:
    path: KeyPath = ("linreg",)
    raw = _check_keys(ctx, path, raw, LINREG_KEYS, "linreg")
    if "d" not in raw:
        raise ctx.error(path, "linreg.d is required")
    d = _integer(ctx, path + ("d",), raw["d"], minimum=1)
    sigma = _matrix(ctx, path + ("sigma",), raw["sigma"], d) if "sigma" in raw else None
    rho = _number(ctx, path + ("rho",), raw.get("rho", 0.0))
    if sigma is not None and "rho" in raw:
        raise ctx.error(path + ("rho",), "give either sigma or rho, not both")
    if not -1.0 < rho < 1.0:
        raise ctx.error(path + ("rho",), f"rho must lie in (-1, 1), got {rho:g}")

    moments = {"v", "sigma_y2"} & set(raw)
    generative = {"noise_sigma", "theta0"} & set(raw)
    if moments and generative:
        raise ctx.error(path, "mix of moment keys (v, sigma_y2) and generative keys (noise_sigma, theta0)")
    if moments:
        if moments != {"v", "sigma_y2"}:
            raise ctx.error(path, "moment form needs both v and sigma_y2")
        return LinRegSection(
            d=d, sigma=sigma, rho=rho,
            v=_vector(ctx, path + ("v",), raw["v"], d),
            sigma_y2=_number(ctx, path + ("sigma_y2",), raw["sigma_y2"], minimum=0.0),
        )
    if "theta0" not in raw:
        raise ctx.error(path, "linreg needs either v and sigma_y2, or theta0 (list or {kind: gaussian})")
    return LinRegSection(
        d=d, sigma=sigma, rho=rho,
        noise_sigma=_number(ctx, path + ("noise_sigma",), raw.get("noise_sigma", 1.0), minimum=0.0),
        theta0=_vector_or_gaussian(ctx, path + ("theta0",), raw["theta0"], d),
    )


@dataclass(frozen=True)
class BinClassSection:
    d: int
    mu: Union[List[float], GaussianSpec]
    r: float = 2.0
    rho: float = 0.0
    sigma: Optional[List[List[float]]] = None
    class_prior: float = 0.5
    restarts: int = Config.N_RANDOM_STARTS

    def mu_vector(self, seed: Optional[int]) -> np.ndarray:
        if isinstance(self.mu, GaussianSpec):
            return self.mu.draw(self.d, [int(seed), GENERATIVE_STREAM, MU_STREAM])
        return np.asarray(self.mu, dtype=float)

    def covariance(self) -> np.ndarray:
        if self.sigma is not None:
            return np.asarray(self.sigma, dtype=float)
        return ar1_covariance(self.d, self.rho)

    def build(self, eps: float, seed: Optional[int]) -> GaussMixSetting:
        return GaussMixSetting(mu=self.mu_vector(seed), Sigma=self.covariance(), eps=eps,
                               r=self.r, class_prior=self.class_prior)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "d": self.d,
            "mu": self.mu.to_dict() if isinstance(self.mu, GaussianSpec) else self.mu,
            "r": "inf" if math.isinf(self.r) else self.r,
            "class_prior": self.class_prior,
            "restarts": self.restarts,
        }
        if self.sigma is not None:
            out["sigma"] = self.sigma
        else:
            out["rho"] = self.rho
        return out


def _parse_binclass(ctx: _Context, raw: Any) -> BinClassSection:
    path: KeyPath = ("binclass",)
    raw = _check_keys(ctx, path, raw, BINCLASS_KEYS, "binclass")
    for key in ("d", "mu"):
        if key not in raw:
            raise ctx.error(path, f"binclass.{key} is required")
    d = _integer(ctx, path + ("d",), raw["d"], minimum=1)
    if "sigma" in raw and "rho" in raw:
        raise ctx.error(path + ("rho",), "give either sigma or rho, not both")
    rho = _number(ctx, path + ("rho",), raw.get("rho", 0.0))
    if not -1.0 < rho < 1.0:
        raise ctx.error(path + ("rho",), f"rho must lie in (-1, 1), got {rho:g}")
    class_prior = _number(ctx, path + ("class_prior",), raw.get("class_prior", 0.5))
    if not 0.0 < class_prior < 1.0:
        raise ctx.error(path + ("class_prior",), f"class_prior must lie in (0, 1), got {class_prior:g}")
    return BinClassSection(
        d=d,
        mu=_vector_or_gaussian(ctx, path + ("mu",), raw["mu"], d),
        r=_number(ctx, path + ("r",), raw.get("r", 2.0), minimum=1.0, allow_inf=True),
        rho=rho,
        sigma=_matrix(ctx, path + ("sigma",), raw["sigma"], d) if "sigma" in raw else None,
        class_prior=class_prior,
        restarts=_integer(ctx, path + ("restarts",), raw.get("restarts", Config.N_RANDOM_STARTS)),
    )


@dataclass(frozen=True)
class RFSection:
    d: int
    widths: List[int]
    noise_sigma: float = 0.0
    n_mc: int = Config.RF_N_MC
    n_eval: int = Config.RF_N_EVAL
    fstar: float = 1.0
    beta0: float = 0.0
    beta1_scale: float = 1.0

    def build(self, eps: float) -> RFSetting:
        return RFSetting(d=self.d, N=max(self.widths), noise_sigma=self.noise_sigma, eps=eps,
                         n_mc=self.n_mc, n_eval=self.n_eval)

    def target(self, seed: int) -> QuadraticTarget:
        """β1 ~ N(0, (beta1_scale/d)·I) and G drawn from the run seed."""
        return QuadraticTarget.sample(
            self.d, [int(seed), GENERATIVE_STREAM, TARGET_STREAM],
            fstar=self.fstar, beta0=self.beta0, beta1_var=self.beta1_scale / self.d,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d, "widths": list(self.widths), "noise_sigma": self.noise_sigma,
            "n_mc": self.n_mc, "n_eval": self.n_eval, "fstar": self.fstar,
            "beta0": self.beta0, "beta1_scale": self.beta1_scale,
        }


def _parse_rf(ctx: _Context, raw: Any) -> RFSection:
    path: KeyPath = ("rf",)
    raw = _check_keys(ctx, path, raw, RF_KEYS, "rf")
    for key in ("d", "widths"):
        if key not in raw:
            raise ctx.error(path, f"rf.{key} is required")
    d = _integer(ctx, path + ("d",), raw["d"], minimum=2)
    widths_raw = raw["widths"]
    if not isinstance(widths_raw, list) or not widths_raw:
        raise ctx.error(path + ("widths",), "widths must be a nonempty list of positive integers")
    widths = [_integer(ctx, path + ("widths", i), w, minimum=1) for i, w in enumerate(widths_raw)]
    if len(set(widths)) != len(widths):
        raise ctx.error(path + ("widths",), "widths must be distinct")
    return RFSection(
        d=d,
        widths=sorted(widths),
        noise_sigma=_number(ctx, path + ("noise_sigma",), raw.get("noise_sigma", 0.0), minimum=0.0),
        n_mc=_integer(ctx, path + ("n_mc",), raw.get("n_mc", Config.RF_N_MC), minimum=1),
        n_eval=_integer(ctx, path + ("n_eval",), raw.get("n_eval", Config.RF_N_EVAL), minimum=1),
        fstar=_number(ctx, path + ("fstar",), raw.get("fstar", 1.0)),
        beta0=_number(ctx, path + ("beta0",), raw.get("beta0", 0.0)),
        beta1_scale=_number(ctx, path + ("beta1_scale",), raw.get("beta1_scale", 1.0), minimum=0.0),
    )


# ============================================================================
# Top level
# ============================================================================

@dataclass(frozen=True)
class SweepConfig:
    """A validated run configuration.

    ``lambdas`` is the resolved, strictly increasing grid; when ``lambda_inf``
    was requested it ends with the finite proxy ``Config.LAMBDA_INF``.
    """

    setting: str
    lambdas: List[float]
    eps_list: List[float]
    output: Optional[str] = None
    seed: Optional[int] = None
    realizations: int = 1
    lambda_inf: bool = False
    tolerances: Dict[str, float] = field(default_factory=Config.solver_tolerances)
    linreg: Optional[LinRegSection] = None
    binclass: Optional[BinClassSection] = None
    rf: Optional[RFSection] = None
    source: str = "<config>"

    @property
    def section(self) -> Union[LinRegSection, BinClassSection, RFSection]:
        return getattr(self, self.setting)

    @property
    def stochastic(self) -> bool:
        if self.setting == "linreg":
            return self.linreg.stochastic
        return True

    def to_dict(self) -> Dict[str, Any]:
        """Resolved configuration; loading it back yields the same sweep."""
        out: Dict[str, Any] = {
            "setting": self.setting,
            "lambda_grid": list(self.lambdas),
            "lambda_inf": False,
            "eps_list": list(self.eps_list),
            "realizations": self.realizations,
            "tolerances": dict(self.tolerances),
            self.setting: self.section.to_dict(),
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.output is not None:
            out["output"] = self.output
        return out

    def config_hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _parse_lambda_grid(ctx: _Context, raw: Any) -> List[float]:
    path: KeyPath = ("lambda_grid",)
    if isinstance(raw, dict):
        _check_keys(ctx, path, raw, GRID_KEYS, "lambda_grid")
        for key in ("min", "max", "count"):
            if key not in raw:
                raise ctx.error(path, f"geometric lambda_grid needs {key}")
        lo = _number(ctx, path + ("min",), raw["min"], minimum=0.0, strict=True)
        hi = _number(ctx, path + ("max",), raw["max"], minimum=0.0, strict=True)
        count = _integer(ctx, path + ("count",), raw["count"], minimum=1)
        if count == 1:
            return [lo]
        if hi <= lo:
            raise ctx.error(path + ("max",), f"max ({hi:g}) must exceed min ({lo:g})")
        return [float(x) for x in np.geomspace(lo, hi, count)]
    lams = _vector(ctx, path, raw)
    for i, lam in enumerate(lams):
        if lam < 0:
            raise ctx.error(path + (i,), f"lambda must be nonnegative, got {lam:g}")
    return lams


def _parse_tolerances(ctx: _Context, raw: Any) -> Dict[str, float]:
    path: KeyPath = ("tolerances",)
    defaults = Config.solver_tolerances()
    _check_keys(ctx, path, raw, set(defaults), "tolerances")
    merged = dict(defaults)
    for key, value in raw.items():
        if isinstance(defaults[key], int):
            merged[key] = _integer(ctx, path + (key,), value, minimum=1)
        else:
            merged[key] = _number(ctx, path + (key,), value, minimum=0.0, strict=True)
    if not 0.0 < merged["damping"] <= 1.0:
        raise ctx.error(path + ("damping",), f"damping must lie in (0, 1], got {merged['damping']:g}")
    return merged


def parse_config(data: Any, source: str = "<config>", lines: Optional[Dict[KeyPath, int]] = None,
                 seed: Optional[int] = None, output: Optional[str] = None) -> SweepConfig:
    """Validate a decoded configuration mapping.

    Args:
        data: Decoded YAML/JSON document
        source: File name used in error messages
        lines: Key path → line number map for error anchoring
        seed: Override for the ``seed`` key
        output: Override for the ``output`` key

    Raises:
        ConfigError: anchored to the offending line when known
    """
    ctx = _Context(source, lines or {})
    if isinstance(data, dict) and "config" in data and set(data) <= {"config", "metadata"}:
        log.info(f"{source}: reading the config member of a metadata sidecar")
        data = data["config"]
        ctx.prefix = ("config",)

    data = _check_keys(ctx, (), data, TOP_KEYS, "run configuration")
    if "setting" not in data:
        raise ctx.error((), f"setting is required (one of {', '.join(SETTINGS)})")
    setting = data["setting"]
    if setting not in SETTINGS:
        raise ctx.error(("setting",), f"unknown setting {setting!r}; choose from {', '.join(SETTINGS)}")
    for other in SETTINGS:
        if other != setting and other in data:
            raise ctx.error((other,), f"section {other!r} does not match setting {setting!r}")
    if setting not in data:
        raise ctx.error(("setting",), f"missing {setting!r} section")

    if "lambda_grid" not in data:
        raise ctx.error((), "lambda_grid is required")
    lambdas = _parse_lambda_grid(ctx, data["lambda_grid"])
    if not lambdas:
        raise ctx.error(("lambda_grid",), "lambda grid is empty")
    if any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise ctx.error(("lambda_grid",), "lambda grid must be strictly increasing")

    lambda_inf = data.get("lambda_inf", False)
    if not isinstance(lambda_inf, bool):
        raise ctx.error(("lambda_inf",), f"lambda_inf must be true or false, got {lambda_inf!r}")
    if lambda_inf:
        if lambdas[-1] < Config.LAMBDA_INF:
            lambdas = lambdas + [Config.LAMBDA_INF]
        else:
            log.info(f"lambda grid already reaches {lambdas[-1]:g}; lambda_inf adds nothing")

    if "eps_list" not in data:
        raise ctx.error((), "eps_list is required")
    eps_list = _vector(ctx, ("eps_list",), data["eps_list"])
    if not eps_list:
        raise ctx.error(("eps_list",), "eps_list is empty")
    for i, eps in enumerate(eps_list):
        if eps < 0:
            raise ctx.error(("eps_list", i), f"eps must be nonnegative, got {eps:g}")

    cfg_seed = seed
    if cfg_seed is None and "seed" in data:
        cfg_seed = _integer(ctx, ("seed",), data["seed"], minimum=0)
    if cfg_seed is not None and not 0 <= cfg_seed < 2**64:
        raise ctx.error(("seed",), f"seed must be an unsigned 64-bit integer, got {cfg_seed}")

    out_path = output if output is not None else data.get("output")
    if out_path is not None and not isinstance(out_path, str):
        raise ctx.error(("output",), f"output must be a path string, got {out_path!r}")

    parsers = {"linreg": _parse_linreg, "binclass": _parse_binclass, "rf": _parse_rf}
    sections = {setting: parsers[setting](ctx, data[setting])}

    cfg = SweepConfig(
        setting=setting,
        lambdas=lambdas,
        eps_list=eps_list,
        output=out_path,
        seed=cfg_seed,
        realizations=_integer(ctx, ("realizations",), data.get("realizations", 1), minimum=1),
        lambda_inf=lambda_inf,
        tolerances=_parse_tolerances(ctx, data.get("tolerances", {})),
        source=source,
        **sections,
    )
    if cfg.stochastic and cfg.seed is None:
        raise ctx.error((), f"{setting} runs draw random numbers; give a seed (config key or --seed)")
    try:
        if setting == "rf":
            cfg.rf.build(0.0)
        else:
            cfg.section.build(0.0, cfg.seed)
    except InputError as e:
        raise ctx.error((setting,), str(e)) from e
    return cfg


def load_config(path: Union[str, Path], seed: Optional[int] = None,
                output: Optional[str] = None) -> SweepConfig:
    """Read and validate a run configuration file.

    Raises:
        ConfigError: unreadable file, YAML syntax error, or invalid content
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read configuration: {e.strerror or e}", path=str(path)) from e

    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError(f"syntax error: {problem}", path=str(path),
                          line=mark.line + 1 if mark is not None else None) from e
    if node is None:
        raise ConfigError("configuration is empty", path=str(path), line=1)

    try:
        return parse_config(data, str(path), _line_index(node), seed=seed, output=output)
    except InputError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e), path=str(path)) from e
