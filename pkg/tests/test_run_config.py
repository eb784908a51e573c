"""Tests for run configuration parsing and validation."""

import json
import math
import os

import numpy as np
import pytest

from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.errors import ConfigError
from wasserstein_tradeoffs.processing.run_config import GaussianSpec, load_config, parse_config

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")

LINREG_MOMENTS = """\
setting: linreg
output: out/linreg.csv
lambda_grid: [0.1, 1.0, 10.0]
eps_list: [0.0, 0.5]
linreg:
  d: 2
  sigma: [[1.0, 0.2], [0.2, 1.0]]
  v: [0.5, -0.1]
  sigma_y2: 1.0
"""

LINREG_GENERATIVE = """\
setting: linreg
seed: 42
lambda_grid: {min: 0.01, max: 100, count: 5}
lambda_inf: true
eps_list: [0.3]
linreg:
  d: 4
  rho: 0.5
  noise_sigma: 1.0
  theta0: {kind: gaussian}
"""

BINCLASS = """\
setting: binclass
seed: 3
lambda_grid: [0.5, 2.0]
eps_list: [0.1]
binclass:
  d: 3
  mu: [1.0, 0.0, 0.5]
  r: inf
  restarts: 2
"""

RF = """\
setting: rf
seed: 9
realizations: 2
lambda_grid: [1.0]
eps_list: [0.1]
tolerances:
  rf_grad_tol: 1e-6
rf:
  d: 5
  widths: [20, 10]
  n_mc: 500
  n_eval: 400
"""


class TestValidConfigs:

    def test_linreg_moments(self, write_config):
        cfg = load_config(write_config(LINREG_MOMENTS))
        assert cfg.setting == "linreg"
        assert cfg.lambdas == [0.1, 1.0, 10.0]
        assert cfg.eps_list == [0.0, 0.5]
        assert cfg.seed is None and not cfg.stochastic
        setting = cfg.linreg.build(0.5, cfg.seed)
        np.testing.assert_allclose(setting.Sigma, [[1.0, 0.2], [0.2, 1.0]])
        assert setting.sigma_y2 == 1.0
        assert cfg.tolerances == Config.solver_tolerances()

    def test_linreg_generative_draws_from_seed(self, write_config):
        cfg = load_config(write_config(LINREG_GENERATIVE))
        assert cfg.stochastic
        assert isinstance(cfg.linreg.theta0, GaussianSpec)
        np.testing.assert_allclose(cfg.lambdas[:5], np.geomspace(0.01, 100, 5))
        assert cfg.lambdas[-1] == Config.LAMBDA_INF and len(cfg.lambdas) == 6

        theta0 = cfg.linreg.theta0_vector(cfg.seed)
        np.testing.assert_array_equal(theta0, cfg.linreg.theta0_vector(42))
        assert not np.array_equal(theta0, cfg.linreg.theta0_vector(43))
        assert cfg.linreg.covariance()[0, 2] == pytest.approx(0.25)

    def test_binclass(self, write_config):
        cfg = load_config(write_config(BINCLASS))
        assert math.isinf(cfg.binclass.r)
        assert cfg.binclass.restarts == 2
        assert cfg.binclass.to_dict()["r"] == "inf"

    def test_rf_with_exponent_tolerance(self, write_config):
        cfg = load_config(write_config(RF))
        assert cfg.rf.widths == [10, 20]
        assert cfg.tolerances["rf_grad_tol"] == 1e-6
        assert cfg.realizations == 2
        assert cfg.rf.build(0.1).N == 20

    def test_overrides(self, write_config):
        cfg = load_config(write_config(BINCLASS), seed=11, output="elsewhere.csv")
        assert cfg.seed == 11
        assert cfg.output == "elsewhere.csv"

    def test_json_input(self, write_config):
        data = {"setting": "linreg", "lambda_grid": [1.0], "eps_list": [0.2],
                "linreg": {"d": 1, "v": [0.3], "sigma_y2": 1.0}}
        cfg = load_config(write_config(json.dumps(data), name="run.json"))
        assert cfg.linreg.v == [0.3]

    def test_sidecar_reloads_to_same_sweep(self, write_config):
        cfg = load_config(write_config(LINREG_GENERATIVE))
        sidecar = {"config": cfg.to_dict(), "metadata": {"seed": 42}}
        reloaded = load_config(write_config(json.dumps(sidecar, indent=2), name="run.csv.meta.json"))
        assert reloaded.config_hash() == cfg.config_hash()
        assert reloaded.lambdas == cfg.lambdas

    @pytest.mark.parametrize("name", ["linreg", "binclass", "rf"])
    def test_shipped_configs_load(self, name):
        cfg = load_config(os.path.join(CONFIG_DIR, f"{name}.yaml"))
        assert cfg.setting == name
        assert cfg.seed is not None
        assert cfg.output == f"out/{name}.csv"
        assert all(b > a for a, b in zip(cfg.lambdas, cfg.lambdas[1:]))

    def test_hash_tracks_content(self, write_config):
        a = load_config(write_config(BINCLASS))
        b = load_config(write_config(BINCLASS), seed=4)
        assert a.config_hash() == load_config(write_config(BINCLASS)).config_hash()
        assert a.config_hash() != b.config_hash()


class TestInvalidConfigs:

    def _error(self, write_config, text) -> ConfigError:
        path = write_config(text)
        with pytest.raises(ConfigError) as info:
            load_config(path)
        assert info.value.path == path
        return info.value

    def test_unknown_key_reports_its_line(self, write_config):
        err = self._error(write_config, LINREG_MOMENTS.replace("  sigma_y2: 1.0", "  sigma_y2: 1.0\n  sigma_x: 2"))
        assert err.line == 10
        assert "sigma_x" in err.problem
        assert str(err).startswith(f"{err.path}:10: ")

    def test_stochastic_needs_seed(self, write_config):
        err = self._error(write_config, BINCLASS.replace("seed: 3\n", ""))
        assert "seed" in err.problem

    def test_lambda_grid_must_increase(self, write_config):
        err = self._error(write_config, LINREG_MOMENTS.replace("[0.1, 1.0, 10.0]", "[1.0, 1.0, 2.0]"))
        assert err.line == 3
        assert "increasing" in err.problem

    def test_negative_values(self, write_config):
        assert self._error(write_config, LINREG_MOMENTS.replace("[0.0, 0.5]", "[0.0, -0.5]")).line == 4
        assert "nonnegative" in self._error(write_config, LINREG_MOMENTS.replace("[0.1, 1.0", "[-0.1, 1.0")).problem

    def test_wrong_vector_length(self, write_config):
        err = self._error(write_config, LINREG_MOMENTS.replace("[0.5, -0.1]", "[0.5]"))
        assert err.line == 8

    def test_indefinite_covariance(self, write_config):
        err = self._error(write_config, LINREG_MOMENTS.replace("[[1.0, 0.2], [0.2, 1.0]]", "[[1.0, 2.0], [2.0, 1.0]]"))
        assert err.line == 5

    def test_mixed_linreg_forms(self, write_config):
        err = self._error(write_config, LINREG_MOMENTS + "  noise_sigma: 1.0\n")
        assert "mix" in err.problem

    def test_section_mismatch(self, write_config):
        err = self._error(write_config, LINREG_MOMENTS + "rf: {d: 2, widths: [1]}\n")
        assert err.line == 10
        assert "does not match" in err.problem

    def test_unknown_setting(self, write_config):
        assert "unknown setting" in self._error(write_config, LINREG_MOMENTS.replace("setting: linreg", "setting: svm")).problem

    def test_bad_numbers(self, write_config):
        assert "number" in self._error(write_config, LINREG_MOMENTS.replace("sigma_y2: 1.0", "sigma_y2: lots")).problem
        assert "finite" in self._error(write_config, LINREG_MOMENTS.replace("sigma_y2: 1.0", "sigma_y2: .inf")).problem
        assert "integer" in self._error(write_config, LINREG_MOMENTS.replace("d: 2", "d: 2.5")).problem

    def test_rf_widths(self, write_config):
        assert "distinct" in self._error(write_config, RF.replace("[20, 10]", "[10, 10]")).problem
        assert self._error(write_config, RF.replace("d: 5", "d: 1")).line == 9

    def test_tolerance_bounds(self, write_config):
        assert "damping" in self._error(write_config, RF.replace("rf_grad_tol: 1e-6", "damping: 1.5")).problem
        assert "unknown key" in self._error(write_config, RF.replace("rf_grad_tol", "grad_tol")).problem

    def test_syntax_error_has_line(self, write_config):
        err = self._error(write_config, "setting: linreg\nlambda_grid: [1.0\neps_list: [0.1]\n")
        assert err.problem.startswith("syntax error")
        assert err.line is not None

    def test_empty_and_missing_files(self, write_config, temp_dir):
        assert "empty" in self._error(write_config, "").problem
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(f"{temp_dir}/missing.yaml")

    def test_parse_config_without_lines(self):
        with pytest.raises(ConfigError) as info:
            parse_config(["not", "a", "mapping"], source="inline")
        assert info.value.line is None
        assert str(info.value).startswith("inline: ")
