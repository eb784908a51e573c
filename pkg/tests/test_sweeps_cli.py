"""End-to-end tests: sweeps, CSV/sidecar output and the command-line tools."""

import json
import math
import os

import pytest

from cli import EXIT_CONFIG, EXIT_OK, EXIT_SOLVER
from cli import history as history_cli
from cli import main as main_cli
from cli import run as run_cli
from cli import verify as verify_cli
from wasserstein_tradeoffs.config import Config
from wasserstein_tradeoffs.core.gauss_special import std_normal_cdf
from wasserstein_tradeoffs.processing.run_config import load_config
from wasserstein_tradeoffs.processing.sweeps import run_sweep
from wasserstein_tradeoffs.storage.sqlite_db import SQLiteDatabase
from wasserstein_tradeoffs.utils.output import format_value, read_csv, sidecar_path, sort_rows, write_csv

LINREG = """\
setting: linreg
output: {out}
lambda_grid: [0.1, 1.0, 10.0]
eps_list: [0.0, 0.5]
linreg:
  d: 3
  rho: 0.5
  noise_sigma: 1.0
  theta0: [0.5, -0.2, 0.1]
"""

BINCLASS = """\
setting: binclass
seed: 5
output: {out}
lambda_grid: [0.5, 2.0]
eps_list: [0.2]
binclass:
  d: 3
  mu: [1.0, 0.3, -0.2]
  restarts: 1
"""

BINCLASS_ISOTROPIC = """\
setting: binclass
seed: 2
output: {out}
lambda_grid: [0.1, 1.0, 10.0]
eps_list: [0.2, 0.5]
binclass:
  d: 3
  mu: [0.5, 0.5, -0.7]
  r: 2
  restarts: 1
"""

RF_STARVED = """\
setting: rf
seed: 1
output: {out}
lambda_grid: [1.0]
eps_list: [0.1]
tolerances:
  rf_max_iter: 1
  rf_grad_tol: 1e-300
rf:
  d: 3
  widths: [4]
  n_mc: 200
  n_eval: 200
"""


@pytest.fixture
def db_path(temp_dir):
    return os.path.join(temp_dir, "ledger.db")


def _read_bytes(path) -> bytes:
    with open(path, "rb") as f:
        return f.read()


class TestRunSweep:

    def test_linreg_rows(self, write_config, temp_dir):
        cfg = load_config(write_config(LINREG.format(out=f"{temp_dir}/a.csv")))
        outcome = run_sweep(cfg)
        assert not outcome.failed
        assert [(r["eps"], r["lambda"]) for r in outcome.rows] == [
            (0.0, 0.1), (0.0, 1.0), (0.0, 10.0), (0.5, 0.1), (0.5, 1.0), (0.5, 10.0)]
        assert all(r["status"] == "ok" for r in outcome.rows)
        eps0 = [r for r in outcome.rows if r["eps"] == 0.0]
        assert max(r["sr"] for r in eps0) - min(r["sr"] for r in eps0) <= 1e-10
        assert all(r["sr"] == r["ar"] for r in eps0)
        curve = [r for r in outcome.rows if r["eps"] == 0.5]
        assert all(b["sr"] <= a["sr"] + 1e-12 for a, b in zip(curve, curve[1:]))

    def test_binclass_rows_carry_margin_stats(self, write_config, temp_dir):
        cfg = load_config(write_config(BINCLASS.format(out=f"{temp_dir}/b.csv")))
        outcome = run_sweep(cfg)
        assert len(outcome.rows) == 2
        for row in outcome.rows:
            assert row["a"] > 0 and row["b"] > 0
            assert row["sr"] <= row["ar"] <= 1.0

    def test_isotropic_binclass_rows_coincide(self, write_config, temp_dir):
        cfg = load_config(write_config(BINCLASS_ISOTROPIC.format(out=f"{temp_dir}/iso.csv")))
        outcome = run_sweep(cfg)
        assert not outcome.failed
        sr_expected = std_normal_cdf(-math.sqrt(0.5 ** 2 + 0.5 ** 2 + 0.7 ** 2))
        for eps in (0.2, 0.5):
            rows = [r for r in outcome.rows if r["eps"] == eps]
            assert len(rows) == 3
            for key in ("sr", "ar"):
                values = [r[key] for r in rows]
                assert max(values) - min(values) <= 1e-6
            assert all(r["sr"] == pytest.approx(sr_expected, abs=1e-8) for r in rows)

    def test_jobs_do_not_change_rows(self, write_config, temp_dir):
        cfg = load_config(write_config(BINCLASS.format(out=f"{temp_dir}/b.csv")))
        assert run_sweep(cfg, jobs=1).rows == run_sweep(cfg, jobs=2).rows


class TestOutput:

    def test_format_value(self):
        assert format_value(None) == ""
        assert format_value(math.nan) == ""
        assert format_value(True) == "true"
        assert format_value(3) == "3"
        assert format_value(0.1) == "0.10000000000000001"
        assert format_value(math.inf) == "inf"
        assert format_value("failed: x") == "failed: x"

    def test_rows_are_sorted_and_checked(self, temp_dir):
        rows = [{"setting": "rf", "eps": 0.1, "lambda": 1.0, "realization": 1, "width": 5},
                {"setting": "rf", "eps": 0.1, "lambda": 1.0, "realization": 0, "width": 10},
                {"setting": "rf", "eps": 0.0, "lambda": 2.0, "realization": 0, "width": 5}]
        assert [(r["eps"], r["realization"]) for r in sort_rows(rows)] == [(0.0, 0), (0.1, 0), (0.1, 1)]
        path = write_csv(os.path.join(temp_dir, "nested", "rows.csv"), rows)
        back = read_csv(path)
        assert list(back[0]) == list(Config.CSV_COLUMNS)
        assert back[0]["sr"] == ""
        with pytest.raises(ValueError):
            write_csv(os.path.join(temp_dir, "bad.csv"), [{"setting": "rf", "eps": 0.0, "lambda": 1.0, "extra": 1}])

    def test_sidecar_path(self):
        assert str(sidecar_path("out/curve.csv")) == os.path.join("out", "curve.csv.meta.json")


class TestRunCommand:

    def test_linreg_run(self, write_config, temp_dir, db_path):
        out = os.path.join(temp_dir, "curves", "linreg.csv")
        config = write_config(LINREG.format(out=out))
        assert run_cli.main([config, "--db", db_path, "-q"]) == EXIT_OK

        rows = read_csv(out)
        assert len(rows) == 6
        assert {row["status"] for row in rows} == {"ok"}
        with open(sidecar_path(out), encoding="utf-8") as f:
            sidecar = json.load(f)
        assert sidecar["config"] == load_config(config).to_dict()
        assert sidecar["metadata"]["n_rows"] == 6
        assert sidecar["metadata"]["lambda_inf"]["proxy"] == Config.LAMBDA_INF

        runs = SQLiteDatabase(db_path).list_sweep_runs()
        assert len(runs) == 1
        assert runs[0]["status"] == "completed" and runs[0]["n_cells"] == 6
        assert runs[0]["run_id"] == sidecar["metadata"]["run_id"]

    def test_rerun_is_byte_identical(self, write_config, temp_dir):
        first = os.path.join(temp_dir, "first.csv")
        config = write_config(LINREG.format(out=first))
        assert run_cli.main([config, "--no-ledger", "-q"]) == EXIT_OK
        second = os.path.join(temp_dir, "second.csv")
        assert run_cli.main([config, "--no-ledger", "-q", "-o", second, "-j", "2"]) == EXIT_OK
        assert _read_bytes(first) == _read_bytes(second)

    def test_sidecar_reruns_the_sweep(self, write_config, temp_dir):
        first = os.path.join(temp_dir, "first.csv")
        assert run_cli.main([write_config(BINCLASS.format(out=first)), "--no-ledger", "-q"]) == EXIT_OK
        again = os.path.join(temp_dir, "again.csv")
        assert run_cli.main([str(sidecar_path(first)), "--no-ledger", "-q", "-o", again]) == EXIT_OK
        assert _read_bytes(first) == _read_bytes(again)

    def test_config_errors_exit_2(self, write_config, temp_dir, capsys):
        bad = write_config(LINREG.format(out="x.csv").replace("rho: 0.5", "rho: 0.5\n  rhoo: 1"))
        assert run_cli.main([bad, "--no-ledger"]) == EXIT_CONFIG
        assert f"{bad}:8:" in capsys.readouterr().err

        no_output = write_config(LINREG.replace("output: {out}\n", ""), name="no_output.yaml")
        assert run_cli.main([no_output, "--no-ledger"]) == EXIT_CONFIG
        assert "no output path" in capsys.readouterr().err

        good = write_config(LINREG.format(out=os.path.join(temp_dir, "ok.csv")), name="good.yaml")
        assert run_cli.main([good, "--no-ledger", "--seed", "-1"]) == EXIT_CONFIG
        assert run_cli.main([good, "--no-ledger", "-j", "0"]) == EXIT_CONFIG
        assert run_cli.main([os.path.join(temp_dir, "missing.yaml"), "--no-ledger"]) == EXIT_CONFIG

    def test_config_errors_are_recorded(self, write_config, temp_dir, db_path, capsys):
        bad = write_config(LINREG.format(out="x.csv").replace("rho: 0.5", "rho: 0.5\n  rhoo: 1"))
        assert run_cli.main([bad, "--db", db_path, "-q"]) == EXIT_CONFIG
        capsys.readouterr()

        db = SQLiteDatabase(db_path)
        run = db.list_sweep_runs()[0]
        assert run["status"] == "config_error"
        assert run["setting"] is None
        assert run["error_message"].startswith(f"{bad}:8:")
        assert [s["step_name"] for s in db.get_provenance_logs(run["run_id"])] == ["run_start", "run_end"]
        assert db.get_run_stats()["runs_config_error"] == 1

        assert history_cli.main(["--db", db_path, "--status", "config_error"]) == EXIT_OK
        assert run["run_id"] in capsys.readouterr().out

    def test_solver_failure_keeps_partial_results(self, write_config, temp_dir, db_path, capsys):
        out = os.path.join(temp_dir, "rf.csv")
        assert run_cli.main([write_config(RF_STARVED.format(out=out)), "--db", db_path, "-q"]) == EXIT_SOLVER
        assert "partial results" in capsys.readouterr().err

        rows = read_csv(out)
        assert len(rows) == 1
        assert rows[0]["status"].startswith("failed:")
        assert rows[0]["sr"] == ""
        with open(sidecar_path(out), encoding="utf-8") as f:
            assert json.load(f)["metadata"]["n_failed"] == 1

        db = SQLiteDatabase(db_path)
        run = db.list_sweep_runs()[0]
        assert run["status"] == "failed" and run["n_failed"] == 1
        assert db.get_cell_results(run["run_id"])[0]["status"] == "failed"


class TestOtherCommands:

    def test_verify_gradients(self, capsys):
        assert verify_cli.main(["gradients", "-q"]) == EXIT_OK
        assert "all properties hold" in capsys.readouterr().out

    def test_dispatcher(self, write_config, temp_dir, db_path, capsys):
        out = os.path.join(temp_dir, "via_main.csv")
        assert main_cli.main(["run", write_config(LINREG.format(out=out)), "--db", db_path, "-q"]) == EXIT_OK
        assert os.path.exists(out)
        capsys.readouterr()
        assert main_cli.main(["history", "--db", db_path]) == EXIT_OK
        assert "completed" in capsys.readouterr().out
        with pytest.raises(SystemExit):
            main_cli.main(["plot"])

    def test_history(self, write_config, temp_dir, db_path, capsys):
        assert history_cli.main(["--db", db_path]) == EXIT_CONFIG

        out = os.path.join(temp_dir, "rf.csv")
        run_cli.main([write_config(RF_STARVED.format(out=out)), "--db", db_path, "-q"])
        run_id = SQLiteDatabase(db_path).list_sweep_runs()[0]["run_id"]
        capsys.readouterr()

        assert history_cli.main(["--db", db_path, "--status", "failed"]) == EXIT_OK
        assert run_id in capsys.readouterr().out
        assert history_cli.main(["--db", db_path, "--status", "completed"]) == EXIT_OK
        assert "no runs recorded" in capsys.readouterr().out
        assert history_cli.main(["--db", db_path, "--run-id", run_id]) == EXIT_OK
        detail = capsys.readouterr().out
        assert "failed cell" in detail and "step run_end" in detail
        assert history_cli.main(["--db", db_path, "--run-id", "nope"]) == EXIT_CONFIG
