"""Tests for the SQLite run ledger and the provenance tracker."""

import math

from wasserstein_tradeoffs import __version__
from wasserstein_tradeoffs.utils.logging import ProvenanceTracker


def _rows():
    return [
        {"setting": "rf", "eps": 0.1, "lambda": 1.0, "realization": 0, "width": 10,
         "sr": 0.4, "ar": 0.5, "status": "ok"},
        {"setting": "rf", "eps": 0.1, "lambda": 2.0, "realization": 0, "width": 10,
         "status": "failed: did not converge"},
        {"setting": "rf", "eps": 0.1, "lambda": 3.0, "realization": 0, "width": 10,
         "sr": math.nan, "ar": math.inf},
    ]


class TestSweepRuns:

    def test_create_and_finish(self, ledger):
        ledger.create_sweep_run("run-1", "linreg", "cfg.yaml", "abc", 2**63 + 5, "0.1.0")
        run = ledger.get_sweep_run("run-1")
        assert run["status"] == "running"
        assert run["seed"] == str(2**63 + 5)
        assert run["finished_at"] is None

        ledger.finish_sweep_run("run-1", "completed", output_path="out.csv", n_cells=6)
        run = ledger.get_sweep_run("run-1")
        assert run["status"] == "completed"
        assert run["output_path"] == "out.csv" and run["n_cells"] == 6
        assert run["duration_seconds"] >= 0.0

    def test_missing_run(self, ledger):
        assert ledger.get_sweep_run("nope") is None
        ledger.finish_sweep_run("nope", "failed")

    def test_listing_and_filter(self, ledger):
        for k, status in enumerate(["completed", "failed", "completed"]):
            ledger.create_sweep_run(f"run-{k}", "rf", "cfg.yaml", None, None, "0.1.0")
            ledger.finish_sweep_run(f"run-{k}", status)
        assert len(ledger.list_sweep_runs()) == 3
        assert len(ledger.list_sweep_runs(limit=2)) == 2
        assert [r["run_id"] for r in ledger.list_sweep_runs(status="failed")] == ["run-1"]


class TestCellsAndProvenance:

    def test_cell_results(self, ledger):
        ledger.create_sweep_run("run-1", "rf", "cfg.yaml", None, 1, "0.1.0")
        assert ledger.store_cell_results("run-1", _rows()) == 3
        cells = ledger.get_cell_results("run-1")
        assert [c["lambda"] for c in cells] == [1.0, 2.0, 3.0]
        assert cells[0]["status"] == "ok" and cells[0]["sr"] == 0.4
        assert cells[1]["status"] == "failed"
        assert cells[1]["error_message"] == "failed: did not converge"
        assert cells[2]["sr"] is None and cells[2]["ar"] is None

    def test_provenance_logs(self, ledger):
        ledger.create_sweep_run("run-1", "rf", "cfg.yaml", None, 1, "0.1.0")
        first = ledger.create_provenance_log("run-1", "run_start", {"seed": "1"})
        second = ledger.create_provenance_log("run-1", "run_end", {"status": "completed"})
        assert second > first
        logs = ledger.get_provenance_logs("run-1")
        assert [e["step_name"] for e in logs] == ["run_start", "run_end"]
        assert logs[0]["step_data"] == {"seed": "1"}

    def test_run_stats(self, ledger):
        ledger.create_sweep_run("a", "rf", "cfg.yaml", None, 1, "0.1.0")
        ledger.create_sweep_run("b", "rf", "cfg.yaml", None, 1, "0.1.0")
        ledger.finish_sweep_run("b", "failed")
        ledger.store_cell_results("b", _rows())
        stats = ledger.get_run_stats()
        assert stats["runs_running"] == 1 and stats["runs_failed"] == 1
        assert stats["runs_completed"] == 0
        assert stats["total_cells"] == 3 and stats["failed_cells"] == 1


class TestProvenanceTracker:

    def test_full_run(self, ledger, provenance_tracker):
        run_id = provenance_tracker.log_run_start("cfg.yaml", setting="binclass", config_hash="h", seed=7)
        provenance_tracker.log_step("sweep_done", {"rows": 3})
        assert provenance_tracker.log_cells(_rows()) == 3
        provenance_tracker.log_run_end("failed", output_path="out.csv", n_cells=3, n_failed=1)

        run = ledger.get_sweep_run(run_id)
        assert run["status"] == "failed" and run["n_failed"] == 1
        assert run["library_version"] == __version__
        steps = ledger.get_provenance_logs(run_id)
        assert [s["step_name"] for s in steps] == ["run_start", "sweep_done", "run_end"]
        assert steps[1]["step_data"]["data"] == {"rows": 3}
        assert provenance_tracker.steps == ["run_start", "sweep_done", "run_end"]

    def test_without_database(self):
        tracker = ProvenanceTracker()
        tracker.log_run_start("cfg.yaml")
        tracker.log_step("sweep_done", {"rows": 0})
        assert tracker.log_cells(_rows()) == 0
        tracker.log_run_end("completed")
        assert tracker.steps == ["run_start", "sweep_done", "run_end"]

    def test_distinct_run_ids(self):
        assert ProvenanceTracker().run_id != ProvenanceTracker().run_id
