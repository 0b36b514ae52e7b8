"""Command-line interface and run reports."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from shiplanding.cli import main
from shiplanding.errors import IoFailure
from shiplanding.report import CSV_COLUMNS, emit_report, episode_summary, load_summary
from shiplanding.scenarios import build_scenario
from shiplanding.sim import run_episode


@pytest.fixture(scope="module")
def natops_log():
    return run_episode(build_scenario("natops", seed=0))


class TestReportModule:
    def test_emit_report_writes_expected_files(self, natops_log, tmp_path):
        out = tmp_path / "run"
        emit_report([natops_log], out)
        assert (out / "episode_000.csv").exists()
        assert (out / "summary.json").exists()
        for name in ("trajectory.svg", "timeseries.svg", "scatter.svg"):
            assert (out / name).exists()
        header = (out / "episode_000.csv").read_text().splitlines()[0]
        assert header.split(",") == list(CSV_COLUMNS)

    def test_summary_round_trip(self, natops_log, tmp_path):
        out = tmp_path / "run"
        emit_report([natops_log], out)
        summary = load_summary(out)
        assert summary["episodes"][0]["terminal"] == "landed"

    def test_empty_logs_rejected(self, tmp_path):
        with pytest.raises(IoFailure):
            emit_report([], tmp_path / "empty")

    def test_episode_summary_fields(self, natops_log):
        info = episode_summary(natops_log)
        assert info["terminal"] == "landed"
        assert abs(info["touchdown_offset"][0]) <= 0.35


class TestCli:
    def test_demo_runs_and_reports_transitions(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, ["demo", "--scenario", "natops",
                                      "--out", str(tmp_path / "demo")])
        assert result.exit_code == 0, result.output
        assert "landed" in result.output
        assert "mode" in result.output
        assert (tmp_path / "demo" / "summary.json").exists()

    def test_write_config_then_simulate_then_report(self, tmp_path):
        runner = CliRunner()
        cfg_path = tmp_path / "cfg.json"
        out_dir = tmp_path / "sim"

        written = runner.invoke(main, ["write-config", "--out", str(cfg_path),
                                       "--scenario", "natops"])
        assert written.exit_code == 0, written.output
        assert json.loads(cfg_path.read_text())["sim"]["dt"] == 0.01

        sim = runner.invoke(main, ["simulate", "--config", str(cfg_path),
                                   "--seed", "3", "--out", str(out_dir)])
        assert sim.exit_code == 0, sim.output
        assert "terminal: landed" in sim.output

        rep = runner.invoke(main, ["report", "--in", str(out_dir)])
        assert rep.exit_code == 0, rep.output
        assert "landed" in rep.output

    def test_montecarlo_command(self, tmp_path):
        runner = CliRunner()
        cfg_path = tmp_path / "cfg.json"
        runner.invoke(main, ["write-config", "--out", str(cfg_path)])
        result = runner.invoke(main, ["montecarlo", "--config", str(cfg_path),
                                      "-n", "2", "--out", str(tmp_path / "mc")])
        assert result.exit_code == 0, result.output
        assert "landed 2/2" in result.output
        summary = load_summary(tmp_path / "mc")
        assert summary["monte_carlo"]["n"] == 2

    def test_simulate_seed_changes_outcome_details(self, tmp_path):
        runner = CliRunner()
        cfg_path = tmp_path / "cfg.json"
        runner.invoke(main, ["write-config", "--out", str(cfg_path)])
        a = runner.invoke(main, ["simulate", "--config", str(cfg_path), "--seed", "1",
                                 "--out", str(tmp_path / "a")])
        b = runner.invoke(main, ["simulate", "--config", str(cfg_path), "--seed", "2",
                                 "--out", str(tmp_path / "b")])
        assert a.exit_code == 0 and b.exit_code == 0
        ca = np.loadtxt(tmp_path / "a" / "episode_000.csv", delimiter=",", skiprows=1)
        cb = np.loadtxt(tmp_path / "b" / "episode_000.csv", delimiter=",", skiprows=1)
        assert ca.shape != cb.shape or not np.allclose(ca, cb, equal_nan=True)

    def test_unknown_scenario_is_an_error(self):
        runner = CliRunner()
        result = runner.invoke(main, ["demo", "--scenario", "warp"])
        assert result.exit_code != 0
