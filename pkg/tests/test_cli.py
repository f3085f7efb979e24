"""Command-line interface over the fixture providers."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from urbanscore.service.cli import main
from urbanscore.service.config import config_from_dict

from conftest import FIXTURES_DIR

TARGETS = FIXTURES_DIR / "tineretului.targets.json"
ADDRESS = "Parcul Tineretului, București"


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


class TestEvaluateCommand:
    def test_prints_aggregate_and_subscores(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        result = _invoke(runner, [
            "evaluate", ADDRESS, "--radius", "1000", "--fixtures", str(FIXTURES_DIR),
        ])
        assert "aggregate: 84" in result.output
        for key in ("air", "traffic", "lifestyle", "education", "metro", "surface"):
            assert key in result.output

    def test_json_output(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        result = _invoke(runner, [
            "evaluate", ADDRESS, "--radius", "1000",
            "--fixtures", str(FIXTURES_DIR), "--json",
        ])
        body = json.loads(result.output)
        assert body["aggregate"] == 84

    def test_coordinate_target(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        result = _invoke(runner, [
            "evaluate", "44.409,26.103", "--radius", "1000",
            "--fixtures", str(FIXTURES_DIR),
        ])
        assert "aggregate: 84" in result.output

    def test_profile_file(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        profile = tmp_path / "profile.json"
        profile.write_text(json.dumps({
            "weights": {"air": 0.4, "traffic": 0.1, "lifestyle": 0.2,
                        "education": 0.1, "metro": 0.1, "surface": 0.1},
            "traffic_sensitive": False,
        }))
        result = _invoke(runner, [
            "evaluate", ADDRESS, "--radius", "1000",
            "--fixtures", str(FIXTURES_DIR), "--profile", str(profile), "--json",
        ])
        assert json.loads(result.output)["weights"]["air"] == pytest.approx(0.4)

    def test_unknown_address_fails_cleanly(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        result = runner.invoke(main, [
            "evaluate", "strada care nu exista, nicăieri",
            "--fixtures", str(FIXTURES_DIR),
        ])
        assert result.exit_code != 0
        assert "Error" in result.output


class TestBatchCommand:
    def test_batch_reports_latency_summary(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        requests_file = tmp_path / "batch.txt"
        requests_file.write_text(
            f"{ADDRESS}\n44.409,26.103\n# comment\nstrada care nu exista, nicăieri\n",
            encoding="utf-8",
        )
        result = _invoke(runner, [
            "batch", str(requests_file), "--radius", "1000",
            "--fixtures", str(FIXTURES_DIR),
        ])
        assert "median" in result.output and "p95" in result.output
        assert "FAIL" in result.output  # the unknown address line
        assert result.output.count(" 84 ") >= 1


class TestCalibrateCommand:
    def test_writes_frozen_config_hitting_targets(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        out = tmp_path / "frozen.json"
        result = _invoke(runner, [
            "calibrate", "--fixtures", str(FIXTURES_DIR),
            "--targets", str(TARGETS), "--out", str(out),
        ])
        assert out.exists()
        for line in result.output.splitlines():
            if "achieved" in line:
                parts = line.split()
                achieved, target = float(parts[2]), float(parts[4])
                tolerance = {"lifestyle": 5.0, "education": 5.0,
                             "surface": 3.0, "metro": 3.0}[parts[0].rstrip(":")]
                assert abs(achieved - target) <= tolerance

        frozen = config_from_dict(json.loads(out.read_text()))
        assert frozen.calibration.surface_k > 0

    def test_frozen_config_reusable_by_evaluate(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        out = tmp_path / "frozen.json"
        _invoke(runner, [
            "calibrate", "--fixtures", str(FIXTURES_DIR),
            "--targets", str(TARGETS), "--out", str(out),
        ])
        # storage path from the frozen config is relative; stay in tmp
        result = _invoke(runner, [
            "evaluate", ADDRESS, "--radius", "1000",
            "--config", str(out), "--fixtures", str(FIXTURES_DIR), "--json",
        ])
        body = json.loads(result.output)
        assert body["aggregate"] == 84
        assert body["sub_scores"]["lifestyle"] == pytest.approx(91.0, abs=5.0)


class TestStatsCommand:
    def test_runs_on_fresh_store(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        result = _invoke(runner, ["stats"])
        assert "top districts" in result.output
