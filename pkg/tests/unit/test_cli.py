"""Tests for the command-line interface."""

import json

import pytest
from click.testing import CliRunner

from xns11.cli.main import cli
from xns11.core.config import CACHE_DIR_ENV
from xns11.core.models import CheckResult, CheckStatus, RunSummary

# ── Fixtures ──────────────────────────────────────────────────────────


def _summary(*statuses: CheckStatus) -> RunSummary:
    summary = RunSummary(run_id="cli-run", command="verify", scope="units")
    for i, status in enumerate(statuses):
        failing = None if status == CheckStatus.PASSED else "4"
        summary.add(CheckResult(check_id=f"check.{i}", anchor="anchor", status=status,
                                first_failing_coefficient=failing))
    return summary


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def fake_runner(mocker):
    cls = mocker.patch("xns11.core.runner.Runner")
    cls.return_value.run.return_value = _summary(CheckStatus.PASSED)
    return cls


# ── Tests ─────────────────────────────────────────────────────────────


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "xns11" in result.output


def test_list_checks(runner):
    result = runner.invoke(cli, ["list", "checks"])
    assert result.exit_code == 0
    assert "constants" in result.output
    assert "isom.quotients" in result.output


def test_list_reporters(runner):
    result = runner.invoke(cli, ["list", "reporters"])
    assert result.exit_code == 0
    assert "console" in result.output
    assert "json" in result.output


def test_unknown_scope_is_usage_error(runner):
    result = runner.invoke(cli, ["verify", "everything"])
    assert result.exit_code == 2


def test_invalid_order_exits_2(runner, fake_runner):
    result = runner.invoke(cli, ["verify", "units", "--order", "10"])
    assert result.exit_code == 2
    assert "order" in result.output
    fake_runner.assert_not_called()


def test_verify_passes(runner, fake_runner):
    result = runner.invoke(cli, ["verify", "units", "--order", "60"])
    assert result.exit_code == 0
    context = fake_runner.call_args[0][0]
    assert context.config.series.order == 60
    checks = fake_runner.return_value.run.call_args[0][0]
    assert [c.name for c in checks] == ["constants", "units"]


def test_verify_defaults_to_all(runner, fake_runner):
    result = runner.invoke(cli, ["verify"])
    assert result.exit_code == 0
    assert fake_runner.return_value.run.call_args.kwargs["scope"] == "all"


def test_failed_check_exits_1(runner, fake_runner):
    fake_runner.return_value.run.return_value = _summary(CheckStatus.PASSED, CheckStatus.FAILED)
    result = runner.invoke(cli, ["verify", "trace"])
    assert result.exit_code == 1
    assert "check.1" in result.output


def test_errored_check_exits_2(runner, fake_runner):
    fake_runner.return_value.run.return_value = _summary(CheckStatus.FAILED, CheckStatus.ERROR)
    result = runner.invoke(cli, ["periods", "xns11"])
    assert result.exit_code == 2


def test_json_report_written(runner, fake_runner, tmp_path):
    target = tmp_path / "report.json"
    result = runner.invoke(cli, ["isom", "--json", str(target)])
    assert result.exit_code == 0
    assert json.loads(target.read_text())["total"] == 1


def test_environment_then_flag_cache_dir(runner, fake_runner, tmp_path):
    env = {CACHE_DIR_ENV: str(tmp_path / "env")}
    runner.invoke(cli, ["periods", "x0121-new"], env=env)
    assert fake_runner.call_args[0][0].config.cache_dir == str(tmp_path / "env")

    runner.invoke(cli, ["periods", "x0121-new", "--cache-dir", str(tmp_path / "flag")], env=env)
    assert fake_runner.call_args[0][0].config.cache_dir == str(tmp_path / "flag")


def test_audit_flag_reaches_context(runner, fake_runner):
    runner.invoke(cli, ["periods", "genus2", "--audit", "--workers", "3"])
    context = fake_runner.call_args[0][0]
    assert context.audit is True
    assert context.config.max_workers == 3


def test_config_file(runner, fake_runner, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("series:\n  order: 70\nchecks: [units]\n")
    runner.invoke(cli, ["verify", "units", "--config", str(path)])
    assert fake_runner.call_args[0][0].config.series.order == 70
    checks = fake_runner.return_value.run.call_args[0][0]
    assert [c.name for c in checks] == ["units"]
