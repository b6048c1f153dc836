"""Tests for reporters."""

import json
import tempfile
from pathlib import Path

from xns11.core.models import CheckResult, RunSummary
from xns11.reporters.console import ConsoleReporter
from xns11.reporters.json_reporter import JSONReporter


def _make_summary() -> RunSummary:
    summary = RunSummary(
        run_id="test-run-123",
        command="verify",
        scope="units",
        provenance={"order": 80, "constants": "ab" * 32},
    )
    summary.add(CheckResult.from_bool("units.relation", "cubic relation", True, order="80"))
    summary.add(
        CheckResult.from_bool("units.product", "UV relation", False, first_failing=-3)
    )
    return summary


def test_console_reporter_name():
    reporter = ConsoleReporter()
    assert reporter.name == "console"


def test_console_reporter_runs(capsys):
    reporter = ConsoleReporter()
    reporter.report(_make_summary())
    out = capsys.readouterr().out
    assert "test-run-123" in out
    assert "Statistics" in out


def test_json_reporter_name():
    reporter = JSONReporter()
    assert reporter.name == "json"


def test_json_reporter_writes_into_directory():
    reporter = JSONReporter()
    summary = _make_summary()

    with tempfile.TemporaryDirectory() as tmpdir:
        reporter.report(summary, output=tmpdir)
        results_file = Path(tmpdir) / "test-run-123" / "results.json"
        assert results_file.exists()

        with open(results_file) as f:
            data = json.load(f)

        assert data["passed"] == 1
        assert data["failed"] == 1
        assert data["results"][1]["first_failing_coefficient"] == "-3"
        assert data["provenance"]["order"] == 80


def test_json_reporter_writes_named_file(tmp_path):
    target = tmp_path / "nested" / "report.json"
    JSONReporter().report(_make_summary(), output=str(target))
    text = target.read_text()
    assert json.loads(text)["scope"] == "units"
    assert text.index('"command"') < text.index('"scope"')


def test_json_report_is_reproducible(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    JSONReporter().report(_make_summary(), output=str(first))
    JSONReporter().report(_make_summary(), output=str(second))
    assert first.read_text() == second.read_text()
