"""Tests for the check context and the runner."""

import threading
import time

from xns11.core.check import Check, CheckContext
from xns11.core.config import RunConfig
from xns11.core.errors import ConvergenceError, IdentityError
from xns11.core.models import CheckResult, CheckStatus
from xns11.core.runner import Runner

# ── Fixtures ──────────────────────────────────────────────────────────


class FakeCheck(Check):
    def __init__(self, name: str, outcome: str = "pass", delay: float = 0.0):
        self._name = name
        self.outcome = outcome
        self.delay = delay

    @property
    def name(self) -> str:
        return self._name

    @property
    def scope(self) -> str:
        return "units"

    def run(self, context: CheckContext) -> list[CheckResult]:
        time.sleep(self.delay)
        if self.outcome == "identity":
            raise IdentityError(f"{self._name}.relation", "relation fails", "12")
        if self.outcome == "numeric":
            raise ConvergenceError("step collapse")
        return [
            CheckResult.from_bool(f"{self._name}.a", "first", True),
            CheckResult.from_bool(f"{self._name}.b", "second", self.outcome == "pass"),
        ]


def _runner(**kwargs) -> Runner:
    return Runner(CheckContext(RunConfig()), **kwargs)


# ── Tests ─────────────────────────────────────────────────────────────


def test_serial_run_counts():
    summary = _runner().run(
        [FakeCheck("one"), FakeCheck("two", "fail")], command="verify", scope="units"
    )
    assert summary.total == 4
    assert summary.passed == 3
    assert summary.failed == 1
    assert summary.exit_code() == 1
    assert summary.first_failure.check_id == "two.b"


def test_identity_error_becomes_failed_result():
    summary = _runner().run([FakeCheck("one", "identity")], command="verify", scope="units")
    [result] = summary.results
    assert result.status == CheckStatus.FAILED
    assert result.check_id == "one.relation"
    assert result.first_failing_coefficient == "12"
    assert summary.exit_code() == 1


def test_numeric_error_becomes_error_result():
    summary = _runner().run([FakeCheck("one", "numeric")], command="periods", scope="xns11")
    [result] = summary.results
    assert result.status == CheckStatus.ERROR
    assert "ConvergenceError" in result.detail
    assert summary.exit_code() == 2


def test_parallel_run_keeps_registration_order():
    checks = [FakeCheck("slow", delay=0.2), FakeCheck("fast")]
    summary = _runner().run(checks, command="verify", scope="units", max_workers=2)
    assert [r.check_id for r in summary.results] == ["slow.a", "slow.b", "fast.a", "fast.b"]


def test_durations_recorded():
    summary = _runner().run([FakeCheck("one", delay=0.05)], command="verify", scope="units")
    assert all(r.duration_seconds >= 0.05 for r in summary.results)


def test_reporter_called_with_summary(mocker):
    reporter = mocker.Mock()
    summary = _runner(reporter=reporter).run(
        [FakeCheck("one")], command="verify", scope="units", run_id="fixed"
    )
    reporter.report.assert_called_once_with(summary)
    assert summary.run_id == "fixed"
    assert summary.config["series"]["order"] == 400


def test_artifact_built_once_across_threads():
    context = CheckContext(RunConfig())
    calls = []
    lock = threading.Lock()

    def build():
        with lock:
            calls.append(1)
        time.sleep(0.05)
        return object()

    results = []
    threads = [
        threading.Thread(target=lambda: results.append(context.artifact("key", build)))
        for _ in range(4)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(calls) == 1
    assert len({id(r) for r in results}) == 1
    assert context.built() == ["key"]


def test_provenance_empty_before_derivation():
    assert CheckContext(RunConfig()).provenance() == {}
