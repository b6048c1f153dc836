"""Core data models for verification runs."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any

SCHEMA_VERSION = 1


class CheckStatus(str, Enum):
    """Status of a single named check."""

    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"
    SKIPPED = "skipped"


@dataclass
class CheckResult:
    """Outcome of one named identity, table or numerical check."""

    check_id: str
    anchor: str
    status: CheckStatus
    first_failing_coefficient: str | None = None
    detail: str = ""
    duration_seconds: float = 0.0
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASSED

    @classmethod
    def from_bool(
        cls,
        check_id: str,
        anchor: str,
        ok: bool,
        detail: str = "",
        first_failing: Any = None,
        **data: Any,
    ) -> CheckResult:
        return cls(
            check_id=check_id,
            anchor=anchor,
            status=CheckStatus.PASSED if ok else CheckStatus.FAILED,
            first_failing_coefficient=None if ok or first_failing is None else str(first_failing),
            detail=detail,
            data=data,
        )

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        out = {
            "check_id": self.check_id,
            "anchor": self.anchor,
            "status": self.status.value,
            "first_failing_coefficient": self.first_failing_coefficient,
            "detail": self.detail,
            "data": self.data,
        }
        if timing:
            out["duration_seconds"] = round(self.duration_seconds, 3)
        return out


@dataclass
class RunSummary:
    """Summary of one command invocation."""

    run_id: str
    command: str
    scope: str
    started_at: datetime = field(default_factory=datetime.now)
    completed_at: datetime | None = None
    total: int = 0
    passed: int = 0
    failed: int = 0
    errors: int = 0
    skipped: int = 0
    results: list[CheckResult] = field(default_factory=list)
    provenance: dict[str, Any] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)

    def add(self, result: CheckResult) -> None:
        self.results.append(result)
        self.total += 1
        if result.status == CheckStatus.PASSED:
            self.passed += 1
        elif result.status == CheckStatus.FAILED:
            self.failed += 1
        elif result.status == CheckStatus.ERROR:
            self.errors += 1
        else:
            self.skipped += 1

    @property
    def success(self) -> bool:
        return self.failed == 0 and self.errors == 0

    @property
    def first_failure(self) -> CheckResult | None:
        return next((r for r in self.results if r.status != CheckStatus.PASSED
                     and r.status != CheckStatus.SKIPPED), None)

    def exit_code(self) -> int:
        """0 when everything passed, 2 when a check errored, 1 on a failed check."""
        if self.errors:
            return 2
        return 1 if self.failed else 0

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "scope": self.scope,
            "total": self.total,
            "passed": self.passed,
            "failed": self.failed,
            "errors": self.errors,
            "skipped": self.skipped,
            "success": self.success,
            "results": [r.to_dict(timing) for r in self.results],
            "provenance": self.provenance,
            "config": self.config,
        }
        if timing:
            out["run_id"] = self.run_id
            out["started_at"] = self.started_at.isoformat()
            out["completed_at"] = self.completed_at.isoformat() if self.completed_at else None
        return out
