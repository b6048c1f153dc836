"""Verification runner: runs the checks of a scope and aggregates a summary."""

from __future__ import annotations

import logging
import time
import uuid
from concurrent.futures import ThreadPoolExecutor, as_completed
from datetime import datetime

from rich.console import Console
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
)

from xns11.core.check import Check, CheckContext
from xns11.core.errors import IdentityError
from xns11.core.models import CheckResult, CheckStatus, RunSummary
from xns11.core.reporter import Reporter

logger = logging.getLogger(__name__)


class Runner:
    """Runs checks against one shared context, serially or in a thread pool."""

    def __init__(self, context: CheckContext, reporter: Reporter | None = None):
        self.context = context
        self.config = context.config
        self.reporter = reporter
        self._console = Console(stderr=True)

    def run(
        self,
        checks: list[Check],
        command: str,
        scope: str,
        run_id: str | None = None,
        max_workers: int | None = None,
    ) -> RunSummary:
        run_id = run_id or uuid.uuid4().hex[:12]
        max_workers = max_workers or self.config.max_workers

        self._console.print(f"\n[bold]Starting run [cyan]{run_id}[/cyan][/bold]")
        self._console.print(
            f"  Command: [green]{command} {scope}[/green]  "
            f"Checks: [green]{len(checks)}[/green]  "
            f"Workers: [green]{max_workers}[/green]\n"
        )

        summary = RunSummary(
            run_id=run_id,
            command=command,
            scope=scope,
            config=self.config.to_dict(),
        )

        if max_workers <= 1:
            groups = self._run_serial(checks)
        else:
            groups = self._run_parallel(checks, max_workers)

        # registration order, whatever the completion order was
        for check in checks:
            for result in groups[check.name]:
                summary.add(result)

        summary.provenance = self.context.provenance()
        summary.completed_at = datetime.now()

        if self.reporter is not None:
            self.reporter.report(summary)

        return summary

    def _make_progress(self) -> Progress:
        return Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TextColumn("| passed:{task.fields[passed]} failed:{task.fields[failed]}"),
            TimeElapsedColumn(),
            console=self._console,
        )

    def _run_serial(self, checks: list[Check]) -> dict[str, list[CheckResult]]:
        groups: dict[str, list[CheckResult]] = {}
        passed = failed = 0

        with self._make_progress() as progress:
            task_id = progress.add_task("Checking", total=len(checks), passed=0, failed=0)
            for check in checks:
                progress.update(task_id, description=f"[cyan]{check.name}[/cyan]")
                results = self.run_check(check)
                groups[check.name] = results
                ok = sum(r.passed for r in results)
                passed += ok
                failed += len(results) - ok
                progress.update(task_id, advance=1, passed=passed, failed=failed)

        return groups

    def _run_parallel(
        self, checks: list[Check], max_workers: int
    ) -> dict[str, list[CheckResult]]:
        groups: dict[str, list[CheckResult]] = {}
        passed = failed = 0

        with self._make_progress() as progress:
            task_id = progress.add_task("Checking", total=len(checks), passed=0, failed=0)
            with ThreadPoolExecutor(max_workers=max_workers) as executor:
                futures = {executor.submit(self.run_check, check): check for check in checks}
                for future in as_completed(futures):
                    check = futures[future]
                    try:
                        results = future.result()
                    except Exception as e:
                        logger.exception("Error running check %s", check.name)
                        results = [_error_result(check, e)]
                    groups[check.name] = results
                    ok = sum(r.passed for r in results)
                    passed += ok
                    failed += len(results) - ok
                    progress.update(task_id, advance=1, passed=passed, failed=failed)

        return groups

    def run_check(self, check: Check) -> list[CheckResult]:
        """Run one check; an exception becomes a failed or errored result."""
        logger.info("Running check: %s", check.name)
        start = time.time()
        try:
            results = check.run(self.context)
        except IdentityError as e:
            logger.error("Check %s stopped: %s", check.name, e)
            results = [
                CheckResult(
                    check_id=e.check_id,
                    anchor=f"{check.name} prerequisite",
                    status=CheckStatus.FAILED,
                    first_failing_coefficient=e.first_failing,
                    detail=str(e),
                )
            ]
        except Exception as e:
            logger.exception("Error running check %s", check.name)
            results = [_error_result(check, e)]
        elapsed = time.time() - start
        for result in results:
            result.duration_seconds = elapsed
        return results


def _error_result(check: Check, error: Exception) -> CheckResult:
    return CheckResult(
        check_id=check.name,
        anchor=f"{check.name} (did not complete)",
        status=CheckStatus.ERROR,
        detail=f"{type(error).__name__}: {error}",
    )
