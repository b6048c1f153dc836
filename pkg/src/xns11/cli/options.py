"""Options and run plumbing shared by the verify, periods and isom commands."""

from __future__ import annotations

from typing import Any, Callable

import click

from xns11.core.config import RunConfig
from xns11.core.errors import ConfigError

EXIT_NUMERIC = 2


def common_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Attach the configuration flags every run command accepts."""
    options = [
        click.option("--config", "-c", type=click.Path(exists=True), help="Config YAML file"),
        click.option("--order", type=int, help="q-expansion precision (q^(1/11) steps)"),
        click.option("--bits", type=int, help="Working precision of the period computations"),
        click.option("--tol", type=float, help="Numerical tolerance"),
        click.option("--nmax", type=int, help="Number of a_n coefficients for modular symbols"),
        click.option("--cache-dir", type=click.Path(), help="Cache directory for a_n tables"),
        click.option("--json", "json_path", type=click.Path(), help="Write the JSON report here"),
        click.option("--log-level", help="Log level"),
        click.option("--workers", "-w", "max_workers", type=int, help="Max parallel workers"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def load_config(
    config: str | None,
    order: int | None = None,
    bits: int | None = None,
    tol: float | None = None,
    nmax: int | None = None,
    cache_dir: str | None = None,
    log_level: str | None = None,
    max_workers: int | None = None,
) -> RunConfig:
    """YAML file, then XNS11_CACHE_DIR, then command-line flags; validated."""
    run_config = RunConfig.from_yaml(config) if config else RunConfig()
    run_config.apply_environment()
    run_config.merge_overrides(
        order=order,
        bits=bits,
        tol=tol,
        nmax=nmax,
        cache_dir=cache_dir,
        max_workers=max_workers,
        log_level=log_level,
    )
    run_config.validate()
    return run_config


def execute(
    command: str,
    scope: str,
    audit: bool = False,
    json_path: str | None = None,
    config: str | None = None,
    **overrides: Any,
) -> None:
    """Run the checks of one scope and exit with the summary's status."""
    import xns11.checks  # noqa: F401
    import xns11.reporters  # noqa: F401
    from xns11.checks.registry import checks_for_scope
    from xns11.core.check import CheckContext
    from xns11.core.runner import Runner
    from xns11.reporters.json_reporter import JSONReporter
    from xns11.reporters.registry import get_reporter
    from xns11.utils.logging import setup_logging

    ctx = click.get_current_context()
    try:
        run_config = load_config(config, **overrides)
        reporter = get_reporter(run_config.reporter)
    except (ConfigError, KeyError) as e:
        click.echo(f"Configuration error: {e}", err=True)
        ctx.exit(EXIT_NUMERIC)

    setup_logging(run_config.log_level)

    checks = checks_for_scope(scope)
    if run_config.checks:
        checks = [c for c in checks if c.name in run_config.checks]

    runner = Runner(CheckContext(run_config, audit=audit), reporter)
    summary = runner.run(checks, command=command, scope=scope)

    if json_path is not None:
        JSONReporter().report(summary, output=json_path)

    click.echo(
        f"\n{command} {scope}: {summary.passed}/{summary.total} passed",
        err=True,
    )
    failure = summary.first_failure
    if failure is not None:
        where = failure.first_failing_coefficient or "-"
        click.echo(f"first failure: {failure.check_id} at {where}", err=True)
    ctx.exit(summary.exit_code())
