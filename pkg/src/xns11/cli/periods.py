"""CLI periods command."""

from __future__ import annotations

import click

from xns11.checks.registry import PERIOD_TARGETS
from xns11.cli.options import common_options, execute


@click.command("periods")
@click.argument("target", type=click.Choice(list(PERIOD_TARGETS)))
@click.option("--audit", is_flag=True, help="Dump branch points, permutations and cycles")
@common_options
def periods_cmd(target: str, audit: bool, json_path: str | None, **options) -> None:
    """Compute a period matrix and check it against the elliptic lattices."""
    execute("periods", target, audit=audit, json_path=json_path, **options)
