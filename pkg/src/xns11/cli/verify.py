"""CLI verify command."""

from __future__ import annotations

import click

from xns11.checks.registry import VERIFY_SCOPES
from xns11.cli.options import common_options, execute


@click.command("verify")
@click.argument(
    "scope", type=click.Choice([*VERIFY_SCOPES, "all"]), default="all", required=False
)
@click.option("--audit", is_flag=True, help="Write audit records to the results directory")
@common_options
def verify_cmd(scope: str, audit: bool, json_path: str | None, **options) -> None:
    """Re-derive the q-expansions of one scope and check every identity exactly."""
    execute("verify", scope, audit=audit, json_path=json_path, **options)
