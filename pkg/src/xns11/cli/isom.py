"""CLI isom command."""

from __future__ import annotations

import click

from xns11.cli.options import common_options, execute


@click.command("isom")
@click.option("--audit", is_flag=True, help="Write the GL8(Z) witness search to an audit file")
@common_options
def isom_cmd(audit: bool, json_path: str | None, **options) -> None:
    """Test J_ns(11) ~ J_0(121)^new and compute the lattice quotients."""
    execute("isom", "isom", audit=audit, json_path=json_path, **options)
