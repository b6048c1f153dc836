"""Main CLI entry point."""

from __future__ import annotations

import click

from xns11 import __version__
from xns11.cli.isom import isom_cmd
from xns11.cli.list_cmd import list_cmd
from xns11.cli.periods import periods_cmd
from xns11.cli.verify import verify_cmd


@click.group()
@click.version_option(version=__version__, prog_name="xns11")
def cli() -> None:
    """xns11: generators and Jacobian of the modular curve X_ns(11)."""


cli.add_command(verify_cmd, "verify")
cli.add_command(periods_cmd, "periods")
cli.add_command(isom_cmd, "isom")
cli.add_command(list_cmd, "list")

if __name__ == "__main__":
    cli()
