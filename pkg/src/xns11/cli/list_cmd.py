"""CLI list command."""

from __future__ import annotations

import click


@click.command("list")
@click.argument("plugin_type", type=click.Choice(["checks", "reporters"]))
def list_cmd(plugin_type: str) -> None:
    """List registered checks or reporters."""
    # Import to ensure registries are populated
    import xns11.checks  # noqa: F401
    import xns11.reporters  # noqa: F401

    from rich.console import Console
    from rich.table import Table

    console = Console()

    if plugin_type == "checks":
        from xns11.checks.registry import get_check, list_checks

        table = Table(title="Registered Checks")
        table.add_column("Name", style="cyan")
        table.add_column("Scope")
        for name in list_checks():
            table.add_row(name, get_check(name).scope)
    else:
        from xns11.reporters.registry import list_reporters

        table = Table(title="Registered Reporters")
        table.add_column("Name", style="cyan")
        for name in list_reporters():
            table.add_row(name)

    console.print(table)
