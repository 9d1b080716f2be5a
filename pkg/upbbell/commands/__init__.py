"""CLI commands."""

import logging

import click

from .bounds import cbound, nsmax, qbound, tight
from .catalog import catalog
from .gyni import gyni
from .sets import build, classify, extend, search
from .witness import state, witness

logger = logging.getLogger(__name__)


def create_cli() -> click.Group:
    """Create the command group with all subcommands"""

    @click.group()
    @click.option(
        "--format",
        "fmt",
        type=click.Choice(["text", "machine"]),
        default="text",
        help="Default output format for every subcommand",
    )
    @click.pass_context
    def cli(ctx: click.Context, fmt: str) -> None:
        """Bell inequalities from unextendible product bases."""
        ctx.ensure_object(dict)["format"] = fmt

    # Include all commands
    for command in (classify, build, extend, search, cbound, qbound, nsmax, tight, witness, state, gyni, catalog):
        cli.add_command(command)

    logger.debug("All commands registered")

    return cli
