"""
Router configuration module of the command line front end.

The command groups of ``stockwell.commands`` are merged into one root group,
which owns the options shared by every command.
"""

import logging

import click

from stockwell.commands import analysis, export, verify, window
from stockwell.config.config import settings


def include_router(root: click.Group, router: click.Group) -> None:
    """Register every command of ``router`` on ``root`` under its own name."""
    for name, command in router.commands.items():
        root.add_command(command, name)


@click.group(name=settings.NAME)
@click.option("--threads", type=click.IntRange(min=1), default=None,
              help="Worker threads, STOCKWELL_THREADS when omitted.")
@click.option("--verbose", is_flag=True, help="Log at DEBUG level.")
@click.pass_context
def router(ctx: click.Context, threads: int | None, verbose: bool) -> None:
    """Directional Stockwell transform toolkit."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj["threads"] = threads


include_router(router, window.router)
include_router(router, analysis.router)
include_router(router, verify.router)
include_router(router, export.router)
