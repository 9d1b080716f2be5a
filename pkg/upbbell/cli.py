"""
Command-line entry point.

``python -m upbbell.cli <command> ...``; exit status 0 on success, 1 on
usage, input or internal errors, 2 when a stated expectation fails.
"""

import logging
import sys
from collections.abc import Sequence

import click
from dotenv import load_dotenv

from .commands import create_cli
from .config.settings import get_settings
from .models.reports import CommandResult

load_dotenv()

logging.basicConfig(
    level=get_settings().log_level,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

cli = create_cli()


def run(argv: Sequence[str] | None = None) -> CommandResult:
    """
    Dispatch one command line and return its result.

    The command prints its own report; usage errors are reported here.
    """
    obj: dict = {}
    try:
        status = cli.main(args=list(argv or []), prog_name="upbbell", standalone_mode=False, obj=obj)
    except click.ClickException as e:
        e.show()
        return CommandResult(exit_code=1, text=e.format_message())
    except click.exceptions.Abort:
        return CommandResult(exit_code=1, text="aborted")
    if "result" in obj:
        return obj["result"]
    # --help and similar exit early without a result
    return CommandResult(exit_code=status if status in (0, 1, 2) else 0)


def main() -> None:
    sys.exit(run(sys.argv[1:]).exit_code)


if __name__ == "__main__":
    main()
