"""Shared plumbing for CLI commands: input loading, output and error handling."""

import functools
import json
import logging
import time
from collections.abc import Callable
from typing import Any

import click

from ..errors.exceptions import FormatError, VerificationFailedError
from ..errors.handlers import handle_exception
from ..models.reports import CommandResult, ReportModel
from ..services import catalog
from ..services.bellgen import BellInequality, build_inequality
from ..services.formats import parse_kets, read_bell, read_pvs
from ..services.pvset import ProductVectorSet
from ..services.run_log import run_logger

logger = logging.getLogger(__name__)

CATALOG_PREFIX = "catalog:"


def load_set(source: str) -> ProductVectorSet:
    """
    Read a set from ``catalog:<name>``, ``kets:<k1>,<k2>,...`` or a .pvs path.

    Raises:
        UnknownNameError: If the catalog has no such entry
        FormatError: If the file cannot be read or parsed
    """
    if source.startswith(CATALOG_PREFIX):
        return catalog.get(source[len(CATALOG_PREFIX):]).vectors
    if source.startswith("kets:"):
        return parse_kets(source[len("kets:"):].split(","))
    return read_pvs(source)


def load_inequality(source: str) -> BellInequality:
    """
    Read an inequality from ``catalog:<name>``, a .bell path, or a .pvs path
    (built on the fly).
    """
    if source.startswith(CATALOG_PREFIX):
        return catalog.get(source[len(CATALOG_PREFIX):]).inequality
    if source.endswith(".pvs"):
        return build_inequality(read_pvs(source))
    return read_bell(source, check_bound=True)


def parse_floats(text: str | None) -> list[float] | None:
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise FormatError(f"'{text}' is not a comma-separated list of numbers") from e


def expect(label: str, expected: str | None, actual: str) -> None:
    """
    Raises:
        VerificationFailedError: If an expectation was given and does not hold
    """
    if expected is not None and expected.strip().lower() != actual.lower():
        raise VerificationFailedError(
            f"expected {label} {expected}, got {actual}",
            details={"expected": expected, "actual": actual},
        )


def success(text: str, report: ReportModel | dict[str, Any] | None = None) -> CommandResult:
    if isinstance(report, ReportModel):
        machine = report.model_dump(mode="json")
    else:
        machine = report
    return CommandResult(exit_code=0, text=text, machine=machine)


def format_option(f: Callable) -> Callable:
    return click.option(
        "--format",
        "fmt",
        type=click.Choice(["text", "machine"]),
        default=None,
        help="Human-readable text or one JSON document",
    )(f)


def emit(result: CommandResult, fmt: str) -> None:
    """Reports go to stdout, failures to stderr."""
    err = result.exit_code != 0
    if fmt == "machine":
        payload = {"exit_code": result.exit_code, **(result.machine or {})}
        click.echo(json.dumps(payload, indent=2, sort_keys=True, default=str), err=err)
    elif result.text:
        click.echo(result.text, err=err)


def reported(f: Callable[..., CommandResult]) -> Callable:
    """
    Run a command body, turn exceptions into results, print and exit.

    The result is also stored on the context object so ``cli.run`` can
    return it.
    """

    @functools.wraps(f)
    def wrapper(*args, fmt: str | None = None, **kwargs):
        ctx = click.get_current_context()
        obj = ctx.ensure_object(dict)
        fmt = fmt or obj.get("format", "text")
        command = " ".join([ctx.command_path, *(str(a) for a in ctx.params.values() if a not in (None, False))])
        start = time.perf_counter()
        try:
            result = f(*args, **kwargs)
        except Exception as exc:
            elapsed = (time.perf_counter() - start) * 1000
            logger.debug(f"{ctx.command_path} failed after {elapsed:.1f}ms: {exc}")
            result = handle_exception(exc, command=command, execution_time_ms=elapsed)
        else:
            elapsed = (time.perf_counter() - start) * 1000
            logger.info(f"{ctx.command_path} finished in {elapsed:.1f}ms")
            run_logger.log_event(
                f"{ctx.command_path} finished",
                command=command,
                additional_context={"exit_code": result.exit_code, "execution_time_ms": elapsed},
            )
        obj["result"] = result
        emit(result, fmt)
        if result.exit_code:
            ctx.exit(result.exit_code)
        return result

    return format_option(wrapper)
