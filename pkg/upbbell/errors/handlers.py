"""
Exception handlers for the command line.

This module turns exceptions raised by the services into ``CommandResult``s
with consistent exit codes and error payloads, and records each failure in
the run log.
"""

from typing import Any

from pydantic import ValidationError as PydanticValidationError

from ..models.reports import CommandResult
from ..services.run_log import run_logger
from .exceptions import BaseAppException


def _error_text(message: str, details: dict[str, Any]) -> str:
    if not details:
        return f"error: {message}"
    extra = ", ".join(f"{k}={v}" for k, v in details.items())
    return f"error: {message} ({extra})"


def handle_base_app_exception(
    exc: BaseAppException, command: str | None = None, execution_time_ms: float | None = None
) -> CommandResult:
    """Handle BaseAppException and its subclasses."""
    run_logger.log_error(
        exc,
        command=command,
        level="ERROR",
        additional_context={
            "exit_code": exc.exit_code,
            "execution_time_ms": execution_time_ms,
            **exc.details,
        },
    )
    return CommandResult(
        exit_code=exc.exit_code,
        text=_error_text(exc.message, exc.details),
        machine={"error": True, "message": exc.message, "details": exc.details},
    )


def handle_validation_error(
    exc: PydanticValidationError, command: str | None = None, execution_time_ms: float | None = None
) -> CommandResult:
    """Handle Pydantic validation errors."""
    errors = []
    for error in exc.errors():
        error_dict: dict[str, Any] = {
            "type": error["type"],
            "loc": list(error["loc"]),
            "msg": error["msg"],
        }
        if "input" in error:
            error_dict["input"] = str(error["input"])
        if "ctx" in error:
            error_dict["ctx"] = {k: str(v) for k, v in error["ctx"].items()}
        errors.append(error_dict)

    run_logger.log_error(
        exc,
        command=command,
        level="WARNING",
        additional_context={"exit_code": 1, "execution_time_ms": execution_time_ms},
    )
    lines = ["error: validation error"] + [f"  {'.'.join(map(str, e['loc']))}: {e['msg']}" for e in errors]
    return CommandResult(
        exit_code=1,
        text="\n".join(lines),
        machine={"error": True, "message": "Validation error", "details": {"errors": errors}},
    )


def handle_unhandled_exception(
    exc: Exception, command: str | None = None, execution_time_ms: float | None = None
) -> CommandResult:
    """Handle all unhandled exceptions."""
    run_logger.log_error(
        exc,
        command=command,
        level="ERROR",
        additional_context={"exit_code": 1, "execution_time_ms": execution_time_ms},
    )
    details = {"type": type(exc).__name__, "info": str(exc)}
    return CommandResult(
        exit_code=1,
        text=_error_text("internal error", details),
        machine={"error": True, "message": "Internal error", "details": details},
    )


def handle_exception(
    exc: Exception, command: str | None = None, execution_time_ms: float | None = None
) -> CommandResult:
    """Dispatch to the handler for the exception's type."""
    if isinstance(exc, BaseAppException):
        return handle_base_app_exception(exc, command, execution_time_ms)
    if isinstance(exc, PydanticValidationError):
        return handle_validation_error(exc, command, execution_time_ms)
    return handle_unhandled_exception(exc, command, execution_time_ms)
