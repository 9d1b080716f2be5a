"""
Persistent run log for command failures and events.

This module appends one JSON record per failure or event to a JSON-lines
file for audit trails and troubleshooting of long verification runs.
"""

import json
import logging
import os
import traceback
from datetime import datetime, timezone
from pathlib import Path
from typing import Any
from uuid import uuid4

from ..config.settings import get_settings

logger = logging.getLogger(__name__)


class RunLogger:
    """Service for logging command failures and events to a JSON-lines file."""

    def __init__(self, path: str | Path | None = None, enabled: bool | None = None):
        """
        Initialize the run logger.

        Args:
            path: Log file (defaults to settings.run_log_path)
            enabled: Whether to write at all (defaults to settings.run_log_enabled)
        """
        settings = get_settings()
        self.enabled = settings.run_log_enabled if enabled is None else enabled
        self.path = Path(path or settings.run_log_path)
        self.user = os.getenv("USER") or "upbbell"

    def _append(self, record: dict[str, Any]) -> bool:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, default=str) + "\n")
            return True
        except OSError as e:
            logger.warning(f"Failed to write run log {self.path}: {e}")
            return False

    def log_error(
        self,
        error: Exception,
        command: str | None = None,
        level: str = "ERROR",
        additional_context: dict[str, Any] | None = None,
    ) -> None:
        """
        Log an error to the run log.

        Args:
            error: The exception that occurred
            command: The CLI command line (optional)
            level: Log level (ERROR, WARNING, INFO)
            additional_context: Additional context to include in the log
        """
        if not self.enabled:
            return

        try:
            context = dict(additional_context or {})
            record = {
                "log_id": str(uuid4()),
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "level": level,
                "command": command,
                "exit_code": context.pop("exit_code", None),
                "error_type": type(error).__name__,
                "error_message": str(error),
                "stack_trace": "".join(traceback.format_exception(error)) if error.__traceback__ else None,
                "user": self.user,
                "execution_time_ms": context.pop("execution_time_ms", None),
                **context,
            }
            self._append(record)
        except Exception as log_error:
            logger.warning(f"Failed to log error to run log: {log_error}")

    def log_event(
        self,
        message: str,
        command: str | None = None,
        level: str = "INFO",
        additional_context: dict[str, Any] | None = None,
    ) -> None:
        """
        Log a general event to the run log.

        Args:
            message: The event message
            command: The CLI command line (optional)
            level: Log level (ERROR, WARNING, INFO)
            additional_context: Additional context to include in the log
        """

        class LogEvent(Exception):
            pass

        self.log_error(
            LogEvent(message),
            command=command,
            level=level,
            additional_context=additional_context,
        )


run_logger = RunLogger()
