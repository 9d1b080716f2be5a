"""The catalog command group."""

import logging

import click

from ..errors.exceptions import VerificationFailedError
from ..models.reports import CommandResult
from ..services import catalog as catalog_service
from ..services.formats import format_bell, format_pvs
from .common import reported, success

logger = logging.getLogger(__name__)


@click.group()
def catalog() -> None:
    """Built-in UPBs and inequalities."""


@catalog.command(name="list")
@reported
def list_entries() -> CommandResult:
    """List all entries with their recorded expectations."""
    frame = catalog_service.summary(as_dict=False)
    rows = catalog_service.summary(as_dict=True)
    return success(frame.to_string(index=False), {"entries": rows})


@catalog.command()
@click.argument("name")
@click.option("--pvs", "what", flag_value="pvs", default=True, help="Print the set as .pvs (default)")
@click.option("--bell", "what", flag_value="bell", help="Print the inequality as .bell")
@reported
def get(name: str, what: str) -> CommandResult:
    """Print one entry."""
    entry = catalog_service.get(name)
    body = format_pvs(entry.vectors) if what == "pvs" else format_bell(entry.inequality)
    notes = [f"# {entry.name}: {entry.provenance}"]
    notes.extend(
        f"# printed {c.where} '{c.printed}' read as '{c.corrected}': {c.reason}" for c in entry.corrections
    )
    machine = entry.summary().model_dump(mode="json")
    machine["kets"] = entry.vectors.kets()
    machine["terms"] = [t.label() for t in entry.inequality.terms]
    machine["corrections"] = [
        {"where": c.where, "printed": c.printed, "corrected": c.corrected, "reason": c.reason}
        for c in entry.corrections
    ]
    return success("\n".join(notes) + "\n" + body.rstrip("\n"), machine)


@catalog.command()
@click.argument("names", nargs=-1)
@click.option("--tightness/--no-tightness", default=True, help="Also recompute tightness verdicts")
@reported
def verify(names: tuple[str, ...], tightness: bool) -> CommandResult:
    """Recompute stored expectations; exit 2 on any mismatch."""
    selected = list(names) or catalog_service.list_names()
    results = [catalog_service.verify(name, tightness=tightness) for name in selected]
    lines = []
    for result in results:
        for check in result.checks:
            mark = "ok" if check.ok else "MISMATCH"
            lines.append(f"{result.name:8} {check.check:15} {mark:8} expected {check.expected}, got {check.actual}")
    failed = [r.name for r in results if not r.ok]
    if failed:
        raise VerificationFailedError(
            "catalog expectations do not hold:\n" + "\n".join(lines),
            details={"entries": failed},
        )
    return success("\n".join(lines), {"entries": [r.model_dump(mode="json") for r in results]})
