"""Commands on product-vector sets: classify, build, extend, search."""

import logging
from fractions import Fraction

import click
import pandas as pd

from ..errors.exceptions import ValidationError
from ..models.reports import ClassificationReport, CommandResult, InequalityReport, SearchReport
from ..services.bellgen import BellInequality, build_inequality
from ..services.extend import Position, lift_method1, method2
from ..services.formats import exact_weight, format_pvs, write_bell, write_pvs
from ..services.pvset import classify as classify_set
from ..services.pvset import search_upbs
from .common import expect, load_set, reported, success

logger = logging.getLogger(__name__)


def inequality_report(B: BellInequality) -> InequalityReport:
    return InequalityReport(
        scenario=list(B.scenario.settings_per_party),
        classical_bound=B.classical_bound,
        terms=[t.label() if t.weight == 1 else f"{t.weight} {t.label()}" for t in B.terms],
        text=str(B),
    )


@click.command()
@click.argument("source")
@click.option("--expect", "expected", default=None, help="Required kind, e.g. UPB or FullBasis")
@click.option("--node-cap", type=int, default=None, help="Completion search node cap")
@reported
def classify(source: str, expected: str | None, node_cap: int | None) -> CommandResult:
    """Classify a set as FullBasis, CompletableToFullBasis, UPB or ExtendibleOnlyToUPB."""
    S = load_set(source)
    result = classify_set(S, node_cap=node_cap)
    report = ClassificationReport(
        kind=result.kind.value,
        parties=S.parties,
        size=len(S),
        witness_extension=result.witness_extension.ket() if result.witness_extension else None,
        completion=[v.ket() for v in result.completion] if result.completion else None,
    )
    expect("classification", expected, report.kind)
    lines = [report.kind]
    if report.witness_extension:
        lines.append(f"orthogonal product vector: |{report.witness_extension}>")
    if report.completion:
        lines.append("completion: " + " ".join(f"|{k}>" for k in report.completion))
    return success("\n".join(lines), report)


@click.command()
@click.argument("source")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write a .bell file")
@click.option("--weights", default=None, help="Comma-separated weights p/q, one per vector")
@reported
def build(source: str, output: str | None, weights: str | None) -> CommandResult:
    """Construct the Bell inequality of an orthogonal product-vector set."""
    S = load_set(source)
    q: list[Fraction] | None = [exact_weight(w) for w in weights.split(",")] if weights else None
    B = build_inequality(S, q)
    if output:
        write_bell(B, output)
        logger.info(f"wrote {len(B.terms)} terms to {output}")
    return success(str(B), inequality_report(B))


@click.command()
@click.argument("source")
@click.option("--method", type=click.Choice(["lift", "m2"]), required=True)
@click.option("--party", type=int, default=None, help="1-based party driving method 2")
@click.option("--companion", default="fullbasis", help="Companion set for lifting, or 'fullbasis'")
@click.option("--position", type=click.Choice(["front", "back"]), default=None, help="Where the new party goes")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write a .pvs file")
@reported
def extend(
    source: str, method: str, party: int | None, companion: str, position: Position | None, output: str | None
) -> CommandResult:
    """Grow an n-party set to n + 1 parties."""
    U = load_set(source)
    if method == "lift":
        other = companion if companion == "fullbasis" else load_set(companion)
        result = lift_method1(U, other, position=position or "back")
    else:
        if party is None:
            raise ValidationError("--party is required for method m2")
        result = method2(U, party, position=position or "front")
    if output:
        write_pvs(result, output)
    return success(format_pvs(result).rstrip("\n"), {"parties": result.parties, "kets": result.kets()})


@click.command()
@click.option("--n", "n", type=int, required=True, help="Number of qubits")
@click.option("--size", type=int, required=True, help="Number of vectors")
@click.option("--mmax", "m_max", type=int, default=2, help="Bases available per party")
@click.option("--budget", type=int, default=None, help="Search node cap")
@reported
def search(n: int, size: int, m_max: int, budget: int | None) -> CommandResult:
    """Enumerate UPB classes of a given size."""
    found = [S.kets() for S in search_upbs(n, m_max, size, budget)]
    report = SearchReport(n=n, m_max=m_max, size=size, found=found)
    if not found:
        return success("no UPB found", report)
    frame = pd.DataFrame({"upb": [" ".join(kets) for kets in found]})
    return success(frame.to_string(), report)
