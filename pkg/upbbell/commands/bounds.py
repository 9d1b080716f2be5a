"""Commands computing values of an inequality: cbound, qbound, nsmax, tight."""

import logging
import math
from fractions import Fraction

import click
import numpy as np

from ..config.settings import get_settings
from ..errors.exceptions import ValidationError
from ..models.reports import (
    ClassicalBoundReport,
    CommandResult,
    NsMaximumReport,
    QuantumBoundReport,
)
from ..services.bellgen import classical_bound
from ..services.nspoly import is_tight, ns_maximum_with_pivots, ns_minimum
from ..services.quantum import BasisRealization, bell_operator_spectrum
from .common import expect, load_inequality, parse_floats, reported, success

logger = logging.getLogger(__name__)


@click.command()
@click.argument("source")
@reported
def cbound(source: str) -> CommandResult:
    """Classical bound by exhaustive deterministic strategies."""
    B = load_inequality(source)
    bound = classical_bound(B)
    report = ClassicalBoundReport(
        classical_bound=bound, max_weight=B.max_weight, strategy_count=B.scenario.strategy_count
    )
    return success(str(bound), report)


@click.command()
@click.argument("source")
@click.option("--angles", default=None, help="Comma-separated basis angles in radians, shared by all parties")
@click.option("--seed", type=int, default=None, help="Seed for random realizations")
@click.option("--trials", type=int, default=0, help="Number of random admissible realizations")
@reported
def qbound(source: str, angles: str | None, seed: int | None, trials: int) -> CommandResult:
    """Largest eigenvalue of the Bell operator."""
    B = load_inequality(source)
    bases = B.scenario.settings_per_party
    given = parse_floats(angles)
    real = BasisRealization.uniform(bases, given) if given else BasisRealization.default(bases)
    if trials < 0:
        raise ValidationError(f"--trials must be nonnegative, got {trials}")

    tol = get_settings().spectrum_tolerance
    maximum = float(bell_operator_spectrum(B, real)[-1])
    seed = get_settings().default_seed if seed is None else seed
    rng = np.random.default_rng(seed)
    trial_maxima = [
        float(bell_operator_spectrum(B, BasisRealization.random(bases, rng))[-1]) for _ in range(trials)
    ]
    target = float(B.max_weight)
    agrees = all(math.isclose(v, target, abs_tol=tol) for v in [maximum, *trial_maxima])
    report = QuantumBoundReport(
        max_eigenvalue=maximum,
        max_weight=B.max_weight,
        trial_maxima=trial_maxima,
        seed=seed if trials else None,
        agrees=agrees,
    )
    lines = [f"{maximum:.12g}"]
    if trials:
        lines.append(f"{trials} random realizations: max eigenvalue in [{min(trial_maxima):.12g}, {max(trial_maxima):.12g}]")
    if not agrees:
        logger.warning(f"quantum value differs from the largest weight {B.max_weight}")
    return success("\n".join(lines), report)


@click.command()
@click.argument("source")
@click.option("--expect", "expected", default=None, help="Required optimum as p/q")
@click.option("--minimum/--no-minimum", default=False, help="Also compute the NS minimum")
@reported
def nsmax(source: str, expected: str | None, minimum: bool) -> CommandResult:
    """Exact maximum over the no-signalling polytope."""
    B = load_inequality(source)
    optimum, _, pivots = ns_maximum_with_pivots(B)
    low = ns_minimum(B)[0] if minimum else None
    report = NsMaximumReport(
        optimum=optimum,
        classical_bound=B.classical_bound,
        minimum=low,
        trivial=optimum == B.classical_bound,
        pivots=pivots,
    )
    text = str(optimum)
    expect("NS maximum", _normalize_rational(expected) if expected else None, text)
    if low is not None:
        text += f"\nminimum {low}"
    return success(text, report)


def _normalize_rational(value: str) -> str:
    try:
        return str(Fraction(value.strip()))
    except (ValueError, ZeroDivisionError):
        return value


@click.command()
@click.argument("source")
@click.option("--expect", "expected", default=None, help="Required verdict: Tight, NotTight or Trivial")
@click.option("--prime", type=int, default=None, help="Modulus of the rank prefilter")
@reported
def tight(source: str, expected: str | None, prime: int | None) -> CommandResult:
    """Decide whether the inequality is a facet of the classical polytope."""
    B = load_inequality(source)
    certificate = is_tight(B, prime=prime)
    expect("tightness", expected, certificate.verdict.value)
    text = (
        f"{certificate.verdict.value}\n"
        f"{certificate.saturating_count}/{certificate.strategy_count} strategies saturate, "
        f"affine dimension {certificate.affine_dimension} of d = {certificate.polytope_dimension} "
        f"({certificate.method})"
    )
    return success(text, certificate)
