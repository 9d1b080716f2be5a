"""Commands on the quantum side of a UPB: witness and state."""

import logging
from fractions import Fraction

import click

from ..models.reports import CommandResult
from ..services.formats import exact_weight
from ..services.quantum import (
    BasisRealization,
    epsilon_global,
    epsilon_prime,
    tensor_power_violation,
    upb_state,
    witness_box,
    witness_expectation,
)
from .common import load_set, parse_floats, reported, success

logger = logging.getLogger(__name__)


def _realization(angles: str | None, bases: tuple[int, ...]) -> BasisRealization | None:
    given = parse_floats(angles)
    return BasisRealization.uniform(bases, given) if given else None


@click.command()
@click.argument("source")
@click.option("--eps", "eps", default=None, help="Witness offset as p/q (defaults to epsilon')")
@click.option("--power", type=int, default=1, help="Tensor power k of the witness box")
@click.option("--angles", default=None, help="Comma-separated basis angles in radians")
@reported
def witness(source: str, eps: str | None, power: int, angles: str | None) -> CommandResult:
    """No-signalling box of the witness Pi_U - eps and its Bell value."""
    U = load_set(source)
    real = _realization(angles, U.bases_per_party)
    epsilon: Fraction | float
    if eps is None:
        epsilon = epsilon_prime(U, real)
    else:
        epsilon = exact_weight(eps)
    _, report = witness_box(U, epsilon, real)
    lines = [
        f"Bell value {report.value:.12g} at eps = {eps or f'{report.epsilon:.6g}'}",
        f"closed form {report.closed_form:.12g}, minimum entry {report.min_entry:.3g}",
    ]
    machine = report.model_dump(mode="json")
    if power > 1:
        value = tensor_power_violation(U, power, epsilon, real)
        lines.append(f"{power}-fold tensor power: {value:.12g}")
        machine["tensor_power"] = {"k": power, "value": value}
    return success("\n".join(lines), machine)


@click.command()
@click.argument("source")
@click.option("--eps", "eps", default=None, help="Witness offset for Tr(W rho) as p/q")
@click.option("--seed", type=int, default=None, help="Seed for the product-state minimization")
@click.option("--angles", default=None, help="Comma-separated basis angles in radians")
@reported
def state(source: str, eps: str | None, seed: int | None, angles: str | None) -> CommandResult:
    """The bound-entangled state of a UPB with its partial-transpose spectra."""
    U = load_set(source)
    real = _realization(angles, U.bases_per_party)
    _, report = upb_state(U, real)
    epsilons = epsilon_global(U, real, seed=seed)
    epsilon = exact_weight(eps) if eps is not None else epsilons.epsilon_prime
    report = report.model_copy(update={"witness_trace": witness_expectation(U, epsilon, real)})
    lines = [
        f"rank {report.rank} in dimension {report.dimension}, trace {report.trace:.12g}",
        f"PPT across all bipartitions: {report.is_ppt}",
        *(f"  {cut}: min eigenvalue {value:.3g}" for cut, value in report.partial_transpose_minima.items()),
        f"epsilon' = {epsilons.epsilon_prime:.12g}, global product minimum ~ {epsilons.epsilon_global:.12g}",
        f"Tr(W rho) = {report.witness_trace:.3g}",
    ]
    machine = report.model_dump(mode="json")
    machine["epsilon"] = epsilons.model_dump(mode="json")
    return success("\n".join(lines), machine)
