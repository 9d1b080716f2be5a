"""
No-signalling polytope of a Bell scenario.

Maximizes and minimizes Bell functionals over the polytope with the exact
simplex, and certifies whether an inequality defines a facet of the
classical polytope. Tightness is decided on Collins-Gisin coordinates of
the deterministic strategies: on the no-signalling affine hull the full
table and those coordinates are affinely equivalent, so affine dimensions
agree while vectors shrink to d entries.
"""

import itertools
import logging
import math
from fractions import Fraction

from ...config.settings import get_settings
from ...errors.exceptions import ClassicalBoundMismatchError, SolverError
from ...models.reports import TightnessCertificate, TightnessVerdict, format_rational
from ..bellgen import (
    BellInequality,
    Box,
    DeterministicStrategy,
    Scenario,
    constraint_rows,
    evaluate,
    strategies,
    strategy_value,
)
from .linalg import affine_rank, modular_affine_rank
from .simplex import LinearProgram, LPSolution, maximize, minimize

logger = logging.getLogger(__name__)


def polytope_dimension(scenario: Scenario) -> int:
    """d = prod_i (m_i + 1) - 1 for two outcomes per setting."""
    return math.prod(m + 1 for m in scenario.settings_per_party) - 1


def ns_program(B: BellInequality) -> LinearProgram:
    """The LP over the full p(a|x) table with normalization and no-signalling rows."""
    scenario = B.scenario
    rows = constraint_rows(scenario)
    objective: dict[int, Fraction] = {}
    for term in B.terms:
        objective[scenario.index(term.outcomes, term.settings)] = term.weight
    return LinearProgram(
        n_vars=scenario.table_size,
        rows=[dict(row) for row, _ in rows],
        rhs=[Fraction(rhs) for _, rhs in rows],
        objective=objective,
    )


def _zero_strategy_point(scenario: Scenario) -> list[Fraction]:
    """All parties answer 0; a vertex of the polytope."""
    values = [Fraction(0)] * scenario.table_size
    zeros = (0,) * scenario.parties
    for x in scenario.settings():
        values[scenario.index(zeros, x)] = Fraction(1)
    return values


def _solve(B: BellInequality, sense: str) -> tuple[LPSolution, Box]:
    lp = ns_program(B)
    start = _zero_strategy_point(B.scenario)
    solution = maximize(lp, start) if sense == "max" else minimize(lp, start)
    box = Box(B.scenario, solution.x, exact=True)
    if not box.is_valid() or evaluate(B, box) != solution.value:
        raise SolverError("LP optimum is not certified by its box")
    return solution, box


def ns_maximum(B: BellInequality) -> tuple[Fraction, Box]:
    """
    Exact maximum of a Bell functional over the no-signalling polytope.

    Args:
        B: A valid inequality

    Returns:
        The optimum and a box attaining it exactly

    Raises:
        InfeasibleError: Only on an internal constraint bug
    """
    solution, box = _solve(B, "max")
    logger.info(f"NS maximum {solution.value} after {solution.pivots} pivots on scenario {B.scenario}")
    return solution.value, box


def ns_maximum_with_pivots(B: BellInequality) -> tuple[Fraction, Box, int]:
    solution, box = _solve(B, "max")
    return solution.value, box, solution.pivots


def ns_minimum(B: BellInequality) -> tuple[Fraction, Box]:
    """Exact minimum of the functional over the no-signalling polytope."""
    solution, box = _solve(B, "min")
    logger.info(f"NS minimum {solution.value} after {solution.pivots} pivots")
    return solution.value, box


def is_trivial(B: BellInequality, strict: bool = False) -> bool:
    """
    Check that no no-signalling box violates the inequality.

    Args:
        B: A valid inequality
        strict: Also require the functional to be constant on the polytope

    Returns:
        True iff the NS maximum equals the classical bound (and, when
        strict, the NS minimum too)
    """
    if not B.terms:
        return True
    maximum, _ = ns_maximum(B)
    if maximum != B.classical_bound:
        return False
    if strict:
        minimum, _ = ns_minimum(B)
        return minimum == maximum
    return True


def collins_gisin_vector(strategy: DeterministicStrategy, scenario: Scenario) -> tuple[int, ...]:
    """
    Collins-Gisin coordinates of a deterministic strategy.

    One entry per nonempty party subset S and settings x_S, equal to
    prod_{i in S} [s_i(x_i) = 0].
    """
    coordinates: list[int] = []
    parties = range(scenario.parties)
    for size in range(1, scenario.parties + 1):
        for subset in itertools.combinations(parties, size):
            for x in itertools.product(*(range(scenario.settings_per_party[i]) for i in subset)):
                coordinates.append(
                    int(all(strategy.output(i, xi) == 0 for i, xi in zip(subset, x, strict=True)))
                )
    return tuple(coordinates)


def is_tight(B: BellInequality, prime: int | None = None) -> TightnessCertificate:
    """
    Certify whether the classical bound defines a facet.

    A modular rank of d - 1 certifies Tight on its own; any other modular
    outcome is settled by exact elimination.

    Args:
        B: A valid inequality with its exact classical bound
        prime: Modulus for the prefilter (defaults to settings)

    Returns:
        The tightness certificate

    Raises:
        ClassicalBoundMismatchError: If B.classical_bound is not the largest deterministic value
    """
    scenario = B.scenario
    d = polytope_dimension(scenario)
    saturating: list[DeterministicStrategy] = []
    total = 0
    best: Fraction | None = None
    for s in strategies(scenario):
        total += 1
        value = strategy_value(B, s)
        if best is None or value > best:
            best = value
        if value == B.classical_bound:
            saturating.append(s)
    if best != B.classical_bound:
        raise ClassicalBoundMismatchError(format_rational(B.classical_bound), format_rational(Fraction(best or 0)))

    tables = [[list(t) for t in s.tables] for s in saturating]
    if len(saturating) == total:
        certificate = TightnessCertificate(
            saturating_strategies=tables,
            saturating_count=total,
            strategy_count=total,
            affine_dimension=d,
            polytope_dimension=d,
            verdict=TightnessVerdict.TRIVIAL,
            method="all-saturating",
        )
        logger.info(f"inequality on {scenario} is trivial: all {total} strategies saturate")
        return certificate

    points = [collins_gisin_vector(s, scenario) for s in saturating]
    modulus = prime if prime is not None else get_settings().rank_prime
    dimension = modular_affine_rank(points, modulus)
    method = "modular"
    if dimension != d - 1:
        dimension = affine_rank(points)
        method = "exact"
    verdict = TightnessVerdict.TIGHT if dimension == d - 1 else TightnessVerdict.NOT_TIGHT
    logger.info(
        f"{len(saturating)}/{total} strategies saturate, affine dimension {dimension} of {d}: {verdict.value}"
    )
    return TightnessCertificate(
        saturating_strategies=tables,
        saturating_count=len(saturating),
        strategy_count=total,
        affine_dimension=dimension,
        polytope_dimension=d,
        verdict=verdict,
        method=method,
    )
