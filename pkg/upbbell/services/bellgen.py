"""
Bell inequalities built from product-vector sets.

This module maps an orthogonal product-vector set to the Bell inequality
whose terms read settings off the local bases and outcomes off the element
bits, and computes classical values by enumerating deterministic strategies.
It also owns the box representation and the normalization and
no-signalling constraint rows shared with the LP layer.
"""

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from ..errors.exceptions import ScenarioMismatchError, ValidationError
from .pvset import ProductVectorSet, basis_order, validate_set

logger = logging.getLogger(__name__)

Number = Fraction | float


@dataclass(frozen=True)
class Scenario:
    """n parties, m_i settings at party i, two outcomes per setting."""

    parties: int
    settings_per_party: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "settings_per_party", tuple(self.settings_per_party))
        if self.parties < 1:
            raise ValidationError(f"a scenario needs at least one party, got {self.parties}")
        if len(self.settings_per_party) != self.parties:
            raise ValidationError("settings_per_party must list one count per party")
        if any(m < 1 for m in self.settings_per_party):
            raise ValidationError("every party needs at least one setting")

    def settings(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(m) for m in self.settings_per_party)))

    def outcomes(self) -> list[tuple[int, ...]]:
        return list(itertools.product((0, 1), repeat=self.parties))

    @property
    def table_size(self) -> int:
        return math.prod(self.settings_per_party) * 2**self.parties

    @property
    def strategy_count(self) -> int:
        return math.prod(2**m for m in self.settings_per_party)

    def index(self, a: Sequence[int], x: Sequence[int]) -> int:
        """Position of p(a|x) in a flat table: settings major, both big-endian."""
        x_rank = 0
        for xi, m in zip(x, self.settings_per_party, strict=True):
            x_rank = x_rank * m + xi
        a_rank = 0
        for ai in a:
            a_rank = 2 * a_rank + ai
        return x_rank * 2**self.parties + a_rank

    def __str__(self) -> str:
        return "(" + ",".join(str(m) for m in self.settings_per_party) + ")"


@dataclass(frozen=True)
class BellTerm:
    """Weighted probability p(a|x)."""

    outcomes: tuple[int, ...]
    settings: tuple[int, ...]
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "settings", tuple(self.settings))
        object.__setattr__(self, "weight", Fraction(self.weight))
        if not 0 <= self.weight <= 1:
            raise ValidationError(f"term weight {self.weight} outside [0, 1]")

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.outcomes, self.settings

    def label(self) -> str:
        a = "".join(str(v) for v in self.outcomes)
        x = "".join(str(v) for v in self.settings)
        return f"{a}|{x}"

    def __str__(self) -> str:
        if self.weight == 1:
            return f"p({self.label()})"
        return f"{self.weight} p({self.label()})"


@dataclass(frozen=True)
class BellInequality:
    """Sum of weighted terms bounded by the classical value."""

    scenario: Scenario
    terms: tuple[BellTerm, ...]
    classical_bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "classical_bound", Fraction(self.classical_bound))
        n = self.scenario.parties
        seen = set()
        for term in self.terms:
            if len(term.outcomes) != n or len(term.settings) != n:
                raise ValidationError(f"term {term.label()} does not have {n} parties")
            if any(a not in (0, 1) for a in term.outcomes):
                raise ValidationError(f"term {term.label()} has a non-binary outcome")
            if any(not 0 <= x < m for x, m in zip(term.settings, self.scenario.settings_per_party, strict=True)):
                raise ValidationError(f"term {term.label()} uses a setting outside {self.scenario}")
            if term.key in seen:
                raise ValidationError(f"duplicate term p({term.label()})")
            seen.add(term.key)

    def term_set(self) -> frozenset[tuple[tuple[int, ...], tuple[int, ...], Fraction]]:
        return frozenset((t.outcomes, t.settings, t.weight) for t in self.terms)

    def same_terms(self, other: "BellInequality") -> bool:
        """Equality of scenario, bound and term set, ignoring term order."""
        return (
            self.scenario == other.scenario
            and self.classical_bound == other.classical_bound
            and self.term_set() == other.term_set()
        )

    @property
    def max_weight(self) -> Fraction:
        return max((t.weight for t in self.terms), default=Fraction(0))

    def __str__(self) -> str:
        lhs = " + ".join(str(t) for t in self.terms) if self.terms else "0"
        return f"{lhs} <= {self.classical_bound}"


@dataclass(frozen=True)
class DeterministicStrategy:
    """Per party, the outcome returned for each setting."""

    tables: tuple[tuple[int, ...], ...]

    def output(self, party: int, setting: int) -> int:
        return self.tables[party][setting]

    def satisfies(self, term: BellTerm) -> bool:
        return all(
            table[x] == a for table, x, a in zip(self.tables, term.settings, term.outcomes, strict=True)
        )


@dataclass(frozen=True)
class Box:
    """Full table p(a|x) in ``Scenario.index`` order, exact or floating."""

    scenario: Scenario
    values: tuple[Number, ...]
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.scenario.table_size:
            raise ValidationError(
                f"box has {len(self.values)} entries, scenario {self.scenario} needs {self.scenario.table_size}"
            )

    def p(self, a: Sequence[int], x: Sequence[int]) -> Number:
        return self.values[self.scenario.index(a, x)]

    def constraint_defects(self) -> list[Number]:
        """Residual of every normalization and no-signalling row."""
        return [
            sum(coef * self.values[k] for k, coef in row.items()) - rhs
            for row, rhs in constraint_rows(self.scenario)
        ]

    def is_nonnegative(self, tol: float = 0.0) -> bool:
        return min(self.values) >= -tol

    def is_valid(self, tol: float = 0.0) -> bool:
        """Nonnegative, normalized and no-signalling within ``tol`` (exactly for tol = 0)."""
        return self.is_nonnegative(tol) and all(abs(d) <= tol for d in self.constraint_defects())


def constraint_rows(scenario: Scenario) -> list[tuple[dict[int, int], int]]:
    """
    Equality rows defining the no-signalling polytope's affine hull.

    One normalization row per setting tuple, then for every party i, every
    (x_{-i}, a_{-i}) and every x_i >= 1 the marginal at x_i equals the
    marginal at x_i = 0.

    Returns:
        List of (sparse coefficients by table index, right-hand side)
    """
    rows: list[tuple[dict[int, int], int]] = []
    outcomes = scenario.outcomes()
    for x in scenario.settings():
        rows.append(({scenario.index(a, x): 1 for a in outcomes}, 1))

    for party, m in enumerate(scenario.settings_per_party):
        if m == 1:
            continue
        for x in scenario.settings():
            if x[party] != 0:
                continue
            for a in outcomes:
                if a[party] != 0:
                    continue
                for other in range(1, m):
                    x_other = x[:party] + (other,) + x[party + 1:]
                    row: dict[int, int] = {}
                    for bit in (0, 1):
                        a_bit = a[:party] + (bit,) + a[party + 1:]
                        row[scenario.index(a_bit, x)] = 1
                        row[scenario.index(a_bit, x_other)] = -1
                    rows.append((row, 0))
    return rows


def build_inequality(
    S: ProductVectorSet, weights: Sequence[Fraction | int | str] | None = None
) -> BellInequality:
    """
    Construct the Bell inequality of an orthogonal product-vector set.

    Args:
        S: A valid set
        weights: One weight in [0, 1] per vector, all 1 when omitted

    Returns:
        The inequality with its exhaustively computed classical bound

    Raises:
        ValidationError: If the set or the weights are invalid
    """
    validate_set(S)
    if weights is None:
        weights = [Fraction(1)] * len(S)
    if len(weights) != len(S):
        raise ValidationError(f"{len(weights)} weights given for {len(S)} vectors")

    setting_of = [
        {basis: k for k, basis in enumerate(basis_order(S, party))} for party in range(S.parties)
    ]
    scenario = Scenario(S.parties, tuple(len(order) for order in setting_of))
    terms = tuple(
        BellTerm(
            outcomes=tuple(lv.element for lv in v.locals),
            settings=tuple(setting_of[i][lv.basis] for i, lv in enumerate(v.locals)),
            weight=Fraction(q),
        )
        for v, q in zip(S.vectors, weights, strict=True)
    )
    draft = BellInequality(scenario, terms, Fraction(0))
    inequality = BellInequality(scenario, terms, classical_bound(draft))
    logger.info(f"built {len(terms)}-term inequality on scenario {scenario}")
    return inequality


def strategies(scenario: Scenario) -> Iterator[DeterministicStrategy]:
    """All deterministic strategies, party 1 varying slowest."""
    per_party = [list(itertools.product((0, 1), repeat=m)) for m in scenario.settings_per_party]
    for tables in itertools.product(*per_party):
        yield DeterministicStrategy(tables)


def strategy_box(strategy: DeterministicStrategy, scenario: Scenario) -> Box:
    """0/1 box p(a|x) = prod_i [a_i = s_i(x_i)]."""
    values = [0] * scenario.table_size
    for x in scenario.settings():
        a = tuple(strategy.output(i, xi) for i, xi in enumerate(x))
        values[scenario.index(a, x)] = 1
    return Box(scenario, tuple(Fraction(v) for v in values), exact=True)


def enumerate_strategies(scenario: Scenario) -> Iterator[tuple[DeterministicStrategy, Box]]:
    """Every deterministic strategy with its induced box."""
    for strategy in strategies(scenario):
        yield strategy, strategy_box(strategy, scenario)


def strategy_value(B: BellInequality, strategy: DeterministicStrategy) -> Fraction:
    return sum((t.weight for t in B.terms if strategy.satisfies(t)), Fraction(0))


def classical_bound(B: BellInequality) -> Fraction:
    """Exact maximum of the functional over deterministic strategies."""
    if not B.terms:
        return Fraction(0)
    return max(strategy_value(B, s) for s in strategies(B.scenario))


def saturating_strategies(B: BellInequality) -> list[DeterministicStrategy]:
    """Strategies reaching the stored classical bound."""
    return [s for s in strategies(B.scenario) if strategy_value(B, s) == B.classical_bound]


def evaluate(B: BellInequality, box: Box) -> Number:
    """
    Value of the Bell functional on a box.

    Raises:
        ScenarioMismatchError: If the box belongs to another scenario
    """
    if box.scenario != B.scenario:
        raise ScenarioMismatchError(
            f"inequality scenario {B.scenario} does not match box scenario {box.scenario}"
        )
    total: Number = Fraction(0) if box.exact else 0.0
    for t in B.terms:
        p = box.p(t.outcomes, t.settings)
        total += t.weight * p if box.exact else float(t.weight) * float(p)
    return total


def terms_pairwise_exclusive(B: BellInequality) -> bool:
    """Every two terms share a party with equal setting and different outcome."""
    return all(
        any(xs == xt and as_ != at for xs, xt, as_, at in zip(s.settings, t.settings, s.outcomes, t.outcomes, strict=True))
        for s, t in itertools.combinations(B.terms, 2)
    )


def uniform_box(scenario: Scenario) -> Box:
    value = Fraction(1, 2**scenario.parties)
    return Box(scenario, (value,) * scenario.table_size, exact=True)


def scale_box(box: Box, factor: Real) -> Box:
    """Multiply every entry; used to check linearity of ``evaluate``."""
    return Box(box.scenario, tuple(v * factor for v in box.values), exact=box.exact)


def mix_boxes(left: Box, right: Box, weight: Fraction) -> Box:
    """Convex combination weight * left + (1 - weight) * right."""
    if left.scenario != right.scenario:
        raise ScenarioMismatchError("cannot mix boxes of different scenarios")
    values = tuple(weight * u + (1 - weight) * v for u, v in zip(left.values, right.values, strict=True))
    return Box(left.scenario, values, exact=left.exact and right.exact)


def product_box(left: Box, right: Box) -> Box:
    """Box of independent parties: p(a a'|x x') = p(a|x) p(a'|x')."""
    scenario = Scenario(
        left.scenario.parties + right.scenario.parties,
        left.scenario.settings_per_party + right.scenario.settings_per_party,
    )
    values: list[Number] = [0] * scenario.table_size
    for x in left.scenario.settings():
        for y in right.scenario.settings():
            for a in left.scenario.outcomes():
                pa = left.p(a, x)
                for b in right.scenario.outcomes():
                    values[scenario.index(a + b, x + y)] = pa * right.p(b, y)
    return Box(scenario, tuple(values), exact=left.exact and right.exact)


def product_inequality(left: BellInequality, right: BellInequality) -> BellInequality:
    """
    Inequality on the joined parties whose terms are all concatenations.

    Pairwise-exclusive factors give pairwise-exclusive products, whose
    classical bound is the largest weight; otherwise strategies are enumerated.
    """
    scenario = Scenario(
        left.scenario.parties + right.scenario.parties,
        left.scenario.settings_per_party + right.scenario.settings_per_party,
    )
    terms = tuple(
        BellTerm(s.outcomes + t.outcomes, s.settings + t.settings, s.weight * t.weight)
        for s in left.terms
        for t in right.terms
    )
    draft = BellInequality(scenario, terms, Fraction(0))
    if terms_pairwise_exclusive(left) and terms_pairwise_exclusive(right):
        bound = draft.max_weight
    else:
        bound = classical_bound(draft)
    return BellInequality(scenario, terms, bound)
