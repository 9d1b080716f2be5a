"""
Exact rational simplex with Bland's rule.

Problems are in equality form: maximize c.x subject to A x = b, x >= 0.
The caller supplies a known feasible vertex. Gauss-Jordan elimination that
pivots on the vertex's support columns first yields a feasible basis
directly, so there is no phase one. The tableau is then kept in dictionary
form over the nonbasic columns:

    x_B[r] + sum_k T[r][k] x_N[k] = rhs[r]
"""

import logging
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from ...errors.exceptions import InfeasibleError, SolverError, UnboundedError

logger = logging.getLogger(__name__)


@dataclass
class LinearProgram:
    """Sparse equality-form program over ``n_vars`` nonnegative variables."""

    n_vars: int
    rows: list[dict[int, Fraction]]
    rhs: list[Fraction]
    objective: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.rows) != len(self.rhs):
            raise SolverError("row and right-hand side counts differ")
        self.rows = [{j: Fraction(v) for j, v in row.items() if v} for row in self.rows]
        self.rhs = [Fraction(v) for v in self.rhs]
        self.objective = {j: Fraction(v) for j, v in self.objective.items() if v}

    def residuals(self, x: Sequence[Fraction]) -> list[Fraction]:
        return [sum((v * x[j] for j, v in row.items()), Fraction(0)) - b for row, b in zip(self.rows, self.rhs, strict=True)]

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        return len(x) == self.n_vars and min(x, default=0) >= 0 and not any(self.residuals(x))

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * x[j] for j, c in self.objective.items()), Fraction(0))


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    pivots: int


def _initial_basis(
    lp: LinearProgram, start: Sequence[Fraction]
) -> tuple[list[int], list[dict[int, Fraction]], list[Fraction]]:
    """Reduced row echelon form with the start vertex's support basic."""
    rows = [dict(row) for row in lp.rows]
    rhs = list(lp.rhs)
    col_rows: defaultdict[int, set[int]] = defaultdict(set)
    for r, row in enumerate(rows):
        for j in row:
            col_rows[j].add(r)

    support = [j for j in range(lp.n_vars) if start[j] != 0]
    priority = support + [j for j in range(lp.n_vars) if start[j] == 0]
    free_rows = set(range(len(rows)))
    basic_row: dict[int, int] = {}

    for c in priority:
        candidates = [r for r in col_rows[c] if r in free_rows]
        if not candidates:
            continue
        r = min(candidates, key=lambda k: (len(rows[k]), k))
        lead = rows[r][c]
        if lead != 1:
            rows[r] = {j: v / lead for j, v in rows[r].items()}
            rhs[r] /= lead
        free_rows.discard(r)
        basic_row[c] = r
        for other in list(col_rows[c]):
            if other == r:
                continue
            factor = rows[other][c]
            target = rows[other]
            for j, v in rows[r].items():
                updated = target.get(j, 0) - factor * v
                if updated:
                    if j not in target:
                        col_rows[j].add(other)
                    target[j] = updated
                else:
                    target.pop(j, None)
                    col_rows[j].discard(other)
            rhs[other] -= factor * rhs[r]

    for r in free_rows:
        if rhs[r] != 0:
            raise InfeasibleError("equality system is inconsistent", details={"row": r})
    missing = [j for j in support if j not in basic_row]
    if missing:
        raise SolverError("start point is not a vertex", details={"columns": missing[:10]})

    order = sorted(basic_row.items(), key=lambda item: item[1])
    basis = [c for c, _ in order]
    return basis, [rows[r] for _, r in order], [rhs[r] for _, r in order]


def maximize(lp: LinearProgram, start: Sequence[Fraction]) -> LPSolution:
    """
    Maximize the objective from a feasible vertex.

    Entering columns follow Bland's rule (smallest variable index with
    positive reduced cost); ratio-test ties go to the smallest basic index.

    Args:
        lp: The program
        start: A vertex of the feasible region

    Returns:
        The exact optimum, an optimal vertex and the pivot count

    Raises:
        InfeasibleError: If ``start`` is not feasible
        UnboundedError: If the objective is unbounded
        SolverError: If the final point fails exact verification
    """
    start = [Fraction(v) for v in start]
    if not lp.is_feasible(start):
        raise InfeasibleError("start point violates the constraints")

    basis, sparse_rows, rhs = _initial_basis(lp, start)
    in_basis = set(basis)
    nonbasic = [j for j in range(lp.n_vars) if j not in in_basis]
    slot = {j: k for k, j in enumerate(nonbasic)}
    width = len(nonbasic)

    table: list[list[Fraction]] = []
    for row in sparse_rows:
        dense = [Fraction(0)] * width
        for j, v in row.items():
            if j in slot:
                dense[slot[j]] = v
        table.append(dense)

    c = lp.objective
    reduced = [c.get(j, Fraction(0)) for j in nonbasic]
    z = Fraction(0)
    for r, b in enumerate(basis):
        cb = c.get(b)
        if cb:
            z += cb * rhs[r]
            for k, v in enumerate(table[r]):
                if v:
                    reduced[k] -= cb * v

    pivots = 0
    while True:
        entering = None
        for k, d in enumerate(reduced):
            if d > 0 and (entering is None or nonbasic[k] < nonbasic[entering]):
                entering = k
        if entering is None:
            break

        leaving = None
        best_ratio = None
        for r, row in enumerate(table):
            a = row[entering]
            if a > 0:
                ratio = rhs[r] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[leaving])
                ):
                    leaving, best_ratio = r, ratio
        if leaving is None:
            raise UnboundedError(
                "objective is unbounded", details={"column": nonbasic[entering]}
            )

        p = table[leaving][entering]
        new_row = [v / p for v in table[leaving]]
        new_row[entering] = 1 / p
        new_rhs = rhs[leaving] / p
        support = [k for k, v in enumerate(new_row) if v and k != entering]
        for r, row in enumerate(table):
            if r == leaving:
                continue
            f = row[entering]
            if not f:
                continue
            for k in support:
                row[k] -= f * new_row[k]
            row[entering] = -f / p
            rhs[r] -= f * new_rhs
        table[leaving] = new_row
        rhs[leaving] = new_rhs

        d_e = reduced[entering]
        for k in support:
            reduced[k] -= d_e * new_row[k]
        reduced[entering] = -d_e / p
        z += d_e * new_rhs

        basis[leaving], nonbasic[entering] = nonbasic[entering], basis[leaving]
        pivots += 1
        if pivots % 500 == 0:
            logger.debug(f"simplex pivot {pivots}, objective {z}")

    x = [Fraction(0)] * lp.n_vars
    for r, b in enumerate(basis):
        x[b] = rhs[r]
    if not lp.is_feasible(x):
        raise SolverError("optimal point fails exact verification")
    if lp.value(x) != z:
        raise SolverError("tracked objective disagrees with the optimal point")
    logger.debug(f"simplex finished after {pivots} pivots at {z}")
    return LPSolution(value=z, x=tuple(x), pivots=pivots)


def minimize(lp: LinearProgram, start: Sequence[Fraction]) -> LPSolution:
    """Minimize by maximizing the negated objective."""
    negated = LinearProgram(lp.n_vars, lp.rows, lp.rhs, {j: -v for j, v in lp.objective.items()})
    solution = maximize(negated, start)
    return LPSolution(value=-solution.value, x=solution.x, pivots=solution.pivots)
