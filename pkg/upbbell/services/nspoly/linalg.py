"""
Exact and modular rank computations.

``exact_rank`` eliminates over the rationals with sparse rows. The modular
variants run on numpy int64 arrays modulo a prime below 2**31, so every
product of two residues fits in 63 bits. A modular rank never exceeds the
rational rank of an integer matrix: a pivot minor that is nonzero mod p is a
nonzero integer.
"""

import logging
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from ...errors.exceptions import EmptyInputError, LengthMismatchError

logger = logging.getLogger(__name__)

Scalar = int | Fraction


def exact_rank(rows: Sequence[Sequence[Scalar]]) -> int:
    """
    Rank over the rationals by incremental row echelon reduction.

    Args:
        rows: Matrix rows of equal length

    Returns:
        The exact rank
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        vec = {j: Fraction(v) for j, v in enumerate(row) if v}
        while vec:
            col = min(vec)
            pivot_row = pivots.get(col)
            if pivot_row is None:
                lead = vec[col]
                pivots[col] = {j: v / lead for j, v in vec.items()}
                break
            factor = vec[col]
            for j, v in pivot_row.items():
                updated = vec.get(j, 0) - factor * v
                if updated:
                    vec[j] = updated
                else:
                    vec.pop(j, None)
    return len(pivots)


def _differences(points: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    if not points:
        raise EmptyInputError("affine rank of an empty point set")
    base = points[0]
    for p in points:
        if len(p) != len(base):
            raise LengthMismatchError(len(p), len(base))
    return [[u - v for u, v in zip(p, base, strict=True)] for p in points[1:]]


def affine_rank(points: Sequence[Sequence[Scalar]]) -> int:
    """
    Exact affine dimension of a point set.

    Raises:
        EmptyInputError: If no points are given
        LengthMismatchError: If the points differ in length
    """
    return exact_rank(_differences(points))


def modular_rank(matrix: np.ndarray | Sequence[Sequence[int]], prime: int) -> int:
    """Rank of an integer matrix modulo ``prime`` by Gaussian elimination."""
    A = np.array(matrix, dtype=np.int64)
    if A.size == 0:
        return 0
    A %= prime
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nonzero = np.nonzero(A[rank:, c])[0]
        if nonzero.size == 0:
            continue
        r = rank + int(nonzero[0])
        if r != rank:
            A[[rank, r], c:] = A[[r, rank], c:]
        inverse = pow(int(A[rank, c]), prime - 2, prime)
        A[rank, c:] = (A[rank, c:] * inverse) % prime
        below = np.nonzero(A[rank + 1:, c])[0]
        if below.size:
            idx = rank + 1 + below
            factors = A[idx, c].reshape(-1, 1)
            A[idx, c:] = (A[idx, c:] - (factors * A[rank, c:]) % prime) % prime
        rank += 1
    return rank


def modular_affine_rank(points: Sequence[Sequence[int]], prime: int) -> int:
    """Affine dimension modulo ``prime``; a lower bound for ``affine_rank``."""
    diffs = _differences(points)
    if not diffs:
        return 0
    return modular_rank(diffs, prime)
