"""
Growing n-party UPBs to n + 1 parties.

Two sets are joined through a new party: subset j of the first set is
tensored with one element of the new party's j-th basis and subset j of the
second set with the other element. The result is a UPB whenever both inputs
are and subsets with different indices are cross-orthogonal.
"""

import logging
from dataclasses import dataclass
from typing import Literal

from ..errors.exceptions import (
    BasisNotPresentError,
    LengthMismatchError,
    NotAUPBError,
    OrthogonalityRuleViolatedError,
    ValidationError,
)
from .pvset import (
    ClassificationKind,
    LocalVector,
    ProductVector,
    ProductVectorSet,
    basis_order,
    classify,
    orthogonal,
    validate_set,
)

logger = logging.getLogger(__name__)

Position = Literal["front", "back"]


@dataclass(frozen=True)
class CombinePlan:
    """Aligned partitions of two sets and the new party's local vectors per subset."""

    first: tuple[ProductVectorSet, ...]
    second: tuple[ProductVectorSet, ...]
    assignments: tuple[tuple[LocalVector, LocalVector], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "first", tuple(self.first))
        object.__setattr__(self, "second", tuple(self.second))
        if not self.first or len(self.first) != len(self.second):
            raise ValidationError("a plan needs the same positive number of subsets on both sides")
        if self.assignments is None:
            assignments = tuple(
                (LocalVector(j, 0), LocalVector(j, 1)) for j in range(len(self.first))
            )
        else:
            assignments = tuple((LocalVector(*a), LocalVector(*b)) for a, b in self.assignments)
        if len(assignments) != len(self.first):
            raise ValidationError("one pair of new-party vectors is needed per subset")
        bases = [a.basis for a, _ in assignments]
        if len(set(bases)) != len(bases):
            raise ValidationError("each subset pair needs its own basis at the new party")
        for a, b in assignments:
            if not a.is_orthogonal(b):
                raise ValidationError(f"new-party vectors {a} and {b} are not orthogonal")
        object.__setattr__(self, "assignments", assignments)

    @property
    def size(self) -> int:
        return len(self.first)


def replace_basis(
    U: ProductVectorSet, party: int, old_basis: int, new_basis: int | None = None
) -> ProductVectorSet:
    """
    Renumber one basis at a party to a fresh index.

    Args:
        U: The set
        party: 0-based party
        old_basis: Basis in use at that party
        new_basis: Fresh index (defaults to m_party)

    Raises:
        BasisNotPresentError: If old_basis is not used at the party
        ValidationError: If new_basis is already in use there
    """
    used = basis_order(U, party)
    if old_basis not in used:
        raise BasisNotPresentError(
            f"basis {old_basis} is not used at party {party}",
            details={"party": party, "basis": old_basis},
        )
    fresh = U.bases_per_party[party] if new_basis is None else new_basis
    if fresh in used:
        raise ValidationError(f"basis {fresh} is already used at party {party}")
    vectors = tuple(
        ProductVector(
            tuple(
                LocalVector(fresh, lv.element) if i == party and lv.basis == old_basis else lv
                for i, lv in enumerate(v.locals)
            )
        )
        for v in U.vectors
    )
    bases = list(U.bases_per_party)
    bases[party] = max(bases[party], fresh + 1)
    return ProductVectorSet(U.parties, tuple(bases), vectors)


def flip_elements(U: ProductVectorSet, party: int) -> ProductVectorSet:
    """Replace every local vector at a party by its orthogonal complement."""
    vectors = tuple(
        ProductVector(tuple(lv.complement() if i == party else lv for i, lv in enumerate(v.locals)))
        for v in U.vectors
    )
    return ProductVectorSet(U.parties, U.bases_per_party, vectors)


def check_plan(plan: CombinePlan) -> None:
    """
    Raises:
        OrthogonalityRuleViolatedError: If first[i] and second[j] are not orthogonal for some i != j
    """
    for i, block in enumerate(plan.first):
        for j, other in enumerate(plan.second):
            if i == j:
                continue
            for u in block.vectors:
                for v in other.vectors:
                    if not orthogonal(u, v):
                        raise OrthogonalityRuleViolatedError(
                            f"subset {i} of the first set meets subset {j} of the second in |{u.ket()}> and |{v.ket()}>",
                            details={"subsets": [i, j]},
                        )


def _same_partition(whole: ProductVectorSet, parts: tuple[ProductVectorSet, ...], name: str) -> None:
    members = [v for part in parts for v in part.vectors]
    if len(members) != len(whole) or set(members) != set(whole.vectors):
        raise ValidationError(f"plan subsets do not partition the {name} set")


def combine(
    U1: ProductVectorSet, U2: ProductVectorSet, plan: CombinePlan, position: Position = "front"
) -> ProductVectorSet:
    """
    Join two n-party sets into an (n + 1)-party set.

    Args:
        U1: First set
        U2: Second set
        plan: Aligned partitions and new-party vectors
        position: Where the new party goes

    Returns:
        The combined, validated set

    Raises:
        LengthMismatchError: If U1 and U2 have different party counts
        OrthogonalityRuleViolatedError: If the plan breaks cross-orthogonality
    """
    if U1.parties != U2.parties:
        raise LengthMismatchError(U1.parties, U2.parties)
    _same_partition(U1, plan.first, "first")
    _same_partition(U2, plan.second, "second")
    check_plan(plan)

    def attach(new: LocalVector, v: ProductVector) -> ProductVector:
        return ProductVector((new, *v.locals)) if position == "front" else ProductVector((*v.locals, new))

    vectors: list[ProductVector] = []
    for (a, b), block, other in zip(plan.assignments, plan.first, plan.second, strict=True):
        vectors.extend(attach(a, v) for v in block.vectors)
        vectors.extend(attach(b, v) for v in other.vectors)

    new_bases = max(a.basis for a, _ in plan.assignments) + 1
    old_bases = tuple(max(m1, m2) for m1, m2 in zip(U1.bases_per_party, U2.bases_per_party, strict=True))
    bases = (new_bases, *old_bases) if position == "front" else (*old_bases, new_bases)
    result = ProductVectorSet(U1.parties + 1, bases, tuple(vectors))
    validate_set(result)
    logger.info(f"combined {len(U1)} + {len(U2)} vectors through {plan.size} new-party bases ({position})")
    return result


def standard_basis(n: int) -> ProductVectorSet:
    """All 2^n computational-basis kets."""
    vectors = tuple(
        ProductVector(tuple(LocalVector(0, (k >> (n - 1 - i)) & 1) for i in range(n))) for k in range(2**n)
    )
    return ProductVectorSet(n, (1,) * n, vectors)


def lift_method1(
    U: ProductVectorSet, companion: ProductVectorSet | str, position: Position = "back"
) -> ProductVectorSet:
    """
    Lift a set by one single-basis party: U with element 0, the companion with element 1.

    Args:
        U: The set to lift, on at least three parties
        companion: A UPB on the same parties, or "fullbasis" for the standard basis
        position: Where the new party goes

    Raises:
        ValidationError: If the inputs are too small or the companion is not a UPB or full basis
        LengthMismatchError: If the party counts differ
    """
    validate_set(U)
    if U.parties < 3:
        raise ValidationError(f"lifting needs at least three parties, got {U.parties}")
    if isinstance(companion, str):
        if companion != "fullbasis":
            raise ValidationError(f"unknown companion '{companion}'")
        companion = standard_basis(U.parties)
    if companion.parties != U.parties:
        raise LengthMismatchError(U.parties, companion.parties)
    kind = classify(companion).kind
    if kind not in (ClassificationKind.UPB, ClassificationKind.FULL_BASIS):
        raise ValidationError(f"companion must be a UPB or a full basis, got {kind.value}")
    plan = CombinePlan(first=(U,), second=(companion,))
    return combine(U, companion, plan, position)


def method2(U: ProductVectorSet, party: int, position: Position = "front") -> ProductVectorSet:
    """
    Combine a UPB with its element-flipped copy, partitioned by the bases at one party.

    Args:
        U: A UPB
        party: 1-based party whose bases index the plan
        position: Where the new party goes

    Raises:
        NotAUPBError: If U is not a UPB
        ValidationError: If the party is out of range
    """
    if not 1 <= party <= U.parties:
        raise ValidationError(f"party {party} outside 1..{U.parties}")
    kind = classify(U).kind
    if kind is not ClassificationKind.UPB:
        raise NotAUPBError(f"method 2 needs a UPB, the set classifies as {kind.value}")
    index = party - 1
    flipped = flip_elements(U, index)
    order = basis_order(U, index)

    def by_basis(S: ProductVectorSet, basis: int) -> ProductVectorSet:
        return ProductVectorSet(
            S.parties, S.bases_per_party, tuple(v for v in S.vectors if v.locals[index].basis == basis)
        )

    plan = CombinePlan(
        first=tuple(by_basis(U, b) for b in order),
        second=tuple(by_basis(flipped, b) for b in order),
    )
    return combine(U, flipped, plan, position)
