"""
Combinatorial model of n-qubit product-vector sets.

A local vector is a (basis, element) pair. At one party two local vectors
are orthogonal iff they share a basis and differ in element; distinct bases
are generic. For qubits these relations are all that orthogonality of
product vectors depends on, so sets, extensions and completions are handled
purely combinatorially here.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from ..config.settings import get_settings
from ..errors.exceptions import (
    BasisIndexOutOfRangeError,
    InvalidSetError,
    LengthMismatchError,
    NonOrthogonalPairError,
    SearchBudgetExceededError,
    TooManyVectorsError,
    ValidationError,
)

logger = logging.getLogger(__name__)

# Ket shorthand: E and F stand for e-bar and f-bar.
KET_SYMBOLS: dict[str, tuple[int, int]] = {
    "0": (0, 0),
    "1": (0, 1),
    "e": (1, 0),
    "E": (1, 1),
    "f": (2, 0),
    "F": (2, 1),
}
_SYMBOL_FOR = {value: key for key, value in KET_SYMBOLS.items()}


class LocalVector(NamedTuple):
    """A local vector: basis index at its party and element bit within the basis."""

    basis: int
    element: int

    def complement(self) -> "LocalVector":
        return LocalVector(self.basis, 1 - self.element)

    def is_orthogonal(self, other: "LocalVector") -> bool:
        return self.basis == other.basis and self.element != other.element

    def __str__(self) -> str:
        return f"{self.basis}:{self.element}"


@dataclass(frozen=True, order=True)
class ProductVector:
    """Ordered tuple of local vectors, one per party."""

    locals: tuple[LocalVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "locals", tuple(LocalVector(*lv) for lv in self.locals))

    def __len__(self) -> int:
        return len(self.locals)

    def __iter__(self) -> Iterator[LocalVector]:
        return iter(self.locals)

    def __getitem__(self, party: int) -> LocalVector:
        return self.locals[party]

    def concat(self, other: "ProductVector") -> "ProductVector":
        return ProductVector(self.locals + other.locals)

    def ket(self) -> str:
        """Shorthand such as ``1Ee``; falls back to ``b:e`` tokens for bases beyond f."""
        if all(tuple(lv) in _SYMBOL_FOR for lv in self.locals):
            return "".join(_SYMBOL_FOR[tuple(lv)] for lv in self.locals)
        return " ".join(str(lv) for lv in self.locals)

    def __str__(self) -> str:
        return f"|{self.ket()}>"


def parse_ket(ket: str) -> ProductVector:
    """Parse the shorthand of ``ProductVector.ket``."""
    try:
        return ProductVector(tuple(LocalVector(*KET_SYMBOLS[symbol]) for symbol in ket))
    except KeyError as e:
        raise ValidationError(f"unknown ket symbol {e.args[0]!r} in '{ket}'") from e


@dataclass(frozen=True)
class ProductVectorSet:
    """Mutually orthogonal product vectors on ``parties`` qubits."""

    parties: int
    bases_per_party: tuple[int, ...]
    vectors: tuple[ProductVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "bases_per_party", tuple(self.bases_per_party))
        object.__setattr__(
            self,
            "vectors",
            tuple(v if isinstance(v, ProductVector) else ProductVector(tuple(v)) for v in self.vectors),
        )

    @classmethod
    def from_vectors(
        cls,
        vectors: Iterable[ProductVector],
        bases_per_party: Sequence[int] | None = None,
        parties: int | None = None,
    ) -> "ProductVectorSet":
        """Build a set, inferring m_i as one past the largest basis index in use."""
        vectors = tuple(v if isinstance(v, ProductVector) else ProductVector(tuple(v)) for v in vectors)
        if parties is None:
            if not vectors:
                raise InvalidSetError("cannot infer the party count of an empty set")
            parties = len(vectors[0])
        if bases_per_party is None:
            bases_per_party = tuple(
                max((v.locals[i].basis for v in vectors if len(v) == parties), default=0) + 1
                for i in range(parties)
            )
        return cls(parties=parties, bases_per_party=tuple(bases_per_party), vectors=vectors)

    @classmethod
    def from_kets(
        cls, kets: Iterable[str], bases_per_party: Sequence[int] | None = None
    ) -> "ProductVectorSet":
        return cls.from_vectors([parse_ket(k) for k in kets], bases_per_party)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self) -> Iterator[ProductVector]:
        return iter(self.vectors)

    def kets(self) -> list[str]:
        return [v.ket() for v in self.vectors]

    def same_vectors(self, other: "ProductVectorSet") -> bool:
        """Equality up to vector order."""
        return self.parties == other.parties and set(self.vectors) == set(other.vectors)

    def with_vector(self, vector: ProductVector) -> "ProductVectorSet":
        bases = tuple(max(m, lv.basis + 1) for m, lv in zip(self.bases_per_party, vector, strict=True))
        return ProductVectorSet(self.parties, bases, self.vectors + (vector,))


class ClassificationKind(str, Enum):
    FULL_BASIS = "FullBasis"
    COMPLETABLE = "CompletableToFullBasis"
    UPB = "UPB"
    EXTENDIBLE_ONLY_TO_UPB = "ExtendibleOnlyToUPB"


@dataclass(frozen=True)
class Classification:
    """Outcome of ``classify`` with its evidence."""

    kind: ClassificationKind
    witness_extension: ProductVector | None = None
    completion: tuple[ProductVector, ...] | None = None

    def __post_init__(self):
        if self.kind is ClassificationKind.EXTENDIBLE_ONLY_TO_UPB:
            if self.witness_extension is None or self.completion is not None:
                raise ValueError("ExtendibleOnlyToUPB needs a witness extension and no completion")
        if self.kind is ClassificationKind.COMPLETABLE and self.completion is None:
            raise ValueError("CompletableToFullBasis needs a completion")


def orthogonal(u: ProductVector, v: ProductVector) -> bool:
    """
    Check orthogonality of two product vectors.

    Args:
        u: First vector
        v: Second vector

    Returns:
        True iff some party holds the same basis with different elements

    Raises:
        LengthMismatchError: If the vectors have different party counts
    """
    if len(u) != len(v):
        raise LengthMismatchError(len(u), len(v))
    return any(a.is_orthogonal(b) for a, b in zip(u.locals, v.locals, strict=True))


def validate_set(S: ProductVectorSet) -> None:
    """
    Check every invariant of a product-vector set.

    Raises:
        InvalidSetError: If the party count or bases are malformed
        LengthMismatchError: If a vector has the wrong number of parties
        BasisIndexOutOfRangeError: If a basis index is not below m_i
        TooManyVectorsError: If there are more than 2^n vectors
        NonOrthogonalPairError: If two members are not orthogonal
    """
    if S.parties < 1:
        raise InvalidSetError(f"party count must be at least 1, got {S.parties}")
    if len(S.bases_per_party) != S.parties:
        raise InvalidSetError(
            f"{len(S.bases_per_party)} basis counts given for {S.parties} parties"
        )
    if any(m < 1 for m in S.bases_per_party):
        raise InvalidSetError("every party needs at least one basis")

    for j, v in enumerate(S.vectors):
        if len(v) != S.parties:
            raise LengthMismatchError(len(v), S.parties)
        for i, lv in enumerate(v.locals):
            if lv.element not in (0, 1):
                raise InvalidSetError(f"vector {j} has element {lv.element} at party {i}")
            if not 0 <= lv.basis < S.bases_per_party[i]:
                raise BasisIndexOutOfRangeError(j, i, lv.basis, S.bases_per_party[i])

    if len(S.vectors) > 2**S.parties:
        raise TooManyVectorsError(len(S.vectors), S.parties)

    for j, k in itertools.combinations(range(len(S.vectors)), 2):
        if not orthogonal(S.vectors[j], S.vectors[k]):
            raise NonOrthogonalPairError(j, k)


def basis_order(S: ProductVectorSet, party: int) -> list[int]:
    """Bases used at a party, in order of first appearance."""
    seen: dict[int, None] = {}
    for v in S.vectors:
        seen.setdefault(v.locals[party].basis, None)
    return list(seen)


def local_partition(S: ProductVectorSet) -> list[list[list[LocalVector]]]:
    """
    Group each party's distinct local vectors by basis.

    Subsets follow the first appearance of their basis in S. Inside a subset
    the element bit fixes the position, so |e> always precedes |e-bar>.

    Args:
        S: A valid set

    Returns:
        Per party, the list of local subsets
    """
    partition = []
    for party in range(S.parties):
        present = {v.locals[party] for v in S.vectors}
        partition.append(
            [
                [LocalVector(b, e) for e in (0, 1) if LocalVector(b, e) in present]
                for b in basis_order(S, party)
            ]
        )
    return partition


def _party_options(S: ProductVectorSet, party: int) -> list[tuple[LocalVector, int, bool]]:
    """Candidate local values at a party with the bitmask of members each one covers."""
    options = []
    for b in basis_order(S, party):
        for e in (0, 1):
            lv = LocalVector(b, e)
            mask = 0
            for j, v in enumerate(S.vectors):
                if v.locals[party].is_orthogonal(lv):
                    mask |= 1 << j
            options.append((lv, mask, False))
    options.append((LocalVector(S.bases_per_party[party], 0), 0, True))
    return options


def extension_candidates(S: ProductVectorSet) -> list[ProductVector]:
    """
    Enumerate every product vector orthogonal to all members of S.

    Per party the local value is either an element of a basis already used
    there or a fresh generic vector, materialized as element 0 of a new basis
    index m_i. A combination is kept iff every member is complemented at
    some party.

    Args:
        S: A valid set

    Returns:
        Candidates in a deterministic order, those with fewer fresh entries first
    """
    full = (1 << len(S.vectors)) - 1
    options = [_party_options(S, party) for party in range(S.parties)]

    reachable = [0] * (S.parties + 1)
    for party in range(S.parties - 1, -1, -1):
        union = 0
        for _, mask, _ in options[party]:
            union |= mask
        reachable[party] = reachable[party + 1] | union

    found: list[tuple[int, ProductVector]] = []

    def descend(party: int, covered: int, chosen: list[LocalVector], fresh: int) -> None:
        if covered | reachable[party] != full:
            return
        if party == S.parties:
            found.append((fresh, ProductVector(tuple(chosen))))
            return
        for lv, mask, is_fresh in options[party]:
            chosen.append(lv)
            descend(party + 1, covered | mask, chosen, fresh + is_fresh)
            chosen.pop()

    descend(0, 0, [], 0)
    found.sort(key=lambda item: item[0])
    return [vector for _, vector in found]


class _CompletionSearch:
    """Depth-first completion towards 2^n vectors with a node cap."""

    def __init__(self, target: int, cap: int):
        self.target = target
        self.cap = cap
        self.nodes = 0
        self.dead: set[frozenset[ProductVector]] = set()

    def run(self, S: ProductVectorSet) -> list[ProductVector] | None:
        self.nodes += 1
        if self.nodes > self.cap:
            raise SearchBudgetExceededError(self.nodes, self.cap)
        if len(S) == self.target:
            return []
        key = frozenset(S.vectors)
        if key in self.dead:
            return None
        for candidate in extension_candidates(S):
            rest = self.run(S.with_vector(candidate))
            if rest is not None:
                return [candidate, *rest]
        self.dead.add(key)
        return None


def classify(S: ProductVectorSet, node_cap: int | None = None) -> Classification:
    """
    Classify a set as full basis, completable, UPB or extendible only to a UPB.

    Args:
        S: The set to classify
        node_cap: Node cap for the completion search (defaults to settings)

    Returns:
        The classification with a completion or a witness extension

    Raises:
        SearchBudgetExceededError: If the completion search exceeds the cap
    """
    validate_set(S)
    target = 2**S.parties
    if len(S) == target:
        return Classification(ClassificationKind.FULL_BASIS)

    candidates = extension_candidates(S)
    if not candidates:
        return Classification(ClassificationKind.UPB)

    cap = node_cap if node_cap is not None else get_settings().search_node_cap
    search = _CompletionSearch(target, cap)
    completion = search.run(S)
    logger.debug(f"completion search visited {search.nodes} nodes")
    if completion is not None:
        return Classification(ClassificationKind.COMPLETABLE, completion=tuple(completion))
    return Classification(ClassificationKind.EXTENDIBLE_ONLY_TO_UPB, witness_extension=candidates[0])


def tensor_product(U1: ProductVectorSet, U2: ProductVectorSet) -> ProductVectorSet:
    """All concatenations of a U1 vector with a U2 vector, U2's bases kept on the appended parties."""
    return ProductVectorSet(
        parties=U1.parties + U2.parties,
        bases_per_party=U1.bases_per_party + U2.bases_per_party,
        vectors=tuple(u.concat(v) for u in U1.vectors for v in U2.vectors),
    )


def canonical_form(S: ProductVectorSet) -> tuple:
    """
    Lexicographically minimal encoding over party permutations, per-party
    basis relabelings and per-basis element flips.

    The group is enumerated exhaustively, which is fine for the small party
    and basis counts the UPB search runs at.
    """
    best: tuple | None = None
    for perm in itertools.permutations(range(S.parties)):
        per_party = []
        for old in perm:
            m = S.bases_per_party[old]
            per_party.append(
                [
                    (relabel, flips)
                    for relabel in itertools.permutations(range(m))
                    for flips in itertools.product((0, 1), repeat=m)
                ]
            )
        bases = tuple(S.bases_per_party[old] for old in perm)
        for choice in itertools.product(*per_party):
            encoded = sorted(
                tuple(
                    (relabel[v.locals[old].basis], v.locals[old].element ^ flips[v.locals[old].basis])
                    for old, (relabel, flips) in zip(perm, choice, strict=True)
                )
                for v in S.vectors
            )
            key = (bases, tuple(encoded))
            if best is None or key < best:
                best = key
    assert best is not None
    return best


def canonical_set(S: ProductVectorSet) -> ProductVectorSet:
    """The set spelled out by ``canonical_form``."""
    bases, encoded = canonical_form(S)
    return ProductVectorSet(len(bases), bases, tuple(ProductVector(v) for v in encoded))


def search_upbs(
    n: int, m_max: int, size: int, budget: int | None = None
) -> Iterator[ProductVectorSet]:
    """
    Stream pairwise-orthogonal UPBs of a given size, one per symmetry class.

    The first vector is fixed to all-(0:0), which every class can be relabeled
    to contain; the rest are chosen in increasing universe order.

    Args:
        n: Party count, at least 3
        m_max: Bases available per party
        size: Target cardinality, below 2^n
        budget: Node cap (defaults to settings)

    Yields:
        Canonical representatives of the UPB classes found

    Raises:
        ValidationError: If the parameters are out of range
        SearchBudgetExceededError: If the search exceeds its cap
    """
    if n < 3 or not 0 < size < 2**n or m_max < 1:
        raise ValidationError(
            "search needs n >= 3, 0 < size < 2^n and m_max >= 1",
            details={"n": n, "size": size, "m_max": m_max},
        )
    cap = budget if budget is not None else get_settings().search_node_cap
    values = [LocalVector(b, e) for b in range(m_max) for e in (0, 1)]
    universe = [ProductVector(locals_) for locals_ in itertools.product(values, repeat=n)]
    later_orthogonal = []
    for j, u in enumerate(universe):
        mask = 0
        for k in range(j + 1, len(universe)):
            if orthogonal(u, universe[k]):
                mask |= 1 << k
        later_orthogonal.append(mask)

    seen: set[tuple] = set()
    nodes = 0
    logger.info(f"searching {n}-qubit UPBs of size {size} over {m_max} bases per party")

    def descend(chosen: list[int], allowed: int) -> Iterator[ProductVectorSet]:
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise SearchBudgetExceededError(nodes, cap)
        if len(chosen) == size:
            S = ProductVectorSet(n, (m_max,) * n, tuple(universe[j] for j in chosen))
            if extension_candidates(S):
                return
            key = canonical_form(S)
            if key not in seen:
                seen.add(key)
                yield canonical_set(S)
            return
        if allowed.bit_count() < size - len(chosen):
            return
        rest = allowed
        while rest:
            low = rest & -rest
            j = low.bit_length() - 1
            rest ^= low
            yield from descend(chosen + [j], allowed & later_orthogonal[j] & ~((low << 1) - 1))

    yield from descend([0], later_orthogonal[0])
    logger.info(f"search finished after {nodes} nodes with {len(seen)} classes")
