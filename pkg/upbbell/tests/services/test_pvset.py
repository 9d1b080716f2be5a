"""Tests for the combinatorial product-vector model."""

from unittest.mock import patch

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from upbbell.errors.exceptions import (
    BasisIndexOutOfRangeError,
    LengthMismatchError,
    NonOrthogonalPairError,
    SearchBudgetExceededError,
    TooManyVectorsError,
    ValidationError,
)
from upbbell.services.extend import standard_basis
from upbbell.services.gyni import gyni_vectors
from upbbell.services.pvset import (
    Classification,
    ClassificationKind,
    LocalVector,
    ProductVector,
    ProductVectorSet,
    _CompletionSearch,
    canonical_form,
    canonical_set,
    classify,
    extension_candidates,
    local_partition,
    orthogonal,
    parse_ket,
    search_upbs,
    tensor_product,
    validate_set,
)

THREE_QUBIT_UNIVERSE = [
    ProductVector((LocalVector(b0, e0), LocalVector(b1, e1), LocalVector(b2, e2)))
    for b0 in (0, 1)
    for e0 in (0, 1)
    for b1 in (0, 1)
    for e1 in (0, 1)
    for b2 in (0, 1)
    for e2 in (0, 1)
]


@st.composite
def orthogonal_sets(draw):
    """Greedy pairwise-orthogonal 3-qubit sets over two bases per party."""
    order = draw(st.permutations(THREE_QUBIT_UNIVERSE))
    size = draw(st.integers(min_value=1, max_value=6))
    chosen: list[ProductVector] = []
    for v in order:
        if all(orthogonal(v, u) for u in chosen):
            chosen.append(v)
        if len(chosen) == size:
            break
    return ProductVectorSet(3, (2, 2, 2), tuple(chosen))


class TestKets:
    """Ket shorthand and local vectors."""

    def test_parse_ket(self):
        assert parse_ket("1Ee") == ProductVector(((0, 1), (1, 1), (1, 0)))
        assert parse_ket("fF") == ProductVector(((2, 0), (2, 1)))

    def test_ket_falls_back_to_tokens(self):
        assert ProductVector(((3, 0), (0, 1))).ket() == "3:0 0:1"
        assert str(parse_ket("e1")) == "|e1>"

    def test_unknown_symbol(self):
        with pytest.raises(ValidationError, match="unknown ket symbol"):
            parse_ket("0x1")

    def test_local_orthogonality(self):
        assert LocalVector(1, 0).is_orthogonal(LocalVector(1, 1))
        assert not LocalVector(1, 0).is_orthogonal(LocalVector(0, 1))
        assert LocalVector(2, 1).complement() == LocalVector(2, 0)


class TestOrthogonal:
    """Orthogonality of product vectors."""

    def test_shifts_members(self):
        assert orthogonal(parse_ket("000"), parse_ket("1Ee"))

    def test_identical_vectors(self):
        assert not orthogonal(parse_ket("000"), parse_ket("000"))

    def test_distinct_bases_are_never_orthogonal(self):
        u = ProductVector(((1, 0), (0, 0)))
        v = ProductVector(((0, 1), (0, 0)))
        assert not orthogonal(u, v)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            orthogonal(parse_ket("00"), parse_ket("000"))

    @given(st.sampled_from(THREE_QUBIT_UNIVERSE), st.sampled_from(THREE_QUBIT_UNIVERSE))
    def test_symmetric(self, u, v):
        assert orthogonal(u, v) == orthogonal(v, u)


class TestValidateSet:
    """Set invariants."""

    def test_shifts_is_valid(self, shifts):
        validate_set(shifts)
        assert shifts.bases_per_party == (2, 2, 2)

    def test_duplicate_vector(self, shifts):
        doubled = shifts.with_vector(parse_ket("1Ee"))
        with pytest.raises(NonOrthogonalPairError) as exc_info:
            validate_set(doubled)
        assert exc_info.value.pair == (1, 4)

    def test_too_many_vectors(self):
        S = ProductVectorSet(3, (1, 1, 1), (parse_ket("000"),) * 9)
        with pytest.raises(TooManyVectorsError):
            validate_set(S)

    def test_basis_out_of_range(self):
        S = ProductVectorSet(3, (1, 1, 1), (parse_ket("e00"),))
        with pytest.raises(BasisIndexOutOfRangeError, match="basis 1 at party 0"):
            validate_set(S)

    def test_wrong_length(self):
        S = ProductVectorSet(3, (1, 1, 1), (parse_ket("00"),))
        with pytest.raises(LengthMismatchError):
            validate_set(S)


class TestLocalPartition:
    """Per-party local subsets."""

    def test_shifts_first_party(self, shifts):
        partition = local_partition(shifts)
        assert partition[0] == [[LocalVector(0, 0), LocalVector(0, 1)], [LocalVector(1, 0), LocalVector(1, 1)]]

    def test_single_vector(self):
        partition = local_partition(ProductVectorSet.from_kets(["00"]))
        assert partition == [[[LocalVector(0, 0)]], [[LocalVector(0, 0)]]]

    def test_nwe_second_party(self, nwe3):
        assert local_partition(nwe3)[1] == [
            [LocalVector(0, 0), LocalVector(0, 1)],
            [LocalVector(1, 0), LocalVector(1, 1)],
        ]


class TestExtensionCandidates:
    """Product vectors orthogonal to a whole set."""

    def test_shifts_has_none(self, shifts):
        assert extension_candidates(shifts) == []

    def test_standard_complements(self):
        candidates = extension_candidates(ProductVectorSet.from_kets(["00", "11"]))
        assert parse_ket("01") in candidates
        assert parse_ket("10") in candidates

    def test_single_vector_count(self):
        """Per party: 0, 1 or a fresh vector; at least one party must hold 1."""
        candidates = extension_candidates(ProductVectorSet.from_kets(["000"]))
        existing = [c for c in candidates if all(lv.basis == 0 for lv in c)]
        assert len(existing) == 7
        assert len(candidates) == 3**3 - 2**3
        assert candidates[: len(existing)] == existing

    @settings(max_examples=60, deadline=None)
    @given(orthogonal_sets())
    def test_candidates_extend_the_set(self, S):
        for candidate in extension_candidates(S):
            validate_set(S.with_vector(candidate))


class TestClassify:
    """Classification of sets."""

    def test_shifts_is_upb(self, shifts):
        assert classify(shifts).kind is ClassificationKind.UPB

    def test_standard_basis_is_full(self):
        assert classify(standard_basis(3)).kind is ClassificationKind.FULL_BASIS

    def test_nwe_is_full(self, nwe3):
        assert classify(nwe3).kind is ClassificationKind.FULL_BASIS

    def test_completable_with_completion(self):
        S = ProductVectorSet.from_kets(["000"])
        result = classify(S)
        assert result.kind is ClassificationKind.COMPLETABLE
        assert len(result.completion) == 7

        completed = S
        for v in result.completion:
            completed = completed.with_vector(v)
        validate_set(completed)
        assert len(completed) == 8

    def test_gyni_four_is_upb(self):
        assert classify(gyni_vectors(4)).kind is ClassificationKind.UPB

    def test_extendible_only_to_upb(self, mocker):
        """A search that finds no completion leaves the first candidate as witness."""
        mocker.patch("upbbell.services.pvset._CompletionSearch.run", return_value=None)
        S = ProductVectorSet.from_kets(["000", "1Ee", "e1E"])
        result = classify(S)
        assert result.kind is ClassificationKind.EXTENDIBLE_ONLY_TO_UPB
        assert result.witness_extension == extension_candidates(S)[0]
        assert result.completion is None

    def test_node_cap(self):
        with pytest.raises(SearchBudgetExceededError) as exc_info:
            classify(ProductVectorSet.from_kets(["000"]), node_cap=1)
        assert exc_info.value.details["cap"] == 1

    def test_classification_invariants(self):
        with pytest.raises(ValueError):
            Classification(ClassificationKind.EXTENDIBLE_ONLY_TO_UPB)
        with pytest.raises(ValueError):
            Classification(ClassificationKind.COMPLETABLE)

    @settings(max_examples=40, deadline=None)
    @given(orthogonal_sets())
    def test_upb_iff_no_candidates(self, S):
        with patch.object(_CompletionSearch, "run", return_value=None):
            kind = classify(S).kind
        assert (kind is ClassificationKind.UPB) == (not extension_candidates(S))


class TestTensorProduct:
    """Tensor products of sets."""

    def test_single_vectors(self):
        product = tensor_product(ProductVectorSet.from_kets(["0"]), ProductVectorSet.from_kets(["0"]))
        assert product.kets() == ["00"]

    def test_shifts_squared_is_upb(self, shifts):
        product = tensor_product(shifts, shifts)
        assert product.parties == 6
        assert len(product) == 16
        assert classify(product).kind is ClassificationKind.UPB

    def test_shifts_with_qubit_basis_is_upb(self, shifts):
        """Any product vector orthogonal to all of Shifts x {0, 1} would extend Shifts."""
        product = tensor_product(shifts, standard_basis(1))
        assert len(product) == 8
        assert extension_candidates(product) == []


class TestCanonicalForm:
    """Deduplication under the relabeling group."""

    def test_relabeled_shifts_agree(self, shifts):
        relabeled = ProductVectorSet.from_kets(["111", "0eE", "E0e", "eE0"])
        assert canonical_form(relabeled) == canonical_form(shifts)

    @settings(max_examples=30, deadline=None)
    @given(orthogonal_sets())
    def test_idempotent(self, S):
        assert canonical_form(canonical_set(S)) == canonical_form(S)


class TestSearchUpbs:
    """Exhaustive UPB search."""

    def test_three_qubits_two_bases(self, shifts):
        found = list(search_upbs(3, 2, 4))
        assert len(found) == 1
        assert canonical_form(found[0]) == canonical_form(shifts)

    def test_single_basis_finds_nothing(self):
        assert list(search_upbs(3, 1, 4)) == []

    def test_parameters_validated(self):
        with pytest.raises(ValidationError):
            list(search_upbs(2, 2, 2))
        with pytest.raises(ValidationError):
            list(search_upbs(3, 2, 8))

    def test_budget(self):
        with pytest.raises(SearchBudgetExceededError):
            list(search_upbs(3, 2, 4, budget=5))

    @pytest.mark.slow
    def test_four_qubits_contains_gyni(self):
        target = canonical_form(gyni_vectors(4))
        assert any(canonical_form(S) == target for S in search_upbs(4, 2, 8))
