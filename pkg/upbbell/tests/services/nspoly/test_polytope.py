"""Tests for the no-signalling polytope and tightness certificates."""

from fractions import Fraction

import pytest

from upbbell.errors.exceptions import ClassicalBoundMismatchError
from upbbell.models.reports import TightnessVerdict
from upbbell.services import catalog
from upbbell.services.bellgen import BellInequality, BellTerm, Scenario, evaluate, strategies
from upbbell.services.gyni import gyni_inequality
from upbbell.services.nspoly import (
    affine_rank,
    collins_gisin_vector,
    is_tight,
    is_trivial,
    ns_maximum,
    ns_maximum_with_pivots,
    ns_minimum,
    polytope_dimension,
)
from upbbell.services.pvset import ClassificationKind


def _entry_params(names, largest_fast_table=256):
    """Catalog entries, marked slow when the probability table is large."""
    return [
        pytest.param(name, marks=pytest.mark.slow)
        if catalog.get(name).inequality.scenario.table_size > largest_fast_table
        else name
        for name in names
    ]


@pytest.fixture
def single_term():
    """p(00|00) <= 1."""
    return BellInequality(Scenario(2, (1, 1)), (BellTerm((0, 0), (0, 0)),), Fraction(1))


class TestPolytopeDimension:
    """d = prod(m_i + 1) - 1."""

    @pytest.mark.parametrize(
        "m, d",
        [((1,), 1), ((2, 2, 2), 26), ((2, 2, 2, 3), 107)],
    )
    def test_formula(self, m, d):
        assert polytope_dimension(Scenario(len(m), m)) == d

    @pytest.mark.parametrize("m", [(2, 2, 2), (1, 2), (3, 2)])
    def test_matches_strategy_rank(self, m):
        scenario = Scenario(len(m), m)
        points = [collins_gisin_vector(s, scenario) for s in strategies(scenario)]
        assert len(points[0]) == polytope_dimension(scenario)
        assert affine_rank(points) == polytope_dimension(scenario)


class TestNsMaximum:
    """Exact no-signalling optima."""

    def test_gyni_three(self):
        B = gyni_inequality(3)
        value, box = ns_maximum(B)
        assert value == Fraction(4, 3)
        assert box.is_valid()
        assert evaluate(B, box) == value

    def test_nwe_inequality(self):
        B = catalog.get("nwe3").inequality
        value, _ = ns_maximum(B)
        assert value == 1

    def test_table_inequality(self):
        value, _ = ns_maximum(catalog.get("u1").inequality)
        assert value == Fraction(4, 3)

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["u2", "u3", "u4", "u5", "u6", "u7", "u8", "u9", "u10"])
    def test_every_table_inequality(self, name):
        value, _ = ns_maximum(catalog.get(name).inequality)
        assert value == Fraction(4, 3)

    def test_pivots_reported(self):
        value, _, pivots = ns_maximum_with_pivots(gyni_inequality(3))
        assert value == Fraction(4, 3)
        assert pivots > 0

    def test_minimum(self):
        value, box = ns_minimum(gyni_inequality(3))
        assert value == 0
        assert box.is_valid()

    @pytest.mark.slow
    def test_gyni_five_is_bounded_by_two(self):
        value, _ = ns_maximum(gyni_inequality(5))
        assert 1 < value <= 2


class TestIsTrivial:
    """Inequalities without no-signalling violation."""

    def test_nwe_inequality(self):
        assert is_trivial(catalog.get("nwe3").inequality)

    def test_gyni_three(self):
        assert not is_trivial(gyni_inequality(3))

    def test_single_term(self, single_term):
        assert is_trivial(single_term)
        assert not is_trivial(single_term, strict=True)

    @pytest.mark.parametrize("name", _entry_params(catalog.list_names()))
    def test_catalog_entries(self, name):
        """Bases and completable sets give trivial inequalities; UPBs never do."""
        entry = catalog.get(name)
        expected = entry.classification in (ClassificationKind.FULL_BASIS, ClassificationKind.COMPLETABLE)
        assert is_trivial(entry.inequality) is expected


class TestIsTight:
    """Facet certificates."""

    def test_gyni_three(self):
        certificate = is_tight(gyni_inequality(3))
        assert certificate.verdict is TightnessVerdict.TIGHT
        assert certificate.affine_dimension == 25
        assert certificate.polytope_dimension == 26
        assert certificate.saturating_count == 32
        assert certificate.method == "modular"

    def test_small_prime_falls_back_to_exact(self):
        certificate = is_tight(gyni_inequality(3), prime=3)
        assert certificate.verdict is TightnessVerdict.TIGHT
        assert certificate.affine_dimension == 25

    def test_nwe_inequality_is_trivial(self):
        certificate = is_tight(catalog.get("nwe3").inequality)
        assert certificate.verdict is TightnessVerdict.TRIVIAL
        assert certificate.saturating_count == certificate.strategy_count == 64

    def test_u10_is_not_tight(self):
        certificate = is_tight(catalog.get("u10").inequality)
        assert certificate.verdict is TightnessVerdict.NOT_TIGHT
        assert certificate.affine_dimension < certificate.polytope_dimension - 1

    def test_saturating_strategies_listed(self):
        certificate = is_tight(gyni_inequality(3))
        assert len(certificate.saturating_strategies) == certificate.saturating_count
        assert all(len(tables) == 3 for tables in certificate.saturating_strategies)

    def test_wrong_bound_rejected(self):
        B = gyni_inequality(3)
        with pytest.raises(ClassicalBoundMismatchError, match="stated bound 2/1 is not the classical bound 1/1"):
            is_tight(BellInequality(B.scenario, B.terms, Fraction(2)))

    def test_bound_below_the_maximum_rejected(self):
        B = gyni_inequality(3)
        with pytest.raises(ClassicalBoundMismatchError):
            is_tight(BellInequality(B.scenario, B.terms, Fraction(1, 2)))
