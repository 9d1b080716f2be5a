"""Tests for running independent computations concurrently."""

from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction

from upbbell.cli import run
from upbbell.models.reports import TightnessVerdict
from upbbell.services import catalog
from upbbell.services.nspoly import is_tight, ns_maximum
from upbbell.services.pvset import ClassificationKind, classify


class TestConcurrentComputations:
    """Services keep no shared mutable state between calls."""

    def test_concurrent_classification(self):
        names = ["shifts", "nwe3", "u1", "u10", "gyni4"] * 2
        with ThreadPoolExecutor(max_workers=5) as executor:
            futures = {executor.submit(classify, catalog.get(name).vectors): name for name in names}
            kinds = {futures[f]: f.result().kind for f in as_completed(futures)}

        assert kinds["nwe3"] is ClassificationKind.FULL_BASIS
        assert all(kinds[name] is ClassificationKind.UPB for name in ("shifts", "u1", "u10", "gyni4"))

    def test_concurrent_ns_maxima(self):
        names = ["shifts", "u1", "nwe3", "gyni3"]
        with ThreadPoolExecutor(max_workers=4) as executor:
            optima = list(executor.map(lambda n: ns_maximum(catalog.get(n).inequality)[0], names))

        assert optima == [Fraction(4, 3), Fraction(4, 3), Fraction(1), Fraction(4, 3)]

    def test_concurrent_tightness_matches_sequential(self):
        names = ["shifts", "u10", "nwe3"]
        sequential = [is_tight(catalog.get(n).inequality).verdict for n in names]
        with ThreadPoolExecutor(max_workers=3) as executor:
            concurrent = list(executor.map(lambda n: is_tight(catalog.get(n).inequality).verdict, names))

        assert concurrent == sequential == [
            TightnessVerdict.TIGHT,
            TightnessVerdict.NOT_TIGHT,
            TightnessVerdict.TRIVIAL,
        ]

    def test_concurrent_commands(self):
        argv = [["cbound", "catalog:shifts"], ["nsmax", "catalog:u1"], ["nsmax", "catalog:u1", "--expect", "1"]]
        with ThreadPoolExecutor(max_workers=3) as executor:
            codes = list(executor.map(lambda a: run(a).exit_code, argv))

        assert codes == [0, 0, 2]
