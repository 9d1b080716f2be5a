"""
Built-in product-vector sets with their recorded expectations.

Each entry keeps the printed data it was taken from (kets, inequality
terms, scenario) together with explicit corrections for printed typos, so
the corrected values used for computation stay traceable. ``verify``
recomputes every expectation from scratch.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, partial

import pandas as pd

from ..errors.exceptions import UnknownNameError, ValidationError
from ..models.reports import (
    CatalogCheck,
    CatalogEntrySummary,
    CatalogVerification,
    TightnessVerdict,
    format_rational,
)
from .bellgen import BellInequality, BellTerm, Scenario, build_inequality
from .extend import Position, method2
from .gyni import gyni_inequality, gyni_vectors
from .nspoly import is_tight, ns_maximum
from .pvset import ClassificationKind, ProductVectorSet, classify, validate_set

logger = logging.getLogger(__name__)

FOUR_THIRDS = Fraction(4, 3)


@dataclass(frozen=True)
class Correction:
    """A printed value replaced by its corrected form."""

    where: str
    printed: str
    corrected: str
    reason: str


@dataclass(frozen=True)
class CatalogEntry:
    """A validated set with the classification, inequality and values it is known for."""

    name: str
    vectors: ProductVectorSet
    classification: ClassificationKind
    inequality: BellInequality
    ns_maximum: Fraction | None
    tightness: TightnessVerdict | None
    provenance: str
    printed_terms: tuple[str, ...] = ()
    corrections: tuple[Correction, ...] = field(default_factory=tuple)

    def summary(self) -> CatalogEntrySummary:
        return CatalogEntrySummary(
            name=self.name,
            parties=self.vectors.parties,
            size=len(self.vectors),
            scenario=str(self.inequality.scenario),
            classification=self.classification.value,
            ns_maximum=self.ns_maximum,
            tightness=self.tightness.value if self.tightness else None,
            provenance=self.provenance,
        )


def _apply(values: list[str], corrections: tuple[Correction, ...], where: str) -> list[str]:
    fixes = {c.printed: c.corrected for c in corrections if c.where == where}
    return [fixes.get(v, v) for v in values]


def _parse_term(label: str) -> BellTerm:
    a, x = label.split("|")
    return BellTerm(tuple(int(c) for c in a), tuple(int(c) for c in x))


def _printed_inequality(
    scenario: str, terms: list[str], corrections: tuple[Correction, ...]
) -> BellInequality:
    """Unit-weight inequality with bound 1 from printed 'a|x' labels."""
    (fixed_scenario,) = _apply([scenario], corrections, "scenario")
    m = tuple(int(v) for v in fixed_scenario.split(","))
    labels = _apply(terms, corrections, "term")
    return BellInequality(Scenario(len(m), m), tuple(_parse_term(t) for t in labels), Fraction(1))


def _kets(kets: list[str], corrections: tuple[Correction, ...]) -> ProductVectorSet:
    return ProductVectorSet.from_kets(_apply(kets, corrections, "ket"))


_BUILDERS: dict[str, Callable[[], CatalogEntry]] = {}


def _register(name: str):
    def decorator(builder: Callable[[], CatalogEntry]) -> Callable[[], CatalogEntry]:
        if name in _BUILDERS:
            raise ValueError(f"catalog entry '{name}' registered twice")
        _BUILDERS[name] = builder
        return builder

    return decorator


def _table_entry(
    name: str,
    kets: list[str],
    scenario: str,
    terms: list[str],
    tightness: TightnessVerdict,
    provenance: str,
    corrections: tuple[Correction, ...] = (),
) -> CatalogEntry:
    return CatalogEntry(
        name=name,
        vectors=_kets(kets, corrections),
        classification=ClassificationKind.UPB,
        inequality=_printed_inequality(scenario, terms, corrections),
        ns_maximum=FOUR_THIRDS,
        tightness=tightness,
        provenance=provenance,
        printed_terms=tuple(terms),
        corrections=corrections,
    )


@_register("shifts")
def _shifts() -> CatalogEntry:
    terms = ["000|000", "110|011", "101|110", "011|101"]
    return CatalogEntry(
        name="shifts",
        vectors=ProductVectorSet.from_kets(["000", "1Ee", "e1E", "Ee1"]),
        classification=ClassificationKind.UPB,
        inequality=_printed_inequality("2,2,2", terms, ()),
        ns_maximum=FOUR_THIRDS,
        tightness=TightnessVerdict.TIGHT,
        provenance="Shifts UPB and its three-party inequality",
        printed_terms=tuple(terms),
    )


@_register("nwe3")
def _nwe3() -> CatalogEntry:
    terms = ["000|000", "001|100", "010|001", "011|001", "100|010", "101|100", "110|000", "111|000"]
    corrections = (
        Correction(
            "term",
            "110|000",
            "110|010",
            "|1e-bar 0> has the e basis at party 2, so its setting there is 1",
        ),
    )
    return CatalogEntry(
        name="nwe3",
        vectors=ProductVectorSet.from_kets(["000", "e01", "01e", "01E", "1e0", "E01", "1E0", "111"]),
        classification=ClassificationKind.FULL_BASIS,
        inequality=_printed_inequality("2,2,2", terms, corrections),
        ns_maximum=Fraction(1),
        tightness=TightnessVerdict.TRIVIAL,
        provenance="three-qubit nonlocality-without-entanglement basis; its inequality is trivial",
        printed_terms=tuple(terms),
        corrections=corrections,
    )


@_register("u1")
def _u1() -> CatalogEntry:
    return _table_entry(
        "u1",
        ["0000", "1eE0", "eE10", "E1ee", "0001", "01E1", "1E0E", "0011", "1011"],
        "2,2,2,2",
        ["0000|0000", "1010|0110", "0110|1100", "1100|1011", "0001|0000",
         "0111|0010", "1101|0101", "0011|0000", "1011|0000"],
        TightnessVerdict.TIGHT,
        "four-qubit UPB U_1, tight inequality",
    )


@_register("u2")
def _u2() -> CatalogEntry:
    return _table_entry(
        "u2",
        ["0000", "Ee1e", "e1e1", "E11E", "eeE1", "1EEe", "10eE", "E10E", "e1e0"],
        "2,2,2,3",
        ["0000|0000", "1010|1101", "0101|1010", "1111|1001", "0011|1110",
         "1110|0111", "1001|0011", "1101|1001", "0100|1010"],
        TightnessVerdict.TIGHT,
        "four-qubit UPB U_2, tight inequality",
        (
            Correction(
                "scenario",
                "2,2,2,3",
                "2,2,2,2",
                "every term uses settings 0 and 1 only, as the set's basis counts say",
            ),
        ),
    )


@_register("u3")
def _u3() -> CatalogEntry:
    return _table_entry(
        "u3",
        ["0000", "1eE0", "eE10", "E1ee", "0001", "0011", "1001", "1011", "010E", "11E1"],
        "2,2,2,2",
        ["0000|0000", "1010|0110", "0110|1100", "1100|1011", "0001|0000",
         "0011|0000", "1011|0000", "1001|0000", "0101|0001", "1111|0010"],
        TightnessVerdict.TIGHT,
        "four-qubit UPB U_3, tight inequality",
    )


@_register("u4")
def _u4() -> CatalogEntry:
    return _table_entry(
        "u4",
        ["0000", "1Ee0", "e1E10", "Ee10", "0001", "0011", "0101", "0111", "1001", "1011", "1101", "1111"],
        "2,2,2,2",
        ["0000|0000", "1100|0110", "0110|1010", "1010|1100", "1101|0000", "0001|0000",
         "0011|0000", "0101|0000", "0111|0000", "1001|0000", "1011|0000", "1111|0000"],
        TightnessVerdict.TIGHT,
        "four-qubit UPB U_4 = Shifts x |0> plus the standard basis x |1>, tight inequality",
        (
            Correction("ket", "e1E10", "e1E0", "the set is Shifts x |0> plus the standard basis x |1>"),
            Correction(
                "scenario",
                "2,2,2,2",
                "2,2,2,1",
                "the fourth party only ever uses the standard basis",
            ),
        ),
    )


@_register("u5")
def _u5() -> CatalogEntry:
    return _table_entry(
        "u5",
        ["0000", "1eee", "e1Ef", "0ee1", "101E", "1E0F", "EE1e"],
        "2,2,2,3",
        ["0000|0000", "1000|0111", "0110|1012", "0001|0110", "1011|0001", "1101|0102", "1110|1101"],
        TightnessVerdict.TIGHT,
        "four-qubit UPB U_5, tight inequality",
    )


@_register("u6")
def _u6() -> CatalogEntry:
    return _table_entry(
        "u6",
        ["0000", "1eEe", "eE1E", "E1ef", "0eE1", "1eEE", "e1ee", "EE1F"],
        "2,2,2,3",
        ["0000|0000", "1010|0111", "0111|1101", "1100|1012",
         "0011|0110", "1011|0111", "0100|1011", "1111|1102"],
        TightnessVerdict.TIGHT,
        "four-qubit UPB U_6, tight inequality",
    )


@_register("u7")
def _u7() -> CatalogEntry:
    return _table_entry(
        "u7",
        ["0000", "Eee1", "e11e", "E1EF", "1000", "e001", "e10E", "e010", "e011", "e11E", "EE1f", "e10e"],
        "2,2,2,3",
        ["0000|0000", "1001|1110", "0110|1001", "1111|1012", "1000|0000", "0001|1000",
         "0101|1001", "0010|1000", "0011|1000", "0111|1001", "1110|1102", "0100|1001"],
        TightnessVerdict.TIGHT,
        "four-qubit UPB U_7, tight inequality",
    )


@_register("u8")
def _u8() -> CatalogEntry:
    return _table_entry(
        "u8",
        ["0000", "e1eE", "1eEf", "EEF1", "e01F", "01fe"],
        "2,2,3,3",
        ["0000|0000", "0101|1011", "1010|0112", "1111|1120", "0011|1002", "0100|0021"],
        TightnessVerdict.TIGHT,
        "four-qubit UPB U_8 with six vectors, tight inequality",
    )


@_register("u9")
def _u9() -> CatalogEntry:
    return _table_entry(
        "u9",
        ["0000", "1eee", "eE1f", "10EF", "0ef1", "01FF", "1E0f", "1eeE", "1EeF", "1eEf", "11EF", "EE1f"],
        "2,2,3,3",
        ["0000|0000", "1000|0111", "0110|1102", "1011|0012", "0001|0120", "0111|0022",
         "1100|0102", "1001|0111", "1101|0112", "1010|0112", "1111|0012", "1110|1102"],
        TightnessVerdict.TIGHT,
        "four-qubit UPB U_9, tight inequality",
    )


@_register("u10")
def _u10() -> CatalogEntry:
    return _table_entry(
        "u10",
        ["0000", "01Ee", "0e1E", "0Ee1", "1000", "11Ee", "1e1E", "1Ee1"],
        "1,2,2,2",
        ["0000|0000", "0110|0011", "0011|0101", "0101|0110",
         "1000|0000", "1101|0011", "1011|0101", "1101|0110"],
        TightnessVerdict.NOT_TIGHT,
        "four-qubit UPB U_10 = standard basis x Shifts, inequality not tight",
        (
            Correction(
                "term",
                "1101|0011",
                "1110|0011",
                "|11e-bar e> gives outcomes 1110; the printed label duplicates p(1101|...) of |1e-bar e1>",
            ),
        ),
    )


def _gyni_entry(n: int) -> CatalogEntry:
    corrections: tuple[Correction, ...] = ()
    printed: tuple[str, ...] = ()
    if n == 3:
        printed = ("000|000", "110|011", "101|110", "011|101")
    if n == 4:
        corrections = (
            Correction(
                "display",
                "0111|1011 (second occurrence)",
                "dropped",
                "the four-party display lists p(0111|1011) twice; the generated inequality has eight distinct terms",
            ),
        )
    return CatalogEntry(
        name=f"gyni{n}",
        vectors=gyni_vectors(n),
        classification=ClassificationKind.UPB,
        inequality=gyni_inequality(n),
        ns_maximum=FOUR_THIRDS if n == 3 else None,
        tightness=TightnessVerdict.TIGHT,
        provenance=f"GYNI_{n}: {2 ** (n - 1)}-element UPB and guess-your-neighbour's-input inequality",
        printed_terms=printed,
        corrections=corrections,
    )


for _n in range(3, 8):
    _register(f"gyni{_n}")(partial(_gyni_entry, _n))


def _method2_entry(
    name: str,
    source: str,
    party: int,
    position: Position,
    scenario: str,
    terms: list[str],
    provenance: str,
) -> CatalogEntry:
    vectors = method2(get(source).vectors, party, position=position)
    return CatalogEntry(
        name=name,
        vectors=vectors,
        classification=ClassificationKind.UPB,
        inequality=_printed_inequality(scenario, terms, ()),
        ns_maximum=None,
        tightness=TightnessVerdict.TIGHT,
        provenance=provenance,
        printed_terms=tuple(terms),
    )


@_register("t3_1")
def _t3_1() -> CatalogEntry:
    return _method2_entry(
        "t3_1",
        "u1",
        2,
        "front",
        "2,2,2,2,2",
        ["00000|00000", "00001|00000", "00011|00000", "01011|00000", "00111|00010", "01100|01011",
         "01101|10101", "01010|10110", "00110|11100", "10100|00000", "10101|00000", "10111|00000",
         "11111|00000", "10011|00010", "11000|01011", "11001|10101", "11110|10110", "10010|11100"],
        "five-party inequality from U_1 combined through the bases of party 2, new party first",
    )


@_register("t3_2")
def _t3_2() -> CatalogEntry:
    return _method2_entry(
        "t3_2",
        "u6",
        1,
        "front",
        "2,2,2,2,3",
        ["00000|00000", "11000|00000", "00011|00110", "11011|00110", "01010|00111", "10010|00111",
         "01011|00111", "10011|00111", "00111|11101", "11111|11101", "00100|11011", "11100|11011",
         "01100|11012", "10100|11012", "01111|11102", "10111|11102"],
        "five-party inequality from U_6 combined through the bases of party 1, new party first",
    )


@_register("t3_3")
def _t3_3() -> CatalogEntry:
    return _method2_entry(
        "t3_3",
        "u8",
        4,
        "back",
        "2,2,3,3,3",
        ["00000|00000", "11110|11200", "01010|10111", "01000|00211", "10100|01122", "00110|10022",
         "00011|00000", "11101|11200", "01001|10111", "01011|00211", "10111|01122", "00101|10022"],
        "five-party inequality from U_8 combined through the bases of party 4, new party last",
    )


def list_names() -> list[str]:
    """Entry names in registration order."""
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def get(name: str) -> CatalogEntry:
    """
    Build and validate a catalog entry.

    Args:
        name: Entry name as listed by ``list_names``

    Returns:
        The entry, with printed typos already corrected

    Raises:
        UnknownNameError: If no entry has that name
    """
    builder = _BUILDERS.get(name.lower())
    if builder is None:
        raise UnknownNameError(name)
    entry = builder()
    validate_set(entry.vectors)
    if entry.inequality.scenario.parties != entry.vectors.parties:
        raise ValidationError(f"catalog entry '{name}' has an inequality on the wrong number of parties")
    for correction in entry.corrections:
        logger.warning(
            f"{entry.name}: printed {correction.where} '{correction.printed}' read as "
            f"'{correction.corrected}' ({correction.reason})"
        )
    return entry


def summary(as_dict: bool = True) -> list[dict] | pd.DataFrame:
    """
    One row per entry.

    Args:
        as_dict: Whether to return dictionaries (True) or a pandas DataFrame (False)
    """
    rows = [get(name).summary().model_dump() for name in list_names()]
    if as_dict:
        return rows
    return pd.DataFrame(rows, columns=list(CatalogEntrySummary.model_fields))


def verify(name: str, tightness: bool = True) -> CatalogVerification:
    """
    Recompute every stored expectation of an entry.

    Args:
        name: Entry name
        tightness: Also recompute the tightness verdict, the slowest check

    Returns:
        One check per expectation; the caller decides how to treat failures
    """
    entry = get(name)
    checks: list[CatalogCheck] = []

    kind = classify(entry.vectors).kind
    checks.append(
        CatalogCheck(
            check="classification",
            expected=entry.classification.value,
            actual=kind.value,
            ok=kind is entry.classification,
        )
    )

    built = build_inequality(entry.vectors)
    checks.append(
        CatalogCheck(
            check="inequality",
            expected=f"{len(entry.inequality.terms)} terms on {entry.inequality.scenario}, bound {entry.inequality.classical_bound}",
            actual=f"{len(built.terms)} terms on {built.scenario}, bound {built.classical_bound}",
            ok=built.same_terms(entry.inequality),
        )
    )

    if entry.ns_maximum is not None:
        optimum, _ = ns_maximum(entry.inequality)
        checks.append(
            CatalogCheck(
                check="ns_maximum",
                expected=format_rational(entry.ns_maximum),
                actual=format_rational(optimum),
                ok=optimum == entry.ns_maximum,
            )
        )

    if tightness and entry.tightness is not None:
        verdict = is_tight(entry.inequality).verdict
        checks.append(
            CatalogCheck(
                check="tightness",
                expected=entry.tightness.value,
                actual=verdict.value,
                ok=verdict is entry.tightness,
            )
        )

    result = CatalogVerification(name=entry.name, checks=checks)
    logger.info(f"catalog entry {entry.name}: {sum(c.ok for c in checks)}/{len(checks)} checks hold")
    return result
