"""
Plain-text codecs for product-vector sets (.pvs) and Bell inequalities (.bell).

.pvs::

    pvs n=3 m=2,2,2
    0:0 0:0 0:0
    0:1 1:1 1:0      # basis:element per party

A vector line may also be a single ket in shorthand (``1Ee``).

.bell::

    bell n=3 m=2,2,2 bound=1/1
    1/1 000|000
    1/1 110|011

Outcomes and settings are single digits. ``#`` starts a comment; blank
lines are ignored; files are 7-bit text with ``\\n`` line ends.
"""

import logging
import re
from collections.abc import Iterable
from fractions import Fraction
from pathlib import Path

from ..errors.exceptions import BaseAppException, FormatError
from ..models.reports import format_rational, parse_rational
from .bellgen import BellInequality, BellTerm, Scenario, classical_bound
from .pvset import KET_SYMBOLS, LocalVector, ProductVector, ProductVectorSet, parse_ket, validate_set

logger = logging.getLogger(__name__)

_HEADER_FIELD = re.compile(r"^(\w+)=(\S+)$")
_TOKEN = re.compile(r"^(\d+):([01])$")
_TERM = re.compile(r"^(\S+)\s+([01]+)\|(\d+)$")


def _lines(text: str) -> list[tuple[int, str]]:
    """Content lines with their 1-based numbers, comments stripped."""
    if not text.isascii():
        raise FormatError("input is not 7-bit text")
    out = []
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((number, line))
    return out


def _header(line: str, number: int, keyword: str, required: tuple[str, ...]) -> dict[str, str]:
    parts = line.split()
    if not parts or parts[0] != keyword:
        raise FormatError(f"expected a '{keyword}' header", line=number)
    fields: dict[str, str] = {}
    for part in parts[1:]:
        match = _HEADER_FIELD.match(part)
        if not match:
            raise FormatError(f"malformed header field '{part}'", line=number)
        fields[match.group(1)] = match.group(2)
    missing = [k for k in required if k not in fields]
    if missing:
        raise FormatError(f"header lacks {', '.join(missing)}", line=number)
    return fields


def _counts(fields: dict[str, str], number: int) -> tuple[int, tuple[int, ...]]:
    try:
        n = int(fields["n"])
        m = tuple(int(v) for v in fields["m"].split(","))
    except ValueError as e:
        raise FormatError("n and m must be integers", line=number) from e
    if n < 1 or len(m) != n:
        raise FormatError(f"m lists {len(m)} counts for n={n}", line=number)
    return n, m


def _vector(line: str, number: int, n: int) -> ProductVector:
    tokens = line.split()
    if len(tokens) == 1 and all(c in KET_SYMBOLS for c in tokens[0]):
        vector = parse_ket(tokens[0])
        if len(vector) != n:
            raise FormatError(f"ket '{tokens[0]}' has {len(vector)} parties, expected {n}", line=number)
        return vector
    if len(tokens) != n:
        raise FormatError(f"expected {n} tokens, got {len(tokens)}", line=number)
    locals_ = []
    for token in tokens:
        match = _TOKEN.match(token)
        if not match:
            raise FormatError(f"malformed local vector '{token}'", line=number)
        locals_.append(LocalVector(int(match.group(1)), int(match.group(2))))
    return ProductVector(tuple(locals_))


def parse_pvs(text: str) -> ProductVectorSet:
    """
    Parse a .pvs document.

    Raises:
        FormatError: If the document is malformed or the set violates its invariants
    """
    lines = _lines(text)
    if not lines:
        raise FormatError("empty document")
    number, first = lines[0]
    n, m = _counts(_header(first, number, "pvs", ("n", "m")), number)
    vectors = tuple(_vector(line, k, n) for k, line in lines[1:])
    S = ProductVectorSet(n, m, vectors)
    try:
        validate_set(S)
    except BaseAppException as e:
        raise FormatError(f"invalid set: {e.message}", details=e.details) from e
    return S


def format_pvs(S: ProductVectorSet) -> str:
    header = f"pvs n={S.parties} m={','.join(str(m) for m in S.bases_per_party)}"
    body = [" ".join(str(lv) for lv in v.locals) for v in S.vectors]
    return "\n".join([header, *body]) + "\n"


def parse_kets(kets: Iterable[str], bases_per_party: Iterable[int] | None = None) -> ProductVectorSet:
    """
    Build a validated set from shorthand kets such as ``["000", "1Ee"]``.

    Raises:
        FormatError: If a ket uses an unknown symbol or the set is invalid
    """
    kets = [k.strip() for k in kets if k.strip()]
    for k, ket in enumerate(kets, start=1):
        unknown = [c for c in ket if c not in KET_SYMBOLS]
        if unknown:
            raise FormatError(f"unknown ket symbol '{unknown[0]}' in '{ket}'", line=k)
    S = ProductVectorSet.from_kets(kets, tuple(bases_per_party) if bases_per_party is not None else None)
    try:
        validate_set(S)
    except BaseAppException as e:
        raise FormatError(f"invalid set: {e.message}", details=e.details) from e
    return S


def parse_bell(text: str, check_bound: bool = True) -> BellInequality:
    """
    Parse a .bell document.

    Args:
        text: The document
        check_bound: Recompute the classical bound and reject a mismatch

    Raises:
        FormatError: If the document is malformed
    """
    lines = _lines(text)
    if not lines:
        raise FormatError("empty document")
    number, first = lines[0]
    fields = _header(first, number, "bell", ("n", "m", "bound"))
    n, m = _counts(fields, number)
    try:
        bound = parse_rational(fields["bound"])
    except ValueError as e:
        raise FormatError(str(e), line=number) from e

    terms = []
    for k, line in lines[1:]:
        match = _TERM.match(line)
        if not match:
            raise FormatError(f"malformed term '{line}'", line=k)
        weight_text, a, x = match.groups()
        if len(a) != n or len(x) != n:
            raise FormatError(f"term '{a}|{x}' does not have {n} parties", line=k)
        try:
            weight = parse_rational(weight_text)
            terms.append(BellTerm(tuple(int(c) for c in a), tuple(int(c) for c in x), weight))
        except (ValueError, BaseAppException) as e:
            raise FormatError(getattr(e, "message", str(e)), line=k) from e

    try:
        B = BellInequality(Scenario(n, m), tuple(terms), bound)
    except BaseAppException as e:
        raise FormatError(e.message, details=e.details) from e
    if check_bound:
        actual = classical_bound(B)
        if actual != bound:
            raise FormatError(
                f"stated bound {format_rational(bound)} differs from the classical bound {format_rational(actual)}",
                line=number,
            )
    return B


def format_bell(B: BellInequality) -> str:
    """
    Raises:
        FormatError: If a setting index needs more than one digit
    """
    if any(m > 10 for m in B.scenario.settings_per_party):
        raise FormatError("settings beyond 9 cannot be written as single digits")
    n = B.scenario.parties
    m = ",".join(str(v) for v in B.scenario.settings_per_party)
    lines = [f"bell n={n} m={m} bound={format_rational(B.classical_bound)}"]
    lines.extend(f"{format_rational(t.weight)} {t.label()}" for t in B.terms)
    return "\n".join(lines) + "\n"


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as e:
        raise FormatError(f"{path} is not 7-bit text") from e
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}", details={"path": str(path)}) from e


def _write(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="ascii", newline="\n")
    except OSError as e:
        raise FormatError(f"cannot write {path}: {e.strerror}", details={"path": str(path)}) from e
    logger.debug(f"wrote {len(text)} bytes to {path}")


def read_pvs(path: str | Path) -> ProductVectorSet:
    return parse_pvs(_read(path))


def write_pvs(S: ProductVectorSet, path: str | Path) -> None:
    _write(path, format_pvs(S))


def read_bell(path: str | Path, check_bound: bool = True) -> BellInequality:
    return parse_bell(_read(path), check_bound=check_bound)


def write_bell(B: BellInequality, path: str | Path) -> None:
    _write(path, format_bell(B))


def exact_weight(value: str) -> Fraction:
    """Parse a CLI rational such as ``1/8``."""
    try:
        return parse_rational(value)
    except ValueError as e:
        raise FormatError(str(e)) from e
