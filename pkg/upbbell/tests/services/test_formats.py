"""Tests for the .pvs and .bell codecs."""

from fractions import Fraction

import pytest

from upbbell.errors.exceptions import FormatError
from upbbell.services import catalog
from upbbell.services.bellgen import BellInequality, Scenario, build_inequality
from upbbell.services.formats import (
    exact_weight,
    format_bell,
    format_pvs,
    parse_bell,
    parse_kets,
    parse_pvs,
    read_bell,
    read_pvs,
    write_bell,
    write_pvs,
)

SHIFTS_PVS = """\
# Shifts
pvs n=3 m=2,2,2
0:0 0:0 0:0
0:1 1:1 1:0
1:0 0:1 1:1   # trailing comment
1:1 1:0 0:1
"""

SHIFTS_BELL = """\
bell n=3 m=2,2,2 bound=1/1
1/1 000|000
1/1 110|011
1/1 101|110
1/1 011|101
"""


class TestPvs:
    """Product-vector set documents."""

    def test_parse(self, shifts):
        S = parse_pvs(SHIFTS_PVS)
        assert S.same_vectors(shifts)
        assert S.bases_per_party == (2, 2, 2)

    def test_ket_lines(self):
        S = parse_pvs("pvs n=3 m=2,2,2\n000\n1Ee\n")
        assert S.kets() == ["000", "1Ee"]

    def test_format_then_parse(self, tmp_path, shifts):
        path = tmp_path / "shifts.pvs"
        write_pvs(shifts, path)
        assert path.read_text().startswith("pvs n=3 m=2,2,2\n")
        assert read_pvs(path) == shifts

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("", None, "empty document"),
            ("bell n=3 m=2,2,2\n", 1, "expected a 'pvs' header"),
            ("pvs n=3\n", 1, "header lacks m"),
            ("pvs n=3 m=2,2\n", 1, "m lists 2 counts"),
            ("pvs n=x m=2\n", 1, "must be integers"),
            ("pvs n=2 m=1,1\n00\n0:0 0\n", 3, "malformed local vector"),
            ("pvs n=2 m=1,1\n\n# note\n000\n", 4, "has 3 parties"),
            ("pvs n=2 m=1,1\n0:0\n", 2, "expected 2 tokens"),
        ],
    )
    def test_malformed(self, text, line, message):
        with pytest.raises(FormatError, match=message) as excinfo:
            parse_pvs(text)
        assert excinfo.value.details.get("line") == line

    def test_non_orthogonal_pair(self):
        with pytest.raises(FormatError, match="not orthogonal") as excinfo:
            parse_pvs("pvs n=2 m=1,1\n00\n00\n")
        assert excinfo.value.details["pair"] == [0, 1]

    def test_basis_out_of_range(self):
        with pytest.raises(FormatError, match="invalid set"):
            parse_pvs("pvs n=2 m=1,1\n00\ne1\n")

    def test_non_ascii_rejected(self):
        with pytest.raises(FormatError, match="7-bit"):
            parse_pvs("pvs n=1 m=1\n0:0 # ket ⟩0|\n")


class TestKets:
    """Shorthand ket lists."""

    def test_parse(self):
        S = parse_kets(["000", " 1Ee ", ""])
        assert S.kets() == ["000", "1Ee"]

    def test_explicit_bases(self):
        assert parse_kets(["00"], [2, 3]).bases_per_party == (2, 3)

    def test_unknown_symbol(self):
        with pytest.raises(FormatError, match="unknown ket symbol 'x'") as excinfo:
            parse_kets(["000", "0x0"])
        assert excinfo.value.details["line"] == 2


class TestBell:
    """Bell inequality documents."""

    def test_parse(self, shifts):
        B = parse_bell(SHIFTS_BELL)
        assert B.classical_bound == 1
        assert B.same_terms(build_inequality(shifts))

    def test_format_then_parse(self, tmp_path):
        B = build_inequality(catalog.get("shifts").vectors, ["1", "1/2", "1/3", "1/4"])
        path = tmp_path / "weighted.bell"
        write_bell(B, path)
        assert "1/3 011|101" in path.read_text()
        assert read_bell(path) == B

    def test_bound_mismatch(self):
        text = SHIFTS_BELL.replace("bound=1/1", "bound=1/2")
        assert parse_bell(text, check_bound=False).classical_bound == Fraction(1, 2)
        with pytest.raises(FormatError, match="differs from the classical bound 1/1") as excinfo:
            parse_bell(text)
        assert excinfo.value.details["line"] == 1

    @pytest.mark.parametrize(
        "body, line, message",
        [
            ("1/1 000-000", 2, "malformed term"),
            ("1/1 00|000", 2, "does not have 3 parties"),
            ("3/2 000|000", 2, "weight"),
            ("abc 000|000", 2, "not a rational"),
        ],
    )
    def test_malformed_terms(self, body, line, message):
        with pytest.raises(FormatError, match=message) as excinfo:
            parse_bell(f"bell n=3 m=2,2,2 bound=1\n{body}\n")
        assert excinfo.value.details["line"] == line

    def test_bad_bound(self):
        with pytest.raises(FormatError, match="line 1"):
            parse_bell("bell n=1 m=1 bound=x\n")

    def test_setting_outside_scenario(self):
        with pytest.raises(FormatError, match="setting outside"):
            parse_bell("bell n=2 m=1,1 bound=1\n1/1 00|01\n")

    def test_settings_beyond_nine(self):
        B = BellInequality(Scenario(1, (11,)), (), Fraction(0))
        with pytest.raises(FormatError, match="single digits"):
            format_bell(B)

    def test_format_keeps_integer_denominators(self):
        assert format_bell(build_inequality(parse_kets(["00"]))) == "bell n=2 m=1,1 bound=1/1\n1/1 00|00\n"


class TestFiles:
    """Reading and writing paths."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(FormatError, match="cannot read") as excinfo:
            read_pvs(tmp_path / "absent.pvs")
        assert excinfo.value.details["path"].endswith("absent.pvs")

    def test_binary_file(self, tmp_path):
        path = tmp_path / "binary.bell"
        path.write_bytes(b"bell n=1 m=1 bound=1\n\xff\n")
        with pytest.raises(FormatError, match="7-bit"):
            read_bell(path)

    def test_unwritable_path(self, tmp_path, shifts):
        with pytest.raises(FormatError, match="cannot write"):
            write_pvs(shifts, tmp_path / "missing" / "dir" / "out.pvs")

    def test_format_pvs_tokens(self):
        assert format_pvs(parse_kets(["0e"])) == "pvs n=2 m=1,2\n0:0 1:0\n"

    def test_exact_weight(self):
        assert exact_weight("1/8") == Fraction(1, 8)
        with pytest.raises(FormatError):
            exact_weight("0.1.2")
