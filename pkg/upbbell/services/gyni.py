"""
Guess-your-neighbour's-input (GYNI) inequalities and their strategy calculus.

Party j receives x_j and must output its right neighbour's bit x_{j+1};
inputs are promised to have even parity (odd n) or even parity on
x_2..x_n (even n). A deterministic two-setting strategy of one party is a
symbol: 0 and 1 are constants, i copies the input, f flips it.

For odd n every non-saturating strategy string is rewritten into saturating
strings plus a multiple of the all-ones string, which certifies that the
saturating boxes span a facet. Rewrites use the local identity
[0] + [1] = [i] + [f] and are checked exactly in multilinear coordinates,
where the boxes of 0, 1 and i form a basis at every party.
"""

import itertools
import logging
import math
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors.exceptions import (
    AlreadySaturatingError,
    CertificateFailureError,
    NoNumericSymbolError,
    NotAnFError,
    ValidationError,
)
from ..models.reports import GyniCertificateReport, TightnessVerdict
from .bellgen import (
    BellInequality,
    BellTerm,
    Box,
    DeterministicStrategy,
    Scenario,
    evaluate,
    strategy_box,
)
from .extend import CombinePlan, combine
from .nspoly import is_tight, polytope_dimension
from .pvset import LocalVector, ProductVector, ProductVectorSet

logger = logging.getLogger(__name__)

SYMBOLS = "01if"

# Output for inputs 0 and 1.
_TABLE = {"0": (0, 0), "1": (1, 1), "i": (0, 1), "f": (1, 0)}
_OTHER = {"i": "f", "f": "i"}
_COORDINATES = {"0": {"0": 1}, "1": {"1": 1}, "i": {"i": 1}, "f": {"0": 1, "1": 1, "i": -1}}

Combination = list[tuple[Fraction, str]]


def admissible_inputs(n: int) -> list[tuple[int, ...]]:
    """Promised input strings in increasing binary order."""
    if n < 3:
        raise ValidationError(f"GYNI needs at least three parties, got {n}")
    inputs = []
    for x in itertools.product((0, 1), repeat=n):
        parity = sum(x) if n % 2 else sum(x[1:])
        if parity % 2 == 0:
            inputs.append(x)
    return inputs


def gyni_vectors(n: int) -> ProductVectorSet:
    """
    The 2^(n-1)-element GYNI UPB.

    Input x yields the vector whose party p holds element x_{p+1} of basis x_p,
    with basis 0 = {|0>, |1>} and basis 1 = {|e>, |e-bar>}.
    """
    vectors = tuple(
        ProductVector(tuple(LocalVector(x[p], x[(p + 1) % n]) for p in range(n)))
        for x in admissible_inputs(n)
    )
    return ProductVectorSet(n, (2,) * n, vectors)


def gyni_inequality(n: int) -> BellInequality:
    """Sum of p(a|x) over promised inputs with a_j = x_{j+1}, bounded by 1."""
    terms = tuple(
        BellTerm(tuple(x[(j + 1) % n] for j in range(n)), x) for x in admissible_inputs(n)
    )
    return BellInequality(Scenario(n, (2,) * n), terms, Fraction(1))


def gyni_success_probability(n: int, box: Box):
    """Winning probability under uniformly drawn promised inputs."""
    return evaluate(gyni_inequality(n), box) / 2 ** (n - 1)


def flip_map_f(U: ProductVectorSet) -> ProductVectorSet:
    """
    Odd n: swap 0 <-> 1 and e <-> e-bar on the last qubit. Even n: the same on
    the second-to-last qubit, and 0 <-> e-bar, 1 <-> e on the last.
    """
    n = U.parties
    if any(m > 2 for m in U.bases_per_party[-2:]):
        raise ValidationError("the flip map needs at most two bases on the last two qubits")

    def image(v: ProductVector) -> ProductVector:
        locals_ = list(v.locals)
        if n % 2:
            locals_[-1] = locals_[-1].complement()
        else:
            locals_[-2] = locals_[-2].complement()
            b, e = locals_[-1]
            locals_[-1] = LocalVector(1 - b, 1 - e)
        return ProductVector(tuple(locals_))

    bases = U.bases_per_party[:-2] + tuple(max(m, 2) for m in U.bases_per_party[-2:])
    return ProductVectorSet(n, bases, tuple(image(v) for v in U.vectors))


def gyni_recursive_vectors(n: int) -> ProductVectorSet:
    """
    Build U_{n+1} from U_n: |0>U^(0), |1>F(U^(1)), |e-bar>U^(1), |e>F(U^(0)),
    where U^(k) holds the vectors of U_n with element k on the last qubit.
    """
    U = gyni_vectors(n)
    F = flip_map_f(U)

    def part(S: ProductVectorSet, source: ProductVectorSet, k: int) -> ProductVectorSet:
        picked = tuple(w for v, w in zip(source.vectors, S.vectors, strict=True) if v.locals[-1].element == k)
        return ProductVectorSet(S.parties, S.bases_per_party, picked)

    plan = CombinePlan(
        first=(part(U, U, 0), part(U, U, 1)),
        second=(part(F, U, 1), part(F, U, 0)),
        assignments=((LocalVector(0, 0), LocalVector(0, 1)), (LocalVector(1, 1), LocalVector(1, 0))),
    )
    return combine(U, F, plan, position="front")


# Strategy strings


def _check(s: str) -> None:
    if len(s) < 3:
        raise ValidationError(f"strategy strings need length at least 3, got '{s}'")
    bad = [c for c in s if c not in SYMBOLS]
    if bad:
        raise ValidationError(f"unknown strategy symbol {bad[0]!r} in '{s}'")


def _replace(s: str, position: int, symbol: str) -> str:
    return s[:position] + symbol + s[position + 1:]


def is_constant(s: str) -> bool:
    return all(c in "01" for c in s)


def strategy_of(s: str) -> DeterministicStrategy:
    _check(s)
    return DeterministicStrategy(tuple(_TABLE[c] for c in s))


def strategy_string(strategy: DeterministicStrategy) -> str:
    by_table = {table: symbol for symbol, table in _TABLE.items()}
    return "".join(by_table[tuple(t)] for t in strategy.tables)


def strategy_box_of(s: str) -> Box:
    return strategy_box(strategy_of(s), Scenario(len(s), (2,) * len(s)))


def evaluate_strategy(s: str) -> str:
    """
    Propagate a constant around the ring.

    Raises:
        NoNumericSymbolError: If s has no 0 or 1
    """
    _check(s)
    n = len(s)
    start = next((k for k, c in enumerate(s) if c in "01"), None)
    if start is None:
        raise NoNumericSymbolError(f"'{s}' has no constant symbol to evaluate from")
    out = [0] * n
    out[start] = int(s[start])
    for step in range(1, n):
        j = (start + step) % n
        out[j] = _TABLE[s[j]][out[j - 1]]
    return "".join(str(b) for b in out)


def saturates(s: str) -> bool:
    """Whether the strategy wins on some promised input (odd n)."""
    _check(s)
    if len(s) % 2 == 0:
        raise ValidationError("the saturation rule covers odd n only")
    if any(c in "01" for c in s):
        return evaluate_strategy(s).count("1") % 2 == 0
    return s.count("f") % 2 == 0


def saturates_by_inputs(s: str) -> bool:
    """Brute force: some promised x has x_{j+1} = s_j(x_j) for every j."""
    _check(s)
    n = len(s)
    return any(
        all(x[(j + 1) % n] == _TABLE[s[j]][x[j]] for j in range(n)) for x in admissible_inputs(n)
    )


def expand_f(s: str, position: int) -> Combination:
    """
    [..f..] = [..0..] + [..1..] - [..i..].

    Raises:
        NotAnFError: If the symbol at position is not f
    """
    _check(s)
    if s[position] != "f":
        raise NotAnFError(f"symbol {position} of '{s}' is {s[position]!r}, not 'f'")
    return [
        (Fraction(1), _replace(s, position, "0")),
        (Fraction(1), _replace(s, position, "1")),
        (Fraction(-1), _replace(s, position, "i")),
    ]


def multilinear_coordinates(combination: Iterable[tuple[Fraction | int, str]]) -> dict[str, Fraction]:
    """Coordinates of a combination of strategy boxes over the basis {0, 1, i}^n."""
    total: defaultdict[str, Fraction] = defaultdict(Fraction)
    for coef, s in combination:
        if not coef:
            continue
        for parts in itertools.product(*(_COORDINATES[c].items() for c in s)):
            key = "".join(symbol for symbol, _ in parts)
            total[key] += coef * math.prod(value for _, value in parts)
    return {k: v for k, v in total.items() if v}


# Rewrites


def _evaluation_step(t: str) -> Combination:
    """One substitution moving a mixed non-saturating string towards its evaluation."""
    n = len(t)
    e = evaluate_strategy(t)
    for p in range(n):
        if t[p] in "if" and t[(p + 1) % n] in "01":
            keep = e[p]
            other = "1" if keep == "0" else "0"
            return [
                (Fraction(1), _replace(t, p, keep)),
                (Fraction(1), _replace(t, p, other)),
                (Fraction(-1), _replace(t, p, _OTHER[t[p]])),
            ]
    raise CertificateFailureError(f"'{t}' has no symbol followed by a constant")


def reduce_to_evaluation(t: str) -> tuple[str, Combination]:
    """
    Rewrite a non-saturating string as its evaluation plus saturating strings.

    Returns:
        (evaluation, side terms) with box(t) = box(evaluation) + sum of side terms
    """
    side: Combination = []
    current = t
    while not is_constant(current):
        (_, keep), (_, other), (_, swapped) = _evaluation_step(current)
        side.append((Fraction(1), other))
        side.append((Fraction(-1), swapped))
        current = keep
    return current, side


def _sigma(symbol: str) -> int:
    return 1 if symbol in "01" else -1


def _complement_except(c: str, p: int) -> str:
    return "".join(b if j == p else str(1 - int(b)) for j, b in enumerate(c))


def basic_congruence(c: str, p: int) -> tuple[str, Combination]:
    """
    [..10..] at (p, p+1) is congruent to the string keeping position p and
    complementing every other bit.

    Returns:
        (image, saturating terms) with box(c) = box(image) + sum of the terms
    """
    n = len(c)
    q = (p + 1) % n
    if c[p] != "1" or c[q] != "0":
        raise CertificateFailureError(f"'{c}' has no '10' at position {p}")
    tail = {r: ("i" if c[r] == c[r - 1] else "f") for r in range(n) if r not in (p, q)}
    g1, g2 = ("f", "f") if c[p - 1] == "0" else ("i", "f")

    def build(a: str, b: str) -> str:
        chars = [tail.get(r, "") for r in range(n)]
        chars[p], chars[q] = a, b
        return "".join(chars)

    terms: Combination = [(Fraction(1), build(g1, g2))]
    for a in ("0", "1", _OTHER[g1]):
        for b in ("0", "1", _OTHER[g2]):
            if (a, b) != ("1", "0"):
                terms.append((Fraction(-_sigma(a) * _sigma(b)), build(a, b)))
    evaluation, side = reduce_to_evaluation(build("1", "0"))
    if evaluation != c:
        raise CertificateFailureError(f"'{build('1', '0')}' evaluates to {evaluation}, expected {c}")
    terms.extend((-k, s) for k, s in side)

    image = _complement_except(c, p)
    saturating: defaultdict[str, Fraction] = defaultdict(Fraction)
    remainder: defaultdict[str, Fraction] = defaultdict(Fraction)
    for k, s in terms:
        if saturates(s):
            saturating[s] += k
            continue
        if not any(ch in "01" for ch in s):
            raise CertificateFailureError(f"'{s}' is neither saturating nor reducible")
        evaluation, side = reduce_to_evaluation(s)
        remainder[evaluation] += k
        for k2, s2 in side:
            saturating[s2] += k * k2
    remainder_nonzero = {s: k for s, k in remainder.items() if k}
    if remainder_nonzero != {image: Fraction(1)}:
        raise CertificateFailureError(
            f"basic congruence of '{c}' at {p} left {remainder_nonzero}, expected {image} once"
        )
    return image, [(k, s) for s, k in saturating.items() if k]


def is_cyclic_block(c: str) -> bool:
    """Ones form one cyclic run, strictly shorter than the string."""
    k = c.count("1")
    if not 0 < k < len(c):
        return False
    starts = [p for p in range(len(c)) if c[p] == "1" and c[p - 1] == "0"]
    return len(starts) == 1


def _collapse_block(c: str) -> Combination:
    """A block of k ones: expand the saturating [..f..f..] with f at both block ends."""
    n = len(c)
    k = c.count("1")
    start = next(p for p in range(n) if c[p] == "1" and c[p - 1] == "0")
    stop = (start + k) % n

    def build(a: str, b: str) -> str:
        chars = ["i"] * n
        chars[start], chars[stop] = a, b
        return "".join(chars)

    terms: Combination = [(Fraction(1), build("f", "f"))]
    for a in "01i":
        for b in "01i":
            if (a, b) != ("1", "0"):
                terms.append((Fraction(-_sigma(a) * _sigma(b)), build(a, b)))
    evaluation, side = reduce_to_evaluation(build("1", "0"))
    if evaluation != c:
        raise CertificateFailureError(f"block string '{build('1', '0')}' evaluates to {evaluation}, expected {c}")
    terms.extend((-k2, s) for k2, s in side)
    return terms


def _transport(c: str) -> Combination:
    """Swap the rightmost linear '10' to '01' through two basic congruences."""
    n = len(c)
    p = max(p for p in range(n - 1) if c[p] == "1" and c[p + 1] == "0")
    swapped = c[:p] + "01" + c[p + 2:]
    image, first = basic_congruence(c, p)
    if c[(p + 2) % n] == "1":
        second_image, second = basic_congruence(image, p + 1)
        if second_image != swapped:
            raise CertificateFailureError(f"transport of '{c}' reached {second_image}, expected {swapped}")
        return [(Fraction(1), swapped), *first, *second]
    other_image, second = basic_congruence(swapped, p + 1)
    if other_image != image:
        raise CertificateFailureError(f"'{swapped}' maps to {other_image}, expected {image}")
    return [(Fraction(1), swapped), *first, *((-k, s) for k, s in second)]


@lru_cache(maxsize=65536)
def _rewrite(t: str) -> tuple[tuple[Fraction, str], ...]:
    if not any(c in "01" for c in t):
        return tuple(expand_f(t, t.index("f")))
    if not is_constant(t):
        return tuple(_evaluation_step(t))
    if is_cyclic_block(t):
        return tuple(_collapse_block(t))
    return tuple(_transport(t))


@dataclass(frozen=True)
class CongruenceCertificate:
    """box(target) = sum of coefficient * box(string) + residual * box(1...1)."""

    target: str
    combination: tuple[tuple[Fraction, str], ...]
    residual: Fraction

    @property
    def all_ones(self) -> str:
        return "1" * len(self.target)

    def verify(self) -> bool:
        """Every listed string saturates and the multilinear coordinates agree exactly."""
        if any(not saturates(s) for _, s in self.combination):
            return False
        left = multilinear_coordinates([(Fraction(1), self.target)])
        right = multilinear_coordinates([*self.combination, (self.residual, self.all_ones)])
        return left == right

    def lines(self) -> list[str]:
        """Dump format: one 'coef string' line per term, the residual last."""
        out = [f"{k.numerator}/{k.denominator} {s}" for k, s in self.combination]
        out.append(f"{self.residual.numerator}/{self.residual.denominator} {self.all_ones}")
        return out


def congruence_reduce(s: str, max_steps: int | None = None) -> CongruenceCertificate:
    """
    Express a non-saturating strategy's box through saturating ones and the all-ones box.

    Args:
        s: Non-saturating strategy string of odd length
        max_steps: Rewrite cap (defaults to 64 * 4^n)

    Returns:
        A verified certificate

    Raises:
        AlreadySaturatingError: If s saturates
        CertificateFailureError: If a rewrite or the final check fails
    """
    _check(s)
    n = len(s)
    if n % 2 == 0:
        raise ValidationError("congruence certificates cover odd n only")
    if saturates(s):
        raise AlreadySaturatingError(f"'{s}' already saturates the inequality")
    ones = "1" * n
    cap = max_steps if max_steps is not None else 64 * 4**n

    pending: dict[str, Fraction] = {s: Fraction(1)}
    combination: defaultdict[str, Fraction] = defaultdict(Fraction)
    residual = Fraction(0)
    steps = 0
    if s == ones:
        pending = {}
        residual = Fraction(1)
    while pending:
        t = next(iter(pending))
        coef = pending.pop(t)
        if not coef:
            continue
        steps += 1
        if steps > cap:
            raise CertificateFailureError(f"reduction of '{s}' exceeded {cap} rewrites")
        for k, u in _rewrite(t):
            value = coef * k
            if u == ones:
                residual += value
            elif saturates(u):
                combination[u] += value
            else:
                pending[u] = pending.get(u, Fraction(0)) + value

    certificate = CongruenceCertificate(
        target=s,
        combination=tuple((k, u) for u, k in sorted(combination.items()) if k),
        residual=residual,
    )
    if not certificate.verify():
        raise CertificateFailureError(f"certificate for '{s}' does not reproduce its box")
    logger.debug(f"'{s}' reduced in {steps} rewrites to {len(certificate.combination)} saturating strings")
    return certificate


def tightness_certificate(n: int, cross_check: bool | None = None) -> GyniCertificateReport:
    """
    Certify GYNI_n tight for odd n.

    Every non-saturating strategy gets a verified certificate, so the
    saturating boxes together with the all-ones box span all 3^n strategy
    coordinates. Saturating boxes lie on the hyperplane of value 1, which
    leaves an affine dimension of 3^n - 2 = d - 1.

    Args:
        n: Odd party count, at least 3
        cross_check: Also run the rank route (defaults to n in {3, 5})

    Raises:
        CertificateFailureError: If a certificate fails or the rank route disagrees
    """
    if n < 3 or n % 2 == 0:
        raise ValidationError(f"certificates need odd n >= 3, got {n}")
    saturating = 0
    verified = 0
    for symbols in itertools.product(SYMBOLS, repeat=n):
        s = "".join(symbols)
        if saturates(s):
            saturating += 1
            continue
        congruence_reduce(s)
        verified += 1

    d = polytope_dimension(Scenario(n, (2,) * n))
    affine = 3**n - 2
    do_cross = n in (3, 5) if cross_check is None else cross_check
    if do_cross:
        certificate = is_tight(gyni_inequality(n))
        if certificate.verdict is not TightnessVerdict.TIGHT or certificate.affine_dimension != affine:
            raise CertificateFailureError(
                f"rank route gives {certificate.verdict.value} with dimension {certificate.affine_dimension}",
                details={"n": n},
            )
    logger.info(f"GYNI_{n}: {verified} certificates verified, {saturating} saturating strategies")
    return GyniCertificateReport(
        n=n,
        strategy_count=4**n,
        saturating_count=saturating,
        certificates_verified=verified,
        affine_dimension=affine,
        polytope_dimension=d,
        verdict=TightnessVerdict.TIGHT,
        cross_checked=do_cross,
    )
