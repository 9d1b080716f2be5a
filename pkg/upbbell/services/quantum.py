"""
Numeric realization of product-vector sets.

Basis k at a party is realized as {cos t|0> + sin t|1>, -sin t|0> + cos t|1>}
for an angle t. Operators act on (C^2)^{tensor n} with party 1 as the most
significant qubit, matching the big-endian outcome strings of ``bellgen``.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..config.settings import get_settings
from ..errors.exceptions import (
    DegenerateRealizationError,
    EpsilonTooLargeError,
    NotAUPBError,
    ValidationError,
)
from ..models.reports import EpsilonReport, StateReport, WitnessReport
from .bellgen import BellInequality, Box, Scenario, build_inequality, evaluate, product_box, product_inequality
from .pvset import ClassificationKind, LocalVector, ProductVector, ProductVectorSet, basis_order, classify

logger = logging.getLogger(__name__)


def default_angle(basis: int) -> float:
    """0, pi/4, then pi/2^(k+1); no two differ by a multiple of pi/2."""
    if basis == 0:
        return 0.0
    if basis == 1:
        return math.pi / 4
    return math.pi / 2 ** (basis + 1)


@dataclass(frozen=True)
class BasisRealization:
    """Angle per (party, basis index)."""

    angles: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(tuple(float(t) for t in party) for party in self.angles))
        self.validate()

    @classmethod
    def default(cls, bases_per_party: Sequence[int]) -> "BasisRealization":
        return cls(tuple(tuple(default_angle(k) for k in range(m)) for m in bases_per_party))

    @classmethod
    def uniform(cls, bases_per_party: Sequence[int], angles: Sequence[float]) -> "BasisRealization":
        """The same angle list at every party, as given on the command line."""
        for m in bases_per_party:
            if m > len(angles):
                raise ValidationError(f"{len(angles)} angles given, a party uses {m} bases")
        return cls(tuple(tuple(angles[:m]) for m in bases_per_party))

    @classmethod
    def random(cls, bases_per_party: Sequence[int], rng: np.random.Generator) -> "BasisRealization":
        """Uniform angles in [0, pi), redrawn until admissible."""
        while True:
            angles = tuple(tuple(rng.uniform(0.0, math.pi, size=m)) for m in bases_per_party)
            try:
                return cls(angles)
            except DegenerateRealizationError:
                continue

    def validate(self, tol: float = 1e-9) -> None:
        """
        Raises:
            DegenerateRealizationError: If two bases at a party coincide or are orthogonal
        """
        quarter = math.pi / 2
        for party, angles in enumerate(self.angles):
            for j, k in itertools.combinations(range(len(angles)), 2):
                ratio = (angles[j] - angles[k]) / quarter
                if abs(ratio - round(ratio)) < tol:
                    raise DegenerateRealizationError(
                        f"bases {j} and {k} at party {party} differ by a multiple of pi/2",
                        details={"party": party, "bases": [j, k]},
                    )

    def local_vector(self, party: int, lv: LocalVector) -> np.ndarray:
        try:
            t = self.angles[party][lv.basis]
        except IndexError as e:
            raise ValidationError(f"no angle for basis {lv.basis} at party {party}") from e
        if lv.element == 0:
            return np.array([math.cos(t), math.sin(t)])
        return np.array([-math.sin(t), math.cos(t)])

    def basis_matrix(self, party: int, basis: int) -> np.ndarray:
        """Columns are elements 0 and 1 of a basis."""
        return np.column_stack(
            [self.local_vector(party, LocalVector(basis, 0)), self.local_vector(party, LocalVector(basis, 1))]
        )


def relabel_by_appearance(S: ProductVectorSet) -> ProductVectorSet:
    """Rename bases so that basis label equals the setting index of ``build_inequality``."""
    maps = [{b: k for k, b in enumerate(basis_order(S, party))} for party in range(S.parties)]
    vectors = tuple(
        ProductVector(tuple(LocalVector(maps[i][lv.basis], lv.element) for i, lv in enumerate(v.locals)))
        for v in S.vectors
    )
    return ProductVectorSet(S.parties, tuple(len(m) for m in maps), vectors)


def _kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones(1) if factors[0].ndim == 1 else np.ones((1, 1))
    for f in factors:
        out = np.kron(out, f)
    return out


def _realization_for(S: ProductVectorSet, real: BasisRealization | None) -> BasisRealization:
    return real if real is not None else BasisRealization.default(S.bases_per_party)


def realize(S: ProductVectorSet, real: BasisRealization | None = None) -> np.ndarray:
    """
    Concrete state vectors, one row per member of S.

    Raises:
        DegenerateRealizationError: If the realization breaks orthogonality
    """
    real = _realization_for(S, real)
    rows = [_kron_all([real.local_vector(i, lv) for i, lv in enumerate(v.locals)]) for v in S.vectors]
    states = np.array(rows) if rows else np.zeros((0, 2**S.parties))
    gram = states @ states.T
    tol = get_settings().orthogonality_tolerance
    if states.size and not np.allclose(gram, np.eye(len(rows)), atol=tol, rtol=0.0):
        raise DegenerateRealizationError("realized vectors are not orthonormal")
    return states


def projector(S: ProductVectorSet, real: BasisRealization | None = None) -> np.ndarray:
    """Projector onto the span of S."""
    states = realize(S, real)
    return states.T @ states


def bell_operator(B: BellInequality, real: BasisRealization | None = None) -> np.ndarray:
    """Sum of q_j times the product projector of each term; settings index bases."""
    n = B.scenario.parties
    real = real if real is not None else BasisRealization.default(B.scenario.settings_per_party)
    op = np.zeros((2**n, 2**n))
    for term in B.terms:
        phi = _kron_all(
            [real.local_vector(i, LocalVector(x, a)) for i, (x, a) in enumerate(zip(term.settings, term.outcomes, strict=True))]
        )
        op += float(term.weight) * np.outer(phi, phi)
    return op


def bell_operator_spectrum(B: BellInequality, real: BasisRealization | None = None) -> np.ndarray:
    """Eigenvalues of the Bell operator in ascending order."""
    op = bell_operator(B, real)
    if not np.allclose(op, op.T, atol=get_settings().orthogonality_tolerance):
        raise ValidationError("Bell operator is not Hermitian")
    return np.linalg.eigvalsh(op)


def _require_upb(U: ProductVectorSet) -> None:
    kind = classify(U).kind
    if kind is not ClassificationKind.UPB:
        raise NotAUPBError(f"operation needs a UPB, the set classifies as {kind.value}")


def partial_transpose(rho: np.ndarray, parties: Sequence[int], n: int) -> np.ndarray:
    """Transpose the listed qubits of an n-qubit operator."""
    tensor = rho.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for i in parties:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return tensor.transpose(axes).reshape(2**n, 2**n)


def bipartitions(n: int) -> list[tuple[int, ...]]:
    """The 2^(n-1) - 1 cuts, each named by the side holding party 0."""
    cuts = []
    for size in range(1, n):
        for rest in itertools.combinations(range(1, n), size - 1):
            cuts.append((0, *rest))
    return cuts


def _cut_label(side: Sequence[int], n: int) -> str:
    other = [i for i in range(n) if i not in side]
    return "".join(str(i + 1) for i in side) + "|" + "".join(str(i + 1) for i in other)


def upb_state(U: ProductVectorSet, real: BasisRealization | None = None) -> tuple[np.ndarray, StateReport]:
    """
    The state (1 - Pi_U)/(D - |U|) with its PPT report.

    Raises:
        NotAUPBError: If U is not a UPB
    """
    _require_upb(U)
    n = U.parties
    D = 2**n
    rho = (np.eye(D) - projector(U, real)) / (D - len(U))
    tol = get_settings().spectrum_tolerance
    spectrum = np.linalg.eigvalsh(rho)
    minima = {}
    for side in bipartitions(n):
        minima[_cut_label(side, n)] = float(np.linalg.eigvalsh(partial_transpose(rho, side, n)).min())
    report = StateReport(
        dimension=D,
        rank=int(np.sum(spectrum > tol)),
        trace=float(np.trace(rho)),
        min_eigenvalue=float(spectrum.min()),
        partial_transpose_minima=minima,
        is_ppt=all(v >= -tol for v in minima.values()),
    )
    logger.info(f"UPB state of rank {report.rank} in dimension {D}, PPT={report.is_ppt}")
    return rho, report


def _squared_overlaps(U: ProductVectorSet, real: BasisRealization, party: int, columns: np.ndarray) -> np.ndarray:
    """|<u_j^(party)|c>|^2 for every member j and every column c."""
    rows = np.array([real.local_vector(party, v.locals[party]) for v in U.vectors])
    return np.abs(rows @ columns) ** 2


def _product_expectations(factors: Sequence[np.ndarray]) -> np.ndarray:
    """
    sum_j prod_i F_i[j, c_i] over all column tuples, shaped by the column counts.
    """
    acc = factors[0]
    for f in factors[1:]:
        acc = acc[..., np.newaxis] * f.reshape((f.shape[0],) + (1,) * (acc.ndim - 1) + (f.shape[1],))
    return acc.sum(axis=0)


def epsilon_prime(U: ProductVectorSet, real: BasisRealization | None = None) -> float:
    """
    Minimum of <psi|Pi_U|psi> over products of realized local vectors of U.

    Raises:
        NotAUPBError: If U is not a UPB
    """
    _require_upb(U)
    real = _realization_for(U, real)
    factors = []
    for party in range(U.parties):
        columns = np.column_stack(
            [real.local_vector(party, LocalVector(b, e)) for b in basis_order(U, party) for e in (0, 1)]
        )
        factors.append(_squared_overlaps(U, real, party, columns))
    return float(_product_expectations(factors).min())


def epsilon_global(
    U: ProductVectorSet,
    real: BasisRealization | None = None,
    seed: int | None = None,
    restarts: int | None = None,
) -> EpsilonReport:
    """
    Best-effort minimum of <psi|Pi_U|psi> over all product states.

    Each restart sweeps the parties, replacing one local state by the lowest
    eigenvector of its effective 2x2 operator, until the value stops falling.
    """
    settings = get_settings()
    real = _realization_for(U, real)
    seed = settings.default_seed if seed is None else seed
    restarts = max(settings.witness_restarts, restarts or 0)
    rng = np.random.default_rng(seed)
    local = [np.array([real.local_vector(i, v.locals[i]) for v in U.vectors]) for i in range(U.parties)]

    results = []
    for _ in range(restarts):
        psi = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(U.parties)]
        psi = [p / np.linalg.norm(p) for p in psi]
        value = math.inf
        for _sweep in range(500):
            for i in range(U.parties):
                weights = np.ones(len(U))
                for k in range(U.parties):
                    if k != i:
                        weights *= np.abs(local[k] @ psi[k]) ** 2
                effective = (local[i].T * weights) @ local[i]
                _, vecs = np.linalg.eigh(effective)
                psi[i] = vecs[:, 0].astype(complex)
            overlaps = np.ones(len(U))
            for k in range(U.parties):
                overlaps *= np.abs(local[k] @ psi[k]) ** 2
            current = float(overlaps.sum())
            if value - current < 1e-15:
                value = min(value, current)
                break
            value = current
        results.append(value)

    report = EpsilonReport(
        epsilon_prime=epsilon_prime(U, real) if classify(U).kind is ClassificationKind.UPB else 0.0,
        epsilon_global=min(results),
        spread=max(results) - min(results),
        restarts=restarts,
        seed=seed,
    )
    logger.info(f"global product minimum {report.epsilon_global:.6g} over {restarts} restarts")
    return report


def _operator_box(
    operator: np.ndarray, scenario: Scenario, real: BasisRealization, normalizer: float
) -> Box:
    """p(a|x) = <phi_{a|x}| M |phi_{a|x}> / normalizer over realized setting bases."""
    values = [0.0] * scenario.table_size
    outcomes = scenario.outcomes()
    for x in scenario.settings():
        frame = _kron_all([real.basis_matrix(i, xi) for i, xi in enumerate(x)])
        diagonal = np.einsum("ij,jk,ki->i", frame.T, operator, frame).real / normalizer
        for a in outcomes:
            values[scenario.index(a, x)] = float(diagonal[int("".join(map(str, a)), 2)])
    return Box(scenario, tuple(values), exact=False)


def witness_operator(U: ProductVectorSet, epsilon: float, real: BasisRealization | None = None) -> np.ndarray:
    """Pi_U - epsilon * 1, before normalization."""
    return projector(U, real) - epsilon * np.eye(2**U.parties)


def _check_box(box: Box, tol: float) -> tuple[bool, bool, bool]:
    defects = box.constraint_defects()
    normalization = defects[: math.prod(box.scenario.settings_per_party)]
    signalling = defects[len(normalization):]
    return (
        box.is_nonnegative(tol),
        all(abs(d) <= tol for d in normalization),
        all(abs(d) <= tol for d in signalling),
    )


def witness_box(
    U: ProductVectorSet, epsilon: float | Fraction, real: BasisRealization | None = None
) -> tuple[Box, WitnessReport]:
    """
    No-signalling box induced by the witness Pi_U - epsilon * 1.

    The set is relabeled so that basis labels equal settings; the box is
    p(a|x) = Tr(W P_{a|x}) / Tr(W) and its value on the set's inequality is
    |U|(1 - eps)/(|U| - eps 2^n).

    Raises:
        NotAUPBError: If U is not a UPB
        ValidationError: If epsilon is not positive
        EpsilonTooLargeError: If the box has a negative entry
    """
    epsilon = float(epsilon)
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    _require_upb(U)
    U = relabel_by_appearance(U)
    real = _realization_for(U, real)
    B = build_inequality(U)
    D = 2**U.parties
    trace = len(U) - epsilon * D
    box = _operator_box(witness_operator(U, epsilon, real), B.scenario, real, trace)

    tol = get_settings().spectrum_tolerance
    nonnegative, normalized, nonsignalling = _check_box(box, tol)
    min_entry = float(min(box.values))
    if not nonnegative:
        raise EpsilonTooLargeError(
            f"epsilon {epsilon} makes the box negative (minimum entry {min_entry:.3g})",
            details={"epsilon": epsilon, "min_entry": min_entry},
        )
    report = WitnessReport(
        epsilon=epsilon,
        value=float(evaluate(B, box)),
        closed_form=len(U) * (1 - epsilon) / trace,
        min_entry=min_entry,
        nonnegative=nonnegative,
        normalized=normalized,
        nonsignalling=nonsignalling,
    )
    logger.info(f"witness box at eps={epsilon}: Bell value {report.value:.12g}")
    return box, report


def tensor_power_violation(
    U: ProductVectorSet, k: int, epsilon: float | Fraction, real: BasisRealization | None = None
) -> float:
    """
    Value of the k-fold product inequality on the k-fold witness box.

    Up to six parties in total the box is built directly from the k-fold
    tensor power of the witness and checked against the product of k witness
    boxes; beyond that the closed form beta^k is returned.
    """
    if k < 1:
        raise ValidationError(f"k must be at least 1, got {k}")
    box, report = witness_box(U, epsilon, real)
    if k == 1:
        return report.value
    if k * U.parties > 6:
        logger.info(f"{k * U.parties} parties: using beta^k for the tensor power")
        return report.value**k

    relabeled = relabel_by_appearance(U)
    real = _realization_for(relabeled, real)
    B = build_inequality(relabeled)
    Bk, boxk = B, box
    W = witness_operator(relabeled, float(epsilon), real)
    Wk = W
    for _ in range(k - 1):
        Bk = product_inequality(Bk, B)
        boxk = product_box(boxk, box)
        Wk = np.kron(Wk, W)
    real_k = BasisRealization(real.angles * k)
    direct = _operator_box(Wk, Bk.scenario, real_k, float(np.trace(Wk)))
    if not np.allclose(direct.values, boxk.values, atol=get_settings().spectrum_tolerance):
        raise ValidationError("direct tensor-power box disagrees with the product box")
    return float(evaluate(Bk, direct))


def witness_expectation(
    U: ProductVectorSet, epsilon: float | Fraction, real: BasisRealization | None = None
) -> float:
    """Tr(W rho_U) for the trace-normalized witness (Pi_U - eps 1)/(|U| - eps 2^n)."""
    epsilon = float(epsilon)
    rho, _ = upb_state(U, real)
    D = 2**U.parties
    W = witness_operator(U, epsilon, real) / (len(U) - epsilon * D)
    return float(np.trace(W @ rho).real)


def entanglement_check(
    U: ProductVectorSet, epsilon: float | Fraction, real: BasisRealization | None = None
) -> bool:
    """True iff the witness detects rho_U, i.e. Tr(W rho_U) < -1e-12."""
    return witness_expectation(U, epsilon, real) < -get_settings().orthogonality_tolerance
