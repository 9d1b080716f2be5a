"""
Report models for certificates and command results.

This module defines the Pydantic models returned by the verification
pipelines and serialized as machine output. Exact quantities use the
``Rational`` type, which serializes as ``p/q`` and never as a float.
"""

from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Literal

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator


def format_rational(value: Fraction) -> str:
    """Render a rational as ``p/q``; integers keep the ``/1``."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(value: Any) -> Fraction:
    """Accept ``p/q`` strings, integers and fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"'{value}' is not a rational p/q") from e
    raise ValueError(f"cannot read {type(value).__name__} as an exact rational")


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]


class ReportModel(BaseModel):
    """Base for all reports."""

    model_config = ConfigDict(arbitrary_types_allowed=True)


class ClassificationReport(ReportModel):
    """Classification of a product-vector set."""

    kind: Literal["FullBasis", "CompletableToFullBasis", "UPB", "ExtendibleOnlyToUPB"] = Field(
        ..., description="Classification kind"
    )
    parties: int = Field(..., description="Number of qubits")
    size: int = Field(..., description="Number of vectors in the set")
    witness_extension: str | None = Field(None, description="Orthogonal product vector, when extendible")
    completion: list[str] | None = Field(None, description="Vectors completing the set to a full basis")


class InequalityReport(ReportModel):
    """A constructed Bell inequality."""

    scenario: list[int] = Field(..., description="Settings per party")
    classical_bound: Rational = Field(..., description="Exact classical bound")
    terms: list[str] = Field(..., description="Terms as 'a|x' labels, prefixed by non-unit weights")
    text: str = Field(..., description="Human-readable inequality")


class ClassicalBoundReport(ReportModel):
    """Classical value by exhaustive strategy enumeration."""

    classical_bound: Rational
    max_weight: Rational
    strategy_count: int


class QuantumBoundReport(ReportModel):
    """Largest Bell-operator eigenvalue for one or more realizations."""

    max_eigenvalue: float = Field(..., description="Largest eigenvalue for the requested realization")
    max_weight: Rational
    trial_maxima: list[float] = Field(default_factory=list, description="Largest eigenvalues for random realizations")
    seed: int | None = None
    agrees: bool = Field(..., description="All maxima equal the largest weight within tolerance")


class NsMaximumReport(ReportModel):
    """No-signalling optimum from the exact simplex."""

    optimum: Rational
    classical_bound: Rational
    minimum: Rational | None = None
    trivial: bool
    pivots: int


class TightnessVerdict(str, Enum):
    TIGHT = "Tight"
    NOT_TIGHT = "NotTight"
    TRIVIAL = "Trivial"


class TightnessCertificate(ReportModel):
    """Facet certificate: saturating strategies and the dimension they span."""

    saturating_strategies: list[list[list[int]]] = Field(
        default_factory=list, description="Per strategy, per party, the outcome for each setting"
    )
    saturating_count: int
    strategy_count: int
    affine_dimension: int
    polytope_dimension: int
    verdict: TightnessVerdict
    method: Literal["exact", "modular", "all-saturating"] = "exact"

    @field_validator("affine_dimension", "polytope_dimension")
    @classmethod
    def validate_dimension(cls, v):
        """Dimensions are nonnegative."""
        if v < 0:
            raise ValueError("dimensions must be nonnegative")
        return v

    def model_post_init(self, __context: Any) -> None:
        """Keep the verdict consistent with the counts and dimensions."""
        all_saturate = self.saturating_count == self.strategy_count
        if self.verdict is TightnessVerdict.TRIVIAL and not all_saturate:
            raise ValueError("Trivial requires every strategy to saturate")
        if self.verdict is TightnessVerdict.TIGHT and (
            all_saturate or self.affine_dimension != self.polytope_dimension - 1
        ):
            raise ValueError("Tight requires affine dimension d - 1 and a non-saturating strategy")
        if self.verdict is TightnessVerdict.NOT_TIGHT and (
            all_saturate or self.affine_dimension == self.polytope_dimension - 1
        ):
            raise ValueError("NotTight contradicts the reported dimensions")


class WitnessReport(ReportModel):
    """Witness-induced box and its Bell value."""

    epsilon: float
    value: float = Field(..., description="Bell value on the witness box")
    closed_form: float = Field(..., description="|U|(1 - eps)/(|U| - eps 2^n)")
    min_entry: float
    nonnegative: bool
    normalized: bool
    nonsignalling: bool


class StateReport(ReportModel):
    """The UPB bound-entangled state and its PPT spectra."""

    dimension: int
    rank: int
    trace: float
    min_eigenvalue: float
    partial_transpose_minima: dict[str, float] = Field(
        ..., description="Minimum eigenvalue of the partial transpose, keyed by transposed parties"
    )
    is_ppt: bool
    witness_trace: float | None = Field(None, description="Tr(W rho_U) for the normalized witness")


class EpsilonReport(ReportModel):
    """Finite and global minima of <psi|Pi_U|psi> over product states."""

    epsilon_prime: float
    epsilon_global: float
    spread: float = Field(..., description="Largest minus smallest restart result")
    restarts: int
    seed: int


class GyniCertificateReport(ReportModel):
    """Tightness of GYNI_n through the strategy calculus."""

    n: int
    strategy_count: int
    saturating_count: int
    certificates_verified: int
    affine_dimension: int
    polytope_dimension: int
    verdict: TightnessVerdict
    cross_checked: bool = Field(False, description="Rank route run and in agreement")


class CatalogEntrySummary(ReportModel):
    """One row of ``catalog list``."""

    name: str
    parties: int
    size: int
    scenario: str
    classification: str
    ns_maximum: Rational | None = None
    tightness: str | None = None
    provenance: str


class CatalogCheck(ReportModel):
    """One recomputed expectation of a catalog entry."""

    check: str
    expected: str
    actual: str
    ok: bool


class CatalogVerification(ReportModel):
    """All recomputed expectations of one catalog entry."""

    name: str
    checks: list[CatalogCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


class SearchReport(ReportModel):
    """UPB classes found by the search."""

    n: int
    m_max: int
    size: int
    found: list[list[str]]


class CommandResult(ReportModel):
    """Outcome of one CLI invocation."""

    exit_code: int = Field(0, description="0 success, 1 usage or IO error, 2 verification failed")
    text: str = Field("", description="Human-readable report")
    machine: dict[str, Any] | None = Field(None, description="Machine-readable block")

    @field_validator("exit_code")
    @classmethod
    def validate_exit_code(cls, v):
        """Only the three documented statuses exist."""
        if v not in (0, 1, 2):
            raise ValueError(f"exit code {v} is not one of 0, 1, 2")
        return v
