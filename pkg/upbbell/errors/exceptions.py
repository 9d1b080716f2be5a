"""
Custom exceptions for the application.

This module defines the exceptions raised by the services and turned into
command results by the handlers in ``errors.handlers``. Exit codes follow
the CLI contract: 1 for usage, input and internal errors, 2 when a stated
expectation did not hold.
"""

from typing import Any


class BaseAppException(Exception):
    """Base exception for all application exceptions."""

    def __init__(
        self,
        message: str,
        exit_code: int = 1,
        details: dict[str, Any] | None = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class ConfigurationError(BaseAppException):
    """Exception raised when a configuration value is missing or invalid."""

    def __init__(
        self,
        message: str = "Missing or invalid configuration",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message=message, exit_code=1, details=details)


class ValidationError(BaseAppException):
    """Exception raised when a domain value violates its invariants."""

    def __init__(
        self,
        message: str = "Validation failed",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message=message, exit_code=1, details=details)


class FormatError(BaseAppException):
    """Exception raised when a .pvs or .bell document cannot be parsed."""

    def __init__(
        self,
        message: str = "Malformed input document",
        line: int | None = None,
        details: dict[str, Any] | None = None,
    ):
        details = dict(details or {})
        if line is not None:
            details["line"] = line
            message = f"line {line}: {message}"
        super().__init__(message=message, exit_code=1, details=details)


class VerificationFailedError(BaseAppException):
    """Exception raised when a computed result contradicts a stated expectation."""

    def __init__(
        self,
        message: str = "Verification failed",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message=message, exit_code=2, details=details)


# Product-vector sets


class InvalidSetError(ValidationError):
    """A product-vector set violates one of its invariants."""


class NonOrthogonalPairError(InvalidSetError):
    """Two members of a set are not orthogonal."""

    def __init__(self, j: int, k: int):
        super().__init__(
            message=f"vectors {j} and {k} are not orthogonal",
            details={"pair": [j, k]},
        )
        self.pair = (j, k)


class BasisIndexOutOfRangeError(InvalidSetError):
    """A basis index is outside [0, m_i) at its party."""

    def __init__(self, vector: int, party: int, basis: int, bases: int):
        super().__init__(
            message=f"vector {vector} uses basis {basis} at party {party}, which has {bases} bases",
            details={"vector": vector, "party": party, "basis": basis, "bases": bases},
        )


class TooManyVectorsError(InvalidSetError):
    """More than 2^n vectors in an n-qubit set."""

    def __init__(self, count: int, parties: int):
        super().__init__(
            message=f"{count} vectors exceed the {2**parties}-vector cap for {parties} qubits",
            details={"count": count, "parties": parties},
        )


class LengthMismatchError(ValidationError):
    """Operands have different party counts."""

    def __init__(self, left: int, right: int):
        super().__init__(
            message=f"length mismatch: {left} != {right}",
            details={"left": left, "right": right},
        )


class SearchBudgetExceededError(BaseAppException):
    """A backtracking search visited more nodes than allowed."""

    def __init__(self, nodes: int, cap: int):
        super().__init__(
            message=f"search exceeded its node cap of {cap}",
            exit_code=1,
            details={"nodes": nodes, "cap": cap},
        )


# Inequalities and boxes


class ScenarioMismatchError(ValidationError):
    """An inequality and a box belong to different scenarios."""


class ClassicalBoundMismatchError(ValidationError):
    """The stated bound is not the largest deterministic value."""

    def __init__(self, stated: str, actual: str):
        super().__init__(
            message=f"stated bound {stated} is not the classical bound {actual}",
            details={"stated": stated, "actual": actual},
        )


class EmptyInputError(ValidationError):
    """An operation received no points."""

    def __init__(self, message: str = "empty input"):
        super().__init__(message=message)


class SolverError(BaseAppException):
    """The exact simplex hit a state that signals an internal bug."""

    def __init__(
        self,
        message: str = "linear program solver failed",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message=message, exit_code=1, details=details)


class InfeasibleError(SolverError):
    """The equality system has no nonnegative solution."""


class UnboundedError(SolverError):
    """The objective is unbounded on the feasible region."""


# Quantum realization


class DegenerateRealizationError(ValidationError):
    """Two bases at one party coincide or are orthogonal."""


class NotAUPBError(ValidationError):
    """An operation that needs a UPB received something else."""


class EpsilonTooLargeError(ValidationError):
    """The witness-induced box has a negative entry."""


# Strategy calculus


class NoNumericSymbolError(ValidationError):
    """A strategy string has no constant symbol to evaluate from."""


class NotAnFError(ValidationError):
    """The symbol at the requested position is not f."""


class AlreadySaturatingError(ValidationError):
    """Congruence reduction was asked for a saturating strategy."""


class CertificateFailureError(BaseAppException):
    """A congruence certificate does not reproduce its target box."""

    def __init__(
        self,
        message: str = "certificate does not reproduce its target",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message=message, exit_code=1, details=details)


# Extension methods


class BasisNotPresentError(ValidationError):
    """The requested basis is not used at the requested party."""


class OrthogonalityRuleViolatedError(ValidationError):
    """A combine plan has two subsets that are not cross-orthogonal."""


# Catalog


class UnknownNameError(ValidationError):
    """No catalog entry has the requested name."""

    def __init__(self, name: str):
        super().__init__(message=f"unknown catalog entry '{name}'", details={"name": name})
