"""Exception hierarchy.

Three families, mirrored by the CLI exit codes:

* :class:`ParseError` (exit 2): malformed input files.
* :class:`ValidationError` (exit 1): well-formed input that violates a
  precondition (wrong ring, missing identity, hypothesis not met, ...).
* :class:`InvariantBreach` (exit 3): a property that the mathematics
  guarantees did not hold.  These always indicate a bug.
"""

from __future__ import annotations


class PathHomError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ParseError(PathHomError, ValueError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)


class ValidationError(PathHomError, ValueError):
    exit_code = 1


class InvariantBreach(PathHomError, AssertionError):
    exit_code = 3


# validation failures
class NotConnected(ValidationError):
    pass


class RingMismatch(ValidationError):
    pass


class PowerExceeded(ValidationError):
    pass


class NotClosed(ValidationError):
    pass


class NotField(ValidationError):
    pass


class IdentityMissing(ValidationError):
    pass


class UnsupportedAmbient(ValidationError):
    pass


class InfiniteAmbient(ValidationError):
    pass


class HypothesisViolated(ValidationError):
    def __init__(self, message: str, witnesses=()):
        self.witnesses = list(witnesses)
        super().__init__(message)


class NotAbelian(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class NotUnital(ValidationError):
    pass


class UnitMissing(ValidationError):
    pass


class NotNatural(ValidationError):
    pass


class UnsupportedCombination(ValidationError):
    pass


# theorem-guaranteed properties
class CompositionNotZero(InvariantBreach):
    pass


class NotExact(InvariantBreach):
    pass


class NotMutuallyInverse(InvariantBreach):
    pass


class UnequalInducedMaps(InvariantBreach):
    pass


class NonComposable(InvariantBreach):
    pass
