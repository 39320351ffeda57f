"""Exception hierarchy for the tadyn toolkit.

Every error raised by the library derives from :class:`TadynError` and
carries a stable ``code`` string that the CLI and the HTTP service expose
verbatim in reports.
"""


class TadynError(Exception):
    """Base class for all library errors."""

    code = "error"


class RamificationCapExceeded(TadynError):
    """A series operation needed exponent denominators beyond the cap."""

    code = "ramification-cap-exceeded"


class ZeroDivisionSeries(TadynError):
    """Inversion of a series that is zero up to its truncation order."""

    code = "zero-division"


class ClusterAmbiguity(TadynError):
    """Two characteristic roots fell in the ambiguous clustering band.

    Signals the caller to raise precision and retry.
    """

    code = "cluster-ambiguity"


class BranchSeparationError(TadynError):
    """Two branches still share all computed terms after the bounded retry."""

    code = "branch-separation"


class MatchAmbiguity(TadynError):
    """Orbit matching found two candidate images within matching precision."""

    code = "match-ambiguity"


class MatchFailure(TadynError):
    """Orbit matching found no image within matching precision."""

    code = "match-failure"


class SizeBudgetExceeded(TadynError):
    """An iterate would exceed the configured degree budget."""

    code = "size-budget-exceeded"


class FormalCycleAmbiguity(TadynError):
    """Primitive-root test for a formal cycle fell in the tolerance band."""

    code = "formal-cycle-ambiguity"


class ChartFailure(TadynError):
    """A point sits ambiguously at a chart boundary."""

    code = "chart-failure"


class TruncationExhausted(TadynError):
    """Coefficient cancellation still descends at the truncation boundary."""

    code = "truncation-exhausted"


class NoBreakpoint(TadynError):
    """The piecewise-linear radius equation on a ray degenerates."""

    code = "no-breakpoint"


class BoundaryAmbiguity(TadynError):
    """A root sits exactly at a ball boundary within matching precision."""

    code = "boundary-ambiguity"


class RootFinderNonConvergence(TadynError):
    """The simultaneous complex root iteration failed to converge."""

    code = "root-finder-non-convergence"


class ContinuationLost(TadynError):
    """Numeric root matching failed between adjacent sample radii."""

    code = "continuation-lost"


class NoMatch(TadynError):
    """A Puiseux point evaluation matched no numeric root within bound."""

    code = "no-match"


class FamilyParseError(TadynError):
    """Family specification text failed to parse.

    ``column`` is the 1-based position of the offending token.
    """

    code = "syntax-error"

    def __init__(self, message: str, column: int | None = None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class DegreeMismatch(TadynError):
    """Declared family degree differs from the computed one."""

    code = "degree-mismatch"


class InvalidFamily(TadynError):
    """Family fails validation (degree < 2 or common factors at t != 0)."""

    code = "invalid-family"


class PreconditionError(TadynError):
    """An operation was invoked outside its stated precondition."""

    code = "precondition"
