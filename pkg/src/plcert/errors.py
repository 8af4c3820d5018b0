"""Exception taxonomy shared across the package.

All domain errors derive from PLCertError so callers (CLI, service) can map
them to a single failure channel without enumerating subclasses.
"""

from __future__ import annotations


class PLCertError(Exception):
    """Base class for every error raised by this package on purpose."""

    code = "error"


class OutOfDomain(PLCertError):
    """A point fell outside the domain of the map being evaluated."""

    code = "out_of_domain"


class DomainExceeded(PLCertError):
    """An image left the domain required by the operation (e.g. compose).

    Carries the offending range so callers can report what escaped where.
    """

    code = "domain_exceeded"

    def __init__(self, msg: str, *, lo=None, hi=None):
        super().__init__(msg)
        self.lo = lo
        self.hi = hi


class AccumulationPoint(PLCertError):
    """A requested finite enumeration is provably infinite near a point."""

    code = "accumulation_point"


class LambdaTooSmall(PLCertError):
    """Family parameter fails the ordering constraint (needs lambda > 3)."""

    code = "lambda_too_small"


class ContinuityViolated(PLCertError):
    """Adjacent piece formulas disagree at a shared breakpoint."""

    code = "continuity_violated"


class InvariantViolated(PLCertError):
    """A structural invariant of a constructor or algorithm failed."""

    code = "invariant_violated"


class NotApplicable(PLCertError):
    """The requested operation is undefined for this map or mode."""

    code = "not_applicable"


class ConstructionFailed(PLCertError):
    """A certificate finder could not complete its chain.

    ``step`` names the first link that failed (e.g. "a>z1").
    """

    code = "construction_failed"

    def __init__(self, step: str, msg: str = ""):
        super().__init__(msg or step)
        self.step = step


class NotLoose(PLCertError):
    """Amplification requires a loose certificate and got something else."""

    code = "not_loose"


class ToleranceNotReached(PLCertError):
    """An enclosure iteration hit its round cap before reaching tol."""

    code = "tolerance_not_reached"


class SelfMapRequired(PLCertError):
    """The operation needs f(domain) inside domain and it is not."""

    code = "self_map_required"


class PieceExplosion(PLCertError):
    """An iterate or partition grew past the configured node cap."""

    code = "piece_explosion"


class UncertifiedInput(PLCertError):
    """An input certificate failed re-verification."""

    code = "uncertified_input"


class MapSpecError(PLCertError):
    """Problems with the JSON map description format."""

    code = "mapspec_error"


class ParseError(MapSpecError):
    """Syntactically invalid map description."""

    code = "parse_error"


class ValidationError(MapSpecError):
    """Well-formed map description with invalid content."""

    code = "validation_error"
