"""Exception hierarchy shared by all modules."""


class BjseqError(Exception):
    """Base class for all library errors."""


class ValidationError(BjseqError):
    """Structurally invalid input (malformed atoms, bad parameters, bad JSON)."""


class SpaceMembershipError(BjseqError):
    """A sequence was passed to an operation outside its space."""


class DomainError(BjseqError):
    """Precondition violation other than membership (zero sequence, p out of range, ...)."""


class UnsupportedTailError(DomainError):
    """Tail shape outside what an exact operation can decide (documented limits)."""


class PeriodOverflowError(DomainError):
    """Combined period of tails exceeds the configured enumeration cap."""


class SearchExhaustedError(BjseqError):
    """A witness search ran out of budget without finding a verified witness."""


class InternalInvariantError(BjseqError):
    """An internal invariant failed; indicates a library bug, not a user error."""
