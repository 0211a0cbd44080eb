"""Exception hierarchy for the exact q-series engine."""


class QBaileyError(Exception):
    """Base class for all engine errors."""


class TruncationMismatch(QBaileyError):
    """Two series with different truncations were combined (usage error)."""


class NonInvertible(QBaileyError):
    """Inversion was requested for a series that is not a unit of the ring."""


class TruncationOverflow(QBaileyError):
    """A substitution would move exponents outside the truncation caps."""


class DomainError(QBaileyError):
    """An operation was applied outside its mathematical domain."""


class PoleError(QBaileyError):
    """A denominator factor evaluated to zero at a rational point."""

    def __init__(self, factor: str):
        super().__init__(f"pole: denominator factor {factor} evaluates to zero")
        self.factor = factor


class InternalConsistencyError(QBaileyError):
    """An internal integrality or structural assertion failed."""
