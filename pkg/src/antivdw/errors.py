"""Exception types shared across the package."""

from __future__ import annotations


class AwError(Exception):
    """Base class for all package-specific errors."""


class NonDistinctError(AwError):
    """A cyclic progression would repeat elements (n/gcd(d,n) < k)."""


class OutOfRangeError(AwError):
    """An interval progression would leave [1..n]."""


class DomainWipeout(AwError):
    """Constraint propagation emptied a candidate-color domain."""

    def __init__(self, position: int):
        super().__init__(f"domain of position {position} became empty")
        self.position = position


class CacheMissError(AwError):
    """Prefix pruning was requested but a required aw([m],k) is not cached."""


class LimitExceededError(AwError):
    """Instance size exceeds a brute-force module's configured limit."""


class NotCoprimeError(AwError):
    """Multiplicative order requested for a non-unit residue."""


class WidthOverflowError(AwError):
    """A construction parameter set exceeds the supported integer width."""


class PreconditionError(AwError):
    """A construction precondition does not hold for the given input."""


class ConflictError(AwError):
    """A store put() contradicts an already-proven value."""


class StoreCorruptionError(AwError):
    """A persisted record failed re-verification on load."""


class InconclusiveError(AwError):
    """Search aborted by a node or time budget before reaching an answer."""

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes
