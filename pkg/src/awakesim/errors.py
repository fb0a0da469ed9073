"""Exception types shared across the package."""


class OracleTooLarge(Exception):
    """Raised when an exact solver is asked for a graph above its size cap."""


class RoundCapExceeded(Exception):
    """Raised when a protocol fails to terminate within its round budget.

    Carries the partial awake ledger on the ``ledger`` attribute so callers
    can inspect how far the run got before it was cut off.
    """

    def __init__(self, message, ledger=None):
        super().__init__(message)
        self.ledger = ledger


class InvalidAssignment(Exception):
    """Raised when a fractional assignment violates its node-sum constraint."""


class InvalidPath(Exception):
    """Raised when a path handed to ``augment`` is not augmenting."""


class PreconditionViolated(Exception):
    """Raised when a structural precondition fails inside the path machinery."""
