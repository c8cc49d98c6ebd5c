"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Malformed word, token, parameter or spec."""


class PreconditionError(ValueError):
    """An operation was called outside its domain (e.g. a point not in K)."""


class TransportError(PreconditionError):
    """The transport condition (integral of E_gamma > 1) fails."""


class NoMatchError(PreconditionError):
    """A collapsed bracket has no partner within the scan horizon."""


class ResourceError(RuntimeError):
    """A configured cap (length, depth, retries, witnesses) was exceeded."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BudgetError(ResourceError):
    """An approximation budget was exhausted."""
