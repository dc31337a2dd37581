"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """Raised when an argument violates an operation's preconditions."""


class InvalidStateError(ValueError):
    """Raised when an array cannot be a valid state, density matrix or gate."""
