"""Exception types raised across the package."""


class EntboundError(Exception):
    pass


class DimensionError(EntboundError, ValueError):
    """Shape mismatch or a matrix larger than the configured guard."""


class ContractError(EntboundError, ValueError):
    """An input violates a documented precondition (e.g. non-Hermitian)."""


class DomainError(EntboundError, ValueError):
    """A parameter lies outside the domain of the operation."""


class NumericalError(EntboundError, RuntimeError):
    """A numerical run left its validity envelope (e.g. lost positivity)."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
