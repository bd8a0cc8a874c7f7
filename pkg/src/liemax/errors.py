"""Exception types shared across the toolkit."""


class LiemaxError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(LiemaxError, ValueError):
    """Operands belong to algebras of different dimension."""


class ValidationError(LiemaxError, ValueError):
    """A construction-time validation gate failed (Jacobi, homomorphism, ...)."""


class RepresentationClosureError(LiemaxError):
    """A matrix that should lie in the algebra's image does not (within tolerance)."""


class DomainError(LiemaxError):
    """An input is outside the mathematical domain of the operation."""


class LogDomainError(DomainError):
    """Group element outside the principal-logarithm domain."""


class GenericSetError(DomainError):
    """Covector outside the generic set required by case-(b) operations."""


class CatalogError(LiemaxError, KeyError):
    """Unknown group, Hamiltonian or symmetry name."""


class IntegrationError(LiemaxError):
    """The adaptive integrator could not continue (step-size underflow)."""

    def __init__(self, message: str, last_time: float):
        super().__init__(message)
        self.last_time = last_time
