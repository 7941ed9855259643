"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where a quantity is defined."""


class PoleError(DomainError):
    """The gamma function was evaluated at a pole."""


class DivergenceError(DomainError):
    """The requested integral is infinite."""


class QuadratureWarning(RuntimeWarning):
    """Adaptive quadrature did not certify the requested tolerance."""
