"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class NoConvergence(RuntimeError):
    """The phase solver found no schedule meeting the residual tolerance."""


class OutOfSubspace(ValueError):
    """A statevector has weight outside span{|R>, |T>}."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class PoleError(ArithmeticError):
    """A printed phase condition was evaluated exactly at a tangent pole."""
