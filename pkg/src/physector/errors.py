"""Exception types raised across the package."""


class PhysectorError(Exception):
    """Base class for all package errors."""


class InvalidMatrixError(PhysectorError, ValueError):
    """A matrix is empty, not two-dimensional, or holds non-finite entries."""


class ShapeError(PhysectorError, ValueError):
    """Operand dimensions do not agree."""


class NormalizationError(PhysectorError, ValueError):
    """Weights or probabilities do not sum to what the caller promised."""


class InvalidProbabilityError(PhysectorError, ValueError):
    pass


class OutsideFovError(PhysectorError):
    """The requested support test cannot be represented by the measured outcomes.

    Raised when the linear system defining a decision observable has no
    (numerically) exact solution, i.e. the working levels exceed the
    rank of the outcome coefficients.
    """

    def __init__(self, message, residual=None, set_index=None):
        super().__init__(message)
        self.residual = residual
        self.set_index = set_index

    def __str__(self):
        msg = super().__str__()
        if self.set_index is not None:
            msg = f"measurement set {self.set_index}: {msg}"
        return msg


class PositivityError(OutsideFovError):
    """An excluded level received a non-positive diagonal weight."""
