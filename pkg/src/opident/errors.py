"""Exception types raised across the package."""


class OpIdentError(Exception):
    """Base class for all package errors."""


class DegenerateLattice(OpIdentError, ValueError):
    """Lattice generator has too small a rank for the requested quantity."""


class DegenerateDiscretization(OpIdentError, ValueError):
    """Rounding a continuous generator onto Z_L collapsed its rank."""


class LengthMismatch(OpIdentError, ValueError):
    pass


class NotADivisor(OpIdentError, ValueError):
    pass


class UnknownKind(OpIdentError, ValueError):
    pass


class InvalidParams(OpIdentError, ValueError):
    pass


class EmptyFamily(OpIdentError, ValueError):
    pass


class ShapeMismatch(OpIdentError, ValueError):
    pass


class NotIdentifiable(OpIdentError):
    """The identification matrix has no stable left inverse."""

    def __init__(self, message, ratio=None):
        super().__init__(message)
        self.ratio = ratio
