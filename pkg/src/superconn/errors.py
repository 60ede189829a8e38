"""Exception types shared across the package."""


class SuperconnError(Exception):
    """Base class for all package errors."""


class DimensionError(SuperconnError):
    """Operands live on charts of different dimension, or an index is out of range."""


class ParameterError(SuperconnError):
    """The homotopy parameter t appeared where it is not allowed."""


class TruncationError(SuperconnError):
    """A computation exceeded the declared theta-degree cap."""

    def __init__(self, needed, cap):
        super().__init__(f"theta degree {needed} exceeds cap {cap}")
        self.needed = needed
        self.cap = cap


class ParityError(SuperconnError):
    """A tensor violates its required (form degree, End parity) pattern."""


class RankError(SuperconnError):
    """Operands are defined over different supervector bundle ranks."""


class HomogeneityError(SuperconnError):
    """A degree-homogeneous input was required but a mixed one was supplied."""


class ConsistencyError(SuperconnError):
    """An internal linearity/sign check failed; indicates a bug, not bad input."""
