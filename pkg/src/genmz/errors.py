"""Exception hierarchy shared by all genmz modules."""


class GenMZError(Exception):
    """Base class for every error raised by genmz."""


class DimensionError(GenMZError, ValueError):
    """Operands have incompatible or non-square shapes."""


class DomainError(GenMZError, ValueError):
    """An argument lies outside the domain of the operation (e.g. d < 2)."""


class UnsupportedDimensionError(DomainError):
    """The mode count d has no construction in this package."""


class NotHermitianError(GenMZError, ValueError):
    """Input expected Hermitian (or unitary) within tolerance was not."""


class PoleError(DomainError):
    """A closed-form expression was evaluated at one of its poles."""


class SingularSupportError(GenMZError, ArithmeticError):
    """A zero-probability outcome carries a non-removable Fisher contribution."""


class ConsistencyError(GenMZError, ArithmeticError):
    """Two routes that must agree numerically did not."""
