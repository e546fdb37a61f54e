class QuftiError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(QuftiError, ValueError):
    """A mode count or matrix dimension is out of range."""


class ReferenceModeError(QuftiError, ValueError):
    """``d >= m``: no mode left over as a phase reference."""


class ArityError(QuftiError, ValueError):
    """Vector length or matrix dimensions do not match."""


class ShapeError(QuftiError, ValueError):
    """Matrix is not square or shapes disagree."""


class SizeGuardError(QuftiError, ValueError):
    """Requested computation exceeds the exponential-cost guard."""


class ConfigurationError(QuftiError, ValueError):
    """Photon configurations are invalid or incompatible."""


class NumericalError(QuftiError, ArithmeticError):
    """A numerical result violated an invariant (e.g. large negative probability)."""


class NoOptimumError(QuftiError, RuntimeError):
    """Every optimizer start ended on a singular or non-finite objective."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []
