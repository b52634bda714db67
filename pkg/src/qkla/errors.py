"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: :class:`ParameterError` -> 2,
:class:`NumericError` and subclasses -> 3, ``OSError`` -> 4.
"""


class QklaError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(QklaError, ValueError):
    """Invalid user-supplied parameter (wrong range, inconsistent config)."""


class NumericError(QklaError, ArithmeticError):
    """A computation left its mathematical domain or failed numerically."""


class DomainError(NumericError):
    """Argument outside the domain of a mathematical function."""


class TieError(NumericError):
    """Duplicate sample values produced a zero nearest-neighbour distance."""


class DegenerateSampleError(NumericError):
    """Sample cannot support the requested estimate (zero range, tiny denominator)."""


class IntegrationError(NumericError):
    """A stochastic recursion diverged."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class FitError(NumericError):
    """Histogram fit could not be performed."""
