"""Exception hierarchy shared across the toolkit.

Input and format problems derive from InputError (CLI exit code 2);
numerical breakdowns derive from NumericalError (CLI exit code 3).
"""


class SpectraFreeError(Exception):
    """Base class for all toolkit errors."""


class InputError(SpectraFreeError):
    """Malformed or inconsistent user input."""


class ParseError(InputError):
    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class ValidationError(InputError):
    """Structurally valid input violating a domain invariant."""


class DimensionError(InputError):
    """Operand shapes do not match."""


class ArgumentError(InputError):
    """Out-of-range or inconsistent arguments."""


class SizeCapError(InputError):
    """Problem exceeds a dense-path size cap; use a spectrum-free method."""


class ExtrapolationError(InputError):
    """Evaluation point lies outside a tabulated range."""


class UnsupportedFormatError(InputError):
    """File format feature outside the supported subset."""


class NumericalError(SpectraFreeError):
    """Numerical failure in a solver or construction."""


class DefinitenessError(NumericalError):
    """Matrix expected symmetric positive definite is not."""


class SolverError(NumericalError):
    """Iterative solver failed; carries the final SolveReport."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SingularFilterError(NumericalError):
    """Filter evaluates to a non-finite value at a retained eigenvalue."""


class RankError(NumericalError):
    """Linear system for a fit is singular or inconsistent."""


class NonFiniteSampleError(NumericalError):
    """A function sample used in a quadrature or fit is not finite."""
