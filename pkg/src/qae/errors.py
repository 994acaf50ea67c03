"""Exception hierarchy shared by all pipeline stages.

Input/format problems derive from :class:`InputError`; failures of the
numerical machinery derive from :class:`NumericalError`.  The CLI maps the
former to exit code 2 and the latter to exit code 3.
"""


class QaeError(Exception):
    """Base class for all package errors."""


class InputError(QaeError):
    """Malformed or inconsistent input (files, shapes, labels)."""


class ParseError(InputError):
    """A text input could not be parsed.

    Attributes:
        line: 1-based line number of the offending line, when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyHamiltonian(ParseError):
    """Hamiltonian input contained no terms."""


class ShapeMismatch(InputError):
    """Dimensions of two objects do not agree."""


class NonHermitianHamiltonian(InputError):
    """Hamiltonian with complex coefficients fed to a path that needs a real spectrum."""


class InvalidShots(InputError):
    """Shot count outside the allowed range."""


class SizeExceeded(InputError):
    """Qubit count above the statevector simulation cap."""


class OracleSizeExceeded(InputError):
    """Problem too large for a dense verification oracle."""


class NumericalError(QaeError):
    """A numerical procedure failed on valid input."""


class NotSymmetric(NumericalError):
    """Matrix expected to be symmetric/Hermitian deviates beyond tolerance."""


class DegenerateConstraint(NumericalError):
    """Constraint matrix is numerically zero on the working subspace."""


class BracketFailure(NumericalError):
    """Bisection could not establish a feasible bracket endpoint."""


class DegenerateRelaxation(NumericalError):
    """Relaxation returned a numerically rank-zero matrix."""


class OracleMismatch(NumericalError):
    """Primary solve and independent oracle disagree beyond tolerance."""
