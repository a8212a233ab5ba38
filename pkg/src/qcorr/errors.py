"""Exception hierarchy.

Everything raised on purpose derives from :class:`QCorrError` so callers
(the CLI in particular) can separate mathematical failures from bugs.
"""


class QCorrError(Exception):
    """Base class for toolkit errors."""


class ShapeMismatch(QCorrError, ValueError):
    pass


class NotCStar(QCorrError):
    """The algebra admits no *-isomorphism onto a direct sum of matrix blocks."""


class NotPositive(QCorrError, ValueError):
    pass


class NotCoassociative(QCorrError):
    pass


class GaloisSingular(QCorrError):
    """One of the maps a(x)b -> Delta(a)(1(x)b), (a(x)1)Delta(b) is not invertible."""


class NoHaarState(QCorrError):
    pass


class NoSolution(QCorrError):
    """A linear system that defines a structure map is inconsistent."""


class HaarNotFaithful(QCorrError):
    pass


class NotInvariant(QCorrError):
    pass


class ZeroSubalgebra(QCorrError, ValueError):
    pass


class DegenerateVector(QCorrError, ValueError):
    pass


class InvalidSubgroup(QCorrError):
    pass


class HypothesisFailed(QCorrError):
    """No covariant conditional expectation onto the subalgebra exists."""


class InvalidGroup(QCorrError, ValueError):
    pass


class TooLarge(QCorrError, ValueError):
    pass


class NotNormal(QCorrError):
    pass


class UnknownKind(QCorrError, KeyError):
    pass


class ParseError(QCorrError, ValueError):
    """Input is not valid JSON or does not follow the interchange format."""


class ValidationFailed(QCorrError):
    """Raised with the failing :class:`~qcorr.algebra.ValidationReport` attached."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
