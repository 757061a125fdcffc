"""Exception hierarchy.

Three families, matching the process exit codes of the command line tool:
input problems (exit 1), configured bounds (exit 2), and internal consistency
checks that must never fire on correct code (exit 3).
"""


class NewtonStrataError(Exception):
    """Base class for all errors raised by this package."""


class InputError(NewtonStrataError):
    """Invalid input value or unparsable text."""


class BoundError(NewtonStrataError):
    """A configured enumeration or search bound was exceeded."""


class InternalCheckError(NewtonStrataError):
    """A runtime self-check failed; indicates a bug, not bad input."""


# -- input errors -----------------------------------------------------------

class NonCoprimePair(InputError):
    pass


class ZeroPair(InputError):
    pass


class EmptyInput(InputError):
    pass


class NonIntegralBreakpoints(InputError):
    pass


class SlopeOutOfRange(InputError):
    pass


class AbscissaOutOfRange(InputError):
    pass


class DuplicateInput(InputError):
    pass


class NotSymmetric(InputError):
    pass


class MixedPrimeOrLevel(InputError):
    pass


class SingularMatrix(InputError):
    pass


class WrongLevel(InputError):
    pass


class NotSelfDualShape(InputError):
    pass


class ParseError(InputError):
    pass


# -- bound errors -----------------------------------------------------------

class BoundExceeded(BoundError):
    pass


class SearchDepthExceeded(BoundError):
    pass


# -- internal checks --------------------------------------------------------

class NonIntegralResult(InternalCheckError):
    pass


class NegativeResult(InternalCheckError):
    pass


class GradedPieceAssertionFailed(InternalCheckError):
    pass
