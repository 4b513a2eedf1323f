"""Exception hierarchy.

``ValidationFailure`` marks bad inputs or configuration (CLI exit code 2),
``NumericalFailure`` marks computations that left their guaranteed envelope
(CLI exit code 3).
"""


class DecolabError(Exception):
    """Base class for all package errors."""


class ValidationFailure(DecolabError, ValueError):
    """Invalid input, parameter, or file content."""


class NumericalFailure(DecolabError, ArithmeticError):
    """A numerical result violated its contract."""


class NotSquareError(ValidationFailure):
    pass


class NotHermitianError(ValidationFailure):
    pass


class NegativeSpectrumError(NumericalFailure):
    pass


class DimensionMismatchError(ValidationFailure):
    pass


class NormError(ValidationFailure):
    pass


class TruncationTooLossyError(ValidationFailure):
    pass


class EtaOutOfRangeError(ValidationFailure):
    pass


class EtaZeroError(ValidationFailure):
    """The inverse damping map is singular at eta = 0."""


class WrongOrderingError(ValidationFailure):
    pass


class NotHermitianResultError(NumericalFailure):
    """A moment matrix came out non-Hermitian; indicates an ordering bug."""


class UnphysicalError(NumericalFailure):
    """Operation requires a positive-semidefinite state."""


class NotTwoQubitError(ValidationFailure):
    pass


class SeparableInputError(ValidationFailure):
    pass
