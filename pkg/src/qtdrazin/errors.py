"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 for input/shape problems, 3 for numerical hypothesis failures, 4 for
internal inconsistencies between independent computation routes.
"""


class QTError(Exception):
    exit_code = 1


class DimensionError(QTError, ValueError):
    exit_code = 2


class TensorFileError(QTError, ValueError):
    """Malformed tensor file; ``line``/``column`` are set when known."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class SingularError(QTError, ArithmeticError):
    exit_code = 3


class PreconditionError(QTError, ValueError):
    exit_code = 3


class HypothesisError(QTError):
    """A hypothesis of the perturbation theorem does not hold.

    ``which`` names the failing hypothesis (``"core"`` or ``"radius"``).
    """

    exit_code = 3

    def __init__(self, message, which, report=None):
        super().__init__(message)
        self.which = which
        self.report = report


class BoundInapplicableError(QTError):
    exit_code = 3

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InconsistencyError(QTError, RuntimeError):
    exit_code = 4


class StructureError(InconsistencyError):
    """Complex matrix is not the adjoint image of a quaternion matrix."""


class NotZCirculantError(InconsistencyError):
    """Quaternion matrix is not the z-block circulant image of a tensor."""
