"""Exception hierarchy shared by all modules."""


class AdiabaticError(Exception):
    pass


class NotHermitian(AdiabaticError, ValueError):
    pass


class NonFiniteMatrix(AdiabaticError, ValueError):
    pass


class ConvergenceFailure(AdiabaticError, RuntimeError):
    pass


class InvalidCollapse(AdiabaticError, ValueError):
    """Collapse parameter t must be strictly positive."""


class RequiresRationalFlow(AdiabaticError, ValueError):
    pass


class Ambiguous(AdiabaticError):
    """A branch is neither flat nor divergent on the given grid."""


class DimensionMismatch(AdiabaticError, ValueError):
    pass


class NotPSD(AdiabaticError, ValueError):
    pass


class IndexOutOfRange(AdiabaticError, IndexError):
    pass


class InvalidGrid(AdiabaticError, ValueError):
    pass


class ModeOutOfRange(AdiabaticError, ValueError):
    pass


class ParseError(AdiabaticError, ValueError):
    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


class ZeroVector(AdiabaticError, ValueError):
    pass
