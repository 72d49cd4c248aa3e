"""Exception hierarchy shared by all modules."""


class PllHopfError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(PllHopfError, ValueError):
    pass


class DimensionMismatch(PllHopfError, ValueError):
    pass


class SingularMatrix(PllHopfError, ArithmeticError):
    pass


class InvalidFrequency(PllHopfError, ValueError):
    pass


class DegenerateCrossing(PllHopfError, ArithmeticError):
    """Eigenvalue crosses the imaginary axis with zero speed."""


class NotAHopfPoint(PllHopfError, ValueError):
    pass


class RankDeficiency(PllHopfError, ArithmeticError):
    """Critical eigenvalue is not simple."""


class DegeneratePairing(PllHopfError, ArithmeticError):
    pass


class OutOfDomain(PllHopfError, ValueError):
    pass


class InvalidStep(PllHopfError, ValueError):
    pass


class StepUnderflow(PllHopfError, ArithmeticError):
    pass


class TooShort(PllHopfError, ValueError):
    pass
