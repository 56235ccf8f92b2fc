"""Exception hierarchy shared by every module."""


class CornerGrowthError(Exception):
    """Base class. ``code`` is the machine-readable identifier used by the CLI."""

    code = "error"


class ParameterRangeError(CornerGrowthError, IndexError):
    code = "range"


class InvalidParametersError(CornerGrowthError, ValueError):
    code = "invalid-parameters"


class DomainError(CornerGrowthError, ValueError):
    code = "domain"


class NumericalError(CornerGrowthError, ArithmeticError):
    code = "numerical"


class DivergenceError(CornerGrowthError, ArithmeticError):
    code = "divergence"


class ResourceError(CornerGrowthError, RuntimeError):
    code = "resource"


class InsufficientExtentError(CornerGrowthError, RuntimeError):
    code = "insufficient-extent"


class DataError(CornerGrowthError, ValueError):
    code = "data"
