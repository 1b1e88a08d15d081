"""Exception and warning types shared across the package."""


class CombrecError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(CombrecError, ValueError):
    pass


class CommutativityError(CombrecError):
    pass


class CoefficientError(CombrecError, ValueError):
    pass


class RangeError(CombrecError, ValueError):
    pass


class ConditioningError(CombrecError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ImaginaryResidueError(CombrecError):
    pass


class NotSimpleRootsError(CombrecError):
    pass


class ConsistencyError(CombrecError):
    pass


class MultiplicityWarning(UserWarning):
    pass


class PrecisionWarning(UserWarning):
    pass
