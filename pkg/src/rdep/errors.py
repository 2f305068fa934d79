"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Raised when vector or matrix shapes disagree."""


class DataError(ValueError):
    """Raised for malformed or unusable input data."""


class SolverError(RuntimeError):
    """Raised when an optimizer stops without a usable answer (e.g. iteration cap)."""


class TrainingError(RuntimeError):
    """Raised when a model cannot be fitted."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration
