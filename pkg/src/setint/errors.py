"""Exception types shared across the package."""


class SetintError(Exception):
    """Base class for all setint errors."""


class InvalidArgumentError(SetintError, ValueError):
    """An argument violates a documented precondition."""


class UnsupportedOperationError(SetintError):
    """The operation is not available for the given inputs (e.g. no declared infratype)."""


class ResourceLimitError(SetintError):
    """A hard enumeration / cardinality cap would be exceeded."""


class ConfigError(SetintError):
    """A declared bound or experiment configuration is inconsistent with the data."""


class SolverFailureError(SetintError):
    """An iterative solver did not reach its certificate tolerance.

    Carries the best value and gap seen so callers can still use the estimate.
    """

    def __init__(self, message, value=None, gap=None):
        super().__init__(message)
        self.value = value
        self.gap = gap
