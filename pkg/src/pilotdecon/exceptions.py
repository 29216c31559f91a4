"""Exception types shared across the package."""


class PilotDeconError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(PilotDeconError, ValueError):
    """Matrix/vector shapes are inconsistent with the operation."""


class InvalidInputError(PilotDeconError, ValueError):
    """Input contains NaN/Inf entries or is otherwise malformed."""


class SingularMatrixError(PilotDeconError, ValueError):
    """A linear system is numerically singular."""


class ConfigurationError(PilotDeconError, ValueError):
    """An experiment or scenario description is invalid."""


class DegenerateInputError(PilotDeconError, ValueError):
    """An estimator received data it cannot operate on (e.g. all-zero)."""
