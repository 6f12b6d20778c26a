"""Exception hierarchy shared across the package."""


class MagatomError(Exception):
    """Base class for all package-specific failures."""


class NumericalError(MagatomError):
    """A computation could not reach its accuracy contract."""


class ConditioningError(NumericalError):
    """Overlap matrix numerically indefinite; Cholesky reduction aborted."""


class LevelTrackingError(NumericalError):
    """Eigenvalue levels could not be tracked across a parameter stencil."""


class BracketError(NumericalError):
    """A sign change could not be bracketed inside the search window."""


class NoQSSolutionError(ValueError, MagatomError):
    """The truncation condition has no admissible root for these inputs."""
