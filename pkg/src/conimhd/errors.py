"""Exception hierarchy shared by all conimhd modules."""


class ConimhdError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ConimhdError, ValueError):
    """A surface point lies outside the declared chart domain."""


class SingularChartError(ConimhdError):
    """The chart metric is degenerate (determinant below threshold)."""


class GridError(ConimhdError, ValueError):
    """A structured grid is too small or malformed for differencing."""


class ThermoError(ConimhdError, ValueError):
    """Non-physical thermodynamic state (negative sound-speed radicand,
    non-positive density or pressure)."""


class DegenerateError(ConimhdError):
    """A closed-form characteristic speed has a vanishing denominator."""


class BranchError(ConimhdError):
    """Neither branch of the quartic speed relation is evaluable."""


class EigenError(ConimhdError):
    """Eigenvalue computation failed."""


class ConvergenceError(EigenError):
    """Iterative eigensolver did not converge."""


class SingularPencilError(EigenError):
    """det(A - lambda B) vanishes identically."""


class NoiseFloorError(ConimhdError):
    """Residual norms are too small to measure a convergence order."""


class ConfigError(ConimhdError, ValueError):
    """Unreadable or inconsistent run configuration."""
