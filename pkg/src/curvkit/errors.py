"""Exception types shared across the package."""


class CurvkitError(Exception):
    """Base class for all package-specific errors."""


class JetOrderError(CurvkitError):
    """A jet was requested or combined beyond the supported order."""


class DomainError(CurvkitError):
    """A point lies outside the chart box of a metric field."""


class DegenerateMetricError(CurvkitError):
    """The metric matrix is singular or has the wrong inertia at a point."""


class SignatureError(CurvkitError):
    """An operation requires a Riemannian metric but got a pseudo one."""


class CatalogError(CurvkitError):
    """Unknown catalog entry or parameters outside their legal range."""


class ConfigError(CurvkitError):
    """A run configuration file or value violates the schema."""


class ConvergenceError(CurvkitError):
    """Grid refinement hit its node budget before estimates settled."""


class FrameSearchError(CurvkitError):
    """A frame optimisation failed to reach its target residual."""
