"""Exception hierarchy shared by all modules."""


class ScatsizeError(Exception):
    """Base class for every error raised by the package."""


class GeometryError(ScatsizeError, ValueError):
    pass


class NonOrthogonal(GeometryError):
    pass


class NonUnit(GeometryError):
    pass


class NegativeB(GeometryError):
    pass


class DomainError(ScatsizeError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class OffSurface(DomainError):
    pass


class InsideObstacle(DomainError):
    pass


class NyquistViolation(DomainError):
    pass


class NumericalError(ScatsizeError):
    """Solver or numerical failure (CLI exit code 3)."""


class NoConvergence(NumericalError):
    pass


class ZeroAmplitude(NumericalError):
    pass


class TooFewPoints(NumericalError):
    pass


class ConfigError(ScatsizeError, ValueError):
    """Malformed or inconsistent run configuration (CLI exit code 2)."""
