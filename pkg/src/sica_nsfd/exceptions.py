"""Exception hierarchy.

``ConfigError`` subclasses signal bad user input; everything else under
``SICAError`` is a numerical failure. The CLI maps the two families to exit
codes 2 and 1.
"""


class SICAError(Exception):
    """Base class for all package errors."""


class ConfigError(SICAError, ValueError):
    """Invalid parameters, states or options supplied by the caller."""


class InvalidParameters(ConfigError):
    pass


class NonpositiveStep(ConfigError):
    pass


class LengthMismatch(ConfigError):
    pass


class ZeroPopulation(SICAError, ZeroDivisionError):
    """Total population vanished where the force of infection is needed."""


class NoEndemicEquilibrium(SICAError):
    """Raised when R0 <= 1, so no positive endemic point exists."""


class NonpositiveCompartment(SICAError):
    pass


class TrajectoryTooShort(SICAError):
    pass


class HorizonTooShort(SICAError):
    pass


class NumericalFailure(SICAError):
    pass
