"""Exception types shared across the package."""


class PinchError(Exception):
    """Base class for all package-specific failures."""


class NonFinite(PinchError):
    """An objective produced NaN or infinity where a finite value was required."""


class Infeasible(PinchError):
    """No feasible point exists for the requested constraints."""


class DomainError(PinchError):
    """The requested operation is not defined for these inputs."""


class OrderingViolation(PinchError):
    """A solver requiring users ordered by waveguide distance got them unordered."""


class ConfigError(PinchError):
    """An experiment or CLI configuration is invalid."""


class ParseError(PinchError):
    """A config or instance file could not be parsed."""


class CertificationError(PinchError):
    """A closed-form result disagreed with its independent check."""
