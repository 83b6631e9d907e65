"""Exception types shared across the toolkit."""


class WiretapLabError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(WiretapLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(WiretapLabError, ValueError):
    """A structured input (distribution, matrix, channel) violates its invariants."""


class DimensionError(ValidationError):
    """Operands have incompatible dimensions."""


class AmbiguityError(DomainError):
    """Inputs tie where the operation needs a strict ordering."""


class CapabilityError(DomainError):
    """The request exceeds what can be computed exactly."""


class ConfigurationError(DomainError):
    """A simulation configuration violates its preconditions."""
