"""Exception types shared across the package."""


class BoostrayError(Exception):
    """Base class for all boostray errors."""


class FormatError(BoostrayError):
    """A file does not conform to its expected layout or schema."""


class DataError(BoostrayError):
    """A data value violates an invariant (non-finite feature, bad label, ...)."""


class StratificationError(BoostrayError):
    """A dataset cannot be split as requested while preserving class balance."""


class ShapeError(BoostrayError):
    """Array dimensions do not match what an operation requires."""


class DomainError(BoostrayError):
    """Numeric inputs fall outside an operation's mathematical domain."""


class ConfigError(BoostrayError):
    """A configuration value is out of range or inconsistent."""
