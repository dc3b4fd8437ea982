class PreconditionError(ValueError):
    """Raised when an operation is called outside its documented domain."""


class ConfigError(ValueError):
    """Malformed user configuration (distribution spec strings, files, flags)."""
