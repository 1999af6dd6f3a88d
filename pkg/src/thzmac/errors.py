"""Exception types mapped to CLI exit codes (config=2, I/O=3, invariant=4)."""


class ConfigError(ValueError):
    """Invalid configuration or argument values."""


class InvariantError(RuntimeError):
    """A structural invariant was violated at runtime."""
