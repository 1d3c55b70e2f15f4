"""Exception hierarchy shared by all modules."""


class GenusDPError(Exception):
    """Base class for every error raised by this package."""


class StructuralInputError(GenusDPError, ValueError):
    """Malformed input: bad rotation, dangling slot, unparsable file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedInputError(GenusDPError, ValueError):
    """Input is well formed but outside the operation's domain."""


class InvalidNooseError(GenusDPError, ValueError):
    pass


class PreconditionError(GenusDPError, ValueError):
    pass


class DegenerateInputError(GenusDPError, ValueError):
    pass


class InfeasibleError(GenusDPError, ValueError):
    pass


class GuardExceededError(GenusDPError, ValueError):
    """Enumeration requested beyond its size guard."""
