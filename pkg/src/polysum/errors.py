class PolysumError(ValueError):
    """Base class for input and precondition errors."""


class GeometryError(PolysumError):
    pass


class PreconditionError(PolysumError):
    pass


class PerturbationError(PolysumError):
    """Raised when the retry budget runs out before general position."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
