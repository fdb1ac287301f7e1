"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A precondition on the inputs was violated."""


class ResourceCapError(RuntimeError):
    """A configured work or resampling cap was exceeded."""
