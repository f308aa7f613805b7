"""Exception hierarchy shared by all modules."""


class PntZetaError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgument(PntZetaError, ValueError):
    pass


class OutOfRange(PntZetaError, ValueError):
    pass


class ResourceLimitError(PntZetaError):
    """A requested computation needs more terms than the configured cap."""

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class PoleError(PntZetaError, ValueError):
    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class AccuracyError(PntZetaError):
    """The requested accuracy cannot be certified with the given configuration."""

    def __init__(self, message, achievable=None):
        super().__init__(message)
        self.achievable = achievable


class ConsistencyError(PntZetaError):
    pass


class VerificationError(PntZetaError):
    pass


class ZeroFileError(PntZetaError, ValueError):
    """Malformed zero table file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class ResolutionError(PntZetaError):
    pass


class SearchFailure(PntZetaError):
    pass
