"""Exception hierarchy shared across the package."""


class SuryanetError(Exception):
    """Base class for all package-specific errors."""


class BlockShapeError(SuryanetError):
    """A landmark block has the wrong number of landmarks or coordinates."""


class InvalidValueError(SuryanetError):
    """A value that must be finite is NaN or infinite."""


class ShapeError(SuryanetError):
    """Array dimensions do not match what an operation requires."""


class LabelError(SuryanetError):
    """A class label index or name is out of range / unknown."""


class FormatError(SuryanetError):
    """A file or message has bad magic bytes or an unsupported version."""


class CorruptFileError(SuryanetError):
    """A sequence file's declared sizes disagree with its payload."""


class CorruptModelError(SuryanetError):
    """A model file's layer table disagrees with its payload."""


class UnknownClassError(SuryanetError):
    """A dataset directory names a class outside the canonical set."""


class InsufficientDataError(SuryanetError):
    """A class has too few sequences to split."""


class ConfigError(SuryanetError):
    """A training configuration value violates its invariants."""


class DivergenceError(SuryanetError):
    """Training produced a non-finite loss."""


class OrderingError(SuryanetError):
    """Frame timestamps decreased within one session."""


class ProtocolError(SuryanetError):
    """A wire message violates the framing or payload contract."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
