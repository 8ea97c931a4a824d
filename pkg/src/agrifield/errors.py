"""Exception types shared across the package."""


class AgrifieldError(Exception):
    """Base class for all package-specific errors."""


class DomainError(AgrifieldError, ValueError):
    """An argument is outside its documented domain."""


class ProtocolError(AgrifieldError, ValueError):
    """A bus request violates the wire protocol contract."""


class TruncationError(ProtocolError):
    """A frame is too short to contain address, function and CRC."""


class ChecksumError(ProtocolError):
    """A frame's CRC does not match its contents."""


class SchemaError(AgrifieldError, ValueError):
    """A data file is missing required columns or is malformed."""


class NotFoundError(AgrifieldError, LookupError):
    """A named resource (crop, metric) does not exist."""


class PreconditionError(AgrifieldError, RuntimeError):
    """An operation was called before its required inputs were available."""
