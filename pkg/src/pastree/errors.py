"""Exception hierarchy. Every error raised by the library derives from PastError."""


class PastError(Exception):
    """Base class for library errors."""


class InvalidK(PastError, ValueError):
    pass


class InvalidNode(PastError, KeyError):
    pass


class ForeignStart(PastError, ValueError):
    """A window start does not belong to the branch being built."""


class DuplicateBranch(PastError, ValueError):
    pass


class SingleRecordRequired(PastError, ValueError):
    pass


class EmptyPattern(PastError, ValueError):
    pass


class PatternTooLong(PastError, ValueError):
    """The pattern is longer than the window size of a k-mer tree."""


class InvalidThreshold(PastError, ValueError):
    pass


class KmerTreeRequired(PastError, TypeError):
    pass


class IoError(PastError, OSError):
    pass


class FormatError(PastError, ValueError):
    pass


class ConfigError(PastError, ValueError):
    pass


class InvalidDuration(PastError, ValueError):
    pass
