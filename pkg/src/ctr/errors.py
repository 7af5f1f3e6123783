"""Exception hierarchy shared by every layer of the package."""


class CtrError(Exception):
    """Base class for all errors raised by ctr."""


# trip model
class TripError(CtrError, ValueError):
    pass


class MalformedLine(TripError):
    def __init__(self, lineno, text, reason="bad token"):
        super().__init__(f"line {lineno}: {reason}: {text!r}")
        self.lineno = lineno


class NonMonotoneTimestamps(TripError):
    pass


class TripTooShort(TripError):
    pass


class TimestampOutOfRange(TripError):
    pass


class EmptyDataset(TripError):
    pass


# succinct structures
class PositionOutOfRange(CtrError, IndexError):
    pass


class RankOutOfRange(CtrError, ValueError):
    pass


class SymbolOutOfRange(CtrError, ValueError):
    pass


class RangeInvalid(CtrError, ValueError):
    pass


class PreconditionViolated(CtrError, ValueError):
    pass


class EmptyAlphabet(CtrError, ValueError):
    pass


class LengthMismatch(CtrError, ValueError):
    pass


class UnsupportedPattern(CtrError, ValueError):
    """Pattern whose matches do not form a single suffix-array range."""


# queries
class WindowInvalid(CtrError, ValueError):
    pass


class QuerySyntaxError(CtrError, ValueError):
    pass


# generation / benchmarking
class ModelInvalid(CtrError, ValueError):
    pass


class ConfigurationUnsupported(CtrError, ValueError):
    pass


# index files
class IndexFormatError(CtrError):
    pass


class ChecksumError(IndexFormatError):
    pass
