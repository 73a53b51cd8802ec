"""Exception types shared across the package.

Every error raised by the library derives from :class:`ChaintraceError`, so
callers (and the CLI) can catch one base class and report the concrete class
name.
"""


class ChaintraceError(Exception):
    """Base class for all chaintrace errors."""


class DuplicateId(ChaintraceError):
    """The transaction id is already present in the ledger."""


class UnknownPredecessor(ChaintraceError):
    """A predecessor id does not refer to any transaction already appended."""


class UnknownId(ChaintraceError):
    """The transaction id is not present in the ledger or store."""


class NotInChunk(ChaintraceError):
    """A lookup was routed to a chunk that does not hold the transaction."""


class ResultMismatch(ChaintraceError):
    """Two tracing strategies disagreed on the predecessor set."""


class UnsortedInput(ChaintraceError):
    """Ingest records were not sorted by their position key."""


class MalformedRecord(ChaintraceError):
    """An input record could not be parsed or violates a uniqueness rule."""


class InvalidParams(ChaintraceError):
    """Configuration or generator parameters are out of range."""


class InsufficientData(ChaintraceError):
    """Not enough data points for the requested analysis."""


class EmptyLedger(ChaintraceError):
    """The operation requires a non-empty ledger."""


class IoError(ChaintraceError):
    """Reading or writing a report or snapshot file failed."""
