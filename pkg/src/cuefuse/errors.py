"""Exception types raised across the package.

Every loader/validator failure maps to exactly one of these; callers never
see a partially constructed object.
"""


class CueFuseError(Exception):
    """Base class for all package errors."""


# --- construction / interval arithmetic ---

class InvalidInterval(CueFuseError):
    """Interval violates start <= end or non-negativity."""


class IntervalOutOfVideo(CueFuseError):
    """Interval lies (partly) outside the video's frame range."""


# --- ingestion ---

class SchemaError(CueFuseError):
    """Input file does not match its documented schema."""


class TimingError(CueFuseError):
    """Word or sentence timestamps are inconsistent or non-monotone."""


class EmptyTranscript(CueFuseError):
    """Transcript file contains no sentences."""


class NonMonotoneFrames(CueFuseError):
    """Frame stream timestamps are not strictly increasing."""


class UnsupportedFormat(CueFuseError):
    """Audio file is not mono 16-bit PCM at the accepted sample rate."""


class CorruptHeader(CueFuseError):
    """Audio container header is malformed or truncated."""


class DimensionMismatch(CueFuseError):
    """Embedding vectors do not share the declared dimension."""


class NaNEntry(CueFuseError):
    """Embedding vector contains a NaN."""


class UnorderedEntries(CueFuseError):
    """Reference summary entries are not temporally ordered."""


class ManifestError(CueFuseError):
    """Batch manifest is missing or malformed."""


# --- feature extraction ---

class AudioTooShort(CueFuseError):
    """Signal shorter than one analysis frame."""


class AllUndefined(CueFuseError):
    """Feature series has no defined (non-NaN) values."""


class TooFewValues(CueFuseError):
    """Series has fewer defined values than the operation needs."""


class TooFewFrames(CueFuseError):
    """Frame stream too short for pairwise differencing."""


# --- text ---

class EmptyCorpus(CueFuseError):
    """No sentences available for corpus statistics."""


# --- metrics ---

class LengthMismatch(CueFuseError):
    """Paired sequences have different lengths."""


class TooShort(CueFuseError):
    """Paired sequences shorter than two elements."""


class ConstantInput(CueFuseError):
    """Rank correlation input has zero variance."""


class EmptySource(CueFuseError):
    """Length ratio denominator (source transcript) is empty."""


class EmptyInput(CueFuseError):
    """Embedding similarity needs at least one token on each side."""


class TooFewVersions(CueFuseError):
    """Consistency check needs at least two reference versions."""
