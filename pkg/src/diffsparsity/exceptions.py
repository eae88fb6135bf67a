"""Exception types raised by diffsparsity.

Everything derives from :class:`SparsityError` (itself a ``ValueError``),
so callers who do not care about the distinctions can catch one type.
"""


class SparsityError(ValueError):
    """Base class for all diffsparsity errors."""


class EmptyVectorError(SparsityError):
    """A signal vector must contain at least one coefficient."""


class ZeroVectorError(SparsityError):
    """Sparsity of the all-zero vector is undefined (zero denominator)."""


class NotSortedError(SparsityError):
    """Operation requires coefficients sorted in ascending order."""


class BadOrderError(SparsityError):
    """Sparsity order out of range, or parity mismatch for a closed form."""


class BadTransferError(SparsityError):
    """Illegal rich-to-poor transfer (Robin Hood preconditions violated)."""


class BadShiftError(SparsityError):
    """Additive shift amount must be strictly positive."""


class BadScaleError(SparsityError):
    """Scale factor must be strictly positive."""


class BadCountError(SparsityError):
    """Clone count must be at least 2."""


class InsufficientSamplesError(SparsityError):
    """Dataset statistics need at least two sample columns."""


class DegenerateDatasetError(SparsityError):
    """Every coefficient row is constant; z-scoring is undefined."""


class BadShapeError(SparsityError):
    """Array shape incompatible with the requested operation."""


class DegenerateProjectionError(SparsityError):
    """Projection matrix is rank deficient."""


class DegenerateSignalError(SparsityError):
    """Requested synthetic signal has no non-zero coefficients."""


class NoDataError(SparsityError):
    """Result table is empty."""
