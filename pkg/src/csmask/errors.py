"""Exception hierarchy for csmask.

Validation problems raise subclasses of :class:`CsmaskError`; file parsing
and corrupt-input problems raise :class:`FileFormatError`, which the CLI
maps to a distinct exit code.
"""


class CsmaskError(Exception):
    """Base class for all csmask errors (CLI exit code 1)."""


class InvalidShape(CsmaskError):
    """Array length or shape does not match the expected dimension."""


class InvalidIndex(CsmaskError):
    """Index outside the valid range [0, p)."""


class InvalidParams(CsmaskError):
    """Parameter outside its documented domain."""


class InvalidBudget(CsmaskError):
    """Requested sample budget n is outside [0, p]."""


class InvalidSplit(CsmaskError):
    """Train/test split request cannot be satisfied."""


class DegenerateSignal(CsmaskError):
    """A signal with zero norm where a nonzero one is required."""


class EmptyTrainingSet(CsmaskError):
    """No training signals were supplied."""


class EmptyAfterFilter(CsmaskError):
    """Slice filtering removed every slice."""


class EmptyInput(CsmaskError):
    """An input directory or listing contained no usable files."""


class BudgetTooSmall(CsmaskError):
    """The fully sampled region alone already exceeds the budget."""


class TooLarge(CsmaskError):
    """Exhaustive enumeration would exceed the combinatorial guard."""


class FileFormatError(CsmaskError):
    """Unreadable or malformed input file (CLI exit code 2)."""
