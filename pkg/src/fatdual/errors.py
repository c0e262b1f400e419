"""
Exception hierarchy for fatdual.

Every module raises its own error class; all of them derive from
FatDualError, which the CLI maps to a typed domain abort (exit code 2).
InternalConsistencyError stays outside that hierarchy: it means a
cross-check inside the library failed, which is a bug rather than bad input.
"""


class FatDualError(Exception):
    """Base class for typed domain aborts."""

    pass


class InternalConsistencyError(Exception):
    """Raised when two independent computations of the same quantity disagree."""

    pass
