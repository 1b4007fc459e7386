"""Exception types shared across the package.

The CLI maps these onto exit codes: input problems exit 2, failed
invariant checks exit 1.
"""


class ChordlabError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(ChordlabError):
    """Malformed graph, path, lattice, or argument."""


class CapacityError(ChordlabError):
    """Not enough stable coding vertices for the requested pattern."""

    def __init__(self, message, shortfall=None):
        super().__init__(message)
        self.shortfall = shortfall


class InvalidContextError(ChordlabError):
    """Decode context built from an embedding that fails validation."""


class ExtractionError(ChordlabError):
    """A witness extraction failed; carries the offending data."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class CoverageError(ChordlabError):
    """Generator set does not generate the lattice."""

    def __init__(self, message, unreached=()):
        super().__init__(message)
        self.unreached = tuple(unreached)


class StructuralError(ChordlabError):
    """An internal structural guarantee failed (bug indicator)."""


class ContradictionError(ChordlabError):
    """A mathematically impossible configuration was observed (bug indicator)."""


class ResourceLimitError(ChordlabError):
    """Requested exhaustive search exceeds the supported budget."""
