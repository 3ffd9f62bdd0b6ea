"""Exception types shared across the package."""


class InvalidRepresentation(ValueError):
    """An interval representation violates its invariants."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InconsistentDegrees(ValueError):
    """A degree callback cannot belong to any universal representation."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class CorruptCode(ValueError):
    """Stored bits decode to a value outside its universe."""


class FormatError(ValueError):
    """A serialized file does not match the expected layout."""


class InvariantError(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
