"""Exception types shared across the package."""


class LevelwalkError(Exception):
    """Base class for all package-specific errors."""


class OutOfRangeError(LevelwalkError, ValueError):
    """An address or parameter is outside its declared range."""


class NotInTreeError(LevelwalkError, ValueError):
    """An operation was asked about an address that is not in the tree."""


class BudgetExceededError(LevelwalkError):
    """Enumeration/counting exceeded its node budget.

    Carries the number of nodes visited before giving up.
    """

    def __init__(self, message: str, partial_count: int):
        super().__init__(message)
        self.partial_count = partial_count


class CapExceededError(LevelwalkError):
    """A configured cap (matrix size, conductance states, ...) was exceeded."""


class DimacsParseError(LevelwalkError, ValueError):
    """Malformed DIMACS CNF input. Carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DegenerateChainError(LevelwalkError):
    """The chain has no qualifying conductance cut (single-state chain)."""


class InconsistentProfileError(LevelwalkError, ValueError):
    """A normalizing-factor sequence violates its defining identities."""


class EstimationError(LevelwalkError):
    """An estimator produced a degenerate value (e.g. zero median root mass)."""
