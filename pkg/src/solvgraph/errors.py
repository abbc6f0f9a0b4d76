"""Exception types shared across the package."""


class SolvgraphError(Exception):
    """Base class for errors raised by this package."""


class CycleNotationError(SolvgraphError, ValueError):
    """Malformed or inconsistent cycle-notation input."""


class GeneratorFileError(SolvgraphError, ValueError):
    """Malformed generator file."""


class GroupOrderGuardError(SolvgraphError):
    """Group enumeration exceeded the configured order guard."""

    def __init__(self, guard: int, reached: int) -> None:
        self.guard = guard
        self.reached = reached
        super().__init__(
            f"group enumeration exceeded the order guard of {guard} elements "
            f"(reached {reached}); raise the guard to proceed"
        )


class InvariantViolationError(SolvgraphError):
    """A structural fact that must hold failed to hold: an engine bug."""


class SearchBudgetExceededError(SolvgraphError):
    """A bounded search ran out of budget before reaching a verdict."""

    def __init__(self, budget: int, message: str = "") -> None:
        self.budget = budget
        detail = f": {message}" if message else ""
        super().__init__(f"search budget of {budget} probes exceeded{detail}")
