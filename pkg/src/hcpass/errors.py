"""Exception types shared across the package."""


class HcpassError(Exception):
    """Base class for package errors."""


class DomainError(HcpassError, ValueError):
    """A symbol fell outside the alphabet a map or schema is defined on."""


class MissingItemError(HcpassError, KeyError):
    """A named item was not found in long-term storage."""


class TapeExhaustedError(HcpassError, RuntimeError):
    """The challenge pointer was shifted while already past the last symbol."""


class CapacityError(HcpassError, RuntimeError):
    """A run tried to hold more chunks than short-term memory allows."""


class ConfigError(HcpassError, ValueError):
    """An operation was configured with an unsupported parameter."""


class ParameterError(HcpassError, ValueError):
    """An argument was outside the range an operation is defined on."""


class DimensionError(HcpassError, ValueError):
    """Vector lengths disagree."""


class BudgetExceededError(HcpassError, RuntimeError):
    """Refusal: the requested computation needs more steps than the budget."""

    def __init__(self, message: str, required: int, budget: int):
        super().__init__(f"{message} (required ~{required:.3g}, budget {budget:.3g})")
        self.required = required
        self.budget = budget


class InconsistentObservationsError(HcpassError, ValueError):
    """Observed challenge/response pairs contradict the assumed schema."""
