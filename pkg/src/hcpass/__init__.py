"""Human-computable password schemas on a step-costed mental machine,
with digit-stream generator candidates and a desk-scale attack suite."""

from .errors import (
    BudgetExceededError,
    CapacityError,
    ConfigError,
    DimensionError,
    DomainError,
    HcpassError,
    InconsistentObservationsError,
    MissingItemError,
    ParameterError,
    TapeExhaustedError,
)
from .keymaps import KeyMap, PrepReport, gen_key, load_key, save_key
from .machine import (
    ChallengeTape,
    Chunk,
    CostLedger,
    LongTermStore,
    Machine,
    RehearsalSchedule,
    ShortTermMemory,
    TraceStep,
    comm_cost,
    prep_cost,
    rehearsal_times,
)
from .schemas import (
    SchemaResult,
    alternating_sum_digit,
    group_sum_digits,
    letter_substitution,
    letter_substitution_dedup,
    sum_skip,
    sum_suffix,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CapacityError",
    "ChallengeTape",
    "Chunk",
    "ConfigError",
    "CostLedger",
    "DimensionError",
    "DomainError",
    "HcpassError",
    "InconsistentObservationsError",
    "KeyMap",
    "LongTermStore",
    "Machine",
    "MissingItemError",
    "ParameterError",
    "PrepReport",
    "RehearsalSchedule",
    "SchemaResult",
    "ShortTermMemory",
    "TapeExhaustedError",
    "TraceStep",
    "alternating_sum_digit",
    "comm_cost",
    "gen_key",
    "group_sum_digits",
    "letter_substitution",
    "letter_substitution_dedup",
    "load_key",
    "prep_cost",
    "rehearsal_times",
    "save_key",
    "sum_skip",
    "sum_suffix",
]
