"""Step-costed model of in-the-head computation.

The model is a small machine with two memories and a read-only challenge
tape.  Long-term storage holds memorized material (linked lists and
hash-style maps) and is read-only while a schema runs; short-term memory
holds a handful of chunks (pointers, digits) and every read or write
counts.  Processing cost is the number of long-term reads plus the number
of short-term operations.  Every charged primitive appends a step to a
trace, so a run leaves behind both an exact cost ledger and a replayable
step record.

Structural bookkeeping a published cost formula does not charge (for
example pointing at the start of the challenge before a loop begins) is
recorded in the trace as a zero-cost note, keeping trace lengths and
ledger totals independently meaningful.

Preparation cost (generating and memorizing a key) and communication cost
(describing a schema plus example traces) are arithmetic over counts, not
machine runs, and are provided as standalone helpers, together with the
doubling rehearsal schedule that keeps memorized material permanent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple, Sequence

from .errors import (
    CapacityError,
    ConfigError,
    DomainError,
    MissingItemError,
    TapeExhaustedError,
)

#: Moduli single-digit mental arithmetic is defined on.
ADD_MODULI = (2, 3, 4, 5, 9, 10, 11)


@dataclass(frozen=True)
class Chunk:
    """A single addressable token: a digit, a letter, or a reference.

    A fully memorized string counts as one chunk; what matters is that it
    is addressable through a single pointer.
    """

    value: Any
    kind: str = "value"  # "value" | "ref" | "string"


class TraceStep(NamedTuple):
    index: int
    op: str
    detail: str
    cost: int
    proc_total: int


@dataclass
class CostLedger:
    """Monotone cost accumulators for one run (or one preparation).

    ``proc_total`` is long-term reads plus short-term operations;
    preparation adds die entropy and chunks written to permanent memory;
    ``comm_units`` covers description words plus example-trace steps.
    """

    ltm_reads: int = 0
    stm_ops: int = 0
    die_entropy: float = 0.0
    chunks_written: int = 0
    comm_units: int = 0

    @property
    def proc_total(self) -> int:
        return self.ltm_reads + self.stm_ops

    def add_ltm(self, n: int = 1) -> None:
        self._check(n)
        self.ltm_reads += n

    def add_stm(self, n: int = 1) -> None:
        self._check(n)
        self.stm_ops += n

    def add_entropy(self, bits: float) -> None:
        if bits < 0:
            raise ConfigError("entropy increment must be nonnegative")
        self.die_entropy += bits

    def add_chunks(self, n: int) -> None:
        self._check(n)
        self.chunks_written += n

    def add_comm(self, n: int) -> None:
        self._check(n)
        self.comm_units += n

    @staticmethod
    def _check(n: int) -> None:
        if n < 0:
            raise ConfigError("ledger increments must be nonnegative")

    def as_dict(self) -> dict:
        return {
            "ltm_reads": self.ltm_reads,
            "stm_ops": self.stm_ops,
            "proc_total": self.proc_total,
            "die_entropy": self.die_entropy,
            "chunks_written": self.chunks_written,
            "comm_units": self.comm_units,
        }


@dataclass
class ChallengeTape:
    """A singly-linked read surface with a right-only cursor.

    The cursor arrives pointing at the leftmost symbol.  ``cursor ==
    len(symbols)`` is the explicit end-of-tape state: detectable, legal to
    be in, illegal to shift out of.
    """

    symbols: tuple[str, ...]
    cursor: int = 0

    @classmethod
    def from_text(cls, text: str) -> "ChallengeTape":
        return cls(tuple(text))

    @property
    def at_end(self) -> bool:
        return self.cursor >= len(self.symbols)

    @property
    def at_last(self) -> bool:
        return self.cursor == len(self.symbols) - 1

    def current(self) -> str:
        if self.at_end:
            raise TapeExhaustedError("read past end of tape")
        return self.symbols[self.cursor]


class ShortTermMemory:
    """At most ``capacity`` named chunk slots; overflow is a hard error."""

    def __init__(self, capacity: int = 3):
        if capacity < 1:
            raise ConfigError("short-term capacity must be at least 1")
        self.capacity = capacity
        self.slots: dict[str, Chunk] = {}
        self.peak = 0

    def declare(self, name: str) -> None:
        if name not in self.slots:
            if len(self.slots) >= self.capacity:
                raise CapacityError(
                    f"cannot hold chunk {name!r}: {self.capacity} slots already occupied"
                )
            self.slots[name] = Chunk(None)
            self.peak = max(self.peak, len(self.slots))

    def put(self, name: str, chunk: Chunk) -> None:
        self.declare(name)
        self.slots[name] = chunk

    def get(self, name: str) -> Chunk:
        if name not in self.slots:
            raise MissingItemError(name)
        return self.slots[name]


class LongTermStore:
    """Named linked lists and hash-style maps; read-only during a run."""

    def __init__(self):
        self.linked_lists: dict[str, tuple] = {}
        self.hash_functions: dict[str, Any] = {}

    def store_list(self, name: str, items: Iterable) -> None:
        self.linked_lists[name] = tuple(items)

    def store_map(self, name: str, mapping: Any) -> None:
        self.hash_functions[name] = mapping

    def get(self, name: str) -> Any:
        if name in self.linked_lists:
            return self.linked_lists[name]
        if name in self.hash_functions:
            return self.hash_functions[name]
        raise MissingItemError(name)


class Machine:
    """One single-threaded run context: ledger, trace, memories, output.

    Distinct instances share nothing and may run in parallel.  Charged
    primitives mutate the ledger; ``note`` records structure at cost 0.
    """

    def __init__(self, stm_capacity: int = 3, record_trace: bool = True):
        self.ledger = CostLedger()
        self.stm = ShortTermMemory(stm_capacity)
        self.ltm = LongTermStore()
        self.record_trace = record_trace
        self.trace: list[TraceStep] = []
        self._output: list[str] = []

    # -- preprocessing-time storage (charged to PREP, not PROC) --

    def memorize_list(self, name: str, items: Iterable) -> None:
        items = tuple(items)
        self.ltm.store_list(name, items)
        self.ledger.add_chunks(len(items))

    def memorize_map(self, name: str, mapping) -> None:
        self.ltm.store_map(name, mapping)
        self.ledger.add_chunks(2 * len(mapping))

    # -- charged primitives --

    def set_pointer(self, name: str) -> Chunk:
        """Point at an item already in long-term memory.  Cost 1."""
        item = self.ltm.get(name)
        self.ledger.add_ltm(1)
        self._record("set_pointer", name, 1)
        return Chunk(item, kind="ref")

    def apply_map(self, mapping, symbol: str) -> int:
        """Look up one symbol in a memorized hash map.  Cost 1."""
        if symbol not in mapping:
            raise DomainError(f"symbol {symbol!r} outside map domain")
        self.ledger.add_ltm(1)
        value = mapping[symbol]
        self._record("apply_map", f"{symbol}->{value}", 1)
        return value

    def stm_write(self, slot: str, value) -> None:
        self.stm.put(slot, value if isinstance(value, Chunk) else Chunk(value))
        self.ledger.add_stm(1)
        self._record("stm_write", slot, 1)

    def stm_read(self, slot: str):
        chunk = self.stm.get(slot)
        self.ledger.add_stm(1)
        self._record("stm_read", slot, 1)
        return chunk.value

    def tape_shift(self, tape: ChallengeTape) -> None:
        """Move the tape cursor one link right.  Cost 1.

        Shifting off the last symbol lands in the end-of-tape state;
        shifting again is an error.
        """
        if tape.at_end:
            raise TapeExhaustedError("cursor already past last symbol")
        tape.cursor += 1
        self.ledger.add_stm(1)
        self._record("shift", f"->{tape.cursor}", 1)

    def tape_shift_free(self, tape: ChallengeTape) -> None:
        """Cursor advance recorded at cost 0 (structural, not charged)."""
        if tape.at_end:
            raise TapeExhaustedError("cursor already past last symbol")
        tape.cursor += 1
        self._record("shift", f"->{tape.cursor}", 0)

    def tape_reset(self, tape: ChallengeTape) -> None:
        tape.cursor = 0
        self.ledger.add_stm(1)
        self._record("reset", "->0", 1)

    def add_mod(self, a: int, b: int, m: int = 10) -> int:
        """Single-digit addition mod m.

        Cost is the number of digits created: 1 when a+b already fits
        below the modulus, 2 when a two-symbol intermediate appears and
        must be reduced.
        """
        if m not in ADD_MODULI:
            raise ConfigError(f"unsupported modulus {m}")
        bound = max(10, m)
        if not (0 <= a < bound and 0 <= b < bound):
            raise DomainError(f"operands {a},{b} out of range for modulus {m}")
        total = a + b
        cost = 1 if total < m else 2
        result = total % m
        self.ledger.add_stm(cost)
        self._record("add_mod", f"{a}+{b} mod {m} = {result}", cost)
        return result

    def compare(self, a: int, b: int, relation: str = "eq") -> bool:
        """Equality or threshold test on two single digits.  Cost 1."""
        if not (0 <= a <= 9 and 0 <= b <= 9):
            raise DomainError("compare needs single-digit operands")
        if relation == "eq":
            verdict = a == b
        elif relation == "lt":
            verdict = a < b
        else:
            raise ConfigError(f"unknown relation {relation!r}")
        self.ledger.add_stm(1)
        self._record("compare", f"{a} {relation} {b} -> {verdict}", 1)
        return verdict

    def emit(self, text: str) -> None:
        """Append symbols to the output.  Cost = number of symbols."""
        if not text:
            raise ConfigError("cannot emit an empty string")
        cost = len(text)
        self._output.append(text)
        self.ledger.add_stm(cost)
        self._record("output", text, cost)

    # -- free bookkeeping --

    def declare_chunks(self, *names: str) -> None:
        for name in names:
            self.stm.declare(name)

    def note(self, op: str, detail: str = "") -> None:
        self._record(op, detail, 0)

    # -- results --

    @property
    def output_text(self) -> str:
        return "".join(self._output)

    @property
    def stm_peak(self) -> int:
        return self.stm.peak

    def trace_lines(self) -> list[str]:
        """Line-oriented export: index, op, operands, cost, cumulative PROC."""
        return [f"{s.index}\t{s.op}\t{s.detail}\t{s.cost}\t{s.proc_total}" for s in self.trace]

    def _record(self, op: str, detail: str, cost: int) -> None:
        if self.record_trace:
            self.trace.append(
                TraceStep(len(self.trace) + 1, op, detail, cost, self.ledger.proc_total)
            )


# ---------------------------------------------------------------------------
# Preparation and communication arithmetic
# ---------------------------------------------------------------------------


def prep_cost(die_tosses: int, die_sides: int, chunks_written: int) -> float:
    """Preparation cost: (tosses x log2(sides)) + chunks written."""
    if die_tosses < 0 or chunks_written < 0:
        raise ConfigError("counts must be nonnegative")
    if die_tosses == 0:
        return float(chunks_written)
    if die_sides < 1:
        raise ConfigError("die must have at least one side")
    return die_tosses * math.log2(die_sides) + chunks_written


def comm_cost(description_units: int, trace_steps: int) -> int:
    """Communication cost: description length plus covering-trace length."""
    if description_units < 0 or trace_steps < 0:
        raise ConfigError("counts must be nonnegative")
    return description_units + trace_steps


# ---------------------------------------------------------------------------
# Rehearsal schedule
# ---------------------------------------------------------------------------

#: Canonical 21-entry rehearsal plan after the initial memorization block.
REHEARSAL_PLAN: tuple[tuple[int, str], ...] = (
    (1, "hour"), (2, "hour"), (4, "hour"), (8, "hour"), (16, "hour"),
    (1, "day"), (2, "day"), (4, "day"),
    (1, "week"), (2, "week"),
    (1, "month"), (2, "month"), (4, "month"), (8, "month"),
    (1, "year"), (2, "year"), (4, "year"), (8, "year"),
    (16, "year"), (32, "year"), (64, "year"),
)

_HOURS_PER = {"hour": 1, "day": 24, "week": 168, "month": 720, "year": 8760}


@dataclass(frozen=True)
class RehearsalSchedule:
    """Time offsets from initial memorization at which to rehearse."""

    offsets: tuple[float, ...]
    labels: tuple[str, ...]

    def gaps(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.offsets, self.offsets[1:]))


def rehearsal_times(unit: float = 1.0) -> RehearsalSchedule:
    """The 21 rehearsal offsets, in multiples of ``unit`` hours.

    With ``unit=1`` the first five offsets are 1, 2, 4, 8, 16 (hours);
    consecutive entries sharing a time unit double, gaps never shrink, and
    the tail doubles exactly.
    """
    if unit <= 0:
        raise ConfigError("unit must be positive")
    offsets = tuple(count * _HOURS_PER[name] * unit for count, name in REHEARSAL_PLAN)
    labels = tuple(f"{count} {name}{'s' if count > 1 else ''}" for count, name in REHEARSAL_PLAN)
    return RehearsalSchedule(offsets=offsets, labels=labels)
