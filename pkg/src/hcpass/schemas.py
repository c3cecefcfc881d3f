"""The password schemas, executed on the costed machine.

Three schemas map a letter challenge to a password using one memorized
letter-to-digit key:

* ``letter_substitution`` replaces each letter by its mapped digit.
* ``sum_suffix`` emits one digit (the sum of all mapped letters mod 10)
  followed by a fixed memorized suffix.
* ``sum_skip`` keeps a running sum mod 10, seeded from the mapped last
  letter, and emits the sum only when it is below five.

Each driver charges exactly the steps its published cost accounting
enumerates; structural steps outside that accounting (pointing at the
challenge start, the uncharged pointer shifts in ``sum_suffix``) appear in
the trace as zero-cost notes so that ledger totals reproduce the nominal
formulas: 3n for letter substitution, about 2.5n + 1.5 + |S| for
``sum_suffix``, about 5n - 2 for ``sum_skip``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError, DomainError
from .keymaps import KeyMap, LETTERS
from .machine import ChallengeTape, CostLedger, Machine, TraceStep, comm_cost

DEDUP_RULES = ("skip", "shift-up")


@dataclass(frozen=True)
class SchemaResult:
    """Output of one schema run plus its full cost record."""

    output: str
    ledger: CostLedger
    trace: tuple[TraceStep, ...]
    stm_peak: int
    final_sum: Optional[int] = None
    sums: tuple[int, ...] = ()

    def record(self, challenge: str) -> dict:
        return {
            "challenge": challenge,
            "password": self.output,
            "proc_total": self.ledger.proc_total,
        }


def normalize_challenge(text: str, key: KeyMap, policy: str = "reject") -> str:
    """Uppercase, then either reject or strip symbols outside the key domain."""
    text = text.upper()
    if policy == "reject":
        for ch in text:
            if ch not in key:
                raise DomainError(f"challenge symbol {ch!r} outside key domain")
        return text
    if policy == "strip":
        return "".join(ch for ch in text if ch in key)
    raise ConfigError(f"unknown normalization policy {policy!r}")


def _require_nonempty(challenge) -> None:
    if not challenge:
        raise DomainError("challenge must be nonempty")


# ---------------------------------------------------------------------------
# Letter substitution
# ---------------------------------------------------------------------------


def letter_substitution(
    challenge: str,
    key: KeyMap,
    *,
    normalize: str = "reject",
    machine: Machine | None = None,
) -> SchemaResult:
    """Map each challenge letter through the key and output the digit.

    Per letter: one long-term read (the map), one short-term write (the
    output digit), one pointer shift; the ledger comes to exactly 3n.
    """
    challenge = normalize_challenge(challenge, key, normalize)
    _require_nonempty(challenge)
    m = machine or Machine()
    m.declare_chunks("cursor", "value")
    tape = ChallengeTape.from_text(challenge)
    m.note("point", "key map")
    m.note("point", "challenge start")
    for _ in range(len(challenge)):
        digit = m.apply_map(key, tape.current())
        m.emit(str(digit))
        m.tape_shift(tape)
    return SchemaResult(m.output_text, m.ledger, tuple(m.trace), m.stm_peak)


def letter_substitution_dedup(
    challenge: str,
    key: KeyMap,
    rule: str,
    *,
    normalize: str = "reject",
) -> SchemaResult:
    """Letter substitution with a rule for consecutive repeated letters.

    ``skip`` drops consecutive repeats before mapping; ``shift-up`` moves
    the j-th consecutive repeat up j alphabet positions (cyclically)
    before mapping, so AAA reads as A, B, C.
    """
    if rule not in DEDUP_RULES:
        raise ConfigError(f"unknown repeat rule {rule!r}")
    challenge = normalize_challenge(challenge, key, normalize)
    _require_nonempty(challenge)
    m = Machine()
    m.declare_chunks("cursor", "value")
    tape = ChallengeTape.from_text(challenge)
    m.note("point", "key map")
    m.note("point", "challenge start")
    prev: str | None = None
    run = 0
    for _ in range(len(challenge)):
        letter = tape.current()
        run = run + 1 if letter == prev else 0
        prev = letter
        if run and rule == "skip":
            m.tape_shift(tape)
            continue
        if run and rule == "shift-up":
            letter = LETTERS[(LETTERS.index(letter) + run) % 26]
        digit = m.apply_map(key, letter)
        m.emit(str(digit))
        m.tape_shift(tape)
    return SchemaResult(m.output_text, m.ledger, tuple(m.trace), m.stm_peak)


# ---------------------------------------------------------------------------
# Single digit plus fixed suffix
# ---------------------------------------------------------------------------


def sum_suffix(
    challenge: str,
    key: KeyMap,
    suffix: str,
    *,
    normalize: str = "reject",
) -> SchemaResult:
    """Sum all mapped letters mod 10, output that digit, then the suffix.

    Charged steps follow the schema's nominal accounting: map + set + one
    shift to start, then map + add per remaining letter (the loop's
    pointer shifts are structural), then one digit plus the whole suffix
    on output.  Emitting the memorized suffix costs its length.
    """
    if not suffix:
        raise ConfigError("fixed suffix must be nonempty")
    challenge = normalize_challenge(challenge, key, normalize)
    _require_nonempty(challenge)
    m = Machine()
    m.declare_chunks("cursor", "value", "sum")
    tape = ChallengeTape.from_text(challenge)
    total = m.apply_map(key, tape.current())
    m.stm_write("sum", total)
    m.tape_shift(tape)
    while not tape.at_end:
        value = m.apply_map(key, tape.current())
        total = m.add_mod(total, value, 10)
        m.tape_shift_free(tape)
    m.emit(str(total))
    m.emit(suffix)
    return SchemaResult(m.output_text, m.ledger, tuple(m.trace), m.stm_peak, final_sum=total)


def alternating_sum_digit(challenge: str, key: KeyMap, *, normalize: str = "reject") -> int:
    """Second-pass digit: alternating sum and difference of mapped letters."""
    challenge = normalize_challenge(challenge, key, normalize)
    _require_nonempty(challenge)
    total = 0
    for i, ch in enumerate(challenge):
        total += key[ch] if i % 2 == 0 else -key[ch]
    return total % 10


def group_sum_digits(
    challenge: str, key: KeyMap, group_size: int = 3, *, normalize: str = "reject"
) -> str:
    """Multi-digit variant: one digit per group of letters, summed mod 10.

    The final group may be short and is summed as-is.
    """
    if group_size < 1:
        raise ConfigError("group size must be positive")
    challenge = normalize_challenge(challenge, key, normalize)
    _require_nonempty(challenge)
    digits = []
    for start in range(0, len(challenge), group_size):
        block = challenge[start : start + group_size]
        digits.append(str(sum(key[ch] for ch in block) % 10))
    return "".join(digits)


# ---------------------------------------------------------------------------
# Running-sum schema (emit only sums below five)
# ---------------------------------------------------------------------------


def sum_skip(
    challenge,
    key: KeyMap,
    initial_carry: int | None = None,
    *,
    normalize: str = "reject",
    machine: Machine | None = None,
) -> SchemaResult:
    """Running sum mod 10 over mapped symbols; emit the sum when below 5.

    The sum starts from the mapped value of the last symbol unless an
    explicit carry is injected (pass chaining does that).  The final
    running sum is returned separately and never appended to the output.
    Charged per iteration: map, add, compare, and the conditional output;
    the pointer shifts between symbols (none past the last one).
    """
    if isinstance(challenge, str):
        challenge = normalize_challenge(challenge, key, normalize)
        symbols = tuple(challenge)
    else:
        symbols = tuple(challenge)
        for sym in symbols:
            if sym not in key:
                raise DomainError(f"challenge symbol {sym!r} outside key domain")
    _require_nonempty(symbols)
    if initial_carry is not None and not 0 <= initial_carry <= 9:
        raise DomainError("carry must be a digit")

    m = machine or Machine()
    m.declare_chunks("cursor", "value", "sum")
    tape = ChallengeTape(symbols)
    total = key[symbols[-1]] if initial_carry is None else initial_carry
    m.note("carry", f"start sum {total}")
    m.note("point", "challenge start")
    sums: list[int] = []
    while True:
        value = m.apply_map(key, tape.current())
        total = m.add_mod(total, value, 10)
        sums.append(total)
        if m.compare(total, 5, "lt"):
            m.emit(str(total))
        if tape.at_last:
            m.note("end", "pointer at last symbol")
            break
        m.tape_shift(tape)
    return SchemaResult(
        m.output_text, m.ledger, tuple(m.trace), m.stm_peak,
        final_sum=total, sums=tuple(sums),
    )


# ---------------------------------------------------------------------------
# Nominal cost formulas and communication accounting
# ---------------------------------------------------------------------------


def nominal_proc(schema: str, n: int, suffix_len: int = 0) -> float:
    """Published expected processing cost for a length-n challenge."""
    if schema == "letter-sub":
        return 3.0 * n
    if schema == "sum-suffix":
        return 2.5 * n + 1.5 + suffix_len
    if schema == "sum-skip":
        return 5.0 * n - 2.0
    raise ConfigError(f"no nominal cost for schema {schema!r}")


#: Canonical humanly-readable descriptions; communication cost counts their words.
DESCRIPTIONS = {
    "letter-sub": {
        "preprocessing": "Memorize one uniformly random letter-to-digit map.",
        "processing": (
            "Point at the first letter. Repeat until the challenge is exhausted: "
            "apply the map to the current letter, output the mapped digit, then "
            "shift the pointer one letter right."
        ),
        "example": (
            "With the map sending each letter to its alphabet position modulo ten, "
            "GMAIL maps letter by letter to 7 3 1 9 2, so the password is 73192, "
            "and APPLE maps to 16625."
        ),
    },
    "sum-suffix": {
        "preprocessing": (
            "Memorize one uniformly random letter-to-digit map and one fixed "
            "random string as a single chunk."
        ),
        "processing": (
            "Map the first letter and hold it as the sum. For each later letter, "
            "map it and add it to the sum modulo ten. Output the final sum, then "
            "output the fixed string."
        ),
        "example": (
            "With the alphabet-position map and fixed string SESAME1@, GMAIL sums "
            "to 7 plus 3 plus 1 plus 9 plus 2, which is 2 modulo ten, so the "
            "password is 2SESAME1@."
        ),
    },
    "sum-skip": {
        "preprocessing": "Memorize one uniformly random letter-to-digit map.",
        "processing": (
            "Start the sum at the mapped value of the last letter. Walk the "
            "challenge left to right: map the current letter, add it to the sum "
            "modulo ten, and output the sum whenever it is below five."
        ),
        "example": (
            "With the alphabet-position map, GMAIL maps to 7 3 1 9 2 and the "
            "running sums are 9 2 3 2 4, so the password is 2324."
        ),
    },
}


@dataclass(frozen=True)
class CommReport:
    schema: str
    description_words: int
    trace_steps: int

    @property
    def total(self) -> int:
        return comm_cost(self.description_words, self.trace_steps)


def comm_report(schema: str, runner, example_challenges) -> CommReport:
    """Communication cost of a schema: description words plus the lengths
    of example traces covering its cases.  ``runner`` maps a challenge to
    a SchemaResult."""
    if schema not in DESCRIPTIONS:
        raise ConfigError(f"no canonical description for schema {schema!r}")
    words = sum(len(part.split()) for part in DESCRIPTIONS[schema].values())
    steps = sum(len(runner(ch).trace) for ch in example_challenges)
    return CommReport(schema=schema, description_words=words, trace_steps=steps)
