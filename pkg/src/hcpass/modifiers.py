"""Personal-schema building blocks: composable challenge and password
transforms.

These are the tweaks a user can layer around a base schema: shifting
fingers on the keyboard, shift-adding digits into letters, starting the
challenge at an unexpected location, repeat handling, challenge-derived
carries, and attaching a fixed string.  All transforms are pure; a small
textual pipeline syntax combines them around one schema for the CLI.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Sequence

from .errors import ConfigError, DimensionError, DomainError, ParameterError

ALPHA = string.ascii_uppercase

# Moves on the keyboard grid, as (row delta, column delta).  The grid is
# stored aligned (see data/qwerty_layout.txt), so "up" splits into up-left
# (same column) and up-right (column + 1), and "down" mirrors that.
MOVES: dict[str, tuple[int, int]] = {
    "left": (0, -1),
    "right": (0, 1),
    "up-left": (-1, 0),
    "up-right": (-1, 1),
    "down-left": (1, -1),
    "down-right": (1, 0),
}

_INVERSE = {
    "left": "right",
    "right": "left",
    "up-left": "down-right",
    "down-right": "up-left",
    "up-right": "down-left",
    "down-left": "up-right",
}


@dataclass(frozen=True)
class KeyboardLayout:
    """Grid coordinates (plane, row, column) for every typeable character."""

    positions: dict  # char -> (plane, row, col)
    grids: dict  # plane -> tuple of row strings

    def locate(self, ch: str) -> tuple[str, int, int]:
        try:
            return self.positions[ch]
        except KeyError:
            raise DomainError(f"character {ch!r} not on the layout") from None

    def at(self, plane: str, row: int, col: int) -> str:
        rows = self.grids[plane]
        if 0 <= row < len(rows) and 0 <= col < len(rows[row]):
            return rows[row][col]
        raise DomainError(f"no key at row {row}, column {col}")


def load_layout(path=None) -> KeyboardLayout:
    """Load a layout table; with no path, the packaged QWERTY grid."""
    if path is None:
        text = resources.files("hcpass.data").joinpath("qwerty_layout.txt").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    grids: dict[str, list[str]] = {}
    for line in text.splitlines():
        line = line.rstrip()
        if not line or line.startswith("#"):
            continue
        plane, row, keys = line.split(" ", 2)
        grids.setdefault(plane, [])
        rows = grids[plane]
        if int(row) != len(rows):
            raise ConfigError("layout rows must be listed in order")
        rows.append(keys)
    positions = {}
    for plane, rows in grids.items():
        for r, keys in enumerate(rows):
            for c, ch in enumerate(keys):
                positions[ch] = (plane, r, c)
    return KeyboardLayout(positions=positions, grids={p: tuple(r) for p, r in grids.items()})


_DEFAULT_LAYOUT: KeyboardLayout | None = None


def default_layout() -> KeyboardLayout:
    global _DEFAULT_LAYOUT
    if _DEFAULT_LAYOUT is None:
        _DEFAULT_LAYOUT = load_layout()
    return _DEFAULT_LAYOUT


def _displace(layout: KeyboardLayout, ch: str, moves: Sequence[str]) -> str:
    plane, row, col = layout.locate(ch)
    for move in moves:
        if move not in MOVES:
            raise ConfigError(f"unknown move {move!r}")
        dr, dc = MOVES[move]
        row, col = row + dr, col + dc
    return layout.at(plane, row, col)


def inverse_moves(moves: Sequence[str]) -> tuple[str, ...]:
    return tuple(_INVERSE[m] for m in reversed(moves))


def typewriter_shift(
    text: str,
    moves: Sequence[str],
    layout: KeyboardLayout | None = None,
    *,
    no_double: bool = False,
    alt_moves: Sequence[str] | None = None,
) -> str:
    """Replace each character by the one a fixed finger displacement away.

    With ``no_double``, whenever the shifted character would repeat the
    previous output character, the alternative displacement is used
    instead (by default the same moves with up-right turned into
    down-right).
    """
    layout = layout or default_layout()
    if no_double and alt_moves is None:
        alt_moves = tuple("down-right" if m == "up-right" else m for m in moves)
    out: list[str] = []
    for ch in text:
        shifted = _displace(layout, ch, moves)
        if no_double and out and shifted == out[-1]:
            shifted = _displace(layout, ch, alt_moves)
        out.append(shifted)
    return "".join(out)


# ---------------------------------------------------------------------------
# Shift-addition (telephone-number encoding)
# ---------------------------------------------------------------------------


def shift_add(text: str, shifts: str, *, wrap: bool = False) -> str:
    """Advance the i-th letter by the i-th shift digit, cyclically in the
    alphabet.

    When the text is shorter than the shift string, the text is cycled up
    to the shift string's length (three letters under a ten-digit shift
    produce ten output letters).  When the shift string is shorter, the
    unmatched tail is left unshifted unless ``wrap`` cycles the shifts.
    """
    if not shifts or not shifts.isdigit():
        raise ConfigError("shift string must be nonempty decimal digits")
    text = text.upper()
    if any(ch not in ALPHA for ch in text):
        raise DomainError("shift-addition is defined on letters only")
    if not text:
        raise DomainError("text must be nonempty")
    length = max(len(text), len(shifts))
    out = []
    for i in range(length):
        ch = text[i % len(text)] if len(text) < length else text[i]
        if i < len(shifts):
            step = int(shifts[i])
        elif wrap:
            step = int(shifts[i % len(shifts)])
        else:
            step = 0
        out.append(ALPHA[(ALPHA.index(ch) + step) % 26])
    return "".join(out)


# ---------------------------------------------------------------------------
# Start-location rules
# ---------------------------------------------------------------------------

VOWELS = set("AEIOU")
VERTICAL_LINE_LETTERS = set("BDEFHIJKLMNPRTUY")
EEE_SOUND_LETTERS = set("BCDEGPTVZ")
TONGUE_TOUCH_LETTERS = set("DLNTW")

_NAMED_SETS = {
    "vertical": VERTICAL_LINE_LETTERS,
    "eee": EEE_SOUND_LETTERS,
    "tongue": TONGUE_TOUCH_LETTERS,
}


@dataclass(frozen=True)
class StartRule:
    """Where to start reading a challenge; falls back to the last letter
    whenever the rule's trigger is absent or lands out of range."""

    kind: str  # "last-letter" | "second-vowel" | "two-past-first-vowel" | "one-past-first-in-set"
    letters: frozenset[str] = frozenset()

    @classmethod
    def parse(cls, spec: str) -> "StartRule":
        if spec in ("last-letter", "second-vowel", "two-past-first-vowel"):
            return cls(spec)
        if spec.startswith("one-past-first-"):
            name = spec.removeprefix("one-past-first-")
            if name in _NAMED_SETS:
                return cls("one-past-first-in-set", frozenset(_NAMED_SETS[name]))
        raise ConfigError(f"unknown start rule {spec!r}")


def start_index(challenge: str, rule: StartRule | str) -> int:
    """Index the rule selects; total over nonempty challenges."""
    if isinstance(rule, str):
        rule = StartRule.parse(rule)
    challenge = challenge.upper()
    if not challenge:
        raise DomainError("challenge must be nonempty")
    last = len(challenge) - 1
    if rule.kind == "last-letter":
        return last
    if rule.kind == "second-vowel":
        seen = 0
        for i, ch in enumerate(challenge):
            if ch in VOWELS:
                seen += 1
                if seen == 2:
                    return i
        return last
    if rule.kind == "two-past-first-vowel":
        for i, ch in enumerate(challenge):
            if ch in VOWELS:
                return i + 2 if i + 2 <= last else last
        return last
    if rule.kind == "one-past-first-in-set":
        for i, ch in enumerate(challenge):
            if ch in rule.letters:
                return i + 1 if i + 1 <= last else last
        return last
    raise ConfigError(f"unknown start rule kind {rule.kind!r}")


def rotate_to(challenge: str, index: int) -> str:
    """Read the challenge starting at ``index``, wrapping around."""
    return challenge[index:] + challenge[:index]


# ---------------------------------------------------------------------------
# Repeat handling
# ---------------------------------------------------------------------------


def handle_repeats(challenge: str, rule: str) -> str:
    """``delete`` removes consecutive duplicate letters; ``increment``
    advances each letter by how many times it has already been seen
    anywhere in the challenge (cyclically)."""
    challenge = challenge.upper()
    if rule == "delete":
        out = []
        for ch in challenge:
            if not out or out[-1] != ch:
                out.append(ch)
        return "".join(out)
    if rule == "increment":
        seen: dict[str, int] = {}
        out = []
        for ch in challenge:
            count = seen.get(ch, 0)
            seen[ch] = count + 1
            if ch in ALPHA:
                out.append(ALPHA[(ALPHA.index(ch) + count) % 26])
            else:
                out.append(ch)
        return "".join(out)
    raise ConfigError(f"unknown repeat rule {rule!r}")


# ---------------------------------------------------------------------------
# Challenge-derived carries
# ---------------------------------------------------------------------------


def challenge_carry(challenge: str, mode: str = "digit-sum", vector: Sequence[int] | None = None) -> int:
    """A carry digit computed from a digit challenge: the digit sum mod 10,
    or the dot product with a fixed vector mod 10."""
    if not challenge or not challenge.isdigit():
        raise DomainError("carry modes are defined on digit challenges")
    if mode == "digit-sum":
        return sum(int(ch) for ch in challenge) % 10
    if mode == "dot-product":
        if vector is None or len(vector) != len(challenge):
            raise DimensionError("dot-product vector must match the challenge length")
        return sum(int(ch) * int(v) for ch, v in zip(challenge, vector)) % 10
    raise ConfigError(f"unknown carry mode {mode!r}")


# ---------------------------------------------------------------------------
# Fixed-string attachment
# ---------------------------------------------------------------------------


def append_fixed(password: str, suffix: str, placement: str = "suffix", period: int = 1) -> str:
    """Attach a fixed string to a password: prefix, suffix, or interleaved
    (one suffix character after every ``period`` password characters,
    leftovers at the end)."""
    if not suffix:
        raise ConfigError("fixed string must be nonempty")
    if placement == "suffix":
        return password + suffix
    if placement == "prefix":
        return suffix + password
    if placement == "interleave":
        if period < 1:
            raise ConfigError("interleave period must be at least 1")
        out = []
        queue = list(suffix)
        for i, ch in enumerate(password, start=1):
            out.append(ch)
            if i % period == 0 and queue:
                out.append(queue.pop(0))
        out.extend(queue)
        return "".join(out)
    raise ConfigError(f"unknown placement {placement!r}")


# ---------------------------------------------------------------------------
# Pipelines: "start:two-past-first-vowel | sum-skip | append:aA1@"
# ---------------------------------------------------------------------------

SCHEMA_STEPS = ("letter-sub", "letter-sub-skip", "letter-sub-shift-up", "sum-suffix", "alt-sum", "sum-skip")


@dataclass(frozen=True)
class Pipeline:
    """Challenge transforms, one schema step, then password transforms."""

    pre: tuple[Callable[[str], str], ...]
    schema: str
    schema_arg: str | None
    post: tuple[Callable[[str], str], ...]


def parse_pipeline(spec: str) -> Pipeline:
    steps = [s.strip() for s in spec.split("|")]
    if not steps or not all(steps):
        raise ConfigError("empty pipeline step")
    pre: list[Callable[[str], str]] = []
    post: list[Callable[[str], str]] = []
    schema: str | None = None
    schema_arg: str | None = None
    for step in steps:
        name, _, arg = step.partition(":")
        if name in SCHEMA_STEPS:
            if schema is not None:
                raise ConfigError("pipeline may contain only one schema step")
            schema, schema_arg = name, (arg or None)
            continue
        target = pre if schema is None else post
        target.append(_transform_step(name, arg, challenge_side=schema is None))
    if schema is None:
        raise ConfigError(f"pipeline needs one schema step from {SCHEMA_STEPS}")
    return Pipeline(tuple(pre), schema, schema_arg, tuple(post))


def _transform_step(name: str, arg: str, challenge_side: bool) -> Callable[[str], str]:
    if name == "start":
        rule = StartRule.parse(arg)
        return lambda text: rotate_to(text, start_index(text, rule))
    if name == "repeats":
        if arg not in ("delete", "increment"):
            raise ConfigError(f"unknown repeat rule {arg!r}")
        return lambda text: handle_repeats(text, arg)
    if name == "append":
        parts = arg.split(":") if arg else []
        if not parts or not parts[0]:
            raise ConfigError("append needs a string argument")
        fixed = parts[0]
        placement = parts[1] if len(parts) > 1 else "suffix"
        period = int(parts[2]) if len(parts) > 2 else 1
        return lambda text: append_fixed(text, fixed, placement, period)
    if name == "typewriter":
        if challenge_side:
            raise ConfigError("typewriter applies to the password side")
        parts = arg.split(":")
        moves = tuple(parts[0].split(","))
        no_double = len(parts) > 1 and parts[1] == "no-double"
        return lambda text: typewriter_shift(text, moves, no_double=no_double)
    if name == "shift-add":
        parts = arg.split(":")
        digits = parts[0]
        wrap = len(parts) > 1 and parts[1] == "wrap"
        return lambda text: shift_add(text, digits, wrap=wrap)
    raise ConfigError(f"unknown pipeline step {name!r}")
