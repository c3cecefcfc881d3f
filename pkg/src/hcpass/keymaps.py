"""Private keys: memorized symbol-to-digit maps.

A key is a total map from a fixed, ordered alphabet (letters, digits, or
two-digit number tokens) to the digits 0..9.  Written out in alphabet
order it is just a digit string, which is how keys are stored on disk and
how the one-way-function input is encoded.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import ConfigError, DomainError
from .machine import prep_cost

LETTERS = tuple(string.ascii_uppercase)
DIGITS = tuple(string.digits)
NUM2 = tuple(f"{i:02d}" for i in range(100))

DIE_SIDES = 10


def alphabet_from_id(alphabet_id: str) -> tuple[str, ...]:
    """Resolve an alphabet identifier, e.g. ``letters``, ``digits``,
    ``num2``, or a truncation like ``letters:4``."""
    base, _, size = alphabet_id.partition(":")
    table = {"letters": LETTERS, "digits": DIGITS, "num2": NUM2}
    if base not in table:
        raise ConfigError(f"unknown alphabet id {alphabet_id!r}")
    symbols = table[base]
    if size:
        n = int(size)
        if not 2 <= n <= len(symbols):
            raise ConfigError(f"alphabet size {n} out of range for {base}")
        symbols = symbols[:n]
    return symbols


def alphabet_id_for(symbols: Sequence[str]) -> str:
    for base, full in (("letters", LETTERS), ("digits", DIGITS), ("num2", NUM2)):
        if tuple(symbols) == full:
            return base
        if tuple(symbols) == full[: len(symbols)]:
            return f"{base}:{len(symbols)}"
    raise ConfigError("alphabet is not a prefix of a known alphabet")


@dataclass(frozen=True)
class KeyMap:
    """A total map from an ordered alphabet to digits 0..9."""

    symbols: tuple[str, ...]
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.symbols) != len(self.images):
            raise ConfigError("one image per symbol required")
        if len(set(self.symbols)) != len(self.symbols):
            raise ConfigError("alphabet symbols must be distinct")
        if any(not 0 <= v <= 9 for v in self.images):
            raise ConfigError("images must be digits 0..9")
        object.__setattr__(self, "_table", dict(zip(self.symbols, self.images)))

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._table

    def __getitem__(self, symbol: str) -> int:
        try:
            return self._table[symbol]
        except KeyError:
            raise DomainError(f"symbol {symbol!r} outside key domain") from None

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def digit_string(self) -> str:
        """The key written as a digit string in alphabet order."""
        return "".join(str(v) for v in self.images)

    @property
    def alphabet_id(self) -> str:
        return alphabet_id_for(self.symbols)

    @classmethod
    def from_digit_string(cls, symbols: Sequence[str], digits: str) -> "KeyMap":
        if len(digits) != len(symbols):
            raise ConfigError(
                f"key string length {len(digits)} != alphabet size {len(symbols)}"
            )
        if not digits.isdigit():
            raise ConfigError("key string must be decimal digits")
        return cls(tuple(symbols), tuple(int(c) for c in digits))

    @classmethod
    def alphabet_position(cls) -> "KeyMap":
        """The standard illustration key: each letter's 1-based alphabet
        position mod 10 (A->1, ..., I->9, J->0, ..., Z->6)."""
        return cls(LETTERS, tuple((i + 1) % 10 for i in range(26)))

    @classmethod
    def digit_affine(cls, a: int, b: int) -> "KeyMap":
        """Digit-to-digit key i -> (a*i + b) mod 10."""
        return cls(DIGITS, tuple((a * i + b) % 10 for i in range(10)))


@dataclass(frozen=True)
class PrepReport:
    """Cost of generating and memorizing one key.

    ``prep_total`` is die entropy plus chunks written; ``tosses_plus_chunks``
    is the plain count (one per toss, one per stored chunk), reported
    alongside because both accountings are in circulation.
    """

    die_tosses: int
    die_sides: int
    entropy_bits: float
    chunks_written: int

    @property
    def prep_total(self) -> float:
        return prep_cost(self.die_tosses, self.die_sides, self.chunks_written)

    @property
    def tosses_plus_chunks(self) -> int:
        return self.die_tosses + self.chunks_written

    def as_dict(self) -> dict:
        return {
            "die_tosses": self.die_tosses,
            "die_sides": self.die_sides,
            "entropy_bits": round(self.entropy_bits, 4),
            "chunks_written": self.chunks_written,
            "prep_total": round(self.prep_total, 4),
            "tosses_plus_chunks": self.tosses_plus_chunks,
        }


def gen_key(rng, symbols: Sequence[str]) -> tuple[KeyMap, PrepReport]:
    """Roll one 10-sided die per symbol; memorizing the map stores two
    chunks per symbol/image pair."""
    symbols = tuple(symbols)
    images = tuple(rng.randrange(DIE_SIDES) for _ in symbols)
    key = KeyMap(symbols, images)
    report = PrepReport(
        die_tosses=len(symbols),
        die_sides=DIE_SIDES,
        entropy_bits=len(symbols) * math.log2(DIE_SIDES),
        chunks_written=2 * len(symbols),
    )
    return key, report


# ---------------------------------------------------------------------------
# Key files: alphabet id line + digit string line
# ---------------------------------------------------------------------------


def save_key(key: KeyMap, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{key.alphabet_id}\n{key.digit_string()}\n")


def load_key(path) -> KeyMap:
    with open(path, encoding="ascii") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if len(lines) != 2:
        raise ConfigError(f"key file {path} must have an alphabet line and a digit line")
    symbols = alphabet_from_id(lines[0])
    return KeyMap.from_digit_string(symbols, lines[1])
