"""Candidate one-way function: the running-sum schema with the roles of
key and challenge swapped.

An instance fixes a public random challenge C over an alphabet of size N
(length about N ln N, long enough that every symbol appears).  The
function takes an N-digit string, decodes it as a symbol-to-digit map,
and returns the running-sum schema's output on C under that map.  The
inversion problem, given the output, is to find any map producing it;
at desk scale an exact exhaustive inverter is provided, with an explicit
step budget it refuses to exceed.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from dataclasses import dataclass

from .errors import BudgetExceededError, ConfigError, DomainError, ParameterError
from .keymaps import KeyMap, alphabet_from_id, alphabet_id_for
from .machine import Machine
from .schemas import sum_skip

#: Default step allowance for desk-scale experiments.
DESK_BUDGET = 10**7
#: Named reference bound for a week of supercomputer time; reporting only.
SUPERCOMPUTER_BUDGET = 10**24


@dataclass(frozen=True)
class OwfInstance:
    """A fixed public challenge over an N-symbol alphabet."""

    symbols: tuple[str, ...]
    challenge: tuple[str, ...]
    length_factor: float = 1.0

    @property
    def n_symbols(self) -> int:
        return len(self.symbols)

    def covers_alphabet(self) -> bool:
        return set(self.symbols) <= set(self.challenge)

    def as_dict(self) -> dict:
        return {
            "alphabet": alphabet_id_for(self.symbols),
            "challenge": list(self.challenge),
            "length_factor": self.length_factor,
        }


def challenge_length(n_symbols: int, length_factor: float) -> int:
    return round(length_factor * n_symbols * math.log(n_symbols))


def make_instance(
    n_symbols: int,
    length_factor: float = 1.0,
    rng: random.Random | None = None,
    *,
    alphabet: str | None = None,
    max_attempts: int = 100_000,
) -> OwfInstance:
    """Draw a uniform challenge of length round(factor * N * ln N),
    regenerated until every alphabet symbol occurs at least once."""
    if n_symbols < 2:
        raise ParameterError("alphabet needs at least two symbols")
    if alphabet is None:
        alphabet = "letters" if n_symbols <= 26 else "num2"
    base = alphabet_from_id(alphabet)
    if len(base) < n_symbols:
        raise ConfigError(f"alphabet {alphabet!r} smaller than {n_symbols}")
    symbols = base[:n_symbols]
    rng = rng or random.Random(0)
    length = challenge_length(n_symbols, length_factor)
    if length < n_symbols:
        raise ParameterError(
            f"challenge length {length} cannot cover {n_symbols} symbols; "
            "increase length_factor"
        )
    for _ in range(max_attempts):
        challenge = tuple(rng.choice(symbols) for _ in range(length))
        if set(challenge) == set(symbols):
            return OwfInstance(symbols, challenge, length_factor)
    raise ConfigError("could not draw a covering challenge; increase length_factor")


def decode_key(instance: OwfInstance, key_digits: str) -> KeyMap:
    if len(key_digits) != instance.n_symbols:
        raise DomainError(
            f"key string length {len(key_digits)} != alphabet size {instance.n_symbols}"
        )
    return KeyMap.from_digit_string(instance.symbols, key_digits)


def evaluate(instance: OwfInstance, key_digits: str, *, machine: Machine | None = None) -> str:
    """Run the running-sum schema on the instance challenge under the map
    encoded by ``key_digits``."""
    key = decode_key(instance, key_digits)
    return sum_skip(instance.challenge, key, machine=machine).output


@dataclass(frozen=True)
class InversionReport:
    preimages: tuple[str, ...]
    keys_tried: int
    steps: int
    elapsed_seconds: float

    def as_dict(self) -> dict:
        return {
            "preimages": list(self.preimages),
            "candidates": len(self.preimages),
            "keys_tried": self.keys_tried,
            "steps": self.steps,
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }


def _fast_eval(challenge_codes, key_images, carry_code) -> str:
    total = key_images[carry_code]
    out = []
    for code in challenge_codes:
        total = (total + key_images[code]) % 10
        if total < 5:
            out.append(str(total))
    return "".join(out)


def brute_force_invert(
    instance: OwfInstance,
    target: str,
    digit_range: int = 10,
    *,
    budget: int = DESK_BUDGET,
    partitions: int = 1,
) -> InversionReport:
    """Exact preimage set {x : F(x) = target} by exhausting the key space.

    Refuses when digit_range**N exceeds the step budget.  The key space
    may be split into ``partitions`` contiguous ranges; the result is
    identical for any partitioning.
    """
    if not 2 <= digit_range <= 10:
        raise ConfigError("digit_range must be between 2 and 10")
    n = instance.n_symbols
    space = digit_range**n
    if space > budget:
        raise BudgetExceededError("key space exceeds budget", required=space, budget=budget)
    index = {sym: i for i, sym in enumerate(instance.symbols)}
    codes = tuple(index[sym] for sym in instance.challenge)
    carry_code = codes[-1]
    start = time.perf_counter()
    found: list[str] = []
    steps = 0
    bounds = [space * p // partitions for p in range(partitions + 1)]
    for lo, hi in zip(bounds, bounds[1:]):
        for serial in range(lo, hi):
            images = []
            v = serial
            for _ in range(n):
                images.append(v % digit_range)
                v //= digit_range
            steps += len(codes)
            if _fast_eval(codes, images, carry_code) == target:
                found.append("".join(str(d) for d in images))
    return InversionReport(
        preimages=tuple(sorted(found)),
        keys_tried=space,
        steps=steps,
        elapsed_seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# Instance files
# ---------------------------------------------------------------------------


def save_instance(instance: OwfInstance, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(instance.as_dict(), fh, sort_keys=True)
        fh.write("\n")


def load_instance(path) -> OwfInstance:
    with open(path, encoding="ascii") as fh:
        data = json.load(fh)
    symbols = alphabet_from_id(data["alphabet"])
    return OwfInstance(
        symbols=symbols,
        challenge=tuple(data["challenge"]),
        length_factor=float(data.get("length_factor", 1.0)),
    )
