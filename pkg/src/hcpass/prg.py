"""Digit-stream generators built on the running-sum core.

The core pass walks a digit string with one carried sum: at each digit the
sum is first pushed through a memorized digit-to-digit key, then the
current input digit is added mod 10, and the sum is emitted only when it
is strictly below five.  Note the order differs from the letter schema:
here the key is applied to the carried sum, not to the input symbol.

Two generators chain passes over a seed and its skip-i subsequences, the
carry of each pass being the final running sum of the previous one:

* ``cascade`` concatenates passes over the seed and subsequences for
  i = 1 .. floor(n/2).
* ``echo_cascade`` outputs the seed itself, then exactly three passes
  (the seed, then subsequences i = 1 and i = 2); its expected total
  length is 2n.

Seeds are digit strings over {0..4} (optionally {0..5} behind a flag);
intermediate sums use all ten digits but every emitted digit is below 5.
"""

from __future__ import annotations

import random
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ConfigError, DomainError, ParameterError
from .keymaps import KeyMap

GENERATORS = ("pass", "cascade", "echo-cascade")


def digit_table(key) -> tuple[int, ...]:
    """Normalize a digit key (KeyMap over digits, mapping, or sequence)
    to a 10-tuple indexed by digit."""
    if isinstance(key, KeyMap):
        if len(key) != 10:
            raise ConfigError("digit key must cover all ten digits")
        return tuple(key[str(d)] for d in range(10))
    if isinstance(key, Mapping):
        table = tuple(int(key[d]) for d in range(10))
    else:
        table = tuple(int(v) for v in key)
    if len(table) != 10 or any(not 0 <= v <= 9 for v in table):
        raise ConfigError("digit key must map all ten digits to digits")
    return table


def validate_seed(seed: str, *, digit_bound: int = 5) -> str:
    """Seeds are digit strings over {0..digit_bound-1}; the default bound
    of 5 is the generator's contract, and evaluation stays well defined
    for any decimal seed via an explicit larger bound (up to 10)."""
    if not 2 <= digit_bound <= 10:
        raise ConfigError("digit bound must be between 2 and 10")
    if not seed:
        raise DomainError("seed must be nonempty")
    if any(ch not in "0123456789" or int(ch) >= digit_bound for ch in seed):
        raise DomainError(f"seed digits must be in 0..{digit_bound - 1}")
    return seed


@dataclass(frozen=True)
class DigitPassResult:
    output: str
    final_sum: int
    sums: tuple[int, ...]


def sum_skip_digits(digits: str, key, carry: int) -> DigitPassResult:
    """One running-sum pass over a digit string with an explicit carry.

    Per digit: sum <- key[sum]; sum <- (sum + digit) mod 10; emit the sum
    if it is strictly below 5.  Returns the emitted digits, the final
    running sum (the next pass's carry), and the full sum sequence.
    """
    if not digits:
        raise DomainError("input must be nonempty")
    if not digits.isdigit():
        raise DomainError("input must be decimal digits")
    if not 0 <= carry <= 9:
        raise DomainError("carry must be a digit")
    table = digit_table(key)
    total = carry
    out: list[str] = []
    sums: list[int] = []
    for ch in digits:
        total = (table[total] + int(ch)) % 10
        sums.append(total)
        if total < 5:
            out.append(str(total))
    return DigitPassResult("".join(out), total, tuple(sums))


def subseq_indices(length: int, i: int) -> tuple[int, ...]:
    """Positions kept by the alternating skip-i / take-i rule."""
    if not 0 <= i <= length // 2:
        raise ParameterError(f"skip length {i} out of range for length {length}")
    if i == 0:
        return tuple(range(length))
    kept = []
    pos = i
    while pos < length:
        kept.extend(range(pos, min(pos + i, length)))
        pos += 2 * i
    return tuple(kept)


def subseq(text: str, i: int) -> str:
    """Alternating skip-i / take-i subsequence, starting with a skip.

    ``subseq(text, 0)`` is the text itself; i may run up to half the
    length (the largest skip leaving anything to take).
    """
    return "".join(text[p] for p in subseq_indices(len(text), i))


def pass_skips(n: int, generator: str = "cascade") -> tuple[int, ...]:
    """Skip lengths of the passes a generator runs on a length-n seed."""
    if generator == "pass":
        return (0,)
    if generator == "cascade":
        return tuple(range(0, n // 2 + 1))
    if generator == "echo-cascade":
        return (0, 1, 2)
    raise ConfigError(f"unknown generator {generator!r}")


def slot_count(n: int, generator: str = "cascade") -> int:
    """Number of potential emission slots (one per digit visited)."""
    return sum(len(subseq_indices(n, i)) for i in pass_skips(n, generator))


def exact_mean_length(n: int, generator: str) -> float:
    """Exact expected output length over uniform keys and seeds: each slot
    emits with probability 1/2, and echo-cascade prepends the seed."""
    echo = n if generator == "echo-cascade" else 0
    return echo + slot_count(n, generator) / 2


@dataclass(frozen=True)
class StreamResult:
    """Concatenated generator output with its per-pass structure."""

    digits: str
    parts: tuple[str, ...]
    boundaries: tuple[int, ...]  # start offset of each part in ``digits``
    carries: tuple[int, ...]  # initial carry of each running-sum pass
    final_sums: tuple[int, ...]

    def __post_init__(self):
        if "".join(self.parts) != self.digits:
            raise ConfigError("parts must concatenate to the output")


def _chain(seed: str, key, skips: Sequence[int], echo: bool) -> StreamResult:
    table = digit_table(key)
    parts: list[str] = []
    boundaries: list[int] = []
    carries: list[int] = []
    finals: list[int] = []
    offset = 0
    if echo:
        boundaries.append(0)
        parts.append(seed)
        offset = len(seed)
    carry = int(seed[-1])  # first pass starts from the raw last digit
    for i in skips:
        result = sum_skip_digits(subseq(seed, i), table, carry)
        boundaries.append(offset)
        parts.append(result.output)
        carries.append(carry)
        finals.append(result.final_sum)
        offset += len(result.output)
        carry = result.final_sum
    return StreamResult(
        digits="".join(parts),
        parts=tuple(parts),
        boundaries=tuple(boundaries),
        carries=tuple(carries),
        final_sums=tuple(finals),
    )


def cascade(seed: str, key, *, digit_bound: int = 5) -> StreamResult:
    """Concatenated passes over the seed and its skip-i subsequences for
    i = 1 .. floor(n/2), carries chained pass to pass."""
    seed = validate_seed(seed, digit_bound=digit_bound)
    if len(seed) < 3:
        raise ParameterError("cascade needs a seed of length at least 3")
    return _chain(seed, key, pass_skips(len(seed), "cascade"), echo=False)


def echo_cascade(seed: str, key, *, digit_bound: int = 5) -> StreamResult:
    """The seed verbatim, then exactly three chained passes (skips 0, 1, 2)."""
    seed = validate_seed(seed, digit_bound=digit_bound)
    if len(seed) < 5:
        raise ParameterError("echo-cascade needs a seed of length at least 5")
    return _chain(seed, key, pass_skips(len(seed), "echo-cascade"), echo=True)


def generate(generator: str, seed: str, key, *, digit_bound: int = 5) -> StreamResult:
    if generator == "pass":
        seed = validate_seed(seed, digit_bound=digit_bound)
        return _chain(seed, key, (0,), echo=False)
    if generator == "cascade":
        return cascade(seed, key, digit_bound=digit_bound)
    if generator == "echo-cascade":
        return echo_cascade(seed, key, digit_bound=digit_bound)
    raise ConfigError(f"unknown generator {generator!r}")


# ---------------------------------------------------------------------------
# Output-length statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LengthStats:
    generator: str
    n: int
    trials: int
    mean: float
    variance: float
    minimum: int
    maximum: int
    histogram: tuple[tuple[int, int], ...]
    exact_mean: float

    def as_dict(self) -> dict:
        return {
            "generator": self.generator,
            "n": self.n,
            "trials": self.trials,
            "mean": round(self.mean, 4),
            "variance": round(self.variance, 4),
            "min": self.minimum,
            "max": self.maximum,
            "exact_mean": self.exact_mean,
        }


def random_seed_string(rng: random.Random, n: int, digit_bound: int = 5) -> str:
    return "".join(str(rng.randrange(digit_bound)) for _ in range(n))


def random_digit_key(rng: random.Random) -> tuple[int, ...]:
    return tuple(rng.randrange(10) for _ in range(10))


def expected_length_report(
    generator: str,
    n: int,
    trials: int,
    seed: int = 0,
    *,
    digit_bound: int = 5,
) -> LengthStats:
    """Empirical output-length distribution over uniform seeds and keys.

    Each trial derives its own generator state from (seed, index), so the
    aggregate is independent of trial execution order.
    """
    if trials < 1000:
        raise ParameterError("need at least 1000 trials for stable statistics")
    lengths = []
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        s = random_seed_string(rng, n, digit_bound)
        key = random_digit_key(rng)
        lengths.append(len(generate(generator, s, key, digit_bound=digit_bound).digits))
    hist = tuple(sorted(Counter(lengths).items()))
    return LengthStats(
        generator=generator,
        n=n,
        trials=trials,
        mean=statistics.fmean(lengths),
        variance=statistics.pvariance(lengths),
        minimum=min(lengths),
        maximum=max(lengths),
        histogram=hist,
        exact_mean=exact_mean_length(n, generator),
    )
