"""Observation-threshold security estimation.

A schema-plus-key pair has security Q against a guessing strategy when an
adversary who has seen responses to fewer than Q challenges (drawn with
replacement from a fixed challenge distribution) guesses the response to
a fresh draw with probability below 1/10.  The estimator measures the
empirical success curve over the number of observed pairs m = 0, 1, 2,
... and reports the smallest m at which the success rate reaches the
threshold, with Wilson confidence bounds per point.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

from .errors import ConfigError, DomainError, InconsistentObservationsError
from .keymaps import KeyMap

SUCCESS_THRESHOLD = 0.1
Z_99 = 2.5758293035489004  # two-sided 99% normal quantile


def wilson_interval(successes: int, trials: int, z: float = Z_99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1 + z * z / trials
    center = p + z * z / (2 * trials)
    margin = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return (center - margin) / denom, (center + margin) / denom


# ---------------------------------------------------------------------------
# Challenge distributions
# ---------------------------------------------------------------------------


class ChallengeSource(Protocol):
    source_id: str

    def draw(self, rng: random.Random) -> str: ...


@dataclass(frozen=True)
class LexiconSource:
    """Finite challenge dictionary with word probabilities."""

    words: tuple[str, ...]
    probabilities: tuple[float, ...]
    source_id: str = "lexicon"

    def __post_init__(self):
        if not self.words:
            raise ConfigError("lexicon must be nonempty")
        if len(self.words) != len(self.probabilities):
            raise ConfigError("one probability per word required")
        if any(p < 0 for p in self.probabilities):
            raise ConfigError("probabilities must be nonnegative")
        if abs(sum(self.probabilities) - 1.0) > 1e-6:
            raise ConfigError("probabilities must sum to 1")

    def draw(self, rng: random.Random) -> str:
        return rng.choices(self.words, weights=self.probabilities, k=1)[0]

    @classmethod
    def uniform(cls, words: Sequence[str], source_id: str = "lexicon") -> "LexiconSource":
        words = tuple(words)
        return cls(words, tuple(1.0 / len(words) for _ in words), source_id)


@dataclass(frozen=True)
class UniformStringSource:
    """Challenges drawn as fixed-length uniform random strings."""

    length: int
    alphabet: tuple[str, ...]
    source_id: str = "uniform"

    def draw(self, rng: random.Random) -> str:
        return "".join(rng.choice(self.alphabet) for _ in range(self.length))


def load_lexicon(path) -> LexiconSource:
    """Lexicon file: one ``word probability`` pair per line; '#' comments."""
    words: list[str] = []
    probs: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ConfigError(f"bad lexicon line: {line!r}")
            words.append(parts[0])
            probs.append(float(parts[1]))
    return LexiconSource(tuple(words), tuple(probs))


# ---------------------------------------------------------------------------
# Guessing strategies
# ---------------------------------------------------------------------------


class MemoryGuesser:
    """Remembers exact pairs; predicts only challenges it has seen."""

    def __init__(self):
        self.seen: dict[str, str] = {}

    def observe(self, challenge: str, password: str) -> None:
        self.seen[challenge] = password

    def predict(self, challenge: str) -> str | None:
        return self.seen.get(challenge)


class ModePasswordGuesser:
    """Predicts the most frequently observed password (reused-password
    model); remembers exact pairs too."""

    def __init__(self):
        self.seen: dict[str, str] = {}
        self.counts: Counter = Counter()
        self.order: dict[str, int] = {}

    def observe(self, challenge: str, password: str) -> None:
        self.seen[challenge] = password
        self.counts[password] += 1
        self.order.setdefault(password, len(self.order))

    def predict(self, challenge: str) -> str | None:
        if challenge in self.seen:
            return self.seen[challenge]
        if not self.counts:
            return None
        return max(self.counts, key=lambda pw: (self.counts[pw], -self.order[pw]))


class MapConstraintGuesser:
    """The natural adversary for letter substitution: each observed pair
    reveals the key on every letter of the challenge.  Predicts exactly
    when all letters of a fresh challenge are covered; abstains otherwise.
    Contradictory observations mean the source is not letter substitution.
    """

    def __init__(self):
        self.learned: dict[str, int] = {}

    def observe(self, challenge: str, password: str) -> None:
        challenge = challenge.upper()
        if len(challenge) != len(password) or not password.isdigit():
            raise InconsistentObservationsError(
                "response is not a per-letter digit substitution"
            )
        for letter, digit in zip(challenge, password):
            value = int(digit)
            if self.learned.get(letter, value) != value:
                raise InconsistentObservationsError(
                    f"letter {letter!r} maps to both {self.learned[letter]} and {value}"
                )
            self.learned[letter] = value

    def partial_key(self) -> dict[str, int]:
        return dict(self.learned)

    def predict(self, challenge: str) -> str | None:
        challenge = challenge.upper()
        if all(ch in self.learned for ch in challenge):
            return "".join(str(self.learned[ch]) for ch in challenge)
        return None


GUESSERS: dict[str, Callable[[], object]] = {
    "memory": MemoryGuesser,
    "mode-password": ModePasswordGuesser,
    "map-constraint": MapConstraintGuesser,
}


# ---------------------------------------------------------------------------
# The estimator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QPoint:
    m: int
    trials: int
    successes: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def wilson(self) -> tuple[float, float]:
        return wilson_interval(self.successes, self.trials)

    def as_dict(self) -> dict:
        lo, hi = self.wilson
        return {
            "m": self.m,
            "trials": self.trials,
            "successes": self.successes,
            "rate": round(self.rate, 6),
            "wilson_low": round(lo, 6),
            "wilson_high": round(hi, 6),
        }


@dataclass(frozen=True)
class SecurityQReport:
    schema_id: str
    source_id: str
    threshold: float
    points: tuple[QPoint, ...]
    q_estimate: int | None

    def as_dict(self) -> dict:
        return {
            "schema_id": self.schema_id,
            "source_id": self.source_id,
            "threshold": self.threshold,
            "points": [p.as_dict() for p in self.points],
            "q_estimate": self.q_estimate,
        }


def estimate_security_q(
    responder: Callable[[str], str],
    source: ChallengeSource,
    guesser_factory: Callable[[], object],
    *,
    schema_id: str = "schema",
    trials: int = 2000,
    m_values: Sequence[int] | None = None,
    threshold: float = SUCCESS_THRESHOLD,
    seed: int = 0,
) -> SecurityQReport:
    """Empirical success curve of a guessing strategy, by observation count.

    For each m: sample m (challenge, response) pairs with replacement,
    show them to a fresh guesser, and test its prediction on a fresh
    draw.  The reported Q estimate is the smallest m whose empirical
    success rate reaches the threshold (an adversary with fewer
    observations stays below it).  Trials derive their randomness from
    (seed, m, trial), so results do not depend on execution order.
    """
    if m_values is None:
        m_values = tuple(range(0, 9))
    points = []
    q_estimate: int | None = None
    for m in m_values:
        successes = 0
        for t in range(trials):
            rng = random.Random(f"q:{seed}:{m}:{t}")
            guesser = guesser_factory()
            for _ in range(m):
                challenge = source.draw(rng)
                guesser.observe(challenge, responder(challenge))
            fresh = source.draw(rng)
            if guesser.predict(fresh) == responder(fresh):
                successes += 1
        point = QPoint(m=m, trials=trials, successes=successes)
        points.append(point)
        if q_estimate is None and point.rate >= threshold:
            q_estimate = m
    return SecurityQReport(
        schema_id=schema_id,
        source_id=getattr(source, "source_id", "unknown"),
        threshold=threshold,
        points=tuple(points),
        q_estimate=q_estimate,
    )


def coverage_probability(m: int, word_length: int = 5, alphabet_size: int = 26) -> float:
    """Closed-form success probability of the map-constraint guesser on
    uniform random challenges: the chance that all letters of a fresh
    word were already observed among m words (word letters drawn iid).

    Computed by inclusion-exclusion over which letters are missing,
    summed over the number of distinct letters in the fresh word.
    """
    total_draws = m * word_length
    acc = 0.0
    for j in range(1, word_length + 1):
        # ordered word_length-tuples using exactly j distinct letters
        surjections = sum(
            (-1) ** i * math.comb(j, i) * (j - i) ** word_length for i in range(j + 1)
        )
        tuples_j = math.comb(alphabet_size, j) * surjections
        p_all_seen = sum(
            (-1) ** i
            * math.comb(j, i)
            * ((alphabet_size - i) / alphabet_size) ** total_draws
            for i in range(j + 1)
        )
        acc += tuples_j * p_all_seen
    return acc / alphabet_size**word_length
