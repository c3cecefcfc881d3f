"""Concrete attacks on the digit-stream generators.

``guess_and_solve`` mounts the structural attack on the cascade
generator: guess which emission slots produced the observed digits, turn
each guessed emission into a linear relation over the unknown seed digits
mod 10 (the key is known to the attacker), solve the relations exactly
through the mod-2/mod-5 split, and keep only candidates whose forward
evaluation reproduces the observation.  Emissions are the only
equalities; the silent slots' "sum is at least five" constraints are
enforced by the final forward verification.

Because the key is an arbitrary digit map, a sum that is not pinned to a
known value propagates opaquely; every emission re-anchors the sum at a
known digit, so relations accumulate wherever emissions are adjacent (and
at every emission, symbolically, when the key happens to be affine).
Masks whose relations leave the seed badly underdetermined are finished
by a mask-constrained forward search instead of enumerating a huge coset;
the result set is identical either way.

``exhaust_seeds`` is the generic distinguisher: try every seed and ask
whether any generates the candidate string.  ``frequency_distinguisher``
is the cheap statistical alternative: chi-square tests of digit and
bigram frequencies against uniform.
"""

from __future__ import annotations

import functools
import itertools
import math
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from scipy import stats as sp_stats

from .errors import BudgetExceededError, DomainError, ParameterError
from .mod10 import LinearSystemMod10
from .prg import digit_table, generate, pass_skips, slot_count, subseq_indices

#: Step allowance for desk-scale attacks.
DESK_BUDGET = 10**7
#: Reference bound from the distinguisher's counting argument; reporting only.
DISTINGUISHER_BUDGET = 10**12
#: Operation bound the structural attack is measured against.
THEOREM_OPERATION_BOUND = 10**15
#: When a mask's linear relations leave more than this many candidates,
#: finish that mask by forward search instead of coset enumeration.
ENUMERATION_LIMIT = 1000


def attack_slots(n: int, generator: str = "cascade") -> tuple[tuple[int, int], ...]:
    """Flattened (pass skip, seed index) for every emission slot."""
    return tuple(
        (skip, j) for skip in pass_skips(n, generator) for j in subseq_indices(n, skip)
    )


@dataclass
class AttackReport:
    """Outcome and accounting of one guess-and-solve run."""

    n: int
    output: str
    candidates: tuple[str, ...] = ()
    slot_total: int = 0
    mask_space: int = 0
    leaves_evaluated: int = 0
    branches_pruned: int = 0
    systems_solved: int = 0
    equations_built: int = 0
    forward_checks: int = 0
    steps: int = 0
    elapsed_seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "output": self.output,
            "candidates": list(self.candidates),
            "candidate_count": len(self.candidates),
            "slot_total": self.slot_total,
            "mask_space": self.mask_space,
            "leaves_evaluated": self.leaves_evaluated,
            "branches_pruned": self.branches_pruned,
            "systems_solved": self.systems_solved,
            "equations_built": self.equations_built,
            "forward_checks": self.forward_checks,
            "steps": self.steps,
            "elapsed_seconds": round(self.elapsed_seconds, 4),
        }


class _MaskSearch:
    """Depth-first enumeration of emission masks with symbolic sums.

    The running sum's symbolic state is a constant, an affine form over
    the seed digits (coefficients plus constant, mod 10), or opaque.
    Emitting resets the state to the observed constant; applying the key
    keeps a form affine only when the sum is constant or the key is
    affine.
    """

    def __init__(self, y: str, n: int, table: tuple[int, ...], budget: int):
        self.y = [int(c) for c in y]
        self.n = n
        self.table = table
        slots = attack_slots(n, "cascade")
        self.slot_idx = [j for _, j in slots]
        if 2 ** len(slots) > budget:
            raise BudgetExceededError(
                "mask space exceeds budget", required=2 ** len(slots), budget=budget
            )
        self.affine = self._affine_decompose(table)
        self.report = AttackReport(
            n=n,
            output=y,
            slot_total=len(slots),
            mask_space=math.comb(len(slots), len(y)) if len(y) <= len(slots) else 0,
        )
        self.found: set[str] = set()
        self._flags: list[bool] = []

    @staticmethod
    def _affine_decompose(table):
        a = (table[1] - table[0]) % 10
        b = table[0]
        if all(table[s] == (a * s + b) % 10 for s in range(10)):
            return a, b
        return None

    # Symbolic states: ("c", value), ("a", coeffs, const), ("o",).

    def _apply_key(self, state):
        if state[0] == "c":
            return ("c", self.table[state[1]])
        if state[0] == "a" and self.affine is not None:
            a, b = self.affine
            coeffs = tuple((a * c) % 10 for c in state[1])
            if any(coeffs):
                return ("a", coeffs, (a * state[2] + b) % 10)
            return ("c", (a * state[2] + b) % 10)
        return ("o",)

    def _add_digit(self, state, j: int, pinned: dict):
        if j in pinned:
            if state[0] == "c":
                return ("c", (state[1] + pinned[j]) % 10)
            if state[0] == "a":
                return ("a", state[1], (state[2] + pinned[j]) % 10)
            return ("o",)
        if state[0] == "c":
            coeffs = [0] * self.n
            coeffs[j] = 1
            return ("a", tuple(coeffs), state[1])
        if state[0] == "a":
            coeffs = list(state[1])
            coeffs[j] = (coeffs[j] + 1) % 10
            if any(coeffs):
                return ("a", tuple(coeffs), state[2])
            return ("c", state[2])
        return ("o",)

    def run(self) -> set[str]:
        carry = tuple(1 if i == self.n - 1 else 0 for i in range(self.n))
        self._walk(0, 0, ("a", carry, 0), {}, [])
        return self.found

    def _walk(self, t: int, y_pos: int, state, pinned: dict, equations: list):
        self.report.steps += 1
        remaining_slots = len(self.slot_idx) - t
        remaining_digits = len(self.y) - y_pos
        if remaining_digits > remaining_slots:
            self.report.branches_pruned += 1
            return
        if t == len(self.slot_idx):
            self.report.leaves_evaluated += 1
            self._finish_mask(pinned, equations, tuple(self._flags))
            return
        j = self.slot_idx[t]
        after_add = self._add_digit(self._apply_key(state), j, pinned)

        # Emit branch: this slot produced y[y_pos].
        if remaining_digits > 0:
            target = self.y[y_pos]
            feasible, pin, equation = self._constrain(after_add, target, pinned)
            if feasible:
                if pin is not None:
                    pinned[pin[0]] = pin[1]
                if equation is not None:
                    equations.append(equation)
                    self.report.equations_built += 1
                self._flags.append(True)
                self._walk(t + 1, y_pos + 1, ("c", target), pinned, equations)
                self._flags.pop()
                if pin is not None:
                    del pinned[pin[0]]
                if equation is not None:
                    equations.pop()
            else:
                self.report.branches_pruned += 1

        # Silent branch: the sum stayed at 5 or above.
        if remaining_digits < remaining_slots:
            if after_add[0] == "c" and after_add[1] < 5:
                self.report.branches_pruned += 1
            else:
                self._flags.append(False)
                self._walk(t + 1, y_pos, after_add, pinned, equations)
                self._flags.pop()

    def _constrain(self, state, target: int, pinned: dict):
        """Fold ``state == target (mod 10)`` into a digit pin, a deferred
        equation, or a contradiction.  Returns (feasible, pin, equation)."""
        if state[0] == "c":
            return state[1] == target, None, None
        if state[0] == "o":
            return True, None, None
        coeffs, const = state[1], state[2]
        rhs = (target - const) % 10
        nonzero = [i for i, c in enumerate(coeffs) if c]
        if len(nonzero) == 1:
            jj = nonzero[0]
            c = coeffs[jj]
            if jj in pinned:
                return (c * pinned[jj]) % 10 == rhs, None, None
            if math.gcd(c, 10) == 1:
                digit = (pow(c, -1, 10) * rhs) % 10
                if digit >= 5:
                    return False, None, None
                return True, (jj, digit), None
        return True, None, (coeffs, rhs)

    def _finish_mask(self, pinned: dict, equations: list, mask_flags: tuple):
        if not equations:
            # pin-only masks need no elimination: pins were checked for
            # range and consistency as they were made
            if len(pinned) == self.n:
                self._verify([pinned[i] for i in range(self.n)])
            else:
                self._forward_search(pinned, mask_flags)
            return
        system = LinearSystemMod10(self.n)
        for j, v in pinned.items():
            row = [0] * self.n
            row[j] = 1
            system.add_equation(row, v)
        for coeffs, rhs in equations:
            system.add_equation(coeffs, rhs)
        solutions = system.solve()
        self.report.systems_solved += 1
        self.report.steps += (len(system.rows) + 1) * self.n * 4
        if not solutions.consistent:
            return
        if solutions.count > ENUMERATION_LIMIT:
            self._forward_search(pinned, mask_flags)
            return
        rows, rhs = system.rows, system.rhs
        for sol5 in solutions.mod5.enumerate():
            # Seed digits are below five, so each digit equals its mod-5
            # residue; the mod-2 side of every relation must then hold for
            # the digits themselves.
            self.report.steps += self.n
            if any(
                sum(c * d for c, d in zip(row, sol5)) % 2 != b % 2
                for row, b in zip(rows, rhs)
            ):
                continue
            self._verify(sol5)

    def _verify(self, digits) -> None:
        """Forward-simulate the cascade on a candidate and keep it only if
        the full output (emissions and silences alike) matches."""
        self.report.forward_checks += 1
        self.report.steps += self.report.slot_total
        table = self.table
        y = self.y
        pos = 0
        total = digits[-1]
        for j in self.slot_idx:
            total = (table[total] + digits[j]) % 10
            if total < 5:
                if pos >= len(y) or y[pos] != total:
                    return
                pos += 1
        if pos == len(y):
            self.found.add("".join(str(d) for d in digits))

    def _forward_search(self, pinned: dict, mask_flags: tuple) -> None:
        """Mask-constrained search over the seed digits themselves; exact
        replacement for coset enumeration on underdetermined masks."""
        slots = self.slot_idx
        y = self.y
        table = self.table
        n = self.n
        assign: list = [None] * n

        def rec(t: int, y_pos: int, s: int) -> None:
            self.report.steps += 1
            if t == len(slots):
                self._verify([assign[i] for i in range(n)])
                return
            j = slots[t]
            fresh = assign[j] is None
            if fresh:
                options = (pinned[j],) if j in pinned else range(5)
            else:
                options = (assign[j],)
            for d in options:
                s2 = (table[s] + d) % 10
                if mask_flags[t]:
                    if s2 != y[y_pos]:
                        continue
                    if fresh:
                        assign[j] = d
                    rec(t + 1, y_pos + 1, s2)
                else:
                    if s2 < 5:
                        continue
                    if fresh:
                        assign[j] = d
                    rec(t + 1, y_pos, s2)
                if fresh:
                    assign[j] = None

        carry_j = n - 1
        for carry in (pinned[carry_j],) if carry_j in pinned else range(5):
            assign[carry_j] = carry
            rec(0, 0, carry)
            assign[carry_j] = None


def guess_and_solve(
    output: str,
    n: int,
    key,
    *,
    budget: int = DESK_BUDGET,
) -> AttackReport:
    """Recover every seed whose cascade output equals ``output``.

    The key is known to the attacker.  Refuses when 2**(slot count)
    exceeds the budget.
    """
    if any(c not in "01234" for c in output):  # empty output is observable
        raise DomainError("observed output must be digits below five")
    if n < 3:
        raise ParameterError("cascade seeds have length at least 3")
    table = digit_table(key)
    start = time.perf_counter()
    search = _MaskSearch(output, n, table, budget)
    found = search.run()
    report = search.report
    report.candidates = tuple(sorted(found))
    report.elapsed_seconds = time.perf_counter() - start
    return report


def guess_and_solve_unknown_key(
    output: str,
    n: int,
    key_family: Iterable,
    *,
    budget: int = DESK_BUDGET,
) -> dict[tuple[int, ...], tuple[str, ...]]:
    """Key-unknown variant: run the attack for every key in a restricted
    family (desk scale only) and collect key -> seed candidates."""
    results: dict[tuple[int, ...], tuple[str, ...]] = {}
    for key in key_family:
        table = digit_table(key)
        report = guess_and_solve(output, n, table, budget=budget)
        if report.candidates:
            results[table] = report.candidates
    return results


def affine_key_family() -> tuple[tuple[int, ...], ...]:
    """All 100 affine digit maps i -> (a*i + b) mod 10."""
    return tuple(
        tuple((a * i + b) % 10 for i in range(10)) for a in range(10) for b in range(10)
    )


# ---------------------------------------------------------------------------
# Attack-cost projection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionReport:
    """Projected guess-and-solve cost at seed length n, for a required
    output length of 2n and a 1000-operation allowance for solving one
    guessed mask's linear system."""

    n: int
    slots: int
    output_length: int
    mask_space_full: int
    mask_space_matching: int
    per_mask_solve_ops: int

    @property
    def projected_ops(self) -> int:
        return self.mask_space_full * self.per_mask_solve_ops

    @property
    def within_bound(self) -> bool:
        return self.projected_ops <= THEOREM_OPERATION_BOUND

    @property
    def slot_divergence_from_4n(self) -> int:
        return self.slots - 4 * self.n

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "slots": self.slots,
            "output_length": self.output_length,
            "mask_space_full": self.mask_space_full,
            "mask_space_matching": self.mask_space_matching,
            "per_mask_solve_ops": self.per_mask_solve_ops,
            "projected_ops": self.projected_ops,
            "operation_bound": THEOREM_OPERATION_BOUND,
            "within_bound": self.within_bound,
            "slot_divergence_from_4n": self.slot_divergence_from_4n,
        }


def project_attack_cost(n: int, output_length: int | None = None) -> ProjectionReport:
    slots = slot_count(n, "cascade")
    out_len = 2 * n if output_length is None else output_length
    matching = math.comb(slots, out_len) if out_len <= slots else 0
    return ProjectionReport(
        n=n,
        slots=slots,
        output_length=out_len,
        mask_space_full=2**slots,
        mask_space_matching=matching,
        per_mask_solve_ops=1000,
    )


# ---------------------------------------------------------------------------
# Seed exhaustion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExhaustReport:
    verdict: str  # "pseudorandom-consistent" | "no-seed-found"
    seed: str | None
    seeds_tried: int
    steps: int

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "seed": self.seed,
            "seeds_tried": self.seeds_tried,
            "steps": self.steps,
        }


@functools.lru_cache(maxsize=8)
def _seed_space(digit_bound: int, n: int) -> tuple[str, ...]:
    alphabet = "0123456789"[:digit_bound]
    return tuple("".join(c) for c in itertools.product(alphabet, repeat=n))


def exhaust_seeds(
    candidate: str,
    key,
    n: int,
    *,
    generator: str = "echo-cascade",
    budget: int = DESK_BUDGET,
    digit_bound: int = 5,
) -> ExhaustReport:
    """Search every length-n seed for one that generates ``candidate``.

    Refuses when digit_bound**n exceeds the budget.  Seeds are tried in
    lexicographic order; the search stops at the first generating seed and
    otherwise visits the whole space.
    """
    if not candidate.isdigit():
        raise DomainError("candidate must be a digit string")
    space = digit_bound**n
    if space > budget:
        raise BudgetExceededError("seed space exceeds budget", required=space, budget=budget)
    table = digit_table(key)
    echo = generator == "echo-cascade"
    tried = 0
    steps = 0
    for seed in _seed_space(digit_bound, n):
        tried += 1
        steps += 1
        if echo and not candidate.startswith(seed):
            continue
        steps += slot_count(n, generator)
        if generate(generator, seed, table).digits == candidate:
            return ExhaustReport("pseudorandom-consistent", seed, tried, steps)
    return ExhaustReport("no-seed-found", None, tried, steps)


# ---------------------------------------------------------------------------
# Frequency distinguisher
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrequencyReport:
    verdict: str  # "reject-uniform" | "consistent-uniform"
    digit_p: float
    bigram_p: float
    digit_counts: tuple[int, ...]
    samples: int
    steps: int
    budget: int
    significance: float

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "digit_p": round(self.digit_p, 6),
            "bigram_p": round(self.bigram_p, 6),
            "digit_counts": list(self.digit_counts),
            "samples": self.samples,
            "steps": self.steps,
            "budget": self.budget,
            "significance": self.significance,
        }


def frequency_distinguisher(
    samples: Sequence[str],
    *,
    significance: float = 0.01,
    budget: int = DISTINGUISHER_BUDGET,
) -> FrequencyReport:
    """Chi-square tests of digit and bigram frequencies against uniform
    over {0..4}; rejects when either test is significant."""
    if len(samples) < 30:
        raise ParameterError("need at least 30 samples")
    digit_counts = [0] * 5
    bigram_counts = [0] * 25
    steps = 0
    for s in samples:
        for ch in s:
            d = int(ch)
            if d >= 5:
                raise DomainError("samples must be digit strings over 0..4")
            digit_counts[d] += 1
            steps += 1
        for a, b in zip(s, s[1:]):
            bigram_counts[int(a) * 5 + int(b)] += 1
            steps += 1
    if sum(digit_counts) == 0:
        raise ParameterError("samples contain no digits")
    digit_p = float(sp_stats.chisquare(digit_counts).pvalue)
    if sum(bigram_counts) >= 50:
        bigram_p = float(sp_stats.chisquare(bigram_counts).pvalue)
    else:
        bigram_p = 1.0
    verdict = "reject-uniform" if min(digit_p, bigram_p) < significance else "consistent-uniform"
    return FrequencyReport(
        verdict=verdict,
        digit_p=digit_p,
        bigram_p=bigram_p,
        digit_counts=tuple(digit_counts),
        samples=len(samples),
        steps=steps,
        budget=budget,
        significance=significance,
    )
