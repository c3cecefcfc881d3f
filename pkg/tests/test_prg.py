"""Digit-stream generators: the core pass, subsequences, chaining."""

import itertools
import random

import pytest

from hcpass.errors import ConfigError, DomainError, ParameterError
from hcpass.prg import (
    cascade,
    digit_table,
    echo_cascade,
    exact_mean_length,
    expected_length_report,
    generate,
    pass_skips,
    random_digit_key,
    random_seed_string,
    slot_count,
    subseq,
    subseq_indices,
    sum_skip_digits,
    validate_seed,
)

PLUS_ONE = tuple((i + 1) % 10 for i in range(10))
TIMES_THREE = tuple((3 * i) % 10 for i in range(10))


def reference_pass(digits: str, table, carry: int):
    """Independent transcription of the pass rules: map the carried sum,
    add the current digit mod 10, emit below five."""
    total = carry
    out = []
    for ch in digits:
        total = (table[total] + int(ch)) % 10
        if total < 5:
            out.append(str(total))
    return "".join(out), total


def reference_subseq(text: str, i: int) -> str:
    """Positions p survive the skip-i/take-i alternation iff (p // i) is odd."""
    if i == 0:
        return text
    return "".join(ch for p, ch in enumerate(text) if (p // i) % 2 == 1)


def reference_cascade(seed: str, table) -> str:
    out = ""
    carry = int(seed[-1])
    for i in range(0, len(seed) // 2 + 1):
        piece, carry = reference_pass(reference_subseq(seed, i), table, carry)
        out += piece
    return out


# ---------------------------------------------------------------------------
# The core digit pass
# ---------------------------------------------------------------------------


def test_digit_pass_worked_trace():
    result = sum_skip_digits("3141592653", PLUS_ONE, 3)
    assert result.output == "42222"
    assert result.sums == (7, 9, 4, 6, 2, 2, 5, 2, 8, 2)
    assert result.final_sum == 2


def test_digit_pass_no_emission_at_exactly_five():
    # iteration seven of the worked trace reaches sum 5 and stays silent
    result = sum_skip_digits("3141592653", PLUS_ONE, 3)
    assert result.sums[6] == 5
    assert len(result.output) == sum(1 for s in result.sums if s < 5)


def test_digit_pass_identity_map_zero():
    identity = tuple(range(10))
    result = sum_skip_digits("0", identity, 0)
    assert result.output == "0"
    assert result.final_sum == 0


def test_digit_pass_all_high_trajectory():
    # table sending 0->9 and 9->5 keeps the sum at or above five on "00"
    table = list(range(10))
    table[0] = 9
    table[9] = 5
    result = sum_skip_digits("00", tuple(table), 0)
    assert result.sums == (9, 5)
    assert result.output == ""


def test_digit_pass_validation():
    with pytest.raises(DomainError):
        sum_skip_digits("", PLUS_ONE, 0)
    with pytest.raises(DomainError):
        sum_skip_digits("12a", PLUS_ONE, 0)
    with pytest.raises(DomainError):
        sum_skip_digits("12", PLUS_ONE, 11)


def test_digit_table_forms():
    assert digit_table(PLUS_ONE) == PLUS_ONE
    assert digit_table({i: (i + 1) % 10 for i in range(10)}) == PLUS_ONE
    from hcpass.keymaps import KeyMap

    assert digit_table(KeyMap.digit_affine(1, 1)) == PLUS_ONE
    with pytest.raises(ConfigError):
        digit_table((1, 2, 3))


# ---------------------------------------------------------------------------
# Subsequences
# ---------------------------------------------------------------------------


def test_subseq_worked_examples():
    assert subseq("31415926", 1) == "1196"
    assert subseq("31415926", 2) == "4126"
    assert subseq("31415926", 3) == "159"
    assert subseq("31415926", 0) == "31415926"


def test_subseq_range_check():
    with pytest.raises(ParameterError):
        subseq("31415926", 5)
    with pytest.raises(ParameterError):
        subseq("31415926", -1)
    assert subseq("31415926", 4) == "5926"


def test_subseq_matches_parity_oracle():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randrange(2, 20)
        text = "".join(str(rng.randrange(10)) for _ in range(n))
        for i in range(0, n // 2 + 1):
            assert subseq(text, i) == reference_subseq(text, i)


def test_subseq_indices_cover_disjoint_positions():
    idx = subseq_indices(10, 2)
    assert idx == (2, 3, 6, 7)
    assert len(set(idx)) == len(idx)


# ---------------------------------------------------------------------------
# Cascade generator
# ---------------------------------------------------------------------------


def test_cascade_worked_example():
    result = cascade("31415926", TIMES_THREE, digit_bound=10)
    assert result.digits == "142202330"
    assert result.parts == ("142", "20", "23", "3", "0")
    assert result.carries == (6, 7, 6, 5, 8)
    assert result.final_sums == (7, 6, 5, 8, 6)


def test_cascade_pass_structure():
    assert pass_skips(8, "cascade") == (0, 1, 2, 3, 4)
    assert pass_skips(9, "cascade") == (0, 1, 2, 3, 4)
    assert slot_count(6, "cascade") == 14
    assert slot_count(10, "cascade") == 32


def test_cascade_boundaries_reconstruct_parts():
    result = cascade("31415926", TIMES_THREE, digit_bound=10)
    for start, part in zip(result.boundaries, result.parts):
        assert result.digits[start : start + len(part)] == part


def test_cascade_matches_independent_reference():
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randrange(3, 12)
        seed = random_seed_string(rng, n)
        table = random_digit_key(rng)
        assert cascade(seed, table).digits == reference_cascade(seed, table)


def test_cascade_constant_seed_reference():
    table = random_digit_key(random.Random(9))
    assert cascade("222", table).digits == reference_cascade("222", table)


def test_cascade_exhaustive_small_affine():
    # all seeds of length 3 against all affine keys, versus the oracle
    for a, b in itertools.product(range(10), repeat=2):
        table = tuple((a * i + b) % 10 for i in range(10))
        for combo in itertools.product("01234", repeat=3):
            seed = "".join(combo)
            assert cascade(seed, table).digits == reference_cascade(seed, table)


def test_seed_validation():
    with pytest.raises(DomainError):
        cascade("31415926", TIMES_THREE)  # digits above 4 need an explicit bound
    with pytest.raises(ParameterError):
        cascade("01", TIMES_THREE)
    assert validate_seed("012345", digit_bound=6) == "012345"
    with pytest.raises(DomainError):
        validate_seed("5", digit_bound=5)
    with pytest.raises(ConfigError):
        validate_seed("0", digit_bound=1)


def test_all_emitted_digits_below_five():
    rng = random.Random(5)
    for _ in range(100):
        seed = random_seed_string(rng, 9)
        table = random_digit_key(rng)
        assert all(c in "01234" for c in cascade(seed, table).digits)


def test_determinism():
    table = random_digit_key(random.Random(1))
    assert cascade("40132", table).digits == cascade("40132", table).digits


def test_single_digit_perturbation_propagates():
    rng = random.Random(6)
    hits = 0
    trials = 300
    for _ in range(trials):
        n = 10
        seed = list(random_seed_string(rng, n))
        table = random_digit_key(rng)
        pos = rng.randrange(n)
        flipped = seed.copy()
        flipped[pos] = str((int(flipped[pos]) + 1 + rng.randrange(4)) % 5)
        a = cascade("".join(seed), table)
        b = cascade("".join(flipped), table)
        # later passes (beyond the first) differ somewhere
        if a.parts[1:] != b.parts[1:]:
            hits += 1
    assert hits / trials > 0.9


# ---------------------------------------------------------------------------
# Echo cascade
# ---------------------------------------------------------------------------


def test_echo_cascade_reconstructed_worked_example():
    result = echo_cascade("314104421", TIMES_THREE)
    assert result.parts[0] == "314104421"
    assert result.parts[1] == "1420443"
    assert result.carries == (1, 3, 3)
    # pass-1 intermediate sums match the worked trace
    pass1 = sum_skip_digits("314104421", TIMES_THREE, 1)
    assert "".join(str(s) for s in pass1.sums) == "691420443"
    assert pass1.final_sum == 3


def test_echo_cascade_regression_8digit_variant():
    # the stepwise rules applied to the 8-digit seed variant
    pass1 = sum_skip_digits("31410421", TIMES_THREE, 1)
    assert "".join(str(s) for s in pass1.sums) == "69142027"
    assert pass1.output == "14202"


def test_echo_cascade_begins_with_seed():
    rng = random.Random(8)
    for _ in range(50):
        seed = random_seed_string(rng, 7)
        table = random_digit_key(rng)
        result = echo_cascade(seed, table)
        assert result.digits.startswith(seed)
        assert result.parts[0] == seed
        assert len(result.parts) == 4


def test_echo_cascade_min_length():
    with pytest.raises(ParameterError):
        echo_cascade("0123", PLUS_ONE)


def test_generate_dispatch():
    seed = "2301432"
    assert generate("cascade", seed, PLUS_ONE).digits == cascade(seed, PLUS_ONE).digits
    assert generate("echo-cascade", seed, PLUS_ONE).digits == echo_cascade(seed, PLUS_ONE).digits
    one_pass = generate("pass", seed, PLUS_ONE)
    assert one_pass.digits == sum_skip_digits(seed, PLUS_ONE, int(seed[-1])).output
    with pytest.raises(ConfigError):
        generate("fountain", seed, PLUS_ONE)


# ---------------------------------------------------------------------------
# Length statistics
# ---------------------------------------------------------------------------


def test_exact_mean_lengths():
    assert exact_mean_length(20, "pass") == 10.0
    assert exact_mean_length(20, "echo-cascade") == 40.0
    assert exact_mean_length(9, "cascade") == 12.0


def test_expected_length_report_orders_independently():
    a = expected_length_report("pass", 12, 1000, seed=3)
    b = expected_length_report("pass", 12, 1000, seed=3)
    assert a == b
    assert a.trials == 1000
    assert sum(count for _, count in a.histogram) == 1000


def test_expected_length_report_requires_trials():
    with pytest.raises(ParameterError):
        expected_length_report("pass", 12, 10)
