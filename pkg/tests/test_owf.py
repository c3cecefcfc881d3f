"""One-way-function instances, evaluation, and exact inversion."""

import itertools
import math
import random

import pytest

from hcpass.errors import BudgetExceededError, DomainError, ParameterError
from hcpass.keymaps import KeyMap
from hcpass.owf import (
    OwfInstance,
    brute_force_invert,
    challenge_length,
    evaluate,
    load_instance,
    make_instance,
    save_instance,
)


def reference_eval(challenge, images_by_symbol) -> str:
    """Independent evaluation: running sum seeded from the mapped last
    symbol, emit sums below five."""
    total = images_by_symbol[challenge[-1]]
    out = []
    for sym in challenge:
        total = (total + images_by_symbol[sym]) % 10
        if total < 5:
            out.append(str(total))
    return "".join(out)


def test_challenge_lengths():
    assert challenge_length(26, 1.0) == 85  # round(26 ln 26)
    assert challenge_length(4, 1.0) == 6  # round(4 ln 4)
    assert challenge_length(26, 1.0) == round(26 * math.log(26))


def test_make_instance_covers_alphabet():
    for seed in range(5):
        inst = make_instance(4, 1.0, random.Random(seed))
        assert inst.covers_alphabet()
        assert len(inst.challenge) == 6


def test_make_instance_letters_default():
    inst = make_instance(26, 1.0, random.Random(0))
    assert len(inst.challenge) == 85
    assert inst.covers_alphabet()


def test_make_instance_validation():
    with pytest.raises(ParameterError):
        make_instance(1, 1.0, random.Random(0))
    with pytest.raises(ParameterError):
        make_instance(26, 0.1, random.Random(0))  # too short to cover


def test_make_instance_num2_smoke():
    inst = make_instance(100, 1.0, random.Random(1))
    assert len(inst.challenge) == challenge_length(100, 1.0)
    assert inst.covers_alphabet()
    y = evaluate(inst, "".join(str(i % 10) for i in range(100)))
    assert all(c in "01234" for c in y)


def test_evaluate_toy_fixed_challenge():
    # fixing the challenge to GMAIL and feeding the standard key recovers
    # the schema's worked output
    inst = OwfInstance(symbols=tuple("ABCDEFGHIJKLMNOPQRSTUVWXYZ"), challenge=tuple("GMAIL"))
    key_digits = KeyMap.alphabet_position().digit_string()
    assert evaluate(inst, key_digits) == "2324"


def test_evaluate_all_zero_key():
    inst = make_instance(4, 1.0, random.Random(7))
    y = evaluate(inst, "0000")
    assert y == "0" * len(inst.challenge)


def test_evaluate_ignores_symbols_absent_from_challenge():
    # a symbol that never occurs in the challenge cannot influence output
    inst = OwfInstance(symbols=("A", "B", "C"), challenge=tuple("ABAB"))
    assert evaluate(inst, "120") == evaluate(inst, "129")


def test_evaluate_key_length_check():
    inst = make_instance(4, 1.0, random.Random(7))
    with pytest.raises(DomainError):
        evaluate(inst, "123")


def test_output_alphabet_and_length_bound():
    rng = random.Random(5)
    inst = make_instance(5, 1.0, rng)
    for _ in range(50):
        key = "".join(str(rng.randrange(10)) for _ in range(5))
        y = evaluate(inst, key)
        assert len(y) <= len(inst.challenge)
        assert all(c in "01234" for c in y)


def test_brute_force_soundness():
    inst = make_instance(4, 1.0, random.Random(3))
    y = evaluate(inst, "1234")
    report = brute_force_invert(inst, y, 10)
    assert "1234" in report.preimages
    assert report.keys_tried == 10**4
    for preimage in report.preimages:
        assert evaluate(inst, preimage) == y


def test_brute_force_impossible_target_empty():
    inst = make_instance(4, 1.0, random.Random(3))
    report = brute_force_invert(inst, "0" * (len(inst.challenge) + 1), 10)
    assert report.preimages == ()


def test_brute_force_matches_ground_truth_enumeration():
    # exact preimage sets at alphabet size 4 against an independent oracle
    inst = make_instance(4, 1.0, random.Random(9))
    symbols = inst.symbols
    truth: dict[str, set[str]] = {}
    for images in itertools.product(range(10), repeat=4):
        key = "".join(str(d) for d in images)
        y = reference_eval(inst.challenge, dict(zip(symbols, images)))
        truth.setdefault(y, set()).add(key)
    assert sum(len(v) for v in truth.values()) == 10**4
    rng = random.Random(1)
    sampled = rng.sample(sorted(truth), 25)
    for y in sampled:
        report = brute_force_invert(inst, y, 10)
        assert set(report.preimages) == truth[y]
    # spot-check the machine evaluation path agrees with the oracle
    for key in ("0123", "9876", "5555"):
        y = evaluate(inst, key)
        assert key in truth[y]


def test_brute_force_partitioning_invariance():
    inst = make_instance(4, 1.0, random.Random(11))
    y = evaluate(inst, "4071")
    a = brute_force_invert(inst, y, 10, partitions=1)
    b = brute_force_invert(inst, y, 10, partitions=3)
    c = brute_force_invert(inst, y, 10, partitions=7)
    assert a.preimages == b.preimages == c.preimages


def test_brute_force_budget_refusal():
    inst = make_instance(26, 1.0, random.Random(0))
    with pytest.raises(BudgetExceededError) as exc:
        brute_force_invert(inst, "1234", 10)
    assert exc.value.required == 10**26


def test_brute_force_restricted_digit_range():
    inst = make_instance(4, 1.0, random.Random(13))
    y = evaluate(inst, "1010")
    report = brute_force_invert(inst, y, 2)
    assert "1010" in report.preimages
    assert report.keys_tried == 2**4


def test_instance_file_round_trip(tmp_path):
    inst = make_instance(6, 1.2, random.Random(2))
    path = tmp_path / "instance.json"
    save_instance(inst, path)
    again = load_instance(path)
    assert again == inst
