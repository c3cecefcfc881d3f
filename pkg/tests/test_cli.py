"""Command-line surface: determinism, formats, exit codes, report files."""

import json

import pytest

from hcpass.cli import EXIT_BUDGET, EXIT_DOMAIN, EXIT_OK, main
from hcpass.keymaps import KeyMap, save_key


@pytest.fixture
def letters_key(tmp_path):
    path = tmp_path / "letters.key"
    save_key(KeyMap.alphabet_position(), path)
    return path


@pytest.fixture
def digits_key(tmp_path):
    path = tmp_path / "digits.key"
    save_key(KeyMap.digit_affine(3, 0), path)
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_keygen_writes_key_and_prep_report(tmp_path, capsys):
    out = tmp_path / "k.key"
    code, stdout, _ = run_cli(
        capsys, "--seed", "9", "--format", "records", "keygen", "--domain", "letters",
        "--out", str(out),
    )
    assert code == EXIT_OK
    record = json.loads(stdout)
    assert record["chunks_written"] == 52
    assert record["die_tosses"] == 26
    assert record["tosses_plus_chunks"] == 78
    assert len(out.read_text().splitlines()[1]) == 26


def test_keygen_same_seed_same_bytes(tmp_path, capsys):
    a, b = tmp_path / "a.key", tmp_path / "b.key"
    run_cli(capsys, "--seed", "4", "keygen", "--out", str(a))
    run_cli(capsys, "--seed", "4", "keygen", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_run_single_challenge_records(letters_key, capsys):
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "run", "--schema", "sum-skip",
        "--key", str(letters_key), "--challenge", "GMAIL",
    )
    assert code == EXIT_OK
    record = json.loads(stdout)
    assert record["password"] == "2324"
    assert record["proc_total"] == 25


def test_run_letter_sub(letters_key, capsys):
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "run", "--key", str(letters_key),
        "--challenge", "GMAIL",
    )
    assert json.loads(stdout)["password"] == "73192"


def test_run_records_stable_bytes(letters_key, capsys):
    args = ("--format", "records", "run", "--schema", "sum-suffix", "--suffix", "SESAME1@",
            "--key", str(letters_key), "--challenge", "GMAIL")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    assert json.loads(out1)["password"] == "2SESAME1@"


def test_run_trace_matches_library(letters_key, capsys):
    from hcpass.schemas import letter_substitution

    code, stdout, _ = run_cli(
        capsys, "--format", "records", "run", "--key", str(letters_key),
        "--challenge", "APPLE", "--trace",
    )
    record = json.loads(stdout)
    library = letter_substitution("APPLE", KeyMap.alphabet_position())
    assert record["proc_total"] == library.ledger.proc_total
    assert len(record["trace"]) == len(library.trace)


def test_run_batch_continues_past_domain_errors(letters_key, tmp_path, capsys):
    challenges = tmp_path / "challenges.txt"
    challenges.write_text("GMAIL\nB4NK\nAPPLE\n")
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "run", "--key", str(letters_key),
        "--challenges-file", str(challenges),
    )
    assert code == EXIT_OK
    records = [json.loads(line) for line in stdout.splitlines()]
    assert records[0]["password"] == "73192"
    assert "error" in records[1]
    assert records[2]["password"] == "16625"


def test_run_all_failures_exit_domain(letters_key, capsys):
    code, _, _ = run_cli(
        capsys, "run", "--key", str(letters_key), "--challenge", "1234",
    )
    assert code == EXIT_DOMAIN


def test_run_pipeline_start_rule(letters_key, capsys):
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "run", "--key", str(letters_key),
        "--challenge", "AMEX", "--pipeline", "start:two-past-first-vowel | sum-skip",
    )
    record = json.loads(stdout)
    assert record["transformed_challenge"] == "EXAM"
    from hcpass.schemas import sum_skip

    assert record["password"] == sum_skip("EXAM", KeyMap.alphabet_position()).output


def test_prg_cascade_valid_seed(digits_key, capsys):
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "prg", "--generator", "cascade",
        "--key", str(digits_key), "--seed-digits", "30211432",
    )
    assert code == EXIT_OK
    record = json.loads(stdout)
    from hcpass.prg import cascade

    stream = cascade("30211432", KeyMap.digit_affine(3, 0))
    assert record["output"] == stream.digits
    assert record["boundaries"] == list(stream.boundaries)
    assert record["carries"] == list(stream.carries)


def test_prg_rejects_high_seed_digit(digits_key, capsys):
    code, _, err = run_cli(
        capsys, "prg", "--generator", "cascade", "--key", str(digits_key),
        "--seed-digits", "31415926",
    )
    assert code == EXIT_DOMAIN


def test_prg_batch_seeds(digits_key, tmp_path, capsys):
    seeds = tmp_path / "seeds.txt"
    seeds.write_text("30211\n44444\n")
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "prg", "--generator", "echo-cascade",
        "--key", str(digits_key), "--seeds-file", str(seeds),
    )
    records = [json.loads(line) for line in stdout.splitlines()]
    assert len(records) == 2
    assert all(r["output"].startswith(r["seed"]) for r in records)


def test_prg_single_pass_with_carry(digits_key, capsys):
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "prg", "--generator", "pass",
        "--key", str(digits_key), "--seed-digits", "3141", "--carry", "digit-sum",
    )
    record = json.loads(stdout)
    assert record["carry"] == 9
    from hcpass.prg import sum_skip_digits

    assert record["output"] == sum_skip_digits("3141", KeyMap.digit_affine(3, 0), 9).output


def test_owf_round_trip(tmp_path, capsys):
    instance = tmp_path / "inst.json"
    code, _, _ = run_cli(
        capsys, "--seed", "3", "owf", "make-instance", "--n", "4", "--out", str(instance),
    )
    assert code == EXIT_OK
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "owf", "eval", "--instance", str(instance),
        "--key-digits", "1234",
    )
    y = json.loads(stdout)["output"]
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "owf", "invert", "--instance", str(instance),
        "--output", y,
    )
    record = json.loads(stdout)
    assert "1234" in record["preimages"]
    assert record["keys_tried"] == 10000


def test_owf_invert_budget_refusal(tmp_path, capsys):
    instance = tmp_path / "inst.json"
    run_cli(capsys, "--seed", "3", "owf", "make-instance", "--n", "8", "--out", str(instance))
    code, _, err = run_cli(
        capsys, "owf", "invert", "--instance", str(instance), "--output", "123",
        "--budget", "1000",
    )
    assert code == EXIT_BUDGET
    assert "refused" in err


def test_attack_guess_solve_self_test(digits_key, capsys):
    code, stdout, _ = run_cli(
        capsys, "--seed", "21", "--format", "records", "attack", "guess-solve",
        "--key", str(digits_key), "--n", "6", "--self-test",
    )
    assert code == EXIT_OK
    record = json.loads(stdout)
    assert record["recovered"] is True
    assert record["projection"]["within_bound"] is True


def test_attack_exhaust_refusal_n12(digits_key, capsys):
    code, _, err = run_cli(
        capsys, "attack", "exhaust", "--key", str(digits_key), "--n", "12",
        "--candidate", "0" * 24,
    )
    assert code == EXIT_BUDGET


def test_attack_qsec_singleton(letters_key, tmp_path, capsys):
    lexicon = tmp_path / "lex.txt"
    lexicon.write_text("GMAIL 1.0\n")
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "attack", "qsec", "--key", str(letters_key),
        "--lexicon", str(lexicon), "--trials", "200", "--max-m", "2",
    )
    assert code == EXIT_OK
    assert json.loads(stdout)["q_estimate"] == 1


def test_attack_frequency(tmp_path, capsys):
    samples = tmp_path / "samples.txt"
    import random

    rng = random.Random(0)
    samples.write_text(
        "\n".join("".join(str(rng.randrange(5)) for _ in range(12)) for _ in range(200))
    )
    code, stdout, _ = run_cli(
        capsys, "--format", "records", "attack", "frequency", "--samples-file", str(samples),
    )
    assert code == EXIT_OK
    assert json.loads(stdout)["verdict"] in ("consistent-uniform", "reject-uniform")


def test_report_lengths_writes_csv_and_png(tmp_path, capsys):
    out_dir = tmp_path / "reports"
    code, stdout, _ = run_cli(
        capsys, "report", "lengths", "--generator", "pass", "--n", "10",
        "--trials", "1000", "--out-dir", str(out_dir),
    )
    assert code == EXIT_OK
    csvs = list(out_dir.glob("*.csv"))
    pngs = list(out_dir.glob("*.png"))
    assert len(csvs) == 1 and len(pngs) == 1
    assert csvs[0].stem == pngs[0].stem
    header = csvs[0].read_text().splitlines()[0]
    assert header == "length,count"


def test_report_qsec_writes_files(letters_key, tmp_path, capsys):
    lexicon = tmp_path / "lex.txt"
    lexicon.write_text("GMAIL 0.5\nCHASE 0.5\n")
    out_dir = tmp_path / "reports"
    code, stdout, _ = run_cli(
        capsys, "report", "qsec", "--key", str(letters_key), "--lexicon", str(lexicon),
        "--trials", "100", "--max-m", "3", "--out-dir", str(out_dir),
    )
    assert code == EXIT_OK
    assert len(list(out_dir.glob("*.csv"))) == 1
    assert len(list(out_dir.glob("*.png"))) == 1


def test_report_costs_writes_files(letters_key, tmp_path, capsys):
    out_dir = tmp_path / "reports"
    code, _, _ = run_cli(
        capsys, "report", "costs", "--key", str(letters_key), "--schema", "letter-sub",
        "--min-n", "2", "--max-n", "5", "--trials", "50", "--out-dir", str(out_dir),
    )
    assert code == EXIT_OK
    csv_file = next(out_dir.glob("*.csv"))
    rows = csv_file.read_text().splitlines()
    assert rows[0] == "n,mean_proc,nominal"
    # letter substitution is exactly 3n, so measured equals nominal
    for line in rows[1:]:
        n, mean, nominal = line.split(",")
        assert float(mean) == float(nominal) == 3.0 * int(n)


def test_report_frequency_writes_files(digits_key, tmp_path, capsys):
    out_dir = tmp_path / "reports"
    code, _, _ = run_cli(
        capsys, "report", "frequency", "--key", str(digits_key), "--n", "10",
        "--samples", "120", "--out-dir", str(out_dir),
    )
    assert code == EXIT_OK
    assert len(list(out_dir.glob("frequency.csv"))) == 1
    assert len(list(out_dir.glob("frequency.png"))) == 1
