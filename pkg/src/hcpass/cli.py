"""Command-line surface: key generation, schema runs with cost traces,
generator and one-way-function evaluation, attacks, and rendered reports.

Every command is deterministic given its arguments and --seed; record
output (--format records) is line-delimited JSON with sorted keys, stable
byte for byte across runs.  Exit codes: 0 success, 2 usage, 3 domain
error, 4 budget refusal, 5 inconsistent observations.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import adversary, modifiers, owf, prg, reporting, schemas, securityq
from .errors import (
    BudgetExceededError,
    DomainError,
    HcpassError,
    InconsistentObservationsError,
)
from .keymaps import KeyMap, alphabet_from_id, gen_key, load_key, save_key

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_BUDGET = 4
EXIT_INCONSISTENT = 5

SCHEMAS = ("letter-sub", "letter-sub-skip", "letter-sub-shift-up", "sum-suffix", "alt-sum", "sum-skip")


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: the seed fully determines stochastic behavior."""

    command: str
    seed: int
    fmt: str

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def _emit(records: list[dict], fmt: str, human_lines) -> None:
    if fmt == "records":
        for record in records:
            print(json.dumps(record, sort_keys=True, separators=(",", ":")))
    else:
        for line in human_lines(records):
            print(line)


# ---------------------------------------------------------------------------
# keygen
# ---------------------------------------------------------------------------


def cmd_keygen(args) -> int:
    config = RunConfig("keygen", args.seed, args.format)
    symbols = alphabet_from_id(args.domain)
    key, report = gen_key(config.rng(), symbols)
    save_key(key, args.out)
    record = {"key_file": str(args.out), "alphabet": key.alphabet_id, **report.as_dict()}
    _emit(
        [record],
        config.fmt,
        lambda rs: [
            f"wrote {rs[0]['key_file']} ({rs[0]['alphabet']})",
            f"die tosses: {rs[0]['die_tosses']} x {rs[0]['die_sides']}-sided "
            f"({rs[0]['entropy_bits']} bits)",
            f"chunks written: {rs[0]['chunks_written']}",
            f"preparation cost: {rs[0]['prep_total']} "
            f"(tosses plus chunks: {rs[0]['tosses_plus_chunks']})",
        ],
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def _run_one(schema: str, challenge: str, key: KeyMap, args) -> schemas.SchemaResult | int:
    normalize = args.normalize
    if schema == "letter-sub":
        return schemas.letter_substitution(challenge, key, normalize=normalize)
    if schema == "letter-sub-skip":
        return schemas.letter_substitution_dedup(challenge, key, "skip", normalize=normalize)
    if schema == "letter-sub-shift-up":
        return schemas.letter_substitution_dedup(challenge, key, "shift-up", normalize=normalize)
    if schema == "sum-suffix":
        if not args.suffix:
            raise DomainError("sum-suffix needs --suffix")
        return schemas.sum_suffix(challenge, key, args.suffix, normalize=normalize)
    if schema == "alt-sum":
        return schemas.alternating_sum_digit(challenge, key, normalize=normalize)
    if schema == "sum-skip":
        return schemas.sum_skip(challenge, key, normalize=normalize)
    raise DomainError(f"unknown schema {schema!r}")


def cmd_run(args) -> int:
    key = load_key(args.key)
    if args.challenge:
        challenges = [args.challenge]
    else:
        with open(args.challenges_file, encoding="utf-8") as fh:
            challenges = [line.strip() for line in fh if line.strip()]
    pipeline = modifiers.parse_pipeline(args.pipeline) if args.pipeline else None
    records = []
    failures = 0
    for challenge in challenges:
        try:
            if pipeline is not None:
                text = challenge
                for step in pipeline.pre:
                    text = step(text)
                result = _run_one(pipeline.schema, text, key, args)
                password = result if isinstance(result, int) else result.output
                password = str(password)
                for step in pipeline.post:
                    password = step(password)
                record = {"challenge": challenge, "password": password}
                if not isinstance(result, int):
                    record["proc_total"] = result.ledger.proc_total
                    record["transformed_challenge"] = text
            else:
                result = _run_one(args.schema, challenge, key, args)
                if isinstance(result, int):
                    record = {"challenge": challenge, "password": str(result)}
                else:
                    record = result.record(challenge)
                    if args.trace:
                        record["trace"] = result.trace and [
                            f"{s.index}\t{s.op}\t{s.detail}\t{s.cost}\t{s.proc_total}"
                            for s in result.trace
                        ]
            records.append(record)
        except DomainError as exc:
            failures += 1
            records.append({"challenge": challenge, "error": str(exc)})
    def human(rs):
        lines = []
        for r in rs:
            if "error" in r:
                lines.append(f"{r['challenge']}\tERROR\t{r['error']}")
                continue
            proc = r.get("proc_total")
            lines.append(
                f"{r['challenge']}\t{r['password']}" + (f"\tproc={proc}" if proc is not None else "")
            )
            for step in r.get("trace") or []:
                lines.append(f"  {step}")
        return lines

    _emit(records, args.format, human)
    if failures and failures == len(records):
        return EXIT_DOMAIN
    return EXIT_OK


# ---------------------------------------------------------------------------
# prg
# ---------------------------------------------------------------------------


def cmd_prg(args) -> int:
    key = load_key(args.key)
    if args.seed_digits:
        seeds = [args.seed_digits]
    else:
        with open(args.seeds_file, encoding="utf-8") as fh:
            seeds = [line.strip() for line in fh if line.strip()]
    digit_bound = 6 if args.allow_seed_digit_5 else 5
    records = []
    for seed in seeds:
        if args.carry != "default":
            carry = modifiers.challenge_carry(seed, args.carry)
            result = prg.sum_skip_digits(seed, key, carry)
            records.append(
                {
                    "seed": seed,
                    "carry": carry,
                    "output": result.output,
                    "final_sum": result.final_sum,
                    "sums": "".join(str(s) for s in result.sums),
                }
            )
            continue
        stream = prg.generate(args.generator, seed, key, digit_bound=digit_bound)
        records.append(
            {
                "seed": seed,
                "generator": args.generator,
                "output": stream.digits,
                "parts": list(stream.parts),
                "boundaries": list(stream.boundaries),
                "carries": list(stream.carries),
                "final_sums": list(stream.final_sums),
            }
        )

    def human(rs):
        lines = []
        for r in rs:
            lines.append(f"{r['seed']} -> {r['output']}")
            if "parts" in r:
                lines.append(
                    f"  parts={'|'.join(r['parts'])} boundaries={r['boundaries']} carries={r['carries']}"
                )
        return lines

    _emit(records, args.format, human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# owf
# ---------------------------------------------------------------------------


def cmd_owf(args) -> int:
    if args.owf_command == "make-instance":
        rng = random.Random(args.seed)
        instance = owf.make_instance(args.n, args.length_factor, rng)
        owf.save_instance(instance, args.out)
        record = {
            "instance_file": str(args.out),
            "n": instance.n_symbols,
            "challenge_length": len(instance.challenge),
            "length_factor": instance.length_factor,
        }
        _emit([record], args.format, lambda rs: [json.dumps(rs[0], sort_keys=True)])
        return EXIT_OK
    instance = owf.load_instance(args.instance)
    if args.owf_command == "eval":
        output = owf.evaluate(instance, args.key_digits)
        _emit(
            [{"key": args.key_digits, "output": output}],
            args.format,
            lambda rs: [f"{rs[0]['key']} -> {rs[0]['output']}"],
        )
        return EXIT_OK
    if args.owf_command == "invert":
        report = owf.brute_force_invert(
            instance, args.output, digit_range=args.digit_range, budget=args.budget
        )
        _emit(
            [report.as_dict()],
            args.format,
            lambda rs: [
                f"candidates: {rs[0]['candidates']} (keys tried {rs[0]['keys_tried']}, "
                f"steps {rs[0]['steps']})"
            ]
            + [f"  {p}" for p in rs[0]["preimages"][:20]],
        )
        return EXIT_OK
    raise DomainError(f"unknown owf command {args.owf_command!r}")


# ---------------------------------------------------------------------------
# attack
# ---------------------------------------------------------------------------


def cmd_attack(args) -> int:
    if args.kind == "guess-solve":
        key = load_key(args.key)
        if args.self_test:
            rng = random.Random(args.seed)
            seed_digits = prg.random_seed_string(rng, args.n)
            output = prg.cascade(seed_digits, key).digits
        else:
            seed_digits = None
            output = args.output
            if output is None:
                raise DomainError("guess-solve needs --output or --self-test")
        report = adversary.guess_and_solve(output, args.n, key, budget=args.budget)
        record = report.as_dict()
        if seed_digits is not None:
            record["true_seed"] = seed_digits
            record["recovered"] = seed_digits in report.candidates
        projection = adversary.project_attack_cost(args.n).as_dict()
        record["projection"] = projection
        _emit(
            [record],
            args.format,
            lambda rs: [
                f"candidates: {rs[0]['candidate_count']} {list(rs[0]['candidates'])[:8]}",
                f"slots={rs[0]['slot_total']} masks={rs[0]['mask_space']} "
                f"solved={rs[0]['systems_solved']} steps={rs[0]['steps']}",
                f"projection n={projection['n']}: {projection['projected_ops']:.3g} ops "
                f"(bound {projection['operation_bound']:.0e}, within={projection['within_bound']})",
            ]
            + ([f"true seed recovered: {rs[0]['recovered']}"] if seed_digits else []),
        )
        return EXIT_OK
    if args.kind == "exhaust":
        key = load_key(args.key)
        report = adversary.exhaust_seeds(
            args.candidate, key, args.n, generator=args.generator, budget=args.budget
        )
        _emit(
            [report.as_dict()],
            args.format,
            lambda rs: [
                f"verdict: {rs[0]['verdict']} (seed={rs[0]['seed']}, tried {rs[0]['seeds_tried']})"
            ],
        )
        return EXIT_OK
    if args.kind == "qsec":
        key = load_key(args.key)
        source = securityq.load_lexicon(args.lexicon)
        responder = _responder_for(args.schema, key, args)
        guesser = securityq.GUESSERS[args.strategy]
        report = securityq.estimate_security_q(
            responder,
            source,
            guesser,
            schema_id=args.schema,
            trials=args.trials,
            m_values=tuple(range(0, args.max_m + 1)),
            seed=args.seed,
        )
        _emit(
            [report.as_dict()],
            args.format,
            lambda rs: [f"Q estimate: {rs[0]['q_estimate']}"]
            + [
                f"  m={p['m']}: {p['rate']:.3f} [{p['wilson_low']:.3f}, {p['wilson_high']:.3f}]"
                for p in rs[0]["points"]
            ],
        )
        return EXIT_OK
    if args.kind == "frequency":
        with open(args.samples_file, encoding="utf-8") as fh:
            samples = [line.strip() for line in fh if line.strip()]
        report = adversary.frequency_distinguisher(samples)
        _emit(
            [report.as_dict()],
            args.format,
            lambda rs: [
                f"verdict: {rs[0]['verdict']} (digit p={rs[0]['digit_p']}, "
                f"bigram p={rs[0]['bigram_p']})"
            ],
        )
        return EXIT_OK
    raise DomainError(f"unknown attack kind {args.kind!r}")


def _responder_for(schema: str, key: KeyMap, args):
    def responder(challenge: str) -> str:
        result = _run_one(schema, challenge, key, args)
        return str(result) if isinstance(result, int) else result.output

    return responder


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def cmd_report(args) -> int:
    if args.report_command == "lengths":
        stats = prg.expected_length_report(args.generator, args.n, args.trials, seed=args.seed)
        csv_path, png_path = reporting.render_length_report(stats, args.out_dir)
        print(f"wrote {csv_path} and {png_path}")
        print(json.dumps(stats.as_dict(), sort_keys=True))
        return EXIT_OK
    if args.report_command == "qsec":
        key = load_key(args.key)
        source = securityq.load_lexicon(args.lexicon)
        responder = _responder_for(args.schema, key, args)
        report = securityq.estimate_security_q(
            responder,
            source,
            securityq.GUESSERS[args.strategy],
            schema_id=args.schema,
            trials=args.trials,
            m_values=tuple(range(0, args.max_m + 1)),
            seed=args.seed,
        )
        csv_path, png_path = reporting.render_qsec_report(report, args.out_dir)
        print(f"wrote {csv_path} and {png_path}")
        print(f"Q estimate: {report.q_estimate}")
        return EXIT_OK
    if args.report_command == "costs":
        key = load_key(args.key)
        rng = random.Random(args.seed)
        letters = key.symbols
        n_values = list(range(args.min_n, args.max_n + 1))
        means = []
        nominal = []
        for n in n_values:
            total = 0
            for _ in range(args.trials):
                challenge = "".join(rng.choice(letters) for _ in range(n))
                result = _run_one(args.schema, challenge, key, args)
                total += result.ledger.proc_total
            means.append(total / args.trials)
            suffix_len = len(args.suffix) if args.schema == "sum-suffix" else 0
            nominal.append(schemas.nominal_proc(args.schema, n, suffix_len))
        csv_path, png_path = reporting.render_cost_report(
            args.schema, n_values, means, nominal, args.out_dir
        )
        print(f"wrote {csv_path} and {png_path}")
        return EXIT_OK
    if args.report_command == "frequency":
        key = load_key(args.key)
        rng = random.Random(args.seed)
        samples = [
            prg.generate(args.generator, prg.random_seed_string(rng, args.n), key).digits
            for _ in range(args.samples)
        ]
        samples = [s for s in samples if s]
        report = adversary.frequency_distinguisher(samples)
        csv_path, png_path = reporting.render_frequency_report(report, args.out_dir)
        print(f"wrote {csv_path} and {png_path}")
        print(f"verdict: {report.verdict}")
        return EXIT_OK
    raise DomainError(f"unknown report command {args.report_command!r}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcpass",
        description="Human-computable password schemas, generators, and attacks.",
    )
    parser.add_argument("--seed", type=int, default=0, help="rng seed (default 0)")
    parser.add_argument(
        "--format", choices=("human", "records"), default="human", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate and store a key")
    p.add_argument("--domain", default="letters", help="letters | digits | num2 | letters:N")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("run", help="run a schema over challenges")
    p.add_argument("--schema", choices=SCHEMAS, default="letter-sub")
    p.add_argument("--key", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--challenge")
    group.add_argument("--challenges-file")
    p.add_argument("--suffix", default="", help="fixed string for sum-suffix")
    p.add_argument("--trace", action="store_true", help="include the step trace")
    p.add_argument("--normalize", choices=("reject", "strip"), default="reject")
    p.add_argument("--pipeline", default="", help="e.g. 'start:two-past-first-vowel | sum-skip'")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("prg", help="run a digit-stream generator")
    p.add_argument("--generator", choices=prg.GENERATORS, default="cascade")
    p.add_argument("--key", required=True, help="digit-domain key file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--seed-digits")
    group.add_argument("--seeds-file")
    p.add_argument("--carry", default="default", help="default | digit-sum (single pass)")
    p.add_argument("--allow-seed-digit-5", action="store_true")
    p.set_defaults(func=cmd_prg)

    p = sub.add_parser("owf", help="one-way-function instances")
    owf_sub = p.add_subparsers(dest="owf_command", required=True)
    q = owf_sub.add_parser("make-instance")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--length-factor", type=float, default=1.0)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_owf)
    q = owf_sub.add_parser("eval")
    q.add_argument("--instance", required=True)
    q.add_argument("--key-digits", required=True)
    q.set_defaults(func=cmd_owf)
    q = owf_sub.add_parser("invert")
    q.add_argument("--instance", required=True)
    q.add_argument("--output", required=True)
    q.add_argument("--digit-range", type=int, default=10)
    q.add_argument("--budget", type=int, default=owf.DESK_BUDGET)
    q.set_defaults(func=cmd_owf)

    p = sub.add_parser("attack", help="mount an attack")
    attack_sub = p.add_subparsers(dest="kind", required=True)
    q = attack_sub.add_parser("guess-solve")
    q.add_argument("--key", required=True, help="digit-domain key file")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--output")
    q.add_argument("--self-test", action="store_true")
    q.add_argument("--budget", type=int, default=adversary.DESK_BUDGET)
    q.set_defaults(func=cmd_attack)
    q = attack_sub.add_parser("exhaust")
    q.add_argument("--key", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--candidate", required=True)
    q.add_argument("--generator", choices=("cascade", "echo-cascade"), default="echo-cascade")
    q.add_argument("--budget", type=int, default=adversary.DESK_BUDGET)
    q.set_defaults(func=cmd_attack)
    q = attack_sub.add_parser("qsec")
    q.add_argument("--key", required=True)
    q.add_argument("--schema", choices=SCHEMAS, default="letter-sub")
    q.add_argument("--lexicon", required=True)
    q.add_argument("--strategy", choices=tuple(securityq.GUESSERS), default="memory")
    q.add_argument("--trials", type=int, default=2000)
    q.add_argument("--max-m", type=int, default=8)
    q.add_argument("--suffix", default="")
    q.add_argument("--normalize", choices=("reject", "strip"), default="reject")
    q.set_defaults(func=cmd_attack)
    q = attack_sub.add_parser("frequency")
    q.add_argument("--samples-file", required=True)
    q.set_defaults(func=cmd_attack)

    p = sub.add_parser("report", help="write CSV + figure reports")
    report_sub = p.add_subparsers(dest="report_command", required=True)
    q = report_sub.add_parser("lengths")
    q.add_argument("--generator", choices=prg.GENERATORS, default="echo-cascade")
    q.add_argument("--n", type=int, default=20)
    q.add_argument("--trials", type=int, default=10000)
    q.add_argument("--out-dir", default="reports")
    q.set_defaults(func=cmd_report)
    q = report_sub.add_parser("qsec")
    q.add_argument("--key", required=True)
    q.add_argument("--schema", choices=SCHEMAS, default="letter-sub")
    q.add_argument("--lexicon", required=True)
    q.add_argument("--strategy", choices=tuple(securityq.GUESSERS), default="memory")
    q.add_argument("--trials", type=int, default=1000)
    q.add_argument("--max-m", type=int, default=8)
    q.add_argument("--suffix", default="")
    q.add_argument("--normalize", choices=("reject", "strip"), default="reject")
    q.add_argument("--out-dir", default="reports")
    q.set_defaults(func=cmd_report)
    q = report_sub.add_parser("costs")
    q.add_argument("--key", required=True)
    q.add_argument("--schema", choices=("letter-sub", "sum-suffix", "sum-skip"), default="sum-skip")
    q.add_argument("--min-n", type=int, default=4)
    q.add_argument("--max-n", type=int, default=14)
    q.add_argument("--trials", type=int, default=400)
    q.add_argument("--suffix", default="aA1@")
    q.add_argument("--normalize", choices=("reject", "strip"), default="reject")
    q.add_argument("--out-dir", default="reports")
    q.set_defaults(func=cmd_report)
    q = report_sub.add_parser("frequency")
    q.add_argument("--key", required=True)
    q.add_argument("--generator", choices=prg.GENERATORS, default="echo-cascade")
    q.add_argument("--n", type=int, default=12)
    q.add_argument("--samples", type=int, default=500)
    q.add_argument("--out-dir", default="reports")
    q.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InconsistentObservationsError as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except HcpassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
