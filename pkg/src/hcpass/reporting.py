"""Report rendering: delimited data files with matplotlib figures beside them.

Every report writes a CSV (the numbers) and a PNG (the picture) sharing a
base name, so a report directory is both machine- and human-readable.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .adversary import FrequencyReport
from .prg import LengthStats
from .securityq import SecurityQReport


def write_records(path, rows: Iterable[dict]) -> None:
    """Line-delimited JSON records, sorted keys, byte-stable."""
    with open(path, "w", encoding="ascii") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def write_csv(path, rows: Sequence[dict], fieldnames: Sequence[str]) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_length_report(stats: LengthStats, out_dir, stem: str | None = None) -> tuple[Path, Path]:
    """Histogram of generator output lengths, with the exact expectation
    marked; CSV holds the histogram."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = stem or f"lengths_{stats.generator.replace('-', '_')}_n{stats.n}"
    csv_path = out_dir / f"{stem}.csv"
    png_path = out_dir / f"{stem}.png"
    rows = [{"length": length, "count": count} for length, count in stats.histogram]
    write_csv(csv_path, rows, ["length", "count"])

    fig, ax = plt.subplots(figsize=(7, 4.5))
    lengths = [r["length"] for r in rows]
    counts = [r["count"] for r in rows]
    ax.bar(lengths, counts, width=0.85, color="#4878a8")
    ax.axvline(stats.exact_mean, color="#b8423e", linestyle="--",
               label=f"exact mean {stats.exact_mean:g}")
    ax.axvline(stats.mean, color="#3a3a3a", linestyle=":",
               label=f"empirical mean {stats.mean:.2f}")
    ax.set_xlabel("output length")
    ax.set_ylabel(f"count over {stats.trials} trials")
    ax.set_title(f"{stats.generator} output length, n={stats.n}")
    ax.legend()
    _save(fig, png_path)
    return csv_path, png_path


def render_qsec_report(
    report: SecurityQReport,
    out_dir,
    stem: str | None = None,
    reference: Sequence[tuple[int, float]] | None = None,
) -> tuple[Path, Path]:
    """Success-rate curve with Wilson bands; optional reference curve."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = stem or f"qsec_{report.schema_id.replace('-', '_')}"
    csv_path = out_dir / f"{stem}.csv"
    png_path = out_dir / f"{stem}.png"
    rows = [p.as_dict() for p in report.points]
    write_csv(csv_path, rows, ["m", "trials", "successes", "rate", "wilson_low", "wilson_high"])

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ms = [p.m for p in report.points]
    rates = [p.rate for p in report.points]
    lows = [p.wilson[0] for p in report.points]
    highs = [p.wilson[1] for p in report.points]
    ax.plot(ms, rates, "o-", color="#4878a8", label="empirical success")
    ax.fill_between(ms, lows, highs, color="#4878a8", alpha=0.2, label="Wilson 99%")
    if reference:
        ax.plot([m for m, _ in reference], [p for _, p in reference],
                "s--", color="#2e7d4f", label="closed form")
    ax.axhline(report.threshold, color="#b8423e", linestyle="--",
               label=f"threshold {report.threshold}")
    if report.q_estimate is not None:
        ax.axvline(report.q_estimate, color="#3a3a3a", linestyle=":",
                   label=f"Q estimate {report.q_estimate}")
    ax.set_xlabel("observed challenge/response pairs")
    ax.set_ylabel("fresh-challenge success rate")
    ax.set_title(f"{report.schema_id} vs {report.source_id}")
    ax.legend()
    _save(fig, png_path)
    return csv_path, png_path


def render_cost_report(
    schema: str,
    n_values: Sequence[int],
    means: Sequence[float],
    nominal: Sequence[float],
    out_dir,
    stem: str | None = None,
) -> tuple[Path, Path]:
    """Mean measured processing cost against the nominal formula."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = stem or f"costs_{schema.replace('-', '_')}"
    csv_path = out_dir / f"{stem}.csv"
    png_path = out_dir / f"{stem}.png"
    rows = [
        {"n": n, "mean_proc": round(m, 4), "nominal": nom}
        for n, m, nom in zip(n_values, means, nominal)
    ]
    write_csv(csv_path, rows, ["n", "mean_proc", "nominal"])

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(n_values, means, "o-", color="#4878a8", label="measured mean")
    ax.plot(n_values, nominal, "--", color="#b8423e", label="nominal formula")
    ax.set_xlabel("challenge length n")
    ax.set_ylabel("processing cost")
    ax.set_title(f"{schema} processing cost")
    ax.legend()
    _save(fig, png_path)
    return csv_path, png_path


def render_frequency_report(
    report: FrequencyReport, out_dir, stem: str = "frequency"
) -> tuple[Path, Path]:
    """Digit-frequency bars against the uniform expectation."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    png_path = out_dir / f"{stem}.png"
    total = sum(report.digit_counts)
    rows = [{"digit": d, "count": c} for d, c in enumerate(report.digit_counts)]
    write_csv(csv_path, rows, ["digit", "count"])

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(5), report.digit_counts, color="#4878a8")
    ax.axhline(total / 5, color="#b8423e", linestyle="--", label="uniform expectation")
    ax.set_xticks(range(5))
    ax.set_xlabel("digit")
    ax.set_ylabel("count")
    ax.set_title(f"digit frequencies ({report.verdict}, p={report.digit_p:.3g})")
    ax.legend()
    _save(fig, png_path)
    return csv_path, png_path
