"""Benchmark-level aggregation: per-repo matrices, means, and error trends.

Rates are carried as exact fractions end to end; rendering rounds
half-even to two decimals, so aggregated numbers never drift.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction

from skelgraft.errors import DuplicateRun
from skelgraft.harness import RepoReport

SCHEMA_VERSION = 1


@dataclass
class RunRow:
    repo_id: str
    iteration: int
    build_rate: Fraction
    pass_rate: Fraction


@dataclass
class BenchReport:
    runs: list[RunRow] = field(default_factory=list)
    overall: dict[int, tuple[Fraction, Fraction]] = field(default_factory=dict)
    error_trend: dict[int, dict[str, int]] = field(default_factory=dict)
    binary_comparison: dict[str, tuple[int, Fraction]] = field(default_factory=dict)
    missing_runs: list[tuple[str, int]] = field(default_factory=list)


def aggregate(
    reports: list[RepoReport],
    whole_repo_verdicts: dict[str, int] | None = None,
) -> BenchReport:
    """Fold per-repo reports into the benchmark view.

    Overall means are unweighted over the repos present in an iteration;
    repo/iteration combinations missing relative to the full grid are
    reported, never imputed. Raises DuplicateRun on a repeated
    (repo_id, iteration).
    """
    seen: set[tuple[str, int]] = set()
    bench = BenchReport()
    for report in reports:
        key = (report.repo_id, report.iteration)
        if key in seen:
            raise DuplicateRun(*key)
        seen.add(key)
        bench.runs.append(
            RunRow(report.repo_id, report.iteration, report.build_rate, report.pass_rate)
        )
    bench.runs.sort(key=lambda r: (r.repo_id, r.iteration))

    by_iteration: dict[int, list[RunRow]] = {}
    for row in bench.runs:
        by_iteration.setdefault(row.iteration, []).append(row)
    for iteration, rows in sorted(by_iteration.items()):
        n = len(rows)
        bench.overall[iteration] = (
            sum((r.build_rate for r in rows), Fraction(0)) / n,
            sum((r.pass_rate for r in rows), Fraction(0)) / n,
        )

    for report in reports:
        trend = bench.error_trend.setdefault(report.iteration, {})
        for code, count in report.error_histogram.items():
            trend[code] = trend.get(code, 0) + count

    repos = {r.repo_id for r in bench.runs}
    iterations = {r.iteration for r in bench.runs}
    for repo in sorted(repos):
        for iteration in sorted(iterations):
            if (repo, iteration) not in seen:
                bench.missing_runs.append((repo, iteration))

    if whole_repo_verdicts:
        last_by_repo: dict[str, RunRow] = {}
        for row in bench.runs:
            current = last_by_repo.get(row.repo_id)
            if current is None or row.iteration > current.iteration:
                last_by_repo[row.repo_id] = row
        for repo, verdict in sorted(whole_repo_verdicts.items()):
            row = last_by_repo.get(repo)
            bench.binary_comparison[repo] = (
                verdict,
                row.build_rate if row is not None else Fraction(0),
            )
    return bench


def percent(value: Fraction) -> str:
    """Exact fraction -> percentage string, two decimals, half-even."""
    quantized = (Decimal(value.numerator) * 100 / Decimal(value.denominator)).quantize(
        Decimal("0.01"), rounding=ROUND_HALF_EVEN
    )
    return f"{quantized}%"


def _fraction_dict(value: Fraction) -> dict:
    return {
        "numerator": value.numerator,
        "denominator": value.denominator,
        "value": float(value),
    }


def _fraction_from(data: dict) -> Fraction:
    return Fraction(data["numerator"], data["denominator"])


def render(report: BenchReport, fmt: str = "json") -> str:
    if fmt == "json":
        return _render_json(report)
    if fmt == "markdown":
        return _render_markdown(report)
    raise ValueError(f"unknown report format {fmt!r}")


def _render_json(report: BenchReport) -> str:
    return json.dumps(
        {
            "schema_version": SCHEMA_VERSION,
            "runs": [
                {
                    "repo_id": r.repo_id,
                    "iteration": r.iteration,
                    "build_rate": _fraction_dict(r.build_rate),
                    "pass_rate": _fraction_dict(r.pass_rate),
                }
                for r in report.runs
            ],
            "overall": {
                str(i): {
                    "mean_build_rate": _fraction_dict(b),
                    "mean_pass_rate": _fraction_dict(p),
                }
                for i, (b, p) in sorted(report.overall.items())
            },
            "error_trend": {
                str(i): dict(sorted(codes.items()))
                for i, codes in sorted(report.error_trend.items())
            },
            "binary_comparison": {
                repo: {"whole_repo": verdict, "build_rate": _fraction_dict(rate)}
                for repo, (verdict, rate) in sorted(report.binary_comparison.items())
            },
            "missing_runs": [
                {"repo_id": repo, "iteration": iteration}
                for repo, iteration in report.missing_runs
            ],
        },
        indent=2,
    ) + "\n"


def parse_json(text: str) -> BenchReport:
    data = json.loads(text)
    bench = BenchReport()
    for r in data["runs"]:
        bench.runs.append(
            RunRow(r["repo_id"], r["iteration"],
                   _fraction_from(r["build_rate"]), _fraction_from(r["pass_rate"]))
        )
    for i, rates in data["overall"].items():
        bench.overall[int(i)] = (
            _fraction_from(rates["mean_build_rate"]),
            _fraction_from(rates["mean_pass_rate"]),
        )
    for i, codes in data["error_trend"].items():
        bench.error_trend[int(i)] = dict(codes)
    for repo, entry in data["binary_comparison"].items():
        bench.binary_comparison[repo] = (
            entry["whole_repo"],
            _fraction_from(entry["build_rate"]),
        )
    bench.missing_runs = [(m["repo_id"], m["iteration"]) for m in data["missing_runs"]]
    return bench


def _render_markdown(report: BenchReport) -> str:
    if not report.runs:
        return "# Benchmark report\n\nNo runs recorded.\n"
    lines = ["# Benchmark report", ""]

    lines += ["## Build and pass rates", "",
              "| Repository | Iteration | Build rate | Pass rate |",
              "|---|---:|---:|---:|"]
    for row in report.runs:
        lines.append(
            f"| {row.repo_id} | {row.iteration} | {percent(row.build_rate)} "
            f"| {percent(row.pass_rate)} |"
        )
    lines.append("")

    lines += ["## Overall (unweighted mean across repositories)", "",
              "| Iteration | Mean build rate | Mean pass rate |", "|---:|---:|---:|"]
    for iteration, (build, passed) in sorted(report.overall.items()):
        lines.append(f"| {iteration} | {percent(build)} | {percent(passed)} |")
    lines.append("")

    if report.error_trend:
        iterations = sorted(report.error_trend)
        codes: dict[str, int] = {}
        for counts in report.error_trend.values():
            for code, count in counts.items():
                codes[code] = codes.get(code, 0) + count
        header = "| Error code | " + " | ".join(f"Iteration {i}" for i in iterations) + " |"
        sep = "|---|" + "---:|" * len(iterations)
        lines += ["## Error trend", "", header, sep]
        for code in sorted(codes, key=lambda c: (-codes[c], c)):
            row = [str(report.error_trend.get(i, {}).get(code, 0)) for i in iterations]
            lines.append(f"| {code} | " + " | ".join(row) + " |")
        totals = [str(sum(report.error_trend.get(i, {}).values())) for i in iterations]
        lines.append("| **total** | " + " | ".join(totals) + " |")
        lines.append("")

    if report.binary_comparison:
        lines += ["## Whole-repo (binary) comparison", "",
                  "| Repository | Whole-repo verdict | Per-test build rate |", "|---|---:|---:|"]
        for repo, (verdict, rate) in sorted(report.binary_comparison.items()):
            lines.append(f"| {repo} | {verdict} | {percent(rate)} |")
        lines.append("")

    if report.missing_runs:
        lines += ["## Missing runs", ""]
        for repo, iteration in report.missing_runs:
            lines.append(f"- {repo} iteration {iteration}")
        lines.append("")
    return "\n".join(lines)
