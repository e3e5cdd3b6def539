"""Build/test execution, diagnostics classification, and scoring.

All toolchain invocations are configurable command templates; per-test
logs land under <workdir>/logs/. Rates are computed in exact rational
arithmetic: build rate = tests that compile / all tests; pass rate =
tests that pass / tests that compile (0 when nothing compiles).
"""

from __future__ import annotations

import json
import logging
import os
import re
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from skelgraft.errors import SpawnError, TemplateError
from skelgraft.grafting import GraftOutcome, GraftPlan
from skelgraft.util import fill_template

log = logging.getLogger(__name__)

RUNTIME = "RUNTIME"
OTHER = "OTHER"
GRAFT = "GRAFT"

DEFAULT_CODE_PATTERN = r"\b[A-Z]{1,3}[0-9]{4}\b"

# MSBuild style: path(line,col): error CS1234: message
_MSBUILD_RE = re.compile(
    r"^(?P<file>[^\s(][^(]*)\((?P<line>\d+),(?P<col>\d+)\):\s*error\s+(?P<code>\w+):\s*(?P<msg>.*)$"
)
# javac style: path:line: error: message
_JAVAC_RE = re.compile(r"^(?P<file>[^\s:][^:]*):(?P<line>\d+):\s*error:\s*(?P<msg>.*)$")
# bare: error CS1234: message
_BARE_RE = re.compile(r"^\s*error\s+(?P<code>\w+):\s*(?P<msg>.*)$")
_ERRORISH_RE = re.compile(r"\berror\b", re.IGNORECASE)
_RUNTIME_RE = re.compile(
    r"(Unhandled exception|[A-Za-z.]*(?:Exception|Error):|Error Message:|"
    r"^\s*Failed\s+[\w.]+|assert(?:ion)? (?:failed|error))",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    file: str = ""
    line: int = 0

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "file": self.file, "line": self.line}


@dataclass
class ToolchainConfig:
    """Command templates plus execution limits for one side's toolchain."""

    build_cmd: str
    test_cmd: str
    timeout_s: float = 120.0
    env: dict = field(default_factory=dict)
    parallelism: int = 1
    code_pattern: str = DEFAULT_CODE_PATTERN

    def __post_init__(self) -> None:
        if "{workdir}" not in self.build_cmd:
            raise TemplateError("build_cmd must contain {workdir}")
        if "{workdir}" not in self.test_cmd or "{test_filter}" not in self.test_cmd:
            raise TemplateError("test_cmd must contain {workdir} and {test_filter}")
        if self.timeout_s <= 0:
            raise TemplateError("timeout_s must be positive")
        if self.parallelism < 1:
            raise TemplateError("parallelism must be >= 1")


@dataclass
class TestVerdict:
    __test__ = False  # not a pytest class despite the name

    test_id: str
    build: str  # ok | failed
    run: str  # passed | failed | skipped | not_run
    diagnostics: list[Diagnostic] = field(default_factory=list)
    duration_ms: int = 0
    stub_build_ok: bool | None = None  # build result ignoring GRAFT forcing
    graft_failures: list = field(default_factory=list)

    def to_dict(self, include_timings: bool = False) -> dict:
        data = {
            "test_id": self.test_id,
            "build": self.build,
            "run": self.run,
            "diagnostics": [d.to_dict() for d in self.diagnostics],
        }
        if self.stub_build_ok is not None:
            data["stub_build_ok"] = self.stub_build_ok
        if self.graft_failures:
            data["graft_failures"] = self.graft_failures
        if include_timings:
            data["duration_ms"] = self.duration_ms
        return data


@dataclass
class RepoReport:
    repo_id: str
    iteration: int
    verdicts: list[TestVerdict] = field(default_factory=list)

    @property
    def build_rate(self) -> Fraction:
        if not self.verdicts:
            return Fraction(0)
        ok = sum(1 for v in self.verdicts if v.build == "ok")
        return Fraction(ok, len(self.verdicts))

    @property
    def pass_rate(self) -> Fraction:
        built = sum(1 for v in self.verdicts if v.build == "ok")
        if built == 0:
            return Fraction(0)
        passed = sum(1 for v in self.verdicts if v.run == "passed")
        return Fraction(passed, built)

    @property
    def pass_rate_all(self) -> Fraction:
        """Secondary figure: passed / all tests (cross-paper comparability)."""
        if not self.verdicts:
            return Fraction(0)
        passed = sum(1 for v in self.verdicts if v.run == "passed")
        return Fraction(passed, len(self.verdicts))

    @property
    def error_histogram(self) -> dict[str, int]:
        histogram: dict[str, int] = {}
        for verdict in self.verdicts:
            for diag in verdict.diagnostics:
                histogram[diag.code] = histogram.get(diag.code, 0) + 1
        return dict(sorted(histogram.items()))

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(
            {
                "version": 1,
                "repo_id": self.repo_id,
                "iteration": self.iteration,
                "build_rate": _fraction_dict(self.build_rate),
                "pass_rate": _fraction_dict(self.pass_rate),
                "pass_rate_all": _fraction_dict(self.pass_rate_all),
                "error_histogram": self.error_histogram,
                "verdicts": [
                    v.to_dict(include_timings)
                    for v in sorted(self.verdicts, key=lambda v: v.test_id)
                ],
            },
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RepoReport":
        data = json.loads(text)
        report = cls(repo_id=data["repo_id"], iteration=data["iteration"])
        for v in data["verdicts"]:
            report.verdicts.append(
                TestVerdict(
                    test_id=v["test_id"],
                    build=v["build"],
                    run=v["run"],
                    diagnostics=[Diagnostic(**d) for d in v["diagnostics"]],
                    duration_ms=v.get("duration_ms", 0),
                    stub_build_ok=v.get("stub_build_ok"),
                    graft_failures=v.get("graft_failures", []),
                )
            )
        return report


def _fraction_dict(value: Fraction) -> dict:
    return {
        "numerator": value.numerator,
        "denominator": value.denominator,
        "value": float(value),
    }


def compute_metrics(verdicts: list[TestVerdict]) -> tuple[Fraction, Fraction]:
    """(build_rate, pass_rate) with the degenerate-denominator conventions."""
    report = RepoReport(repo_id="", iteration=0, verdicts=list(verdicts))
    return report.build_rate, report.pass_rate


_SUMMARY_RE = re.compile(r"^\s*\d+ errors?$")
_CONTINUATION_RE = re.compile(r"^\s+Error Message:\s*(?P<msg>.*)$")


def classify_diagnostics(raw: str, code_pattern: str = DEFAULT_CODE_PATTERN) -> list[Diagnostic]:
    """Extract compiler codes, runtime failures, and leftovers from tool output.

    Lines with a compiler code matching ``code_pattern`` classify by code;
    failure lines without codes classify RUNTIME (an indented "Error
    Message:" continuation merges into the preceding RUNTIME entry);
    error-looking lines that fit nothing classify OTHER; everything else,
    including summary/count lines, is ignored.
    """
    pattern = re.compile(code_pattern)
    diags: list[Diagnostic] = []
    for line in raw.splitlines():
        stripped = line.rstrip()
        if not stripped or _SUMMARY_RE.match(stripped):
            continue
        m = _MSBUILD_RE.match(stripped)
        if m and pattern.search(m.group("code")):
            diags.append(
                Diagnostic(m.group("code"), m.group("msg"), m.group("file"), int(m.group("line")))
            )
            continue
        m = _BARE_RE.match(stripped)
        if m and pattern.search(m.group("code")):
            diags.append(Diagnostic(m.group("code"), m.group("msg")))
            continue
        m = _JAVAC_RE.match(stripped)
        if m:
            diags.append(Diagnostic(OTHER, m.group("msg"), m.group("file"), int(m.group("line"))))
            continue
        m = _CONTINUATION_RE.match(line)
        if m:
            if diags and diags[-1].code == RUNTIME:
                prev = diags.pop()
                diags.append(Diagnostic(RUNTIME, f"{prev.message}: {m.group('msg')}".strip(": "),
                                        prev.file, prev.line))
            else:
                diags.append(Diagnostic(RUNTIME, m.group("msg")))
            continue
        if _RUNTIME_RE.search(stripped):
            diags.append(Diagnostic(RUNTIME, stripped.strip()))
            continue
        if _ERRORISH_RE.search(stripped) and not stripped.startswith(("Build FAILED", "Build succeeded")) \
                and " 0 Error" not in stripped and "Error(s)" not in stripped:
            diags.append(Diagnostic(OTHER, stripped.strip()))
    return diags


def _run_command(cmd: str, timeout_s: float, env: dict) -> tuple[int, str]:
    full_env = dict(os.environ)
    full_env.update(env)
    try:
        proc = subprocess.run(
            cmd, shell=True, capture_output=True, text=True, timeout=timeout_s, env=full_env,
        )
        return proc.returncode, proc.stdout + proc.stderr
    except subprocess.TimeoutExpired as err:
        partial = ""
        if err.stdout:
            partial = err.stdout if isinstance(err.stdout, str) else err.stdout.decode()
        return -1, partial + f"\n[timeout after {timeout_s}s]"
    except FileNotFoundError as err:
        raise SpawnError(f"cannot spawn toolchain: {err}") from err


def _relativize(diags: list[Diagnostic], workdir: str) -> list[Diagnostic]:
    prefix = os.path.abspath(workdir) + os.sep
    out = []
    for d in diags:
        file = d.file
        if file.startswith(prefix):
            file = file[len(prefix) :]
        file = file.replace(os.sep, "/")
        out.append(Diagnostic(d.code, d.message, file, d.line))
    return out


def build_and_test(
    workdir: str,
    test_id: str,
    cfg: ToolchainConfig,
    graft_outcome: GraftOutcome | None = None,
) -> TestVerdict:
    """Run build_cmd then (on success) test_cmd filtered to one test.

    Graft failures force build=failed with a GRAFT diagnostic even when
    the stubbed project builds; the raw result is kept in stub_build_ok.
    A timeout yields run=failed with a RUNTIME diagnostic.
    """
    import time

    started = time.monotonic()
    logs_dir = os.path.join(workdir, "logs")
    os.makedirs(logs_dir, exist_ok=True)

    build_rc, build_out = _run_command(
        fill_template(cfg.build_cmd, workdir=workdir), cfg.timeout_s, cfg.env
    )
    with open(os.path.join(logs_dir, "build.txt"), "w", encoding="utf-8") as fh:
        fh.write(build_out)
    diagnostics = _relativize(classify_diagnostics(build_out, cfg.code_pattern), workdir)
    timed_out_build = build_rc == -1

    graft_failed = graft_outcome is not None and not graft_outcome.ok
    verdict = TestVerdict(test_id=test_id, build="ok", run="not_run")
    verdict.stub_build_ok = build_rc == 0
    if graft_outcome is not None:
        verdict.graft_failures = [f.reason for f in graft_outcome.failures]

    if graft_failed:
        verdict.build = "failed"
        verdict.diagnostics = [
            Diagnostic(GRAFT, f"{f.reason}: {f.key}") for f in graft_outcome.failures
        ] + diagnostics
        verdict.duration_ms = int((time.monotonic() - started) * 1000)
        return verdict

    if build_rc != 0:
        verdict.build = "failed"
        verdict.diagnostics = diagnostics
        if timed_out_build:
            verdict.diagnostics.append(Diagnostic(RUNTIME, "build timed out"))
        verdict.duration_ms = int((time.monotonic() - started) * 1000)
        return verdict

    test_rc, test_out = _run_command(
        fill_template(cfg.test_cmd, workdir=workdir, test_filter=test_id), cfg.timeout_s, cfg.env
    )
    with open(os.path.join(logs_dir, "test.txt"), "w", encoding="utf-8") as fh:
        fh.write(test_out)
    if test_rc == 0:
        verdict.run = "passed"
    else:
        verdict.run = "failed"
        test_diags = _relativize(classify_diagnostics(test_out, cfg.code_pattern), workdir)
        if not test_diags:
            test_diags = [Diagnostic(RUNTIME, "test run failed without compiler diagnostics")]
        verdict.diagnostics = test_diags
    verdict.duration_ms = int((time.monotonic() - started) * 1000)
    return verdict


def evaluate_plans(
    repo_id: str,
    iteration: int,
    plans_with_outcomes: list[tuple[GraftPlan, GraftOutcome]],
    cfg: ToolchainConfig,
) -> RepoReport:
    """Run build_and_test for every grafted plan, up to cfg.parallelism at once."""

    def _one(item: tuple[GraftPlan, GraftOutcome]) -> TestVerdict:
        plan, outcome = item
        verdict = build_and_test(plan.workdir, plan.target_test_id, cfg, outcome)
        verdict.test_id = plan.test_id
        return verdict

    report = RepoReport(repo_id=repo_id, iteration=iteration)
    if cfg.parallelism == 1 or len(plans_with_outcomes) <= 1:
        report.verdicts = [_one(item) for item in plans_with_outcomes]
    else:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            report.verdicts = list(pool.map(_one, plans_with_outcomes))
    return report


def evaluate_whole_repo(workdir: str, cfg: ToolchainConfig, all_tests_filter: str = "*") -> int:
    """Binary verdict: 1 iff the full assembly builds and every test passes."""
    build_rc, _ = _run_command(fill_template(cfg.build_cmd, workdir=workdir), cfg.timeout_s, cfg.env)
    if build_rc != 0:
        return 0
    test_rc, _ = _run_command(
        fill_template(cfg.test_cmd, workdir=workdir, test_filter=all_tests_filter),
        cfg.timeout_s,
        cfg.env,
    )
    return 1 if test_rc == 0 else 0


# -- project scaffolding ----------------------------------------------------


@dataclass
class ProjectDescriptor:
    name: str
    language: str
    test_framework: str
    source_roots: list[str] = field(default_factory=lambda: ["src"])
    test_roots: list[str] = field(default_factory=lambda: ["tests"])
    dependencies: list[str] = field(default_factory=list)


def scaffold_project(skeleton_dir: str, descriptor: ProjectDescriptor) -> str:
    """Emit the build configuration so the skeleton plus tests are runnable.

    Writes build.yaml from a canonical template; raises TemplateError when
    required descriptor fields are missing.
    """
    missing = [f for f in ("name", "language", "test_framework") if not getattr(descriptor, f)]
    if missing:
        raise TemplateError(f"descriptor missing fields: {', '.join(missing)}")
    lines = [
        f"project: {descriptor.name}",
        f"language: {descriptor.language}",
        f"test_framework: {descriptor.test_framework}",
        "source_roots:",
    ]
    lines += [f"  - {root}" for root in descriptor.source_roots]
    lines.append("test_roots:")
    lines += [f"  - {root}" for root in descriptor.test_roots]
    if descriptor.dependencies:
        lines.append("dependencies:")
        lines += [f"  - {dep}" for dep in descriptor.dependencies]
    else:
        lines.append("dependencies: []")
    path = os.path.join(skeleton_dir, "build.yaml")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
