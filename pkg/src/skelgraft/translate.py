"""LLM translation orchestration: prompts, clients, and the refinement loop.

Skeleton-guided prompts per source unit; per-iteration evaluation via the
grafting harness; diagnostics from each iteration are routed back to the
owning units as repair context for the next one. The test suite drives
everything through deterministic mock clients; the HTTP client is for
real runs only.
"""

from __future__ import annotations

import json
import logging
import os
import re
import time
from dataclasses import dataclass, field
from typing import Protocol

from skelgraft.errors import EmptyCompletion, ParseError
from skelgraft.grafting import graft, plan_grafts
from skelgraft.harness import Diagnostic, RepoReport, ToolchainConfig, evaluate_plans
from skelgraft.instrument import CoverageMap
from skelgraft.skeletonize import is_test_path
from skelgraft.structmap import RenameRules, build_map
from skelgraft.syntax import SourceUnit, StructuralModel, parse_unit
from skelgraft.syntax.profiles import get_profile

log = logging.getLogger(__name__)

CODE_MODE = "code"
TEST_MODE = "test"

_FENCE_RE = re.compile(r"```[a-zA-Z#+]*\n(.*?)```", re.DOTALL)
_UNIT_RE = re.compile(r"^Source file: (.+)$", re.MULTILINE)

_SYSTEM_CODE = (
    "You are a careful source-to-source translator. Translate the given "
    "{source_lang} file into {target_lang}. The target skeleton below fixes the "
    "file's classes, signatures, and dependencies: your translation must keep "
    "exactly those signatures and fill in the bodies. Reply with one fenced "
    "code block containing the complete translated file."
)
_SYSTEM_CODE_ABLATION = (
    "You are a careful source-to-source translator. Translate the given "
    "{source_lang} file into {target_lang}. Reply with one fenced code block "
    "containing the complete translated file."
)
_SYSTEM_TEST = (
    "You are a careful source-to-source translator. Translate the given "
    "{source_lang} unit-test file into {target_lang} using the {framework} "
    "testing framework, preserving each test's intent and assertions. Reply "
    "with one fenced code block containing the complete translated file."
)


class LLMClient(Protocol):
    """Anything that can turn a structured prompt into completion text."""

    def send(self, messages: list[dict], params: dict) -> str: ...


def build_prompt(
    source_text: str,
    skeleton_text: str | None,
    diagnostics: list[Diagnostic] | None,
    mode: str = CODE_MODE,
    source_path: str = "",
    source_lang: str = "Java",
    target_lang: str = "C#",
    test_framework: str = "NUnit",
    previous_translation: str | None = None,
) -> list[dict]:
    """Assemble the structured message list for one unit translation.

    skeleton_text is absent only in ablation mode; the previous iteration's
    translation and its diagnostics, when present, are appended as repair
    context (diagnostics quote file and line).
    """
    if mode == TEST_MODE:
        system = _SYSTEM_TEST.format(
            source_lang=source_lang, target_lang=target_lang, framework=test_framework
        )
    elif skeleton_text is None:
        system = _SYSTEM_CODE_ABLATION.format(source_lang=source_lang, target_lang=target_lang)
    else:
        system = _SYSTEM_CODE.format(source_lang=source_lang, target_lang=target_lang)
    parts = [f"Source file: {source_path}", "", "Source:", "```", source_text.rstrip("\n"), "```"]
    if skeleton_text is not None and mode == CODE_MODE:
        parts += ["", "Target skeleton (authoritative signatures):", "```",
                  skeleton_text.rstrip("\n"), "```"]
    if previous_translation is not None and diagnostics:
        parts += ["", "Your previous translation:", "```",
                  previous_translation.rstrip("\n"), "```"]
    if diagnostics:
        parts += ["", "The previous translation produced these diagnostics; fix them:"]
        for diag in diagnostics:
            where = f"{diag.file}:{diag.line}: " if diag.file else ""
            parts.append(f"- {where}{diag.code}: {diag.message}")
    return [
        {"role": "system", "content": system},
        {"role": "user", "content": "\n".join(parts)},
    ]


def extract_code(completion: str) -> str:
    """Content of the first fenced block; the whole trimmed text when unfenced."""
    if not completion or not completion.strip():
        raise EmptyCompletion("model returned an empty completion")
    matches = _FENCE_RE.findall(completion)
    if not matches:
        return completion.strip() + "\n"
    if len(matches) > 1:
        log.warning("completion has %d fenced blocks; using the first", len(matches))
    body = matches[0]
    return body if body.endswith("\n") else body + "\n"


# -- deterministic clients -----------------------------------------------------


@dataclass
class ScriptedClient:
    """Returns canned unit texts keyed by the prompt's source path.

    ``repairs`` maps a unit path to (diagnostic marker, repaired text):
    once the prompt's repair section mentions the marker, the repaired
    text wins and sticks for later iterations (previous outputs feed the
    next iteration). Deterministic given the same call sequence.
    """

    responses: dict[str, str]
    repairs: dict[str, tuple[str, str]] = field(default_factory=dict)
    fence: str = "cs"
    calls: int = 0

    def __post_init__(self) -> None:
        self._repaired: set[str] = set()

    def send(self, messages: list[dict], params: dict) -> str:
        self.calls += 1
        prompt = "\n".join(m["content"] for m in messages)
        m = _UNIT_RE.search(prompt)
        unit = m.group(1) if m else ""
        text = self.responses.get(unit, "")
        repair = self.repairs.get(unit)
        if repair is not None and (unit in self._repaired or repair[0] in prompt):
            self._repaired.add(unit)
            text = repair[1]
        return f"```{self.fence}\n{text}```"


@dataclass
class EchoSkeletonClient:
    """Returns the skeleton block verbatim (structural no-op translation)."""

    calls: int = 0

    def send(self, messages: list[dict], params: dict) -> str:
        self.calls += 1
        prompt = messages[-1]["content"]
        marker = "Target skeleton (authoritative signatures):\n```\n"
        idx = prompt.find(marker)
        if idx < 0:
            return "```\n```"
        rest = prompt[idx + len(marker) :]
        body = rest.split("\n```", 1)[0]
        return f"```\n{body}\n```"


class HttpLLMClient:
    """Minimal OpenAI-style chat client with retry and rate limiting.

    Exercised only by optional integration tests; the pipeline's own test
    suite never performs network I/O.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "SKELGRAFT_API_KEY",
        timeout_s: float = 120.0,
        max_retries: int = 3,
        min_interval_s: float = 0.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self.max_retries = max_retries
        self.min_interval_s = min_interval_s
        self._last_request = 0.0

    def send(self, messages: list[dict], params: dict) -> str:
        import requests

        api_key = os.environ.get(self.api_key_env, "")
        payload = {
            "model": params.get("model", self.model),
            "messages": messages,
            "temperature": params.get("temperature", 0),
        }
        if "max_tokens" in params:
            payload["max_tokens"] = params["max_tokens"]
        delay = 1.0
        for attempt in range(self.max_retries):
            wait = self._last_request + self.min_interval_s - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_request = time.monotonic()
            try:
                resp = requests.post(
                    self.endpoint,
                    json=payload,
                    headers={"Authorization": f"Bearer {api_key}"},
                    timeout=self.timeout_s,
                )
                if resp.status_code == 200:
                    return resp.json()["choices"][0]["message"]["content"]
                if resp.status_code not in (429, 500, 502, 503):
                    resp.raise_for_status()
            except requests.RequestException:
                if attempt == self.max_retries - 1:
                    raise
            time.sleep(delay)
            delay *= 2
        raise RuntimeError("exhausted retries")


# -- pipeline -------------------------------------------------------------------


@dataclass
class TranslationTask:
    """The translation tuple: source repo, target skeleton, tests, environment."""

    repo_id: str
    source_root: str
    source_profile: str
    source_test_globs: tuple[str, ...]
    skeleton_root: str
    target_profile: str
    target_test_globs: tuple[str, ...]
    rules: RenameRules
    coverage: CoverageMap
    toolchain: ToolchainConfig
    run_dir: str
    source_lang_name: str = "Java"
    target_lang_name: str = "C#"
    params: dict = field(default_factory=lambda: {"temperature": 0})


@dataclass
class IterationState:
    iteration: int
    translated_units: dict[str, str] = field(default_factory=dict)  # target path -> text
    last_report: RepoReport | None = None


def _nontest_view(model: StructuralModel, test_globs: tuple[str, ...]) -> StructuralModel:
    return StructuralModel(
        units=model.units,
        classes=model.classes,
        functions=[f for f in model.functions if not is_test_path(f.unit_path, test_globs)],
        fields_decls=model.fields_decls,
    )


def run_pipeline(
    task: TranslationTask,
    client: LLMClient,
    max_iterations: int = 3,
    ablation: bool = False,
) -> list[tuple[IterationState, RepoReport]]:
    """Translate, graft, evaluate, and refine for up to ``max_iterations``.

    Stops early once every test builds and passes. Test files are never
    sent for re-translation in code mode and never overwritten in the
    skeleton; per-unit diagnostics are routed by file path, and file-less
    diagnostics attach to every unit of the failing test's graft plan.
    """
    from skelgraft.syntax import parse_repo

    source_model = parse_repo(task.source_root, task.source_profile)
    skeleton_model = parse_repo(task.skeleton_root, task.target_profile)
    src_view = _nontest_view(source_model, task.source_test_globs)
    tgt_view = _nontest_view(skeleton_model, task.target_test_globs)
    smap = build_map(src_view, tgt_view, task.rules)

    source_units = sorted(
        {
            f.unit_path
            for f in src_view.functions
            if f.unit_path.endswith(tuple(_profile_exts(task.source_profile)))
        }
    )
    os.makedirs(task.run_dir, exist_ok=True)
    transcripts_path = os.path.join(task.run_dir, "transcripts.jsonl")

    results: list[tuple[IterationState, RepoReport]] = []
    pending_diags: dict[str, list[Diagnostic]] = {}
    previous_texts: dict[str, str] = {}  # source unit -> last iteration's translation
    for iteration in range(1, max_iterations + 1):
        state = IterationState(iteration=iteration)
        iter_dir = os.path.join(task.run_dir, f"iter-{iteration}")
        translation_dir = os.path.join(iter_dir, "translation")
        os.makedirs(translation_dir, exist_ok=True)

        translated_model = StructuralModel()
        parse_diags: dict[str, list[Diagnostic]] = {}
        for unit_path in source_units:
            source_text = _read(os.path.join(task.source_root, unit_path))
            target_path = task.rules.map_path(unit_path)
            skeleton_text = None
            if not ablation:
                skel_file = os.path.join(task.skeleton_root, target_path)
                skeleton_text = _read(skel_file) if os.path.isfile(skel_file) else None
            messages = build_prompt(
                source_text,
                skeleton_text,
                pending_diags.get(unit_path),
                CODE_MODE,
                source_path=unit_path,
                source_lang=task.source_lang_name,
                target_lang=task.target_lang_name,
                previous_translation=previous_texts.get(unit_path),
            )
            completion = client.send(messages, task.params)
            _append_jsonl(
                transcripts_path,
                {"iteration": iteration, "unit": unit_path,
                 "messages": messages, "completion": completion},
            )
            text = extract_code(completion)
            state.translated_units[target_path] = text
            previous_texts[unit_path] = text
            dest = os.path.join(translation_dir, target_path)
            os.makedirs(os.path.dirname(dest), exist_ok=True)
            with open(dest, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            unit = SourceUnit(path=target_path, language=task.target_profile,
                              text=text.encode("utf-8"))
            try:
                translated_model = translated_model.merged_with(
                    parse_unit(unit, task.target_profile)
                )
            except ParseError as err:
                parse_diags.setdefault(unit_path, []).append(
                    Diagnostic("OTHER", f"translated unit does not parse: {err.message}",
                               target_path, 0)
                )

        plans = plan_grafts(task.coverage, smap, task.rules,
                            workdir_root=os.path.join(iter_dir, "work"))
        items = [
            (
                plan,
                graft(plan, task.skeleton_root, skeleton_model, translated_model,
                      test_globs=task.target_test_globs),
            )
            for plan in plans
        ]
        report = evaluate_plans(task.repo_id, iteration, items, task.toolchain)
        state.last_report = report
        results.append((state, report))
        with open(os.path.join(iter_dir, "repo-report.json"), "w", encoding="utf-8") as fh:
            fh.write(report.to_json())

        # pass_rate alone can be 1 while builds still fail (compiled-only
        # denominator); stop only when nothing remains for the loop to fix
        if report.build_rate == 1 and report.pass_rate == 1:
            break
        pending_diags = route_diagnostics(report, items, task.rules)
        for unit_path, diags in parse_diags.items():
            pending_diags.setdefault(unit_path, []).extend(diags)
    return results


def route_diagnostics(
    report: RepoReport,
    items: list[tuple],
    rules: RenameRules,
) -> dict[str, list[Diagnostic]]:
    """Attach each diagnostic to the source unit owning the file it names.

    Diagnostics without file information attach to every source unit in
    the failing test's graft plan.
    """
    plan_by_test = {plan.test_id: plan for plan, _ in items}
    routed: dict[str, list[Diagnostic]] = {}

    def _add(source_path: str, diag: Diagnostic) -> None:
        bucket = routed.setdefault(source_path, [])
        if diag not in bucket:
            bucket.append(diag)

    for verdict in report.verdicts:
        if verdict.build == "ok" and verdict.run == "passed":
            continue
        plan = plan_by_test.get(verdict.test_id)
        for diag in verdict.diagnostics:
            if diag.file:
                _add(rules.unmap_path(diag.file), diag)
            elif diag.code == "GRAFT" and "|" in diag.message:
                target_path = diag.message.split("|")[0].split(": ", 1)[-1]
                _add(rules.unmap_path(target_path), diag)
            elif plan is not None:
                for key in sorted(plan.target_keys, key=str):
                    _add(rules.unmap_path(key.unit_path), diag)
    return routed


def _profile_exts(profile_id: str) -> tuple[str, ...]:
    return get_profile(profile_id).extensions


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _append_jsonl(path: str, record: dict) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record) + "\n")
