"""Translator: prompts, code extraction, mock clients, the refinement loop."""

import json
import os

import pytest

from conftest import (
    CS_REFERENCE,
    CS_SKELETON,
    CS_TEST_GLOBS,
    JAVA_REPO,
    JAVA_TEST_GLOBS,
    MINITC_BUILD,
    MINITC_TEST,
)
from skelgraft.errors import EmptyCompletion
from skelgraft.harness import Diagnostic, ToolchainConfig
from skelgraft.structmap import DEFAULT_RULES
from skelgraft.translate import (
    EchoSkeletonClient,
    ScriptedClient,
    TranslationTask,
    build_prompt,
    extract_code,
    run_pipeline,
)


# -- build_prompt ---------------------------------------------------------------

def test_prompt_contains_source_and_skeleton_and_conformance():
    messages = build_prompt("class A {}", "class A { }", None,
                            source_path="src/A.java")
    assert messages[0]["role"] == "system"
    assert "skeleton" in messages[0]["content"].lower()
    user = messages[1]["content"]
    assert "Source file: src/A.java" in user
    assert "class A {}" in user and "class A { }" in user


def test_ablation_prompt_lacks_skeleton_contract():
    messages = build_prompt("class A {}", None, None, source_path="src/A.java")
    assert "skeleton" not in messages[0]["content"].lower()
    assert "Target skeleton" not in messages[1]["content"]


def test_repair_section_quotes_diagnostics():
    diags = [Diagnostic("CS0246", "The type or namespace name 'Foo' could not be found",
                        "src/A.cs", 3)]
    messages = build_prompt("x", "y", diags, source_path="src/A.java")
    user = messages[1]["content"]
    assert "- src/A.cs:3: CS0246: The type or namespace name 'Foo' could not be found" in user


def test_test_mode_prompt_names_framework():
    messages = build_prompt("class T {}", None, None, mode="test",
                            source_path="t/T.java", test_framework="NUnit")
    assert "NUnit" in messages[0]["content"]
    assert "unit-test" in messages[0]["content"]


# -- extract_code ---------------------------------------------------------------

def test_extract_single_fenced_block():
    assert extract_code("```cs\nint x;\n```") == "int x;\n"


def test_extract_prose_then_fence():
    text = "Here is the translation:\n```csharp\nclass A { }\n```\nHope that helps!"
    assert extract_code(text) == "class A { }\n"


def test_extract_unfenced_falls_back_to_whole():
    assert extract_code("  class A { }  \n") == "class A { }\n"


def test_extract_two_blocks_takes_first_with_warning(caplog):
    import logging

    text = "```\nfirst\n```\nmore\n```\nsecond\n```"
    with caplog.at_level(logging.WARNING):
        assert extract_code(text) == "first\n"
    assert any("fenced blocks" in r.message for r in caplog.records)


def test_extract_empty_raises():
    with pytest.raises(EmptyCompletion):
        extract_code("   \n")


# -- pipeline -------------------------------------------------------------------

def make_task(tmp_path, coverage, parallelism=2) -> TranslationTask:
    return TranslationTask(
        repo_id="pixeldraw",
        source_root=JAVA_REPO,
        source_profile="java",
        source_test_globs=JAVA_TEST_GLOBS,
        skeleton_root=CS_SKELETON,
        target_profile="csharp",
        target_test_globs=CS_TEST_GLOBS,
        rules=DEFAULT_RULES,
        coverage=coverage,
        toolchain=ToolchainConfig(build_cmd=MINITC_BUILD, test_cmd=MINITC_TEST,
                                  timeout_s=60, parallelism=parallelism),
        run_dir=str(tmp_path / "run"),
    )


def reference_responses():
    responses = {}
    for dirpath, _, filenames in os.walk(os.path.join(CS_REFERENCE, "src")):
        for name in filenames:
            full = os.path.join(dirpath, name)
            target_rel = os.path.relpath(full, CS_REFERENCE).replace(os.sep, "/")
            source_rel = DEFAULT_RULES.unmap_path(target_rel)
            responses[source_rel] = open(full).read()
    return responses


def test_reference_client_passes_first_iteration(tmp_path, recorded_coverage):
    task = make_task(tmp_path, recorded_coverage)
    client = ScriptedClient(reference_responses())
    results = run_pipeline(task, client, max_iterations=3)
    assert len(results) == 1  # early stop at pass_rate == 1
    state, report = results[0]
    assert report.build_rate == 1
    assert report.pass_rate == 1
    assert os.path.isfile(os.path.join(task.run_dir, "iter-1", "repo-report.json"))
    assert os.path.isfile(os.path.join(task.run_dir, "transcripts.jsonl"))


def test_echo_skeleton_client_structurally_clean_zero_pass(tmp_path, recorded_coverage):
    task = make_task(tmp_path, recorded_coverage)
    results = run_pipeline(task, EchoSkeletonClient(), max_iterations=1)
    (state, report) = results[0]
    assert report.build_rate == 1  # grafts succeed structurally
    assert report.pass_rate == 0  # stub semantics fail the asserts


def test_tests_never_sent_or_overwritten(tmp_path, recorded_coverage):
    task = make_task(tmp_path, recorded_coverage)
    client = ScriptedClient(reference_responses())
    run_pipeline(task, client, max_iterations=1)
    with open(os.path.join(task.run_dir, "transcripts.jsonl")) as fh:
        units = [json.loads(line)["unit"] for line in fh]
    assert all(not u.startswith("src/test/") for u in units)
    translation_dir = os.path.join(task.run_dir, "iter-1", "translation")
    assert not os.path.isdir(os.path.join(translation_dir, "tests"))


def test_determinism_identical_reports(tmp_path, recorded_coverage):
    task_a = make_task(tmp_path / "a", recorded_coverage)
    task_b = make_task(tmp_path / "b", recorded_coverage)
    client = ScriptedClient(reference_responses())
    run_pipeline(task_a, client, max_iterations=2)
    run_pipeline(task_b, client, max_iterations=2)
    report_a = open(os.path.join(task_a.run_dir, "iter-1", "repo-report.json")).read()
    report_b = open(os.path.join(task_b.run_dir, "iter-1", "repo-report.json")).read()
    assert report_a == report_b


def test_ablation_differs_only_in_prompt(tmp_path, recorded_coverage):
    """With a prompt-ignoring client, ablation and normal runs match."""
    client = ScriptedClient(reference_responses())
    task_a = make_task(tmp_path / "a", recorded_coverage)
    task_b = make_task(tmp_path / "b", recorded_coverage)
    normal = run_pipeline(task_a, client, max_iterations=1, ablation=False)
    ablated = run_pipeline(task_b, client, max_iterations=1, ablation=True)
    assert normal[0][1].to_json() == ablated[0][1].to_json()


def faulty_draw_unit() -> str:
    return open(os.path.join(CS_REFERENCE, "src/pixeldraw/FrameBuffer.cs")).read().replace(
        "pixels[GetIndex(x, y)] = color;", "pixels[getIndex(x, y)] = color;"
    )


def miscounting_canvas_unit() -> str:
    return open(os.path.join(CS_REFERENCE, "src/pixeldraw/Canvas.cs")).read().replace(
        "return painted;", "return painted + 1;"
    )


def test_scripted_repair_trend_three_iterations(tmp_path, recorded_coverage):
    """Iteration 1: a build fault; 2: a runtime fault; 3: clean. Counts shrink."""
    responses = reference_responses()
    fb_unit = "src/main/java/pixeldraw/FrameBuffer.java"
    canvas_unit = "src/main/java/pixeldraw/Canvas.java"
    responses_faulty = dict(responses)
    responses_faulty[fb_unit] = faulty_draw_unit()
    responses_faulty[canvas_unit] = miscounting_canvas_unit()
    client = ScriptedClient(
        responses_faulty,
        repairs={
            # seeing its CS0103 diagnostic repairs Draw; the canvas unit is
            # repaired only when its runtime assertion failure is fed back
            fb_unit: ("'getIndex'", responses[fb_unit]),
            canvas_unit: ("RUNTIME", responses[canvas_unit]),
        },
    )
    task = make_task(tmp_path, recorded_coverage)
    results = run_pipeline(task, client, max_iterations=3)
    assert len(results) == 3
    totals = [sum(r.error_histogram.values()) for _, r in results]
    assert totals[0] > totals[1] > totals[2] == 0
    assert results[0][1].build_rate < 1
    assert results[2][1].build_rate == 1 and results[2][1].pass_rate == 1
    # iteration 1 surfaced the motivation fault as an undefined-name code
    assert "CS0103" in results[0][1].error_histogram
    # iteration 2 surfaced the runtime fault once builds were repaired
    assert "RUNTIME" in results[1][1].error_histogram


def test_client_error_aborts_with_state_preserved(tmp_path, recorded_coverage):
    class FlakyClient:
        def __init__(self):
            self.calls = 0

        def send(self, messages, params):
            self.calls += 1
            if self.calls > 3:
                raise ConnectionError("transport down")
            return "```\nclass X { }\n```"

    task = make_task(tmp_path, recorded_coverage)
    with pytest.raises(ConnectionError):
        run_pipeline(task, FlakyClient(), max_iterations=1)
    # transcripts for the completed requests persist for resume
    with open(os.path.join(task.run_dir, "transcripts.jsonl")) as fh:
        assert len(fh.readlines()) == 3
