"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings. The bundled minitc commands serve as the configured
toolchain, so every criterion runs in this environment; swap the config's
command templates to drive javac/dotnet instead.
"""

import json
import os
import random
import shutil
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import (
    CS_REFERENCE,
    CS_SKELETON,
    CS_TEST_GLOBS,
    DIAG_CORPUS,
    FIXTURES,
    JAVA_REPO,
    JAVA_TEST_GLOBS,
    MINITC_BUILD,
    MINITC_TEST,
    RECORDED_TRACES,
    nontest_view,
)
from oracle_callgraph import CallGraphOracle
from skelgraft.grafting import assemble_whole_repo, graft, plan_grafts
from skelgraft.harness import (
    TestVerdict,
    ToolchainConfig,
    build_and_test,
    classify_diagnostics,
    compute_metrics,
    evaluate_plans,
    evaluate_whole_repo,
)
from skelgraft.instrument import (
    build_coverage,
    discover_test_ids,
    instrument_repo,
    run_traced_tests,
)
from skelgraft.skeletonize import is_test_path, skeletonize_repo, trivial_body
from skelgraft.structmap import DEFAULT_RULES
from skelgraft.syntax import parse_repo
from skelgraft.syntax.profiles import get_profile


@contextmanager
def criterion(number: int, name: str, budget_s: float):
    started = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {number:02d} {name}: FAIL "
              f"({time.monotonic() - started:.2f}s)")
        raise
    elapsed = time.monotonic() - started
    print(f"\nACCEPTANCE {number:02d} {name}: PASS ({elapsed:.2f}s, budget {budget_s:.0f}s)")
    assert elapsed < budget_s, f"criterion {number} exceeded its runtime budget"


def toolchain_cfg(parallelism=4):
    return ToolchainConfig(build_cmd=MINITC_BUILD, test_cmd=MINITC_TEST,
                           timeout_s=60, parallelism=parallelism)


def reference_eval(tmp_path, coverage, smap, skeleton_model, translated_model,
                   parallelism=4):
    plans = plan_grafts(coverage, smap, DEFAULT_RULES, workdir_root=str(tmp_path))
    items = [
        (p, graft(p, CS_SKELETON, skeleton_model, translated_model,
                  test_globs=CS_TEST_GLOBS))
        for p in plans
    ]
    return evaluate_plans("pixeldraw", 1, items, toolchain_cfg(parallelism)), items


# -- 1 ---------------------------------------------------------------------------

def test_criterion_01_skeleton_correctness(tmp_path, source_model):
    with criterion(1, "skeleton correctness", 5.0):
        # fixture shape preconditions
        nontest = nontest_view(source_model, JAVA_TEST_GLOBS)
        bodied = [f for f in nontest.functions if f.body_span is not None]
        assert len({c.fq_name for c in source_model.classes}) >= 3
        assert len(bodied) >= 10
        kinds = {f.kind for f in bodied}
        assert {"constructor", "static_initializer", "method"} <= kinds
        rets = {f.return_type for f in bodied}
        assert {"int", "boolean", "void"} <= rets
        assert any(r not in ("int", "boolean", "void", "ctor", "static-init",
                             "double", "char") for r in rets)  # reference returns

        out = str(tmp_path / "skel")
        manifest = skeletonize_repo(JAVA_REPO, out, "java", test_globs=JAVA_TEST_GLOBS,
                                    model=source_model)
        skel_model = parse_repo(out, "java")

        def signatures(model):
            return {
                (f.unit_path, f.owner_class, f.name, f.arity, f.param_types,
                 f.return_type, f.modifiers, f.kind)
                for f in model.functions
            }
        assert signatures(skel_model) == signatures(source_model)

        # every non-test body equals its trivial-body table entry
        profile = get_profile("java")
        for fn in skel_model.functions:
            if fn.body_span is None or is_test_path(fn.unit_path, JAVA_TEST_GLOBS):
                continue
            body = fn.body_span.slice(skel_model.unit(fn.unit_path).text).strip()
            if fn.kind == "static_initializer":
                continue  # assignments retained; checked separately below
            expected = trivial_body(fn.return_type, fn.kind, "java", fn.type_params)
            assert body.decode() == expected, fn.key

        # static init keeps exactly the assignments
        palette = skel_model.unit("src/main/java/pixeldraw/Palette.java").text
        init = next(f for f in skel_model.functions if f.kind == "static_initializer")
        kept = init.body_span.slice(palette)
        assert b"defaults = new int[4];" in kept
        assert b"for (" not in kept

        # byte-level check outside body spans
        for unit in source_model.units:
            if unit.language != "java" or is_test_path(unit.path, JAVA_TEST_GLOBS):
                continue
            skel_unit = skel_model.unit(unit.path)

            def outside(model, u_text, path, functions):
                spans = sorted(
                    (f.body_span.start, f.body_span.end)
                    for f in functions if f.body_span is not None
                )
                parts, cursor = [], 0
                for start, end in spans:
                    parts.append(u_text[cursor:start])
                    cursor = end
                parts.append(u_text[cursor:])
                return b"".join(parts)

            src_out = outside(source_model, unit.text, unit.path,
                              source_model.functions_in_unit(unit.path))
            skel_out = outside(skel_model, skel_unit.text, unit.path,
                               skel_model.functions_in_unit(unit.path))
            assert src_out == skel_out, unit.path
        assert len(manifest.entries) == len(
            [f for f in nontest.functions if f.body_span is not None]
        )


# -- 2 ---------------------------------------------------------------------------

def test_criterion_02_skeleton_compilability(tmp_path):
    with criterion(2, "skeleton compilability", 60.0):
        from skelgraft.harness import ProjectDescriptor, scaffold_project

        project = str(tmp_path / "proj")
        shutil.copytree(CS_SKELETON, project)
        os.remove(os.path.join(project, "build.yaml"))
        scaffold_project(project, ProjectDescriptor(
            name="pixeldraw", language="csharp", test_framework="nunit",
        ))
        proc = subprocess.run(
            [sys.executable, "-m", "skelgraft.minitc", "build", project],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stdout


# -- 3 ---------------------------------------------------------------------------

def test_criterion_03_coverage_oracle_recorded(source_model, source_nontest):
    with criterion(3, "coverage == call-graph oracle (recorded traces)", 5.0):
        trace_files = {
            name[: -len(".trace")]: os.path.join(RECORDED_TRACES, name)
            for name in sorted(os.listdir(RECORDED_TRACES))
            if name.endswith(".trace")
        }
        cov = build_coverage(trace_files=trace_files, model=source_nontest)
        oracle = CallGraphOracle(source_model)
        tests = {
            f"{fn.owner_class}.{fn.name}": fn
            for fn in source_model.functions
            if is_test_path(fn.unit_path, JAVA_TEST_GLOBS)
        }
        assert len(cov.entries) == 11
        for test_id, keys in sorted(cov.entries.items()):
            assert keys == frozenset(oracle.reachable_from_test(tests[test_id])), test_id


def test_criterion_03_coverage_oracle_live(tmp_path, source_model, source_nontest):
    with criterion(3, "coverage == call-graph oracle (live toolchain)", 120.0):
        instr = str(tmp_path / "instr")
        instrument_repo(JAVA_REPO, instr, "java", JAVA_TEST_GLOBS, model=source_model)
        test_ids = discover_test_ids(source_model, "java", JAVA_TEST_GLOBS)
        runs = run_traced_tests(instr, test_ids, MINITC_BUILD, MINITC_TEST,
                                trace_dir=str(tmp_path / "traces"))
        cov = build_coverage(trace_files={r.test_id: r.trace_path for r in runs},
                             model=source_nontest)
        oracle = CallGraphOracle(source_model)
        tests = {
            f"{fn.owner_class}.{fn.name}": fn
            for fn in source_model.functions
            if is_test_path(fn.unit_path, JAVA_TEST_GLOBS)
        }
        for test_id, keys in sorted(cov.entries.items()):
            assert keys == frozenset(oracle.reachable_from_test(tests[test_id])), test_id


# -- 4 ---------------------------------------------------------------------------

def test_criterion_04_motivation_scenario(tmp_path, recorded_coverage, structural_map,
                                           skeleton_model):
    with criterion(4, "motivation scenario (Draw fault)", 120.0):
        faulted = str(tmp_path / "faulted")
        shutil.copytree(CS_REFERENCE, faulted)
        path = os.path.join(faulted, "src/pixeldraw/FrameBuffer.cs")
        text = open(path).read()
        assert "pixels[GetIndex(x, y)] = color;" in text
        open(path, "w").write(
            text.replace("pixels[GetIndex(x, y)] = color;", "pixels[getIndex(x, y)] = color;")
        )
        faulted_model = parse_repo(faulted, "csharp")
        report, items = reference_eval(tmp_path / "work", recorded_coverage,
                                       structural_map, skeleton_model, faulted_model)

        draw_key = "FrameBuffer#draw"
        covers_draw = {
            test_id
            for test_id, keys in recorded_coverage.entries.items()
            if any(f"{k.owner_class}#{k.name}" == draw_key for k in keys)
        }
        failed = {v.test_id for v in report.verdicts if v.build == "failed"}
        assert failed == covers_draw  # exact set equality on affected tests
        for v in report.verdicts:
            if v.test_id not in covers_draw:
                assert v.build == "ok" and v.run == "passed", v.test_id
        get_only = {"FrameBufferTest.testGetIndex", "FrameBufferTest.testGetPixels"}
        assert get_only.isdisjoint(covers_draw)
        assert any(
            d.code == "CS0103" for v in report.verdicts for d in v.diagnostics
        )

        whole = str(tmp_path / "whole")
        assemble_whole_repo(CS_SKELETON, skeleton_model, faulted_model, whole,
                            test_globs=CS_TEST_GLOBS)
        verdict = evaluate_whole_repo(whole, toolchain_cfg())
        assert verdict == 0
        assert report.build_rate > 0  # partial credit vs the binary zero


# -- 5 ---------------------------------------------------------------------------

def test_criterion_05_metric_formulas():
    with criterion(5, "metric formulas vs fraction oracle", 1.0):
        def oracle(verdicts):
            built = [v for v in verdicts if v.build == "ok"]
            return (
                Fraction(len(built), len(verdicts)) if verdicts else Fraction(0),
                Fraction(sum(1 for v in built if v.run == "passed"), len(built))
                if built else Fraction(0),
            )

        rng = random.Random(20260809)
        for _ in range(50):
            n = rng.randint(0, 20)
            verdicts = []
            for i in range(n):
                build = rng.choice(["ok", "failed"])
                run = rng.choice(["passed", "failed"]) if build == "ok" else "not_run"
                verdicts.append(TestVerdict(f"T.t{i}", build, run))
            assert compute_metrics(verdicts) == oracle(verdicts)
        assert compute_metrics([]) == (Fraction(0), Fraction(0))
        zero_compiled = [TestVerdict("T.a", "failed", "not_run"),
                         TestVerdict("T.b", "failed", "not_run")]
        assert compute_metrics(zero_compiled) == (Fraction(0), Fraction(0))


# -- 6 ---------------------------------------------------------------------------

def test_criterion_06_isolation_fault_injection(tmp_path, recorded_coverage,
                                                structural_map, skeleton_model,
                                                reference_model):
    with criterion(6, "isolation under fault injection (exhaustive)", 600.0):
        clean_report, clean_items = reference_eval(
            tmp_path / "clean", recorded_coverage, structural_map, skeleton_model,
            reference_model,
        )
        clean_by_test = {v.test_id: v for v in clean_report.verdicts}
        clean_workdirs = {p.test_id: p.workdir for p, _ in clean_items}
        plans_by_test = {p.test_id: p for p, _ in clean_items}

        corruptible = [
            f for f in reference_model.functions
            if f.body_span is not None and not is_test_path(f.unit_path, CS_TEST_GLOBS)
        ]
        assert len(corruptible) == 22
        cfg = toolchain_cfg()
        pairs_checked = 0
        for fn in corruptible:
            corrupted_dir = str(tmp_path / "c" / fn.name.strip("<>:").replace(":", "_")
                                / fn.owner_class)
            shutil.copytree(CS_REFERENCE, corrupted_dir)
            unit_path = os.path.join(corrupted_dir, fn.unit_path)
            data = open(unit_path, "rb").read()
            corrupted = (
                data[: fn.body_span.start]
                + b" __corrupted_call_skelgraft(); "
                + data[fn.body_span.end :]
            )
            open(unit_path, "wb").write(corrupted)
            corrupted_model = parse_repo(corrupted_dir, "csharp")
            for test_id, plan in sorted(plans_by_test.items()):
                if fn.key in plan.target_keys:
                    continue  # corruption inside the plan may legitimately change things
                workdir = str(tmp_path / "w")
                if os.path.isdir(workdir):
                    shutil.rmtree(workdir)
                outcome = graft(plan, CS_SKELETON, skeleton_model, corrupted_model,
                                workdir=workdir, test_globs=CS_TEST_GLOBS)
                verdict = build_and_test(workdir, plan.target_test_id, cfg, outcome)
                clean = clean_by_test[test_id]
                assert (verdict.build, verdict.run) == (clean.build, clean.run), \
                    (test_id, str(fn.key))
                pairs_checked += 1
        assert pairs_checked > 100


# -- 7 ---------------------------------------------------------------------------

def test_criterion_07_reference_round_trip(tmp_path, recorded_coverage, structural_map,
                                           skeleton_model, reference_model):
    with criterion(7, "reference translation round trip", 120.0):
        report, _ = reference_eval(tmp_path / "work", recorded_coverage, structural_map,
                                   skeleton_model, reference_model)
        assert report.build_rate == Fraction(1)
        assert report.pass_rate == Fraction(1)
        whole = str(tmp_path / "whole")
        assemble_whole_repo(CS_SKELETON, skeleton_model, reference_model, whole,
                            test_globs=CS_TEST_GLOBS)
        verdict = evaluate_whole_repo(whole, toolchain_cfg())
        assert verdict == 1  # dominance: binary 1 implies both rates 1


# -- 8 ---------------------------------------------------------------------------

def test_criterion_08_diagnostics_classifier():
    with criterion(8, "diagnostics classifier vs answer key", 1.0):
        key = json.load(open(os.path.join(DIAG_CORPUS, "answer_key.json")))["cases"]
        assert len(key) >= 20
        names = " ".join(key)
        for required in ("cs0246", "cs1061", "cs0103", "cs0106", "nullref"):
            assert required in names
        expected_histogram: dict[str, int] = {}
        got_histogram: dict[str, int] = {}
        for name, expected in sorted(key.items()):
            raw = open(os.path.join(DIAG_CORPUS, "cases", name)).read()
            got = [d.code for d in classify_diagnostics(raw)]
            assert got == expected, name  # 100% agreement
            for code in expected:
                expected_histogram[code] = expected_histogram.get(code, 0) + 1
            for code in got:
                got_histogram[code] = got_histogram.get(code, 0) + 1
        assert got_histogram == expected_histogram


# -- 9 ---------------------------------------------------------------------------

def test_criterion_09_pipeline_trend(tmp_path, recorded_coverage):
    with criterion(9, "repair-loop trend over three iterations", 120.0):
        from skelgraft.report import aggregate, render
        from skelgraft.translate import ScriptedClient, TranslationTask, run_pipeline

        responses = {}
        for dirpath, _, filenames in os.walk(os.path.join(CS_REFERENCE, "src")):
            for name in filenames:
                full = os.path.join(dirpath, name)
                rel = os.path.relpath(full, CS_REFERENCE).replace(os.sep, "/")
                responses[DEFAULT_RULES.unmap_path(rel)] = open(full).read()
        fb = "src/main/java/pixeldraw/FrameBuffer.java"
        cv = "src/main/java/pixeldraw/Canvas.java"
        faulty = dict(responses)
        faulty[fb] = responses[fb].replace(
            "pixels[GetIndex(x, y)] = color;", "pixels[getIndex(x, y)] = color;"
        )
        faulty[cv] = responses[cv].replace("return painted;", "return painted + 1;")
        client = ScriptedClient(
            faulty,
            repairs={fb: ("'getIndex'", responses[fb]), cv: ("RUNTIME", responses[cv])},
        )
        task = TranslationTask(
            repo_id="pixeldraw",
            source_root=JAVA_REPO, source_profile="java",
            source_test_globs=JAVA_TEST_GLOBS,
            skeleton_root=CS_SKELETON, target_profile="csharp",
            target_test_globs=CS_TEST_GLOBS,
            rules=DEFAULT_RULES, coverage=recorded_coverage,
            toolchain=toolchain_cfg(), run_dir=str(tmp_path / "run"),
        )
        results = run_pipeline(task, client, max_iterations=3)
        assert len(results) == 3
        totals = [sum(r.error_histogram.values()) for _, r in results]
        assert all(a >= b for a, b in zip(totals, totals[1:]))  # non-increasing
        assert totals[0] > totals[-1] == 0

        bench = aggregate([r for _, r in results])
        md = render(bench, "markdown")
        assert "## Error trend" in md
        assert "| Error code | Iteration 1 | Iteration 2 | Iteration 3 |" in md
        assert "| **total** |" in md


# -- 10 --------------------------------------------------------------------------

def test_criterion_10_determinism(tmp_path):
    with criterion(10, "run-all determinism (byte-identical reports)", 120.0):
        from skelgraft.cli import main as cli_main

        config = os.path.join(FIXTURES, "configs", "pixeldraw-scripted.yaml")
        outputs = []
        for label in ("a", "b"):
            run_dir = str(tmp_path / label)
            rc = cli_main([
                "run-all", "--config", config, "--run-dir", run_dir,
                "--recorded-traces", RECORDED_TRACES,
            ])
            assert rc == 0
            repo_report = open(
                os.path.join(run_dir, "translate", "iter-1", "repo-report.json"), "rb"
            ).read()
            bench_report = open(
                os.path.join(run_dir, "report", "bench-report.json"), "rb"
            ).read()
            outputs.append((repo_report, bench_report))
        assert outputs[0][0] == outputs[1][0]
        assert outputs[0][1] == outputs[1][1]
