"""Build/test entry points for the minitc CLI."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

from skelgraft.minitc import RUN_ID_ENV_VAR, TRACE_ENV_VAR
from skelgraft.minitc.interp import Interp, InterpError, LangThrow
from skelgraft.minitc.project import ClassInfo, Project, load_project
from skelgraft.minitc.resolve import check_project


def run_build(workdir: str, out=print) -> int:
    project = load_project(workdir)
    diags = check_project(project)
    language = project.profile.profile_id
    for diag in diags:
        out(diag.format(language))
    if diags:
        if language == "csharp":
            out("Build FAILED.")
            out(f"    {len(diags)} Error(s)")
        else:
            out(f"{len(diags)} error" + ("s" if len(diags) != 1 else ""))
        return 1
    if language == "csharp":
        out("Build succeeded.")
        out("    0 Warning(s)")
        out("    0 Error(s)")
    else:
        out("BUILD SUCCESS")
    return 0


@dataclass
class TestResult:
    test_id: str
    passed: bool
    message: str
    duration_ms: int


def _test_annotation_names(project: Project) -> frozenset[str]:
    return project.profile.test_annotations


def discover_tests(project: Project) -> list[tuple[ClassInfo, str]]:
    """All (class, method name) pairs carrying a test annotation."""
    markers = _test_annotation_names(project)
    found = []
    for cls in sorted(project.classes.values(), key=lambda c: c.name):
        if not cls.is_test_unit:
            continue
        for (name, _arity), minfo in sorted(cls.methods.items()):
            for ann in minfo.decl.annotations:
                stripped = ann.lstrip("@[").rstrip("]").split("(", 1)[0].strip()
                if stripped.split(".")[-1] in markers:
                    found.append((cls, name))
                    break
    return found


def _matches(cls_name: str, method: str, pattern: str) -> bool:
    if pattern in ("", "*"):
        return True
    test_id = f"{cls_name}.{method}"
    if pattern == test_id:
        return True
    if pattern == cls_name:
        return True
    return test_id.endswith("." + pattern)


def run_single_test(project: Project, cls: ClassInfo, method: str) -> TestResult:
    test_id = f"{cls.name}.{method}"
    started = time.monotonic()
    interp = Interp(project)
    try:
        interp.call_named(cls.name, method, [])
        passed, message = True, ""
    except LangThrow as thrown:
        if thrown.is_assertion:
            passed, message = False, thrown.message
        else:
            prefix = "System." if project.profile.profile_id == "csharp" else "java.lang."
            passed, message = False, f"Unhandled exception: {prefix}{thrown.type_name}: {thrown.message}"
    except InterpError as err:
        passed, message = False, f"Execution error: {err}"
    duration_ms = int((time.monotonic() - started) * 1000)
    return TestResult(test_id, passed, message, duration_ms)


def run_tests(workdir: str, test_filter: str = "*", marker: bool = False,
              list_only: bool = False, out=print) -> int:
    project = load_project(workdir)
    if project.parse_failures:
        for path, err in project.parse_failures:
            out(f"error: cannot load {path}: {err.message}")
        return 2
    tests = [
        (cls, method)
        for cls, method in discover_tests(project)
        if _matches(cls.name, method, test_filter)
    ]
    if list_only:
        for cls, method in tests:
            out(f"{cls.name}.{method}")
        return 0
    if not tests:
        out(f"error: no tests match filter '{test_filter}'")
        return 2
    trace_path = os.environ.get(TRACE_ENV_VAR)
    run_id = os.environ.get(RUN_ID_ENV_VAR, "run")
    failed = 0
    for cls, method in tests:
        test_id = f"{cls.name}.{method}"
        if marker and trace_path:
            _append(trace_path, f"BEGIN\t{run_id}\t{test_id}\n")
        result = run_single_test(project, cls, method)
        if marker and trace_path:
            _append(trace_path, f"END\t{run_id}\t{test_id}\n")
        status = "Passed" if result.passed else "Failed"
        out(f"{status} {result.test_id} [{result.duration_ms} ms]")
        if not result.passed:
            failed += 1
            out(f"  Error Message: {result.message}")
    passed = len(tests) - failed
    banner = "Passed!" if failed == 0 else "Failed!"
    out(f"{banner}  - Failed: {failed}, Passed: {passed}, Skipped: 0, Total: {len(tests)}")
    return 0 if failed == 0 else 1


def _append(path: str, line: str) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(line)
