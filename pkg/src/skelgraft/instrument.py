"""Function-entry instrumentation and per-test coverage extraction.

Every non-test function body gets one prepended trace-emit statement that
references a generated runtime-helper class; the helper appends
``TRACE\\t<run_id>\\t<key>`` lines to the file named by $SKELGRAFT_TRACE_FILE.
Running each unit test in isolation and parsing the traces yields the
CoverageMap (test id -> set of executed source functions).
"""

from __future__ import annotations

import json
import logging
import os
import shutil
import subprocess
from dataclasses import dataclass, field

from skelgraft.errors import BuildFailed, SpawnError, ToolchainTimeout
from skelgraft.skeletonize import is_test_path, is_test_unit
from skelgraft.syntax import (
    FunctionKey,
    SourceUnit,
    Span,
    StructuralModel,
    parse_key,
    parse_repo,
    render_key,
    splice,
)
from skelgraft.syntax.profiles import get_profile
from skelgraft.util import (
    RUN_ID_ENV_VAR,
    TRACE_ENV_VAR,
    TRACE_RUNTIME_CLASS,
    fill_template,
)

log = logging.getLogger(__name__)

TRACE_PREFIX = "TRACE"
MARKER_BEGIN = "BEGIN"
MARKER_END = "END"

_JAVA_HELPER = """\
package {package};

public final class {cls} {{
    private {cls}() {{
    }}

    public static void emit(String key) {{
        String path = System.getenv("{env_var}");
        if (path == null) {{
            return;
        }}
        String run = System.getenv("{run_var}");
        if (run == null) {{
            run = "run";
        }}
        try (java.io.FileWriter w = new java.io.FileWriter(path, true)) {{
            w.write("TRACE\\t" + run + "\\t" + key + "\\n");
        }} catch (java.io.IOException e) {{
        }}
    }}
}}
"""

_CSHARP_HELPER = """\
namespace {package}
{{
    public static class {cls}
    {{
        public static void Emit(string key)
        {{
            string path = System.Environment.GetEnvironmentVariable("{env_var}");
            if (path == null)
            {{
                return;
            }}
            string run = System.Environment.GetEnvironmentVariable("{run_var}");
            if (run == null)
            {{
                run = "run";
            }}
            System.IO.File.AppendAllText(path, "TRACE\\t" + run + "\\t" + key + "\\n");
        }}
    }}
}}
"""


def instrument_repo(
    repo_dir: str,
    out_dir: str,
    profile_id: str,
    test_globs: tuple[str, ...],
    model: StructuralModel | None = None,
) -> list[FunctionKey]:
    """Copy ``repo_dir`` to ``out_dir`` with trace emission injected.

    Returns the keys of all instrumented functions. Test files and files in
    other languages are copied unchanged; one helper source file is added
    per package directory that contains instrumented units.
    """
    profile = get_profile(profile_id)
    if os.path.isdir(out_dir) and os.listdir(out_dir):
        raise FileExistsError(f"instrumented output dir not empty: {out_dir}")
    if model is None:
        model = parse_repo(repo_dir, profile_id)
    instrumented: list[FunctionKey] = []
    helper_dirs: dict[str, str] = {}  # dir -> package/namespace name
    for unit in model.units:
        dest = os.path.join(out_dir, unit.path)
        os.makedirs(os.path.dirname(dest), exist_ok=True)
        if unit.language != profile.profile_id:
            shutil.copyfile(os.path.join(repo_dir, unit.path), dest)
            continue
        functions = model.functions_in_unit(unit.path)
        if is_test_unit(unit, functions, profile, test_globs):
            shutil.copyfile(os.path.join(repo_dir, unit.path), dest)
            continue
        edits = []
        for fn in functions:
            if fn.body_span is None or fn.body_style == "expression":
                continue
            key = render_key(fn.key)
            indent = _body_indent(unit, fn.body_span)
            call = _emit_call(profile_id, key)
            insertion = unit.newline + indent + call.encode()
            edits.append((Span(fn.body_span.start, fn.body_span.start), insertion))
            instrumented.append(fn.key)
        if edits:
            unit_dir = os.path.dirname(unit.path)
            ns = _unit_namespace(model, unit.path)
            helper_dirs.setdefault(unit_dir, ns)
        with open(dest, "wb") as fh:
            fh.write(splice(unit.text, edits))
    for unit_dir, package in helper_dirs.items():
        _write_helper(out_dir, unit_dir, package, profile_id)
    return instrumented


def _emit_call(profile_id: str, key: str) -> str:
    method = "Emit" if profile_id == "csharp" else "emit"
    return f'{TRACE_RUNTIME_CLASS}.{method}("{key}");'


def _body_indent(unit: SourceUnit, span: Span) -> bytes:
    text = unit.text
    line_start = text.rfind(b"\n", 0, span.start) + 1
    i = line_start
    while i < len(text) and text[i : i + 1] in (b" ", b"\t"):
        i += 1
    indent = text[line_start:i]
    return indent + (b"\t" if b"\t" in indent else b"    ")


def _unit_namespace(model: StructuralModel, unit_path: str) -> str:
    for cls in model.classes:
        if cls.unit_path == unit_path and cls.namespace:
            return cls.namespace
    return ""


def _write_helper(out_dir: str, unit_dir: str, package: str, profile_id: str) -> None:
    profile = get_profile(profile_id)
    ext = profile.extensions[0]
    template = _CSHARP_HELPER if profile_id == "csharp" else _JAVA_HELPER
    text = template.format(
        package=package or "trace",
        cls=TRACE_RUNTIME_CLASS,
        env_var=TRACE_ENV_VAR,
        run_var=RUN_ID_ENV_VAR,
    )
    if not package and profile_id == "java":
        text = text.split("\n", 2)[2]  # default package: drop the package line
    path = os.path.join(out_dir, unit_dir, TRACE_RUNTIME_CLASS + ext)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def discover_test_ids(
    model: StructuralModel, profile_id: str, test_globs: tuple[str, ...]
) -> list[str]:
    """Test ids (Class.method) for every test-annotated method in test units."""
    profile = get_profile(profile_id)
    markers = profile.test_annotations
    found = []
    for fn in model.functions:
        if not is_test_path(fn.unit_path, test_globs):
            continue
        for ann in fn.annotations:
            name = ann.lstrip("@[").rstrip("]").split("(", 1)[0].strip()
            if name.split(".")[-1] in markers:
                found.append(f"{fn.owner_class}.{fn.name}")
                break
    return sorted(found)


# -- trace execution -----------------------------------------------------------


@dataclass
class TraceRun:
    test_id: str
    trace_path: str
    status: str  # ok | timeout
    output: str = ""


def run_traced_tests(
    instrumented_dir: str,
    test_ids: list[str],
    build_cmd: str,
    test_cmd: str,
    trace_dir: str,
    timeout_s: float = 120.0,
    mode: str = "per_test",
    env: dict | None = None,
) -> list[TraceRun]:
    """Execute tests against the instrumented repo, collecting trace files.

    per_test: one toolchain invocation per test id with a test filter and a
    distinct trace file. marker: a single invocation with BEGIN/END markers
    written into one stream. Raises BuildFailed if the instrumented repo
    does not build, and SpawnError if the toolchain cannot start at all.
    """
    os.makedirs(trace_dir, exist_ok=True)
    base_env = dict(os.environ)
    base_env.update(env or {})
    _run_build(build_cmd, instrumented_dir, timeout_s, base_env)
    runs: list[TraceRun] = []
    if mode == "marker":
        trace_path = os.path.join(trace_dir, "all.trace")
        open(trace_path, "w").close()
        run_env = dict(base_env)
        run_env[TRACE_ENV_VAR] = os.path.abspath(trace_path)
        run_env[RUN_ID_ENV_VAR] = "marker"
        cmd = fill_template(test_cmd, workdir=instrumented_dir, test_filter="*")
        try:
            proc = subprocess.run(
                cmd, shell=True, capture_output=True, text=True,
                timeout=timeout_s, env=run_env,
            )
        except subprocess.TimeoutExpired:
            raise ToolchainTimeout("<marker-run>", timeout_s) from None
        except FileNotFoundError as err:
            raise SpawnError(str(err)) from err
        for test_id in test_ids:
            runs.append(TraceRun(test_id, trace_path, "ok", proc.stdout))
        return runs
    for test_id in test_ids:
        trace_path = os.path.join(trace_dir, f"{test_id}.trace")
        open(trace_path, "w").close()
        run_env = dict(base_env)
        run_env[TRACE_ENV_VAR] = os.path.abspath(trace_path)
        run_env[RUN_ID_ENV_VAR] = test_id
        cmd = fill_template(test_cmd, workdir=instrumented_dir, test_filter=test_id)
        try:
            proc = subprocess.run(
                cmd, shell=True, capture_output=True, text=True,
                timeout=timeout_s, env=run_env,
            )
            runs.append(TraceRun(test_id, trace_path, "ok", proc.stdout))
        except subprocess.TimeoutExpired:
            log.warning("test %s timed out after %ss", test_id, timeout_s)
            runs.append(TraceRun(test_id, trace_path, "timeout"))
        except FileNotFoundError as err:
            raise SpawnError(str(err)) from err
    return runs


def _run_build(build_cmd: str, workdir: str, timeout_s: float, env: dict) -> None:
    cmd = fill_template(build_cmd, workdir=workdir)
    try:
        proc = subprocess.run(
            cmd, shell=True, capture_output=True, text=True, timeout=timeout_s, env=env,
        )
    except FileNotFoundError as err:
        raise SpawnError(str(err)) from err
    except subprocess.TimeoutExpired:
        raise ToolchainTimeout("<build>", timeout_s) from None
    if proc.returncode != 0:
        raise BuildFailed([], proc.stdout + proc.stderr)


# -- coverage -----------------------------------------------------------------


@dataclass
class CoverageMap:
    """test_id -> deduplicated set of executed source FunctionKeys."""

    entries: dict[str, frozenset[FunctionKey]] = field(default_factory=dict)
    malformed_lines: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                test_id: sorted(render_key(k) for k in keys)
                for test_id, keys in sorted(self.entries.items())
            },
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CoverageMap":
        data = json.loads(text)
        return cls(
            entries={
                test_id: frozenset(parse_key(k) for k in keys)
                for test_id, keys in data.items()
            }
        )


def build_coverage(
    trace_files: dict[str, str] | None = None,
    marked_stream: str | None = None,
    model: StructuralModel | None = None,
) -> CoverageMap:
    """Parse trace files (per-test mode) or a marked stream into a CoverageMap.

    Malformed lines are counted and logged, never fatal; a test with an
    empty trace maps to the empty set with a warning. When ``model`` is
    given, keys unknown to it are treated as malformed.
    """
    cov = CoverageMap()
    known: set[FunctionKey] | None = None
    if model is not None:
        known = {f.key for f in model.functions}

    def _keys_from_lines(lines: list[str], sink: set[FunctionKey]) -> None:
        for line in lines:
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[0] != TRACE_PREFIX:
                cov.malformed_lines += 1
                continue
            try:
                key = parse_key(parts[2])
            except ValueError:
                cov.malformed_lines += 1
                continue
            if known is not None and key not in known:
                cov.malformed_lines += 1
                continue
            sink.add(key)

    if marked_stream is not None:
        current: str | None = None
        buckets: dict[str, set[FunctionKey]] = {}
        with open(marked_stream, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if parts[0] == MARKER_BEGIN and len(parts) == 3:
                    current = parts[2]
                    buckets.setdefault(current, set())
                elif parts[0] == MARKER_END and len(parts) == 3:
                    current = None
                elif current is not None:
                    _keys_from_lines([line], buckets[current])
                else:
                    cov.malformed_lines += 1
        for test_id, keys in buckets.items():
            if not keys:
                log.warning("empty trace for test %s", test_id)
            cov.entries[test_id] = frozenset(keys)
        return cov

    for test_id, path in (trace_files or {}).items():
        keys: set[FunctionKey] = set()
        if os.path.isfile(path):
            with open(path, encoding="utf-8") as fh:
                _keys_from_lines(fh.readlines(), keys)
        if not keys:
            log.warning("empty trace for test %s", test_id)
        cov.entries[test_id] = frozenset(keys)
    if cov.malformed_lines:
        log.warning("%d malformed trace lines ignored", cov.malformed_lines)
    return cov
