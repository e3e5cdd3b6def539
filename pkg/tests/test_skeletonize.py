"""Skeleton extraction: trivial bodies, static-init pruning, structure preservation."""

import os
import subprocess
import sys

import pytest

from conftest import CS_REFERENCE, CS_SKELETON, CS_TEST_GLOBS, JAVA_REPO, JAVA_TEST_GLOBS
from skelgraft.skeletonize import (
    SkeletonManifest,
    TrivialBodyRule,
    default_rules,
    glob_to_regex,
    is_test_path,
    skeletonize_repo,
    skeletonize_static_init,
    skeletonize_unit_text,
    trivial_body,
)
from skelgraft.syntax import SourceUnit, parse_repo, parse_unit
from skelgraft.syntax.profiles import get_profile


# -- trivial_body table --------------------------------------------------------

@pytest.mark.parametrize(
    "return_type,kind,profile,expected",
    [
        ("int", "method", "java", "return 0;"),
        ("Palette", "method", "java", "return null;"),
        ("int[]", "method", "java", "return null;"),
        ("String", "method", "java", "return null;"),
        ("boolean", "method", "java", "return false;"),
        ("double", "method", "java", "return 0.0;"),
        ("char", "method", "java", "return '\\0';"),
        ("void", "method", "java", ""),
        ("ctor", "constructor", "java", ""),
        ("static-init", "static_initializer", "java", ""),
        ("int", "method", "csharp", "return 0;"),
        ("bool", "method", "csharp", "return false;"),
        ("string", "method", "csharp", "return null;"),
        ("void", "method", "csharp", ""),
    ],
)
def test_trivial_body_table(return_type, kind, profile, expected):
    assert trivial_body(return_type, kind, profile) == expected


def test_generic_return_type_uses_profile_fallback():
    assert trivial_body("T", "method", "java", type_params=("T",)) == "return null;"
    assert trivial_body("T", "method", "csharp", type_params=("T",)) == "return default;"


def test_rule_table_is_total():
    # arbitrary unknown types resolve through the catch-all reference rule
    for name in ("Foo", "Map<String,Integer>", "int[][]", "some.pkg.Type"):
        assert trivial_body(name, "method", "java") == "return null;"


def test_custom_rule_overrides():
    rules = (TrivialBodyRule("int", "return 42;"),) + default_rules(get_profile("java"))
    assert trivial_body("int", "method", "java", rules=rules) == "return 42;"


# -- static initializer pruning ---------------------------------------------------

def test_static_init_keeps_assignment_drops_control_flow():
    body = b"x = 1; if (y) { z = 2; }"
    assert skeletonize_static_init(body, "java").strip() == b"x = 1;"


def test_static_init_empty():
    assert skeletonize_static_init(b"", "java") == b""


def test_static_init_keeps_call_rhs_assignments():
    # retained by statement shape, not RHS purity
    body = b"a = f(); b = 2;"
    assert skeletonize_static_init(body, "java") == b"a = f();\nb = 2;"


def test_static_init_drops_loops_and_bare_calls():
    body = b"""
        values = new int[3];
        for (int i = 0; i < 3; i = i + 1) { values[i] = i; }
        register();
        total = 9;
    """
    kept = skeletonize_static_init(body, "java")
    assert kept == b"values = new int[3];\ntotal = 9;"


def test_static_init_keeps_initialized_declarations():
    body = b"int cached = compute(); helper(); cached = cached + 1;"
    kept = skeletonize_static_init(body, "java")
    assert b"int cached = compute();" in kept
    assert b"helper();" not in kept
    assert b"cached = cached + 1;" in kept


# -- repo skeletonization -----------------------------------------------------------

@pytest.fixture(scope="module")
def skeleton(tmp_path_factory):
    out = str(tmp_path_factory.mktemp("skel"))
    os.rmdir(out)
    manifest = skeletonize_repo(JAVA_REPO, out, "java", test_globs=JAVA_TEST_GLOBS)
    return out, manifest


def test_manifest_covers_every_nontest_body(skeleton, source_model):
    _, manifest = skeleton
    expected = {
        fn.key
        for fn in source_model.functions
        if fn.body_span is not None and not is_test_path(fn.unit_path, JAVA_TEST_GLOBS)
    }
    assert set(manifest.keys()) == expected
    assert len(manifest.entries) == 22


def test_reparse_preserves_signatures(skeleton, source_model):
    out, _ = skeleton
    skel_model = parse_repo(out, "java")
    def sig_view(model):
        return {
            (f.unit_path, f.owner_class, f.name, f.arity, f.param_types,
             f.return_type, f.modifiers, f.kind, f.annotations)
            for f in model.functions
        }
    assert sig_view(skel_model) == sig_view(source_model)
    assert {(c.fq_name, c.kind) for c in skel_model.classes} == \
        {(c.fq_name, c.kind) for c in source_model.classes}


def test_field_declarations_preserved(skeleton, source_model):
    out, _ = skeleton
    skel_model = parse_repo(out, "java")
    def fields(model):
        return {(f.owner_class, f.name, f.has_initializer) for f in model.fields_decls}
    assert fields(skel_model) == fields(source_model)


def test_bytes_outside_body_spans_unchanged(skeleton, source_model):
    out, _ = skeleton
    for unit in source_model.units:
        if unit.language != "java" or is_test_path(unit.path, JAVA_TEST_GLOBS):
            continue
        skeleton_bytes = open(os.path.join(out, unit.path), "rb").read()
        spans = sorted(
            (f.body_span.start, f.body_span.end)
            for f in source_model.functions_in_unit(unit.path)
            if f.body_span is not None
        )
        src_outside, cursor = [], 0
        for start, end in spans:
            src_outside.append(unit.text[cursor:start])
            cursor = end
        src_outside.append(unit.text[cursor:])
        skel_model = parse_unit(
            SourceUnit(unit.path, "java", skeleton_bytes, unit.newline_style), "java"
        )
        skel_spans = sorted(
            (f.body_span.start, f.body_span.end)
            for f in skel_model.functions
            if f.body_span is not None
        )
        skel_outside, cursor = [], 0
        for start, end in skel_spans:
            skel_outside.append(skeleton_bytes[cursor:start])
            cursor = end
        skel_outside.append(skeleton_bytes[cursor:])
        assert b"".join(src_outside) == b"".join(skel_outside), unit.path


def test_test_files_copied_byte_identically(skeleton):
    out, manifest = skeleton
    rel = "src/test/java/pixeldraw/FrameBufferTest.java"
    assert open(os.path.join(out, rel), "rb").read() == \
        open(os.path.join(JAVA_REPO, rel), "rb").read()
    assert not any(e["unit"].startswith("src/test/") for e in manifest.entries)


def test_other_language_files_copied(skeleton):
    out, _ = skeleton
    assert open(os.path.join(out, "build.yaml"), "rb").read() == \
        open(os.path.join(JAVA_REPO, "build.yaml"), "rb").read()


def test_idempotence(skeleton, tmp_path):
    out, _ = skeleton
    again = str(tmp_path / "again")
    skeletonize_repo(out, again, "java", test_globs=JAVA_TEST_GLOBS)
    for dirpath, _, filenames in os.walk(out):
        for name in filenames:
            first = os.path.join(dirpath, name)
            second = os.path.join(again, os.path.relpath(first, out))
            assert open(first, "rb").read() == open(second, "rb").read(), first


def test_skeleton_builds_under_toolchain(skeleton):
    out, _ = skeleton
    proc = subprocess.run(
        [sys.executable, "-m", "skelgraft.minitc", "build", out],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stdout


def test_repo_of_only_test_files_is_copied_verbatim(tmp_path):
    src = tmp_path / "src"
    (src / "test").mkdir(parents=True)
    (src / "test" / "OnlyTest.java").write_text(
        "class OnlyTest { void t() { int x = 1; } }"
    )
    out = tmp_path / "out"
    manifest = skeletonize_repo(str(src), str(out), "java")
    assert manifest.entries == []
    assert (out / "test" / "OnlyTest.java").read_bytes() == \
        (src / "test" / "OnlyTest.java").read_bytes()


def test_annotation_based_test_detection(tmp_path):
    src = tmp_path / "repo"
    src.mkdir()
    (src / "Checks.java").write_text(
        "import org.junit.Test;\n"
        "public class Checks {\n"
        "    @Test\n"
        "    public void verifies() { int x = 1; }\n"
        "}\n"
    )
    out = tmp_path / "out"
    manifest = skeletonize_repo(str(src), str(out), "java", test_globs=())
    assert manifest.entries == []  # detected by annotation despite no glob


def test_output_dir_must_be_empty(tmp_path):
    out = tmp_path / "occupied"
    out.mkdir()
    (out / "junk").write_text("x")
    with pytest.raises(FileExistsError):
        skeletonize_repo(JAVA_REPO, str(out), "java")


def test_manifest_json_round_trip(skeleton):
    _, manifest = skeleton
    again = SkeletonManifest.from_json(manifest.to_json())
    assert sorted(again.entries, key=lambda e: (e["unit"], e["key"])) == \
        sorted(manifest.entries, key=lambda e: (e["unit"], e["key"]))
    assert again.test_globs == manifest.test_globs


def test_bundled_cs_skeleton_matches_regeneration(tmp_path, reference_model):
    """The checked-in target skeleton is exactly skeletonize(reference)."""
    regen = str(tmp_path / "regen")
    skeletonize_repo(CS_REFERENCE, regen, "csharp", test_globs=CS_TEST_GLOBS,
                     model=reference_model)
    for dirpath, _, filenames in os.walk(CS_SKELETON):
        for name in filenames:
            bundled = os.path.join(dirpath, name)
            rel = os.path.relpath(bundled, CS_SKELETON)
            assert open(bundled, "rb").read() == open(os.path.join(regen, rel), "rb").read(), rel


def test_glob_translation():
    assert is_test_path("src/test/java/A.java", ("**/test/**",))
    assert is_test_path("a/FooTest.java", ("**/*Test*",))
    assert not is_test_path("src/main/java/A.java", ("**/test/**", "**/*Test*"))
    assert glob_to_regex("tests/**").match("tests/deep/file.cs")


def test_expression_bodied_member_stubbed():
    unit = SourceUnit("a/C.cs", "csharp", b"class C { public int Twice(int x) => x * 2; }")
    out = skeletonize_unit_text(unit, "csharp")
    assert out == b"class C { public int Twice(int x) => 0; }"
