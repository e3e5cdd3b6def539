"""Fixture toolchain: resolver diagnostics and interpreter semantics."""

import os
import subprocess
import sys

from conftest import CS_REFERENCE, JAVA_REPO


def write_repo(tmp_path, language, files, framework=None):
    framework = framework or ("nunit" if language == "csharp" else "junit")
    (tmp_path / "build.yaml").write_text(
        f"project: t\nlanguage: {language}\ntest_framework: {framework}\n"
        "source_roots:\n  - src\ntest_roots:\n  - tests\ndependencies: []\n"
    )
    for rel, text in files.items():
        path = tmp_path / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return str(tmp_path)


def minitc(*args):
    return subprocess.run(
        [sys.executable, "-m", "skelgraft.minitc", *args],
        capture_output=True, text=True,
    )


# -- build/resolve ---------------------------------------------------------------

def test_fixture_repos_build_clean():
    assert minitc("build", JAVA_REPO).returncode == 0
    assert minitc("build", CS_REFERENCE).returncode == 0


def test_unresolved_unqualified_call_cs0103(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { void F() { missing(); } }",
    })
    proc = minitc("build", repo)
    assert proc.returncode == 1
    assert "error CS0103" in proc.stdout
    assert "'missing'" in proc.stdout
    assert "src/A.cs(" in proc.stdout


def test_missing_instance_member_cs1061(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { void F() { B b = new B(); b.Gone(); } }",
        "src/B.cs": "class B { public void Here() { } }",
    })
    proc = minitc("build", repo)
    assert proc.returncode == 1
    assert "error CS1061" in proc.stdout
    assert "'B' does not contain a definition for 'Gone'" in proc.stdout


def test_missing_static_member_cs0117(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { void F() { B.Gone(); } }",
        "src/B.cs": "class B { public static void Here() { } }",
    })
    proc = minitc("build", repo)
    assert "error CS0117" in proc.stdout


def test_wrong_ctor_arity_cs1729(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { void F() { B b = new B(1, 2); } }",
        "src/B.cs": "class B { public B(int x) { } }",
    })
    proc = minitc("build", repo)
    assert "error CS1729" in proc.stdout


def test_wrong_arity_overload_cs1501(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { int G(int x) { return x; } void F() { G(1, 2); } }",
    })
    proc = minitc("build", repo)
    assert "error CS1501" in proc.stdout


def test_unknown_external_types_tolerated(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { void F() { var w = new External.Widget(1); w.Spin(); } }",
    })
    assert minitc("build", repo).returncode == 0


def test_body_syntax_error_cs1525(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { void F() { int x = ; } }",
    })
    proc = minitc("build", repo)
    assert "error CS1525" in proc.stdout


def test_java_diagnostic_format(tmp_path):
    repo = write_repo(tmp_path, "java", {
        "src/A.java": "class A { void f() { missing(); } }",
    })
    proc = minitc("build", repo)
    assert proc.returncode == 1
    assert "src/A.java:1: error: cannot find symbol" in proc.stdout
    assert "symbol:   method missing" in proc.stdout
    assert "1 error" in proc.stdout


# -- test runner --------------------------------------------------------------

def test_runner_filter_and_exit_codes(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { public int Two() { return 2; } }",
        "tests/ATest.cs": (
            "using NUnit.Framework;\n"
            "public class ATest {\n"
            "    [Test]\n"
            "    public void TestTwo() { Assert.AreEqual(2, new A().Two()); }\n"
            "    [Test]\n"
            "    public void TestWrong() { Assert.AreEqual(3, new A().Two()); }\n"
            "}\n"
        ),
    })
    ok = minitc("test", repo, "--filter", "ATest.TestTwo")
    assert ok.returncode == 0
    assert "Passed ATest.TestTwo" in ok.stdout
    bad = minitc("test", repo, "--filter", "ATest.TestWrong")
    assert bad.returncode == 1
    assert "Expected: 3 But was: 2" in bad.stdout
    everything = minitc("test", repo)
    assert everything.returncode == 1
    assert "Failed: 1, Passed: 1" in everything.stdout
    missing = minitc("test", repo, "--filter", "ATest.Nope")
    assert missing.returncode == 2


def test_runner_list(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { }",
        "tests/ATest.cs": (
            "using NUnit.Framework;\n"
            "public class ATest { [Test] public void TestA() { Assert.IsTrue(true); } }\n"
        ),
    })
    proc = minitc("test", repo, "--list")
    assert proc.stdout.strip() == "ATest.TestA"


# -- interpreter semantics ------------------------------------------------------

def run_java_test(tmp_path, body, helpers=""):
    repo = write_repo(tmp_path, "java", {
        "src/Helpers.java": f"class Helpers {{ {helpers} }}",
        "tests/T.java": (
            "import org.junit.Test;\nimport org.junit.Assert;\n"
            f"public class T {{ @Test public void t() {{ {body} }} }}"
        ),
    })
    return minitc("test", repo, "--filter", "T.t")


def test_integer_division_truncates_toward_zero(tmp_path):
    proc = run_java_test(tmp_path, "Assert.assertEquals(-2, -7 / 3); Assert.assertEquals(2, 7 / 3);")
    assert proc.returncode == 0, proc.stdout


def test_modulo_keeps_dividend_sign(tmp_path):
    proc = run_java_test(tmp_path, "Assert.assertEquals(-1, -7 % 3); Assert.assertEquals(1, 7 % 3);")
    assert proc.returncode == 0, proc.stdout


def test_string_concat_renders_like_source_language(tmp_path):
    proc = run_java_test(
        tmp_path,
        'Assert.assertEquals("v:3", "v:" + 3);'
        'Assert.assertEquals("b:true", "b:" + true);'
        'Assert.assertEquals("n:null", "n:" + null);'
        'Assert.assertEquals("d:1.5", "d:" + 1.5);',
    )
    assert proc.returncode == 0, proc.stdout


def test_array_defaults_and_bounds(tmp_path):
    proc = run_java_test(
        tmp_path,
        "int[] xs = new int[3]; Assert.assertEquals(0, xs[2]); xs[1] = 9;"
        " Assert.assertEquals(9, xs[1]); Assert.assertEquals(3, xs.length);",
    )
    assert proc.returncode == 0, proc.stdout
    oob_dir = tmp_path / "oob"
    oob_dir.mkdir()
    oob = run_java_test(oob_dir, "int[] xs = new int[1]; int y = xs[5];")
    assert oob.returncode == 1
    assert "ArrayIndexOutOfBounds" in oob.stdout


def test_static_init_runs_once_in_textual_order(tmp_path):
    helpers = (
        "static int a; static int b; "
        "static { a = 1; b = a + 1; } "
        "static int sum() { return a + b; }"
    )
    proc = run_java_test(tmp_path, "Assert.assertEquals(3, Helpers.sum());", helpers)
    assert proc.returncode == 0, proc.stdout


def test_uncaught_exception_fails_java_style(tmp_path):
    helpers = 'static void boom() { throw new IllegalStateException("bad state"); }'
    proc = run_java_test(tmp_path, "Helpers.boom();", helpers)
    assert proc.returncode == 1
    assert "java.lang.IllegalStateException: bad state" in proc.stdout


def test_ternary_compound_assign_and_incdec(tmp_path):
    proc = run_java_test(
        tmp_path,
        "int x = 5; x += 3; Assert.assertEquals(8, x);"
        " int y = x > 7 ? 1 : 0; Assert.assertEquals(1, y);"
        " int i = 0; i++; ++i; Assert.assertEquals(2, i);",
    )
    assert proc.returncode == 0, proc.stdout


def test_marker_mode_writes_begin_end(tmp_path):
    repo = write_repo(tmp_path, "csharp", {
        "src/A.cs": "class A { }",
        "tests/ATest.cs": (
            "using NUnit.Framework;\n"
            "public class ATest { [Test] public void TestA() { Assert.IsTrue(true); } }\n"
        ),
    })
    trace = tmp_path / "m.trace"
    env = dict(os.environ)
    env["SKELGRAFT_TRACE_FILE"] = str(trace)
    env["SKELGRAFT_RUN_ID"] = "m1"
    proc = subprocess.run(
        [sys.executable, "-m", "skelgraft.minitc", "test", repo, "--marker"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0
    lines = trace.read_text().splitlines()
    assert lines[0] == "BEGIN\tm1\tATest.TestA"
    assert lines[-1] == "END\tm1\tATest.TestA"
