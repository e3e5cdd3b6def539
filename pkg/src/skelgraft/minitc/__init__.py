"""minitc: a miniature build/test toolchain for the bundled fixture languages.

Provides ``build`` (structural parse + reference resolution with
compiler-style diagnostics) and ``test`` (tree-walking execution of
JUnit/NUnit-style test methods) over a working directory described by a
build.yaml. It exists so the evaluation harness can drive a real
subprocess toolchain in environments without javac or dotnet; commands::

    python3 -m skelgraft.minitc build <workdir>
    python3 -m skelgraft.minitc test <workdir> --filter Class.Method

Trace emission: the generated trace-runtime class is executed natively,
appending lines to the file named by $SKELGRAFT_TRACE_FILE.
"""

from skelgraft.util import RUN_ID_ENV_VAR, TRACE_ENV_VAR, TRACE_RUNTIME_CLASS

__all__ = ["RUN_ID_ENV_VAR", "TRACE_ENV_VAR", "TRACE_RUNTIME_CLASS"]
