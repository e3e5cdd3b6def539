"""Small shared helpers and cross-stage constants."""

from __future__ import annotations

import shlex

# Trace transport contract shared by the instrumenter (which generates the
# runtime-helper source) and any toolchain that executes it.
TRACE_ENV_VAR = "SKELGRAFT_TRACE_FILE"
RUN_ID_ENV_VAR = "SKELGRAFT_RUN_ID"
TRACE_RUNTIME_CLASS = "SkelgraftTraceRuntime"


def fill_template(template: str, **values: str) -> str:
    """Substitute command-template placeholders with shell-quoted values."""
    return template.format(**{k: shlex.quote(v) for k, v in values.items()})
