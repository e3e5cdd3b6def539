"""Exception types shared across the pipeline stages."""

from __future__ import annotations


class SkelgraftError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(SkelgraftError):
    """Invalid or incomplete pipeline configuration."""


class MissingInputError(SkelgraftError):
    """A stage was invoked before its input artifacts exist."""

    def __init__(self, stage: str, missing: list[str]):
        self.stage = stage
        self.missing = missing
        super().__init__(f"stage '{stage}' is missing inputs: {', '.join(missing)}")


class UnknownProfileError(SkelgraftError):
    """Requested language profile id is not registered."""


class ParseError(SkelgraftError):
    """A source unit could not be structurally parsed."""

    def __init__(self, path: str, position: int, message: str):
        self.path = path
        self.position = position
        self.message = message
        super().__init__(f"{path}@{position}: {message}")


class SpanOutOfBounds(SkelgraftError):
    """An edit span does not fit inside the target text."""


class OverlappingEdits(SkelgraftError):
    """Two edit spans overlap; splice requires pairwise disjoint spans."""


class NotFound(SkelgraftError):
    """No declaration matches the requested function key."""


class Ambiguous(SkelgraftError):
    """More than one declaration matches; signals an upstream invariant violation."""


class AmbiguousMatch(SkelgraftError):
    """Structural mapping cannot disambiguate overload candidates."""

    def __init__(self, source_key: object, candidates: list[object]):
        self.source_key = source_key
        self.candidates = candidates
        super().__init__(f"{source_key} matches {len(candidates)} target overloads")


class BuildFailed(SkelgraftError):
    """A prerequisite build step exited nonzero."""

    def __init__(self, diagnostics: list, output: str = ""):
        self.diagnostics = diagnostics
        self.output = output
        super().__init__(f"build failed with {len(diagnostics)} diagnostics")


class ToolchainTimeout(SkelgraftError):
    """A toolchain invocation exceeded its configured time limit."""

    def __init__(self, test_id: str, limit_s: float):
        self.test_id = test_id
        self.limit_s = limit_s
        super().__init__(f"{test_id}: toolchain exceeded {limit_s}s")


class SpawnError(SkelgraftError):
    """The toolchain command itself could not be started (missing binary)."""


class TemplateError(SkelgraftError):
    """Project scaffolding descriptor is missing required fields."""


class DuplicateRun(SkelgraftError):
    """Two RepoReports share the same (repo_id, iteration)."""

    def __init__(self, repo_id: str, iteration: int):
        super().__init__(f"duplicate run: {repo_id} iteration {iteration}")


class EmptyCompletion(SkelgraftError):
    """The model returned an empty completion."""
