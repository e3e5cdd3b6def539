"""Pipeline configuration: YAML file plus CLI flag overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import yaml

from skelgraft.errors import ConfigError
from skelgraft.harness import DEFAULT_CODE_PATTERN, ToolchainConfig
from skelgraft.structmap import RenameRules


@dataclass
class SideConfig:
    root: str
    profile: str
    test_globs: tuple[str, ...]
    toolchain: ToolchainConfig


@dataclass
class ClientConfig:
    kind: str = "none"  # none | scripted-dir | echo-skeleton | http
    translation_dir: str = ""
    endpoint: str = ""
    model: str = ""
    api_key_env: str = "SKELGRAFT_API_KEY"
    timeout_s: float = 120.0
    rate_limit_per_s: float = 0.0
    temperature: float = 0.0
    max_tokens: int = 4096


@dataclass
class PipelineConfig:
    repo_id: str
    source: SideConfig
    target: SideConfig
    rules: RenameRules
    client: ClientConfig = field(default_factory=ClientConfig)
    translation_root: str = ""  # prebuilt translation (evaluate without a client)
    max_iterations: int = 3
    parallelism: int = 2
    run_root: str = "runs"
    config_dir: str = "."

    def resolve(self, path: str) -> str:
        if not path or os.path.isabs(path):
            return path
        return os.path.normpath(os.path.join(self.config_dir, path))


def _toolchain_from(data: dict, parallelism: int) -> ToolchainConfig:
    try:
        return ToolchainConfig(
            build_cmd=data["build_cmd"],
            test_cmd=data["test_cmd"],
            timeout_s=float(data.get("timeout_s", 120)),
            env=dict(data.get("env", {})),
            parallelism=int(data.get("parallelism", parallelism)),
            code_pattern=data.get("code_pattern", DEFAULT_CODE_PATTERN),
        )
    except KeyError as err:
        raise ConfigError(f"toolchain config missing {err.args[0]!r}") from None


def _side_from(data: dict, key: str, parallelism: int) -> SideConfig:
    try:
        root = data["root"] if "root" in data else data["skeleton_root"]
        return SideConfig(
            root=root,
            profile=data["profile"],
            test_globs=tuple(data.get("test_globs", ("**/test/**", "**/*Test*"))),
            toolchain=_toolchain_from(data["toolchain"], parallelism),
        )
    except KeyError as err:
        raise ConfigError(f"{key} config missing {err.args[0]!r}") from None


def load_config(path: str, overrides: dict | None = None) -> PipelineConfig:
    """Parse and validate the YAML pipeline config.

    Referenced input paths must exist at validation time (output dirs are
    exempt). Raises ConfigError with a field-specific message.
    """
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh) or {}
        except yaml.YAMLError as err:
            raise ConfigError(f"config is not valid YAML: {err}") from None
    overrides = overrides or {}

    for req in ("repo_id", "source", "target", "mapping"):
        if req not in data:
            raise ConfigError(f"config missing top-level {req!r}")

    parallelism = int(overrides.get("parallelism") or data.get("parallelism", 2))
    mapping = data["mapping"]
    rules = RenameRules(
        source_ext=mapping.get("source_ext", ".java"),
        target_ext=mapping.get("target_ext", ".cs"),
        path_prefix_map=tuple(sorted((mapping.get("path_prefix_map") or {}).items())),
        method_case=mapping.get("method_case", "pascal"),
        type_name_map=tuple(sorted((mapping.get("type_name_map") or {}).items())),
    )
    client_data = data.get("client", {})
    client = ClientConfig(
        kind=client_data.get("kind", "none"),
        translation_dir=client_data.get("translation_dir", ""),
        endpoint=client_data.get("endpoint", ""),
        model=client_data.get("model", ""),
        api_key_env=client_data.get("api_key_env", "SKELGRAFT_API_KEY"),
        timeout_s=float(client_data.get("timeout_s", 120)),
        rate_limit_per_s=float(client_data.get("rate_limit_per_s", 0)),
        temperature=float(client_data.get("temperature", 0)),
        max_tokens=int(client_data.get("max_tokens", 4096)),
    )

    cfg = PipelineConfig(
        repo_id=data["repo_id"],
        source=_side_from(data["source"], "source", parallelism),
        target=_side_from(data["target"], "target", parallelism),
        rules=rules,
        client=client,
        translation_root=data.get("translation_root", ""),
        max_iterations=int(overrides.get("iterations") or data.get("max_iterations", 3)),
        parallelism=parallelism,
        run_root=overrides.get("run_root") or data.get("run_root", "runs"),
        config_dir=os.path.dirname(os.path.abspath(path)),
    )
    if cfg.max_iterations < 1:
        raise ConfigError("max_iterations must be >= 1")
    for label, side in (("source", cfg.source), ("target", cfg.target)):
        resolved = cfg.resolve(side.root)
        if not os.path.isdir(resolved):
            raise ConfigError(f"{label} root does not exist: {resolved}")
    if cfg.translation_root and not os.path.isdir(cfg.resolve(cfg.translation_root)):
        raise ConfigError(f"translation_root does not exist: {cfg.resolve(cfg.translation_root)}")
    if cfg.client.kind not in ("none", "scripted-dir", "echo-skeleton", "http"):
        raise ConfigError(f"unknown client kind {cfg.client.kind!r}")
    if cfg.client.kind == "scripted-dir":
        if not cfg.client.translation_dir:
            raise ConfigError("scripted-dir client needs translation_dir")
        if not os.path.isdir(cfg.resolve(cfg.client.translation_dir)):
            raise ConfigError(
                f"client translation_dir does not exist: {cfg.resolve(cfg.client.translation_dir)}"
            )
    return cfg
