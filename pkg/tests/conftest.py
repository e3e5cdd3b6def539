"""Shared fixtures: fixture-repo paths, parsed models, minitc toolchain."""

import os
import sys

import pytest

from skelgraft.harness import ToolchainConfig
from skelgraft.syntax import StructuralModel, parse_repo
from skelgraft.skeletonize import is_test_path

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(REPO_ROOT, "fixtures")

JAVA_REPO = os.path.join(FIXTURES, "pixeldraw-java")
CS_SKELETON = os.path.join(FIXTURES, "pixeldraw-cs-skeleton")
CS_REFERENCE = os.path.join(FIXTURES, "pixeldraw-cs-reference")
RECORDED_TRACES = os.path.join(FIXTURES, "recorded-traces")
DIAG_CORPUS = os.path.join(FIXTURES, "diagnostics-corpus")
CONFIG_YAML = os.path.join(FIXTURES, "configs", "pixeldraw.yaml")

JAVA_TEST_GLOBS = ("src/test/**",)
CS_TEST_GLOBS = ("tests/**",)

MINITC_BUILD = f"{sys.executable} -m skelgraft.minitc build {{workdir}}"
MINITC_TEST = f"{sys.executable} -m skelgraft.minitc test {{workdir}} --filter {{test_filter}}"


def nontest_view(model: StructuralModel, globs) -> StructuralModel:
    return StructuralModel(
        units=model.units,
        classes=model.classes,
        functions=[f for f in model.functions if not is_test_path(f.unit_path, globs)],
        fields_decls=model.fields_decls,
    )


@pytest.fixture(scope="session")
def source_model():
    return parse_repo(JAVA_REPO, "java")


@pytest.fixture(scope="session")
def source_nontest(source_model):
    return nontest_view(source_model, JAVA_TEST_GLOBS)


@pytest.fixture(scope="session")
def skeleton_model():
    return parse_repo(CS_SKELETON, "csharp")


@pytest.fixture(scope="session")
def skeleton_nontest(skeleton_model):
    return nontest_view(skeleton_model, CS_TEST_GLOBS)


@pytest.fixture(scope="session")
def reference_model():
    return parse_repo(CS_REFERENCE, "csharp")


@pytest.fixture(scope="session")
def structural_map(source_nontest, skeleton_nontest):
    from skelgraft.structmap import DEFAULT_RULES, build_map

    return build_map(source_nontest, skeleton_nontest, DEFAULT_RULES)


@pytest.fixture(scope="session")
def recorded_coverage(source_nontest):
    from skelgraft.instrument import build_coverage

    trace_files = {
        name[: -len(".trace")]: os.path.join(RECORDED_TRACES, name)
        for name in sorted(os.listdir(RECORDED_TRACES))
        if name.endswith(".trace")
    }
    return build_coverage(trace_files=trace_files, model=source_nontest)


@pytest.fixture
def toolchain():
    return ToolchainConfig(
        build_cmd=MINITC_BUILD, test_cmd=MINITC_TEST, timeout_s=60, parallelism=2
    )
