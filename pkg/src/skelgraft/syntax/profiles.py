"""Language profiles: pluggable per-language grammar knobs.

The pipeline is language-pair-agnostic; everything language-specific the
structural parser, skeletonizer, and diagnostics classifier need lives in a
profile looked up by string id. Ships with a Java-like source profile and a
C#-like target profile.
"""

from __future__ import annotations

from dataclasses import dataclass

from skelgraft.errors import UnknownProfileError

# Return-type categories the trivial-body table is keyed by.
INTEGRAL = "integral"
FLOATING = "floating"
BOOLEAN = "boolean"
CHARACTER = "char"
REFERENCE = "reference"
VOID = "void"
GENERIC = "generic"


@dataclass(frozen=True)
class LanguageProfile:
    profile_id: str
    extensions: tuple[str, ...]
    namespace_keyword: str  # "package" | "namespace"
    import_keywords: tuple[str, ...]
    class_keywords: frozenset[str]
    modifiers: frozenset[str]
    annotation_style: str  # "at" (Java @Name) | "bracket" (C# [Name])
    type_categories: dict[str, str]  # type name -> category
    trivial_bodies: dict[str, str]  # category -> stub body statement
    generic_stub: str  # stub for type-parameter returns
    diagnostic_code_pattern: str  # regex for compiler error codes
    test_annotations: frozenset[str]  # marks a unit as a test file
    test_framework: str

    def category_of(self, type_name: str, type_params: tuple[str, ...] = ()) -> str:
        base = type_name.strip()
        if base.endswith("..."):
            return REFERENCE
        if base in type_params:
            return GENERIC
        if base in self.type_categories:
            return self.type_categories[base]
        if base.endswith("[]") or "<" in base:
            return REFERENCE
        return REFERENCE


_JAVA = LanguageProfile(
    profile_id="java",
    extensions=(".java",),
    namespace_keyword="package",
    import_keywords=("import",),
    class_keywords=frozenset({"class", "interface", "enum"}),
    modifiers=frozenset(
        {
            "public", "private", "protected", "static", "final", "abstract",
            "synchronized", "native", "strictfp", "transient", "volatile",
            "default",
        }
    ),
    annotation_style="at",
    type_categories={
        "int": INTEGRAL, "long": INTEGRAL, "short": INTEGRAL, "byte": INTEGRAL,
        "float": FLOATING, "double": FLOATING,
        "boolean": BOOLEAN,
        "char": CHARACTER,
        "void": VOID,
    },
    trivial_bodies={
        INTEGRAL: "return 0;",
        FLOATING: "return 0.0;",
        BOOLEAN: "return false;",
        CHARACTER: "return '\\0';",
        REFERENCE: "return null;",
        VOID: "",
    },
    generic_stub="return null;",
    diagnostic_code_pattern=r"\b[A-Z]{1,3}\d{4}\b",
    test_annotations=frozenset({"Test", "org.junit.Test", "ParameterizedTest"}),
    test_framework="junit",
)

_CSHARP = LanguageProfile(
    profile_id="csharp",
    extensions=(".cs",),
    namespace_keyword="namespace",
    import_keywords=("using",),
    class_keywords=frozenset({"class", "interface", "enum", "struct"}),
    modifiers=frozenset(
        {
            "public", "private", "protected", "internal", "static", "sealed",
            "abstract", "virtual", "override", "readonly", "partial", "async",
            "new", "extern", "unsafe", "const",
        }
    ),
    annotation_style="bracket",
    type_categories={
        "int": INTEGRAL, "long": INTEGRAL, "short": INTEGRAL, "byte": INTEGRAL,
        "sbyte": INTEGRAL, "uint": INTEGRAL, "ulong": INTEGRAL, "ushort": INTEGRAL,
        "float": FLOATING, "double": FLOATING, "decimal": FLOATING,
        "bool": BOOLEAN,
        "char": CHARACTER,
        "void": VOID,
    },
    trivial_bodies={
        INTEGRAL: "return 0;",
        FLOATING: "return 0.0;",
        BOOLEAN: "return false;",
        CHARACTER: "return '\\0';",
        REFERENCE: "return null;",
        VOID: "",
    },
    generic_stub="return default;",
    diagnostic_code_pattern=r"\bCS\d{4}\b",
    test_annotations=frozenset({"Test", "TestCase", "TestFixture"}),
    test_framework="nunit",
)

_REGISTRY: dict[str, LanguageProfile] = {
    _JAVA.profile_id: _JAVA,
    _CSHARP.profile_id: _CSHARP,
}


def get_profile(profile_id: str) -> LanguageProfile:
    try:
        return _REGISTRY[profile_id]
    except KeyError:
        raise UnknownProfileError(
            f"unknown language profile {profile_id!r}; known: {sorted(_REGISTRY)}"
        ) from None


def register_profile(profile: LanguageProfile) -> None:
    """Register an additional language pair profile."""
    _REGISTRY[profile.profile_id] = profile


def profile_for_path(path: str) -> LanguageProfile | None:
    for prof in _REGISTRY.values():
        if any(path.endswith(ext) for ext in prof.extensions):
            return prof
    return None
