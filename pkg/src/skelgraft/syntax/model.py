"""Structural model of a repository: units, classes, functions, fields.

All values are immutable after construction and safe to share across
threads. Spans are byte offsets into the owning unit's raw text; parsing
never mutates text, so a unit round-trips byte-identically.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from skelgraft.errors import Ambiguous, NotFound

# FunctionDecl.kind values
METHOD = "method"
CONSTRUCTOR = "constructor"
STATIC_INIT = "static_initializer"

# Reserved function names for bodies without a source-level identifier.
CTOR_NAME = "<init>"
STATIC_INIT_NAME = "<clinit:{index}>"


@dataclass(frozen=True)
class Span:
    """Half-open byte range [start, end) into a unit's text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start <= self.end):
            raise ValueError(f"invalid span {self.start}..{self.end}")

    def slice(self, data: bytes) -> bytes:
        return data[self.start : self.end]

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class SourceUnit:
    """One file of a repository, addressed by forward-slash relative path."""

    path: str
    language: str  # profile id, or "other" for retained foreign files
    text: bytes
    newline_style: str = "LF"  # LF | CRLF

    @classmethod
    def load(cls, root: str, rel_path: str, language: str) -> "SourceUnit":
        rel = rel_path.replace(os.sep, "/")
        with open(os.path.join(root, rel_path), "rb") as fh:
            data = fh.read()
        return cls(path=rel, language=language, text=data,
                   newline_style="CRLF" if b"\r\n" in data else "LF")

    @property
    def newline(self) -> bytes:
        return b"\r\n" if self.newline_style == "CRLF" else b"\n"


@dataclass(frozen=True)
class FunctionKey:
    """Stable lookup key for one function: path, owning class, name, arity."""

    unit_path: str
    owner_class: str
    name: str
    arity: int

    def __post_init__(self) -> None:
        if not self.unit_path or not self.owner_class or not self.name:
            raise ValueError("FunctionKey fields must be non-empty")
        if self.arity < 0:
            raise ValueError("arity must be >= 0")

    def __str__(self) -> str:
        return f"{self.unit_path}|{self.owner_class}#{self.name}/{self.arity}"


@dataclass(frozen=True)
class FunctionDecl:
    """A method, constructor, or static initializer found in a unit.

    body_span covers exactly the text between (and excluding) the outer
    braces; it is None for bodyless declarations (abstract/interface).
    Expression-bodied members (C# ``=>``) carry the expression text span
    and body_style == "expression".
    """

    unit_path: str
    owner_class: str
    name: str
    arity: int
    param_types: tuple[str, ...]
    return_type: str  # type name, "void", "ctor", or "static-init"
    modifiers: frozenset[str]
    annotations: tuple[str, ...]
    body_span: Span | None
    kind: str  # METHOD | CONSTRUCTOR | STATIC_INIT
    type_params: tuple[str, ...] = ()
    body_style: str = "block"  # block | expression
    param_names: tuple[str, ...] = ()

    @property
    def key(self) -> FunctionKey:
        return FunctionKey(self.unit_path, self.owner_class, self.name, self.arity)


@dataclass(frozen=True)
class ClassDecl:
    fq_name: str  # nesting path with dots, namespace/package excluded
    kind: str  # class | interface | enum | struct
    unit_path: str
    namespace: str = ""
    type_params: tuple[str, ...] = ()


@dataclass(frozen=True)
class FieldDecl:
    owner_class: str
    name: str
    has_initializer: bool
    span: Span  # whole declaration statement, ';' included
    unit_path: str = ""
    is_static: bool = False


@dataclass
class StructuralModel:
    """Parsed view of a repository (or a single unit)."""

    units: list[SourceUnit] = field(default_factory=list)
    classes: list[ClassDecl] = field(default_factory=list)
    functions: list[FunctionDecl] = field(default_factory=list)
    fields_decls: list[FieldDecl] = field(default_factory=list)

    def unit(self, path: str) -> SourceUnit:
        for u in self.units:
            if u.path == path:
                return u
        raise NotFound(f"no unit {path!r} in model")

    def functions_in_unit(self, path: str) -> list[FunctionDecl]:
        return [f for f in self.functions if f.unit_path == path]

    def find_function(self, key: FunctionKey) -> FunctionDecl:
        """Return the unique declaration matching ``key``.

        Raises NotFound when absent and Ambiguous when several declarations
        share (path, class, name, arity) — an upstream invariant violation
        unless they are overloads distinguished only by param types.
        """
        matches = [f for f in self.functions if f.key == key]
        if not matches:
            raise NotFound(str(key))
        if len(matches) > 1:
            raise Ambiguous(f"{key} matches {len(matches)} declarations")
        return matches[0]

    def find_overloads(self, unit_path: str, owner: str, name: str) -> list[FunctionDecl]:
        return [
            f
            for f in self.functions
            if f.unit_path == unit_path and f.owner_class == owner and f.name == name
        ]

    def merged_with(self, other: "StructuralModel") -> "StructuralModel":
        return StructuralModel(
            units=self.units + other.units,
            classes=self.classes + other.classes,
            functions=self.functions + other.functions,
            fields_decls=self.fields_decls + other.fields_decls,
        )


def render_key(key: FunctionKey) -> str:
    """Wire form used by trace lines: ``path|class#name/arity``."""
    return str(key)


def parse_key(text: str) -> FunctionKey:
    """Inverse of render_key; raises ValueError on malformed input."""
    path, sep, rest = text.partition("|")
    if not sep:
        raise ValueError(f"malformed function key: {text!r}")
    clsname, sep, tail = rest.partition("#")
    if not sep:
        raise ValueError(f"malformed function key: {text!r}")
    name, sep, arity = tail.rpartition("/")
    if not sep or not arity.isdigit():
        raise ValueError(f"malformed function key: {text!r}")
    return FunctionKey(path, clsname, name, int(arity))
