"""Workdir loading: build.yaml, class registry, field initializers.

Class names live in one flat namespace (the fixture repositories have no
colliding simple names across packages); namespaces and imports are
recorded but not used for resolution.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import yaml

from skelgraft.errors import ParseError
from skelgraft.minitc import bodies
from skelgraft.syntax.lexer import WORD, tokenize
from skelgraft.syntax.model import FunctionDecl, SourceUnit, StructuralModel
from skelgraft.syntax.parser import parse_unit
from skelgraft.syntax.profiles import LanguageProfile, get_profile

_MODIFIER_WORDS = frozenset(
    {"public", "private", "protected", "internal", "static", "final", "readonly",
     "const", "sealed", "abstract", "volatile", "transient", "virtual", "override"}
)


@dataclass
class BuildSpec:
    project: str
    language: str  # profile id
    test_framework: str
    source_roots: list[str]
    test_roots: list[str]
    dependencies: list[str]

    @classmethod
    def load(cls, workdir: str) -> "BuildSpec":
        path = os.path.join(workdir, "build.yaml")
        if not os.path.isfile(path):
            raise FileNotFoundError(f"no build.yaml in {workdir}")
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
        for key in ("project", "language", "test_framework"):
            if key not in data:
                raise ValueError(f"build.yaml missing required field {key!r}")
        return cls(
            project=data["project"],
            language=data["language"],
            test_framework=data["test_framework"],
            source_roots=list(data.get("source_roots", ["src"])),
            test_roots=list(data.get("test_roots", ["tests"])),
            dependencies=list(data.get("dependencies", [])),
        )


@dataclass
class FieldInfo:
    name: str
    type_name: str
    is_static: bool
    init: object | None  # parsed initializer expression
    order: int  # textual order among the owner's members


@dataclass
class MethodInfo:
    decl: FunctionDecl
    body: object | None = None  # lazily parsed Block
    body_error: bodies.BodyParseError | None = None


@dataclass
class ClassInfo:
    name: str  # simple (possibly dotted nested) name
    kind: str
    unit_path: str
    is_test_unit: bool
    methods: dict = field(default_factory=dict)  # (name, arity) -> MethodInfo
    fields: dict = field(default_factory=dict)  # name -> FieldInfo
    static_order: list = field(default_factory=list)  # FieldInfo | MethodInfo in decl order

    def find_method(self, name: str, arity: int) -> MethodInfo | None:
        return self.methods.get((name, arity))

    def overloads(self, name: str) -> list[MethodInfo]:
        return [m for (n, _a), m in self.methods.items() if n == name]


@dataclass
class Project:
    workdir: str
    spec: BuildSpec
    profile: LanguageProfile
    classes: dict = field(default_factory=dict)  # simple name -> ClassInfo
    units: dict = field(default_factory=dict)  # path -> SourceUnit
    parse_failures: list = field(default_factory=list)  # (path, ParseError)

    def class_named(self, name: str) -> ClassInfo | None:
        return self.classes.get(name)


def load_project(workdir: str) -> Project:
    spec = BuildSpec.load(workdir)
    profile = get_profile(spec.language)
    project = Project(workdir=workdir, spec=spec, profile=profile)
    roots = [(r, False) for r in spec.source_roots] + [(r, True) for r in spec.test_roots]
    seen: set[str] = set()
    for root, is_test in roots:
        base = os.path.join(workdir, root)
        if not os.path.isdir(base):
            continue
        for dirpath, dirnames, filenames in os.walk(base):
            dirnames.sort()
            for fname in sorted(filenames):
                if not any(fname.endswith(ext) for ext in profile.extensions):
                    continue
                full = os.path.join(dirpath, fname)
                rel = os.path.relpath(full, workdir).replace(os.sep, "/")
                if rel in seen:
                    continue
                seen.add(rel)
                unit = SourceUnit.load(workdir, rel, profile.profile_id)
                project.units[rel] = unit
                try:
                    model = parse_unit(unit, profile.profile_id)
                except ParseError as err:
                    project.parse_failures.append((rel, err))
                    continue
                _register_unit(project, unit, model, is_test)
    return project


def _register_unit(project: Project, unit: SourceUnit, model: StructuralModel, is_test: bool) -> None:
    order_counter = 0
    for cls in model.classes:
        if cls.fq_name not in project.classes:
            project.classes[cls.fq_name] = ClassInfo(
                name=cls.fq_name, kind=cls.kind, unit_path=unit.path, is_test_unit=is_test,
            )
    for fd in model.fields_decls:
        info = project.classes.get(fd.owner_class)
        if info is None:
            continue
        type_name, init_expr = _parse_field_declarator(unit, fd.span, fd.name)
        finfo = FieldInfo(
            name=fd.name, type_name=type_name, is_static=fd.is_static,
            init=init_expr, order=fd.span.start,
        )
        info.fields[fd.name] = finfo
        if fd.is_static and init_expr is not None:
            info.static_order.append(finfo)
        order_counter += 1
    for fn in model.functions:
        info = project.classes.get(fn.owner_class)
        if info is None:
            continue
        minfo = MethodInfo(decl=fn)
        info.methods[(fn.name, fn.arity)] = minfo
        if fn.kind == "static_initializer":
            info.static_order.append(minfo)
    for cls_info in project.classes.values():
        cls_info.static_order.sort(key=_member_order)


def _member_order(member) -> int:
    if isinstance(member, FieldInfo):
        return member.order
    return member.decl.body_span.start if member.decl.body_span else 0


def _parse_field_declarator(unit: SourceUnit, span, name: str):
    """Extract (type, initializer AST) for one declarator of a field statement."""
    toks = tokenize(span.slice(unit.text))
    # strip annotations/attributes and modifiers
    i = 0
    while i < len(toks):
        t = toks[i]
        if t.text == "@":
            i += 1
            while i < len(toks) and (toks[i].kind == WORD or toks[i].text == "."):
                i += 1
            if i < len(toks) and toks[i].text == "(":
                depth = 0
                while i < len(toks):
                    if toks[i].text == "(":
                        depth += 1
                    elif toks[i].text == ")":
                        depth -= 1
                        if depth == 0:
                            i += 1
                            break
                    i += 1
            continue
        if t.text == "[" and i == 0:
            depth = 0
            while i < len(toks):
                if toks[i].text == "[":
                    depth += 1
                elif toks[i].text == "]":
                    depth -= 1
                    if depth == 0:
                        i += 1
                        break
                i += 1
            continue
        if t.kind == WORD and t.text in _MODIFIER_WORDS:
            i += 1
            continue
        break
    type_parts = []
    if i < len(toks) and toks[i].kind == WORD:
        type_parts.append(toks[i].text)
        i += 1
        while i + 1 < len(toks) and toks[i].text == "[" and toks[i + 1].text == "]":
            type_parts.append("[]")
            i += 2
    type_name = "".join(type_parts) or "object"
    # find "<name> = <expr>" among the declarators
    depth = 0
    init_expr = None
    j = i
    while j < len(toks):
        t = toks[j]
        if t.text in ("(", "[", "{"):
            depth += 1
        elif t.text in (")", "]", "}"):
            depth -= 1
        elif depth == 0 and t.kind == WORD and t.text == name:
            if j + 1 < len(toks) and toks[j + 1].text == "=":
                start = toks[j + 2].start
                k = j + 2
                d2 = 0
                while k < len(toks):
                    tk = toks[k]
                    if tk.text in ("(", "[", "{"):
                        d2 += 1
                    elif tk.text in (")", "]", "}"):
                        d2 -= 1
                    elif d2 == 0 and tk.text in (",", ";"):
                        break
                    k += 1
                end = toks[k - 1].end if k > j + 2 else start
                raw = span.slice(unit.text)[start - toks[0].start : end - toks[0].start]
                if raw.strip().startswith(b"{"):
                    # brace array initializer: int[] t = {1, 2};
                    init_expr = _parse_brace_array(raw, type_name)
                else:
                    try:
                        init_expr = bodies.parse_expression(raw)
                    except bodies.BodyParseError:
                        init_expr = None
            break
        j += 1
    return type_name, init_expr


def _parse_brace_array(raw: bytes, type_name: str):
    elem = type_name[:-2] if type_name.endswith("[]") else type_name
    synthetic = b"new " + elem.encode() + b"[]" + raw.strip()
    try:
        return bodies.parse_expression(synthetic)
    except bodies.BodyParseError:
        return None
