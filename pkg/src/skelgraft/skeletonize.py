"""Repository skeleton extraction.

Every function body in non-test source files is replaced by a type-directed
trivial body; file structure, signatures, dependencies, and static values
are preserved. Files in other languages are copied byte-identically.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import shutil
from dataclasses import dataclass, field

from skelgraft.errors import ParseError
from skelgraft.syntax import (
    CONSTRUCTOR,
    STATIC_INIT,
    FunctionDecl,
    FunctionKey,
    SourceUnit,
    Span,
    StructuralModel,
    parse_key,
    parse_repo,
    parse_unit,
    render_key,
    splice,
)
from skelgraft.syntax.lexer import PUNCT, WORD, tokenize
from skelgraft.syntax.profiles import GENERIC, LanguageProfile, get_profile

DEFAULT_TEST_GLOBS = ("**/test/**", "**/*Test*")

_CONTROL_KEYWORDS = frozenset(
    {"if", "for", "while", "do", "switch", "try", "synchronized", "foreach", "using", "lock"}
)
_JUMP_KEYWORDS = frozenset({"return", "throw", "break", "continue", "yield", "goto", "assert"})
_ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="})


@dataclass(frozen=True)
class TrivialBodyRule:
    """Maps a return-type pattern to a stub body statement.

    type_pattern is either an exact type name (e.g. "int") or a category
    name prefixed with "category:" (e.g. "category:reference"). The default
    table ends with a catch-all reference rule, so lookup is total.
    """

    type_pattern: str
    body_template: str

    def matches(self, type_name: str, category: str) -> bool:
        if self.type_pattern.startswith("category:"):
            return self.type_pattern[len("category:") :] == category
        return self.type_pattern == type_name


def default_rules(profile: LanguageProfile) -> tuple[TrivialBodyRule, ...]:
    rules = [
        TrivialBodyRule(f"category:{cat}", body)
        for cat, body in profile.trivial_bodies.items()
    ]
    rules.append(TrivialBodyRule(f"category:{GENERIC}", profile.generic_stub))
    return tuple(rules)


def trivial_body(
    return_type: str,
    kind: str,
    profile_id: str,
    type_params: tuple[str, ...] = (),
    rules: tuple[TrivialBodyRule, ...] | None = None,
) -> str:
    """Return the stub statement that type-checks for ``return_type``.

    Constructors and static initializers get empty bodies regardless of the
    rule table (static initializers are handled separately when assignments
    must be retained).
    """
    if kind in (CONSTRUCTOR, STATIC_INIT):
        return ""
    profile = get_profile(profile_id)
    table = rules if rules is not None else default_rules(profile)
    category = profile.category_of(return_type, type_params)
    for rule in table:
        if rule.matches(return_type, category):
            return rule.body_template
    # unreachable with the default table; keep lookup total regardless
    return profile.trivial_bodies["reference"]


def skeletonize_static_init(body: bytes, profile_id: str, path: str = "<body>") -> bytes:
    """Keep only top-level assignments and initialized declarations, in order.

    Control flow, bare calls, and jump statements are removed; an
    assignment is retained by statement shape even when its right-hand
    side is a call.
    """
    get_profile(profile_id)
    toks = tokenize(body, path)
    kept_spans: list[tuple[int, int]] = []
    i = 0
    n = len(toks)

    def skip_balanced(idx: int, open_t: str, close_t: str) -> int:
        depth = 0
        while idx < n:
            t = toks[idx]
            if t.text == open_t:
                depth += 1
            elif t.text == close_t:
                depth -= 1
                if depth == 0:
                    return idx + 1
            idx += 1
        raise ParseError(path, toks[-1].end if toks else 0, "unbalanced static initializer")

    def skip_statement(idx: int) -> int:
        """Skip one statement starting at idx; returns index past it."""
        t = toks[idx]
        if t.text == "{":
            return skip_balanced(idx, "{", "}")
        if t.kind == WORD and t.text in _CONTROL_KEYWORDS:
            idx += 1
            if idx < n and toks[idx].text == "(":
                idx = skip_balanced(idx, "(", ")")
            idx = skip_statement(idx)
            if t.text == "if":
                while idx < n and toks[idx].text == "else":
                    idx = skip_statement(idx + 1)
            if t.text == "do":
                # while (...) ;
                if idx < n and toks[idx].text == "while":
                    idx += 1
                    idx = skip_balanced(idx, "(", ")")
                    if idx < n and toks[idx].text == ";":
                        idx += 1
            if t.text == "try":
                while idx < n and toks[idx].text in ("catch", "finally"):
                    idx += 1
                    if idx < n and toks[idx].text == "(":
                        idx = skip_balanced(idx, "(", ")")
                    idx = skip_statement(idx)
            return idx
        # simple statement: to ';' at depth 0
        depth = 0
        while idx < n:
            t2 = toks[idx]
            if t2.text in ("(", "[", "{"):
                depth += 1
            elif t2.text in (")", "]", "}"):
                depth -= 1
            elif t2.text == ";" and depth == 0:
                return idx + 1
            idx += 1
        return idx

    while i < n:
        t = toks[i]
        if t.text == ";":
            i += 1
            continue
        if t.text == "{" or (t.kind == WORD and t.text in _CONTROL_KEYWORDS):
            i = skip_statement(i)
            continue
        if t.kind == WORD and t.text in _JUMP_KEYWORDS:
            i = skip_statement(i)
            continue
        start_idx = i
        end_idx = skip_statement(i)
        stmt = toks[start_idx:end_idx]
        has_assign = False
        depth = 0
        for st in stmt:
            if st.text in ("(", "[", "{"):
                depth += 1
            elif st.text in (")", "]", "}"):
                depth -= 1
            elif depth == 0 and st.kind == PUNCT and st.text in _ASSIGN_OPS:
                has_assign = True
                break
        if has_assign:
            kept_spans.append((stmt[0].start, stmt[-1].end))
        i = end_idx

    return b"\n".join(body[s:e] for s, e in kept_spans)


@dataclass
class SkeletonManifest:
    """Record of every replaced body plus the exclusion globs used."""

    entries: list[dict] = field(default_factory=list)
    test_globs: tuple[str, ...] = DEFAULT_TEST_GLOBS

    def add(self, unit_path: str, key: FunctionKey, original_body: bytes, replacement: str) -> None:
        self.entries.append(
            {
                "unit": unit_path,
                "key": render_key(key),
                "original_body_sha256": hashlib.sha256(original_body).hexdigest(),
                "replacement": replacement,
            }
        )

    def keys(self) -> list[FunctionKey]:
        return [parse_key(e["key"]) for e in self.entries]

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": 1,
                "test_globs": list(self.test_globs),
                "entries": sorted(self.entries, key=lambda e: (e["unit"], e["key"])),
            },
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SkeletonManifest":
        data = json.loads(text)
        manifest = cls(test_globs=tuple(data["test_globs"]))
        manifest.entries = data["entries"]
        return manifest


def glob_to_regex(pattern: str) -> re.Pattern:
    """Translate a path glob (with ** crossing directories) to a regex."""
    out = []
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if pattern[i : i + 3] == "**/":
            out.append("(?:.*/)?")
            i += 3
        elif pattern[i : i + 2] == "**":
            out.append(".*")
            i += 2
        elif ch == "*":
            out.append("[^/]*")
            i += 1
        elif ch == "?":
            out.append("[^/]")
            i += 1
        else:
            out.append(re.escape(ch))
            i += 1
    return re.compile("^" + "".join(out) + "$")


def is_test_path(path: str, test_globs: tuple[str, ...]) -> bool:
    return any(glob_to_regex(g).match(path) for g in test_globs)


def is_test_unit(
    unit: SourceUnit,
    model_fns: list[FunctionDecl],
    profile: LanguageProfile,
    test_globs: tuple[str, ...],
) -> bool:
    """Glob match, or any declared function carries a test annotation."""
    if is_test_path(unit.path, test_globs):
        return True
    marker_names = profile.test_annotations
    for fn in model_fns:
        for ann in fn.annotations:
            name = ann.lstrip("@[").rstrip("]")
            name = name.split("(", 1)[0].strip()
            if name.split(".")[-1] in marker_names:
                return True
    return False


def _decl_indent(text: bytes, body_start: int) -> bytes:
    """Whitespace prefix of the line holding the body's opening brace."""
    line_start = text.rfind(b"\n", 0, body_start) + 1
    i = line_start
    while i < len(text) and text[i : i + 1] in (b" ", b"\t"):
        i += 1
    return text[line_start:i]


def _format_block_body(unit: SourceUnit, span: Span, statements: bytes) -> bytes:
    indent = _decl_indent(unit.text, span.start)
    step = b"\t" if b"\t" in indent else b"    "
    nl = unit.newline
    if not statements:
        return nl + indent
    inner = indent + step
    lines = statements.split(b"\n")
    joined = (nl + inner).join(lines)
    return nl + inner + joined + nl + indent


def skeleton_edits_for_unit(
    unit: SourceUnit,
    functions: list[FunctionDecl],
    profile_id: str,
    rules: tuple[TrivialBodyRule, ...] | None = None,
) -> list[tuple[Span, bytes, FunctionDecl, str]]:
    """Compute (span, replacement, decl, replacement_text) for each body."""
    edits = []
    for fn in sorted(functions, key=lambda f: f.body_span.start if f.body_span else 0):
        if fn.body_span is None:
            continue
        if fn.body_style == "expression":
            stub = trivial_body(fn.return_type, fn.kind, profile_id, fn.type_params, rules)
            if not stub.startswith("return "):
                raise ParseError(
                    unit.path, fn.body_span.start,
                    "cannot stub an expression-bodied member without a value")
            expr = stub[len("return ") : -1]
            edits.append((fn.body_span, b" " + expr.encode(), fn, expr))
            continue
        if fn.kind == STATIC_INIT:
            kept = skeletonize_static_init(fn.body_span.slice(unit.text), profile_id, unit.path)
            replacement = _format_block_body(unit, fn.body_span, kept)
            edits.append((fn.body_span, replacement, fn, kept.decode("utf-8")))
            continue
        stub = trivial_body(fn.return_type, fn.kind, profile_id, fn.type_params, rules)
        replacement = _format_block_body(unit, fn.body_span, stub.encode())
        edits.append((fn.body_span, replacement, fn, stub))
    return edits


def skeletonize_repo(
    repo_dir: str,
    out_dir: str,
    profile_id: str,
    test_globs: tuple[str, ...] = DEFAULT_TEST_GLOBS,
    rules: tuple[TrivialBodyRule, ...] | None = None,
    model: StructuralModel | None = None,
) -> SkeletonManifest:
    """Produce a skeleton copy of ``repo_dir`` under ``out_dir``.

    All files are copied; non-test source files have every function body
    replaced; other files are copied byte-identically. Returns the manifest
    of replaced spans. ``out_dir`` must not already contain files.
    """
    profile = get_profile(profile_id)
    if os.path.isdir(out_dir) and os.listdir(out_dir):
        raise FileExistsError(f"skeleton output dir not empty: {out_dir}")
    if model is None:
        model = parse_repo(repo_dir, profile_id)
    manifest = SkeletonManifest(test_globs=test_globs)
    for unit in model.units:
        dest = os.path.join(out_dir, unit.path)
        os.makedirs(os.path.dirname(dest), exist_ok=True)
        if unit.language != profile.profile_id:
            shutil.copyfile(os.path.join(repo_dir, unit.path), dest)
            continue
        functions = model.functions_in_unit(unit.path)
        if is_test_unit(unit, functions, profile, test_globs):
            shutil.copyfile(os.path.join(repo_dir, unit.path), dest)
            continue
        edits = skeleton_edits_for_unit(unit, functions, profile_id, rules)
        new_text = splice(unit.text, [(span, repl) for span, repl, _, _ in edits])
        for span, _, fn, replacement_text in edits:
            manifest.add(unit.path, fn.key, span.slice(unit.text), replacement_text)
        with open(dest, "wb") as fh:
            fh.write(new_text)
    return manifest


def skeletonize_unit_text(unit: SourceUnit, profile_id: str,
                          rules: tuple[TrivialBodyRule, ...] | None = None) -> bytes:
    """Skeletonize a single already-parsed unit; convenience for tests/tools."""
    model = parse_unit(unit, profile_id)
    edits = skeleton_edits_for_unit(unit, model.functions, profile_id, rules)
    return splice(unit.text, [(span, repl) for span, repl, _, _ in edits])
