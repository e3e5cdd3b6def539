"""Structural parser for Java-like and C#-like units.

Extracts classes, functions (methods, constructors, static initializers),
and field declarations with byte-exact body spans. Body content is never
interpreted beyond locating span boundaries; anonymous classes and lambdas
stay inside the enclosing body. Nested types get dotted fully-qualified
names; package/namespace is recorded separately and excluded from the
class path so structurally parallel repos compare by class path alone.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from skelgraft.errors import ParseError
from skelgraft.syntax.lexer import PUNCT, WORD, Token, tokenize
from skelgraft.syntax.model import (
    CONSTRUCTOR,
    CTOR_NAME,
    METHOD,
    STATIC_INIT,
    STATIC_INIT_NAME,
    ClassDecl,
    FieldDecl,
    FunctionDecl,
    SourceUnit,
    Span,
    StructuralModel,
)
from skelgraft.syntax.profiles import LanguageProfile, get_profile

_TYPE_PUNCT_SQUEEZE = re.compile(r"\s*([<>\[\].,?]|\.\.\.)\s*")


def parse_unit(unit: SourceUnit, profile_id: str) -> StructuralModel:
    """Parse one unit into a partial StructuralModel.

    Raises ParseError with the unit path and byte position when the file
    cannot be structurally parsed, and UnknownProfileError for bad ids.
    """
    profile = get_profile(profile_id)
    parser = _UnitParser(unit, profile)
    return parser.parse()


def parse_repo(
    root: str,
    profile_id: str,
    exclude_dirs: tuple[str, ...] = (".git", "__pycache__", "runs"),
) -> StructuralModel:
    """Parse every unit under ``root`` whose extension the profile owns.

    Files in other languages become units with language "other" and no
    structural entries; they are retained so repo copies stay complete.
    """
    profile = get_profile(profile_id)
    model = StructuralModel()
    for rel in sorted(_walk_files(root, exclude_dirs)):
        if any(rel.endswith(ext) for ext in profile.extensions):
            unit = SourceUnit.load(root, rel, profile.profile_id)
            model = model.merged_with(parse_unit(unit, profile_id))
        else:
            model.units.append(SourceUnit.load(root, rel, "other"))
    return model


def parse_repo_tolerant(
    root: str,
    profile_id: str,
    exclude_dirs: tuple[str, ...] = (".git", "__pycache__", "runs"),
) -> tuple[StructuralModel, dict[str, ParseError]]:
    """Like parse_repo, but unparseable units are skipped and reported.

    Needed for model-produced repositories: a broken file should surface
    as missing functions downstream, not abort the evaluation.
    """
    profile = get_profile(profile_id)
    model = StructuralModel()
    failures: dict[str, ParseError] = {}
    for rel in sorted(_walk_files(root, exclude_dirs)):
        if any(rel.endswith(ext) for ext in profile.extensions):
            unit = SourceUnit.load(root, rel, profile.profile_id)
            try:
                model = model.merged_with(parse_unit(unit, profile_id))
            except ParseError as err:
                failures[rel] = err
        else:
            model.units.append(SourceUnit.load(root, rel, "other"))
    return model, failures


def _walk_files(root: str, exclude_dirs: tuple[str, ...]):
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = [d for d in dirnames if d not in exclude_dirs]
        for name in filenames:
            full = os.path.join(dirpath, name)
            yield os.path.relpath(full, root).replace(os.sep, "/")


def normalize_type(tokens: list[Token]) -> str:
    """Render a type token run canonically (no interior spaces)."""
    text = " ".join(t.text for t in tokens)
    return _TYPE_PUNCT_SQUEEZE.sub(r"\1", text).strip()


class _Cursor:
    __slots__ = ("toks", "pos", "path")

    def __init__(self, toks: list[Token], path: str):
        self.toks = toks
        self.pos = 0
        self.path = path

    def at_end(self) -> bool:
        return self.pos >= len(self.toks)

    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.toks[i] if i < len(self.toks) else None

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str) -> ParseError:
        pos = self.toks[self.pos].start if self.pos < len(self.toks) else (
            self.toks[-1].end if self.toks else 0
        )
        return ParseError(self.path, pos, message)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text if tok else 'EOF'!r}")
        return self.advance()

    def skip_balanced(self, open_text: str, close_text: str) -> Token:
        """Consume from the current ``open_text`` token to its match; return the closer."""
        opener = self.expect(open_text)
        depth = 1
        while not self.at_end():
            tok = self.advance()
            if tok.kind == PUNCT:
                if tok.text == open_text:
                    depth += 1
                elif tok.text == close_text:
                    depth -= 1
                    if depth == 0:
                        return tok
        raise ParseError(self.path, opener.start, f"unbalanced {open_text!r}")


class _UnitParser:
    def __init__(self, unit: SourceUnit, profile: LanguageProfile):
        self.unit = unit
        self.profile = profile
        self.cur = _Cursor(tokenize(unit.text, unit.path), unit.path)
        self.classes: list[ClassDecl] = []
        self.functions: list[FunctionDecl] = []
        self.fields: list[FieldDecl] = []

    def parse(self) -> StructuralModel:
        self._parse_scope(namespace="", outer="", stop_at_close=False)
        return StructuralModel(
            units=[self.unit],
            classes=self.classes,
            functions=self.functions,
            fields_decls=self.fields,
        )

    # -- file / namespace level ------------------------------------------

    def _parse_scope(self, namespace: str, outer: str, stop_at_close: bool) -> None:
        cur = self.cur
        while not cur.at_end():
            tok = cur.peek()
            assert tok is not None
            if tok.text == "}" and stop_at_close:
                cur.advance()
                return
            if tok.kind == WORD and tok.text == self.profile.namespace_keyword:
                cur.advance()
                ns = self._read_dotted_name()
                nxt = cur.peek()
                if nxt is not None and nxt.text == "{":
                    cur.advance()
                    inner = f"{namespace}.{ns}" if namespace else ns
                    self._parse_scope(inner, outer, stop_at_close=True)
                else:
                    if nxt is not None and nxt.text == ";":
                        cur.advance()
                    namespace = f"{namespace}.{ns}" if namespace else ns
                continue
            if tok.kind == WORD and tok.text in self.profile.import_keywords:
                self._skip_to_semicolon()
                continue
            annotations = self._collect_annotations()
            modifiers = self._collect_modifiers()
            tok = cur.peek()
            if tok is None:
                if annotations or modifiers:
                    raise cur.error("dangling annotations/modifiers at EOF")
                return
            if tok.kind == WORD and tok.text in self.profile.class_keywords:
                self._parse_type_decl(namespace, outer, annotations, modifiers)
                continue
            if tok.text == "}" and stop_at_close:
                cur.advance()
                return
            # Tolerate stray tokens (e.g. trailing semicolons).
            if tok.text == ";":
                cur.advance()
                continue
            raise cur.error(f"unexpected token {tok.text!r} at file scope")

    def _read_dotted_name(self) -> str:
        cur = self.cur
        parts = [cur.advance().text]
        while True:
            tok = cur.peek()
            if tok is not None and tok.text == ".":
                cur.advance()
                parts.append(cur.advance().text)
            else:
                return ".".join(parts)

    def _skip_to_semicolon(self) -> None:
        cur = self.cur
        while not cur.at_end():
            if cur.advance().text == ";":
                return

    # -- annotations / attributes / modifiers ----------------------------

    def _collect_annotations(self) -> tuple[str, ...]:
        cur = self.cur
        found: list[str] = []
        while True:
            tok = cur.peek()
            if tok is None:
                break
            if self.profile.annotation_style == "at" and tok.text == "@":
                nxt = cur.peek(1)
                if nxt is not None and nxt.text == "interface":
                    break  # @interface declares an annotation type
                start = tok.start
                cur.advance()
                self._read_dotted_name()
                end_tok = cur.peek()
                if end_tok is not None and end_tok.text == "(":
                    end_tok = cur.skip_balanced("(", ")")
                    end = end_tok.end
                else:
                    prev = cur.toks[cur.pos - 1]
                    end = prev.end
                found.append(self.unit.text[start:end].decode("utf-8"))
                continue
            if self.profile.annotation_style == "bracket" and tok.text == "[":
                start = tok.start
                closer = cur.skip_balanced("[", "]")
                found.append(self.unit.text[start : closer.end].decode("utf-8"))
                continue
            break
        return tuple(found)

    def _collect_modifiers(self) -> frozenset[str]:
        cur = self.cur
        mods: set[str] = set()
        while True:
            tok = cur.peek()
            if tok is None or tok.kind != WORD or tok.text not in self.profile.modifiers:
                return frozenset(mods)
            # C#: `new` may open an expression, but as a declaration modifier it
            # is always followed by another modifier or a type token (a WORD).
            nxt = cur.peek(1)
            if tok.text == "new" and (nxt is None or nxt.kind != WORD):
                return frozenset(mods)
            mods.add(tok.text)
            cur.advance()

    # -- type declarations -------------------------------------------------

    def _parse_type_decl(
        self,
        namespace: str,
        outer: str,
        annotations: tuple[str, ...],
        modifiers: frozenset[str],
    ) -> None:
        cur = self.cur
        kind = cur.advance().text  # class | interface | enum | struct
        name_tok = cur.peek()
        if name_tok is None or name_tok.kind != WORD:
            raise cur.error(f"expected type name after {kind!r}")
        cur.advance()
        fq = f"{outer}.{name_tok.text}" if outer else name_tok.text
        type_params: tuple[str, ...] = ()
        tok = cur.peek()
        if tok is not None and tok.text == "<":
            type_params = self._parse_type_params()
        # heritage / constraints: consume up to the body brace
        while True:
            tok = cur.peek()
            if tok is None:
                raise cur.error(f"missing body for type {fq}")
            if tok.text == "{":
                break
            if tok.text == ";":  # C# forward-ish declaration; no body
                cur.advance()
                self.classes.append(ClassDecl(fq, kind, self.unit.path, namespace, type_params))
                return
            if tok.text == "<":
                self.cur.skip_balanced("<", ">")
                continue
            if tok.text == "(":  # record-style parameter list; treat as heritage noise
                self.cur.skip_balanced("(", ")")
                continue
            cur.advance()
        self.classes.append(ClassDecl(fq, kind, self.unit.path, namespace, type_params))
        cur.expect("{")
        if kind == "enum":
            self._parse_enum_body(fq, namespace, type_params)
        else:
            self._parse_class_body(fq, namespace, type_params, simple_name=name_tok.text)

    def _parse_type_params(self) -> tuple[str, ...]:
        cur = self.cur
        opener = cur.expect("<")
        depth = 1
        names: list[str] = []
        expect_name = True
        while not cur.at_end():
            tok = cur.advance()
            if tok.text == "<":
                depth += 1
            elif tok.text == ">":
                depth -= 1
                if depth == 0:
                    return tuple(names)
            elif depth == 1 and tok.text == ",":
                expect_name = True
            elif depth == 1 and expect_name and tok.kind == WORD:
                if tok.text not in ("in", "out", "extends", "super"):
                    names.append(tok.text)
                    expect_name = False
        raise ParseError(self.unit.path, opener.start, "unbalanced type parameter list")

    def _parse_enum_body(self, fq: str, namespace: str, type_params: tuple[str, ...]) -> None:
        """Enum constants are retained verbatim; Java enums may have members after ';'."""
        cur = self.cur
        while True:
            tok = cur.peek()
            if tok is None:
                raise cur.error(f"unterminated enum body for {fq}")
            if tok.text == "}":
                cur.advance()
                return
            if tok.text == ";":
                cur.advance()
                self._parse_class_body(
                    fq, namespace, type_params, simple_name=fq.rsplit(".", 1)[-1],
                    already_open=True,
                )
                return
            if tok.text == "(":
                cur.skip_balanced("(", ")")
                continue
            if tok.text == "{":  # constant with anonymous body
                cur.skip_balanced("{", "}")
                continue
            if tok.text == "[":
                cur.skip_balanced("[", "]")
                continue
            cur.advance()

    # -- class members -------------------------------------------------------

    def _parse_class_body(
        self,
        fq: str,
        namespace: str,
        class_type_params: tuple[str, ...],
        simple_name: str,
        already_open: bool = True,
    ) -> None:
        cur = self.cur
        static_init_index = 0
        while True:
            tok = cur.peek()
            if tok is None:
                raise cur.error(f"unterminated body for {fq}")
            if tok.text == "}":
                cur.advance()
                return
            if tok.text == ";":
                cur.advance()
                continue
            annotations = self._collect_annotations()
            modifiers = self._collect_modifiers()
            tok = cur.peek()
            if tok is None:
                raise cur.error(f"unterminated body for {fq}")
            if tok.kind == WORD and tok.text in self.profile.class_keywords:
                self._parse_type_decl(namespace, fq, annotations, modifiers)
                continue
            if tok.text == "{":
                # Java initializer block; only static blocks are modeled.
                body = self._read_brace_body()
                if "static" in modifiers:
                    self.functions.append(
                        FunctionDecl(
                            unit_path=self.unit.path,
                            owner_class=fq,
                            name=STATIC_INIT_NAME.format(index=static_init_index),
                            arity=0,
                            param_types=(),
                            return_type="static-init",
                            modifiers=modifiers,
                            annotations=annotations,
                            body_span=body,
                            kind=STATIC_INIT,
                        )
                    )
                    static_init_index += 1
                continue
            self._parse_member(
                fq, simple_name, class_type_params, annotations, modifiers,
                static_init_count=static_init_index,
            )
            if self.functions and self.functions[-1].kind == STATIC_INIT and \
                    self.functions[-1].owner_class == fq:
                static_init_index = max(
                    static_init_index,
                    1 + int(self.functions[-1].name[len("<clinit:"):-1]),
                )

    def _read_brace_body(self) -> Span:
        opener = self.cur.expect("{")
        closer_depth = 1
        cur = self.cur
        while not cur.at_end():
            tok = cur.advance()
            if tok.text == "{":
                closer_depth += 1
            elif tok.text == "}":
                closer_depth -= 1
                if closer_depth == 0:
                    return Span(opener.end, tok.start)
        raise ParseError(self.unit.path, opener.start, "unbalanced brace")

    def _parse_member(
        self,
        fq: str,
        simple_name: str,
        class_type_params: tuple[str, ...],
        annotations: tuple[str, ...],
        modifiers: frozenset[str],
        static_init_count: int,
    ) -> None:
        """Parse one field or function member starting at the current token."""
        cur = self.cur
        member_start = cur.peek().start  # type: ignore[union-attr]
        leading_type_params: tuple[str, ...] = ()
        tok = cur.peek()
        if tok is not None and tok.text == "<":  # Java generic method prefix
            leading_type_params = self._parse_type_params()

        header: list[Token] = []
        angle_depth = 0
        while True:
            tok = cur.peek()
            if tok is None:
                raise cur.error(f"unterminated member in {fq}")
            if angle_depth == 0 and tok.text in ("(", "=", ";", "{", "=>"):
                break
            if tok.text == "<":
                angle_depth += 1
            elif tok.text == ">":
                angle_depth -= 1
            header.append(cur.advance())

        terminator = cur.peek()
        assert terminator is not None
        if terminator.text in ("=", ";"):
            self._finish_field(fq, member_start, header, modifiers)
            return
        if terminator.text == "{":
            # Property/indexer accessor block (C#) or stray block: structurally
            # opaque; copied verbatim by downstream stages.
            self.cur.skip_balanced("{", "}")
            return

        # Function-like member.
        name_tok, trailing_params, ret_tokens = self._split_header(header)
        type_params = leading_type_params + trailing_params
        params, param_names = self._parse_params()
        self._skip_post_params()
        body_span, body_style = self._read_function_body()

        kind = METHOD
        name = name_tok.text
        return_type = normalize_type(ret_tokens) if ret_tokens else ""
        if not ret_tokens:
            if (
                self.profile.profile_id != "java"
                and "static" in modifiers
                and name == simple_name
            ):
                kind = STATIC_INIT
                name = STATIC_INIT_NAME.format(index=static_init_count)
                return_type = "static-init"
                params = ()
                param_names = ()
            else:
                kind = CONSTRUCTOR
                name = CTOR_NAME
                return_type = "ctor"
        self.functions.append(
            FunctionDecl(
                unit_path=self.unit.path,
                owner_class=fq,
                name=name,
                arity=len(params),
                param_types=params,
                return_type=return_type,
                modifiers=modifiers,
                annotations=annotations,
                body_span=body_span,
                kind=kind,
                type_params=type_params,
                body_style=body_style,
                param_names=param_names,
            )
        )

    def _split_header(
        self, header: list[Token]
    ) -> tuple[Token, tuple[str, ...], list[Token]]:
        """Split a function header into (name token, trailing type params, return tokens)."""
        if not header:
            raise self.cur.error("function member missing name")
        idx = len(header) - 1
        trailing: tuple[str, ...] = ()
        if header[idx].text == ">":
            depth = 0
            j = idx
            while j >= 0:
                if header[j].text == ">":
                    depth += 1
                elif header[j].text == "<":
                    depth -= 1
                    if depth == 0:
                        break
                j -= 1
            if j <= 0:
                raise self.cur.error("malformed generic method header")
            names = [
                t.text
                for t in header[j + 1 : idx]
                if t.kind == WORD and t.text not in ("in", "out")
            ]
            trailing = tuple(names)
            idx = j - 1
        name_tok = header[idx]
        if name_tok.kind != WORD:
            raise ParseError(self.unit.path, name_tok.start,
                             f"expected member name, found {name_tok.text!r}")
        ret_tokens = header[:idx]
        return name_tok, trailing, ret_tokens

    def _parse_params(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        cur = self.cur
        cur.expect("(")
        depth = 1
        groups: list[list[Token]] = [[]]
        while not cur.at_end():
            tok = cur.advance()
            if tok.text in ("(", "[", "<"):
                depth += 1
            elif tok.text in (")", "]", ">"):
                depth -= 1
                if depth == 0:
                    break
            elif tok.text == "," and depth == 1:
                groups.append([])
                continue
            groups[-1].append(tok)
        else:
            raise cur.error("unbalanced parameter list")
        if groups == [[]]:
            return (), ()
        pairs = [self._param_type(g) for g in groups]
        return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)

    def _param_type(self, tokens: list[Token]) -> tuple[str, str]:
        toks = list(tokens)
        # strip parameter annotations/attributes and storage keywords
        while toks:
            t = toks[0]
            if t.text == "@":
                toks.pop(0)
                while toks and (toks[0].kind == WORD or toks[0].text == "."):
                    toks.pop(0)
                if toks and toks[0].text == "(":
                    d = 0
                    while toks:
                        tt = toks.pop(0)
                        if tt.text == "(":
                            d += 1
                        elif tt.text == ")":
                            d -= 1
                            if d == 0:
                                break
                continue
            if t.text == "[":
                d = 0
                while toks:
                    tt = toks.pop(0)
                    if tt.text == "[":
                        d += 1
                    elif tt.text == "]":
                        d -= 1
                        if d == 0:
                            break
                # attribute vs array suffix: attributes only lead, arrays never do
                continue
            if t.kind == WORD and t.text in ("final", "ref", "out", "in", "params", "this"):
                toks.pop(0)
                continue
            break
        # drop default value
        for i, t in enumerate(toks):
            if t.text == "=":
                toks = toks[:i]
                break
        name_idx = None
        for i in range(len(toks) - 1, -1, -1):
            if toks[i].kind == WORD:
                name_idx = i
                break
        if name_idx is None or name_idx == 0:
            return normalize_type(toks), ""  # type-only parameter (interface decls)
        return (
            normalize_type(toks[:name_idx] + toks[name_idx + 1 :]),
            toks[name_idx].text,
        )

    def _skip_post_params(self) -> None:
        """Consume throws clauses / generic constraints up to the body or terminator."""
        cur = self.cur
        while True:
            tok = cur.peek()
            if tok is None:
                raise cur.error("unterminated member after parameter list")
            if tok.text in ("{", ";", "=>"):
                return
            if tok.text == "(":
                cur.skip_balanced("(", ")")
                continue
            if tok.text == "<":
                cur.skip_balanced("<", ">")
                continue
            cur.advance()

    def _read_function_body(self) -> tuple[Span | None, str]:
        cur = self.cur
        tok = cur.peek()
        assert tok is not None
        if tok.text == ";":
            cur.advance()
            return None, "block"
        if tok.text == "{":
            return self._read_brace_body(), "block"
        if tok.text == "=>":
            arrow = cur.advance()
            depth = 0
            while not cur.at_end():
                t = cur.advance()
                if t.text in ("(", "[", "{"):
                    depth += 1
                elif t.text in (")", "]", "}"):
                    depth -= 1
                elif t.text == ";" and depth == 0:
                    return Span(arrow.end, t.start), "expression"
            raise ParseError(self.unit.path, arrow.start, "unterminated expression body")
        raise cur.error(f"expected function body, found {tok.text!r}")

    def _finish_field(
        self,
        fq: str,
        member_start: int,
        header: list[Token],
        modifiers: frozenset[str],
    ) -> None:
        cur = self.cur
        segments: list[tuple[list[Token], bool]] = []
        seg: list[Token] = list(header)
        has_init = False
        terminator = cur.peek()
        assert terminator is not None
        while True:
            tok = cur.peek()
            if tok is None:
                raise cur.error(f"unterminated field declaration in {fq}")
            if tok.text == ";":
                end_tok = cur.advance()
                segments.append((seg, has_init))
                break
            if tok.text == "=":
                has_init = True
                cur.advance()
                self._skip_initializer()
                continue
            if tok.text == ",":
                cur.advance()
                segments.append((seg, has_init))
                seg = []
                has_init = False
                continue
            seg.append(cur.advance())
        span = Span(member_start, end_tok.end)
        is_static = "static" in modifiers or "const" in modifiers
        for seg_tokens, seg_init in segments:
            name = None
            for t in reversed(seg_tokens):
                if t.kind == WORD:
                    name = t.text
                    break
            if name is None:
                raise ParseError(self.unit.path, member_start, "field without a name")
            self.fields.append(
                FieldDecl(
                    owner_class=fq,
                    name=name,
                    has_initializer=seg_init,
                    span=span,
                    unit_path=self.unit.path,
                    is_static=is_static,
                )
            )

    def _skip_initializer(self) -> None:
        """Skip an initializer expression up to a top-level ',' or ';'."""
        cur = self.cur
        depth = 0
        while not cur.at_end():
            tok = cur.peek()
            assert tok is not None
            if depth == 0 and tok.text in (",", ";"):
                return
            if tok.text in ("(", "[", "{"):
                depth += 1
            elif tok.text in (")", "]", "}"):
                depth -= 1
            cur.advance()
        raise cur.error("unterminated initializer")
