"""Reference resolution for minitc build.

Checks every parsed body for calls that cannot resolve against the
repository's own classes; receivers of unknown (external) types are
assumed fine, like a linker treating external libraries as present.
Diagnostics mimic the native toolchains' formats so the downstream
classifier sees realistic output.
"""

from __future__ import annotations

from dataclasses import dataclass

from skelgraft.minitc import TRACE_RUNTIME_CLASS
from skelgraft.minitc import bodies as b
from skelgraft.minitc.project import ClassInfo, MethodInfo, Project

_INTRINSIC_NAMES = frozenset({"Assert", "Math", TRACE_RUNTIME_CLASS})


@dataclass
class BuildDiagnostic:
    path: str
    line: int
    col: int
    code: str  # C# code; java formatting ignores it
    message: str
    symbol: str = ""
    location: str = ""

    def format(self, language: str) -> str:
        if language == "csharp":
            return f"{self.path}({self.line},{self.col}): error {self.code}: {self.message}"
        lines = [f"{self.path}:{self.line}: error: {self.message}"]
        if self.symbol:
            lines.append(f"  symbol:   {self.symbol}")
        if self.location:
            lines.append(f"  location: {self.location}")
        return "\n".join(lines)


def _line_col(text: bytes, offset: int) -> tuple[int, int]:
    line = text.count(b"\n", 0, offset) + 1
    last_nl = text.rfind(b"\n", 0, offset)
    return line, offset - last_nl


def check_project(project: Project) -> list[BuildDiagnostic]:
    diags: list[BuildDiagnostic] = []
    cs = project.profile.profile_id == "csharp"
    for path, err in project.parse_failures:
        text = project.units[path].text
        line, col = _line_col(text, min(err.position, max(len(text) - 1, 0)))
        if cs:
            diags.append(BuildDiagnostic(path, line, col, "CS1513", "} expected"))
        else:
            diags.append(BuildDiagnostic(path, line, col, "", "reached end of file while parsing"))
    for cls in project.classes.values():
        if cls.name == TRACE_RUNTIME_CLASS:
            continue  # executed natively; its real body is for the real toolchain
        for minfo in cls.methods.values():
            diags.extend(_check_method(project, cls, minfo))
    diags.sort(key=lambda d: (d.path, d.line, d.col))
    return diags


def _check_method(project: Project, cls: ClassInfo, minfo: MethodInfo) -> list[BuildDiagnostic]:
    decl = minfo.decl
    if decl.body_span is None:
        return []
    unit = project.units[decl.unit_path]
    try:
        if decl.body_style == "expression":
            body = b.Block([b.Return(b.parse_expression(
                decl.body_span.slice(unit.text), decl.body_span.start))])
        else:
            body = b.parse_body(decl.body_span.slice(unit.text), decl.body_span.start)
    except b.BodyParseError as err:
        line, col = _line_col(unit.text, err.position)
        if project.profile.profile_id == "csharp":
            return [BuildDiagnostic(decl.unit_path, line, col, "CS1525",
                                    f"Invalid expression term ({err.message})")]
        return [BuildDiagnostic(decl.unit_path, line, col, "", "illegal start of expression")]

    checker = _BodyChecker(project, cls, minfo, unit.text)
    checker.check_block(body)
    return checker.diags


class _BodyChecker:
    def __init__(self, project: Project, cls: ClassInfo, minfo: MethodInfo, text: bytes):
        self.project = project
        self.cls = cls
        self.minfo = minfo
        self.text = text
        self.path = minfo.decl.unit_path
        self.cs = project.profile.profile_id == "csharp"
        self.diags: list[BuildDiagnostic] = []
        self.local_types: dict[str, str] = dict(
            zip(minfo.decl.param_names, (_simple(t) for t in minfo.decl.param_types))
        )

    # -- type plumbing

    def _static_type(self, expr) -> str | None:
        """Best-effort declared type of an expression, simple name only."""
        if isinstance(expr, b.This):
            return self.cls.name
        if isinstance(expr, b.Name):
            if expr.ident in self.local_types:
                return self.local_types[expr.ident]
            finfo = self.cls.fields.get(expr.ident)
            if finfo is not None:
                return _simple(finfo.type_name)
            return None
        if isinstance(expr, b.New):
            return _simple(expr.type_name)
        if isinstance(expr, b.FieldAccess):
            owner = self._receiver_class(expr.obj)
            if owner is not None:
                finfo = owner.fields.get(expr.name)
                if finfo is not None:
                    return _simple(finfo.type_name)
        return None

    def _receiver_class(self, expr) -> ClassInfo | None:
        if isinstance(expr, b.Name) and self.project.class_named(expr.ident) is not None \
                and expr.ident not in self.local_types:
            return self.project.class_named(expr.ident)
        type_name = self._static_type(expr)
        if type_name is None or type_name.endswith("[]"):
            return None
        return self.project.class_named(type_name)

    def _report(self, pos: int, code: str, message: str, symbol: str = "", location: str = "") -> None:
        line, col = _line_col(self.text, pos)
        self.diags.append(BuildDiagnostic(self.path, line, col, code, message, symbol, location))

    # -- walkers

    def check_block(self, block: b.Block) -> None:
        for stmt in block.stmts:
            self.check_stmt(stmt)

    def check_stmt(self, stmt) -> None:
        if isinstance(stmt, b.Block):
            self.check_block(stmt)
        elif isinstance(stmt, b.ExprStmt):
            self.check_expr(stmt.expr)
        elif isinstance(stmt, b.LocalDecl):
            for name, init in stmt.declarators:
                declared = stmt.type_name
                if declared == "var" and isinstance(init, b.New):
                    declared = init.type_name
                self.local_types[name] = _simple(declared)
                if init is not None:
                    self.check_expr(init)
        elif isinstance(stmt, b.If):
            self.check_expr(stmt.cond)
            self.check_stmt(stmt.then)
            if stmt.orelse is not None:
                self.check_stmt(stmt.orelse)
        elif isinstance(stmt, b.While):
            self.check_expr(stmt.cond)
            self.check_stmt(stmt.body)
        elif isinstance(stmt, b.For):
            if stmt.init is not None:
                self.check_stmt(stmt.init)
            if stmt.cond is not None:
                self.check_expr(stmt.cond)
            for upd in stmt.update:
                self.check_expr(upd)
            self.check_stmt(stmt.body)
        elif isinstance(stmt, b.Return):
            if stmt.value is not None:
                self.check_expr(stmt.value)
        elif isinstance(stmt, b.Throw):
            self.check_expr(stmt.value)

    def check_expr(self, expr) -> None:
        if isinstance(expr, b.Call):
            self._check_call(expr)
            if expr.receiver is not None:
                self.check_expr(expr.receiver)
            for arg in expr.args:
                self.check_expr(arg)
        elif isinstance(expr, b.New):
            self._check_new(expr)
            for arg in expr.args:
                self.check_expr(arg)
        elif isinstance(expr, b.NewArray):
            if expr.size is not None:
                self.check_expr(expr.size)
            for item in expr.init or []:
                self.check_expr(item)
        elif isinstance(expr, b.FieldAccess):
            self.check_expr(expr.obj)
        elif isinstance(expr, b.Index):
            self.check_expr(expr.obj)
            self.check_expr(expr.index)
        elif isinstance(expr, b.Unary):
            self.check_expr(expr.operand)
        elif isinstance(expr, b.Binary):
            self.check_expr(expr.left)
            self.check_expr(expr.right)
        elif isinstance(expr, b.Assign):
            self.check_expr(expr.target)
            self.check_expr(expr.value)
        elif isinstance(expr, b.Ternary):
            self.check_expr(expr.cond)
            self.check_expr(expr.then)
            self.check_expr(expr.orelse)
        elif isinstance(expr, b.IncDec):
            self.check_expr(expr.target)

    def _check_call(self, expr: b.Call) -> None:
        arity = len(expr.args)
        if expr.receiver is None or isinstance(expr.receiver, b.This):
            if self.cls.find_method(expr.name, arity) is not None:
                return
            if self.cls.overloads(expr.name):
                sig = f"method {expr.name}({', '.join('?' * arity)})"
                if self.cs:
                    self._report(expr.pos, "CS1501",
                                 f"No overload for method '{expr.name}' takes {arity} arguments")
                else:
                    self._report(expr.pos, "", "method cannot be applied to given types",
                                 symbol=sig, location=f"class {self.cls.name}")
                return
            if self.cs:
                self._report(expr.pos, "CS0103",
                             f"The name '{expr.name}' does not exist in the current context")
            else:
                self._report(expr.pos, "", "cannot find symbol",
                             symbol=f"method {expr.name}",
                             location=f"class {self.cls.name}")
            return
        if isinstance(expr.receiver, b.Name):
            recv_name = expr.receiver.ident
            if recv_name in _INTRINSIC_NAMES and recv_name not in self.local_types:
                return
            if recv_name not in self.local_types and self.project.class_named(recv_name) is not None:
                owner = self.project.class_named(recv_name)
                minfo = owner.find_method(expr.name, arity)
                if minfo is None:
                    if self.cs:
                        self._report(expr.pos, "CS0117",
                                     f"'{recv_name}' does not contain a definition for '{expr.name}'")
                    else:
                        self._report(expr.pos, "", "cannot find symbol",
                                     symbol=f"method {expr.name}",
                                     location=f"class {recv_name}")
                return
        owner = self._receiver_class(expr.receiver)
        if owner is None:
            return  # unknown/external receiver: assumed resolvable
        if owner.find_method(expr.name, arity) is None:
            if self.cs:
                self._report(
                    expr.pos, "CS1061",
                    f"'{owner.name}' does not contain a definition for '{expr.name}' "
                    f"and no accessible extension method '{expr.name}' accepting a first "
                    f"argument of type '{owner.name}' could be found",
                )
            else:
                self._report(expr.pos, "", "cannot find symbol",
                             symbol=f"method {expr.name}",
                             location=f"variable of type {owner.name}")

    def _check_new(self, expr: b.New) -> None:
        simple = _simple(expr.type_name)
        cls = self.project.class_named(simple)
        if cls is None:
            return  # external type
        explicit = cls.overloads("<init>")
        if not explicit and len(expr.args) == 0:
            return
        if cls.find_method("<init>", len(expr.args)) is None:
            if self.cs:
                self._report(expr.pos, "CS1729",
                             f"'{simple}' does not contain a constructor that takes "
                             f"{len(expr.args)} arguments")
            else:
                self._report(expr.pos, "", "constructor cannot be applied to given types",
                             symbol=f"constructor {simple}",
                             location=f"class {simple}")


def _simple(type_name: str) -> str:
    base = type_name.split("<", 1)[0]
    base = base.rsplit(".", 1)[-1]
    return base
