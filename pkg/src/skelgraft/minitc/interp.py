"""Tree-walking interpreter for the fixture-language subset.

Each test runs in a fresh Interp, so static state (and static-initializer
trace lines) is re-established per test regardless of runner mode. The
generated trace-runtime class and the Assert/Math helpers are executed as
native intrinsics, the same way a real VM treats native methods.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from skelgraft.minitc import RUN_ID_ENV_VAR, TRACE_ENV_VAR, TRACE_RUNTIME_CLASS
from skelgraft.minitc import bodies as b
from skelgraft.minitc.project import ClassInfo, FieldInfo, MethodInfo, Project

_EXCEPTION_SUFFIXES = ("Exception", "Error")


class InterpError(Exception):
    """Interpreter-level fault (unknown name, bad types); fails the test."""


@dataclass
class LangThrow(Exception):
    type_name: str
    message: str
    is_assertion: bool = False


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


@dataclass
class ArrayVal:
    items: list


@dataclass
class ObjectVal:
    cls: ClassInfo
    fields: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ClassRef:
    name: str


@dataclass
class ExceptionVal:
    type_name: str
    message: str


def _default_for(type_name: str):
    base = type_name.rstrip("[]")
    if type_name.endswith("[]"):
        return None
    if base in ("int", "long", "short", "byte", "sbyte", "uint", "ulong", "ushort"):
        return 0
    if base in ("double", "float", "decimal"):
        return 0.0
    if base in ("boolean", "bool"):
        return False
    if base == "char":
        return "\0"
    return None


def render(value) -> str:
    """Source-language string rendering for concatenation."""
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float):
        if value == int(value) and abs(value) < 1e15:
            return f"{value:.1f}"
        return repr(value)
    if isinstance(value, ArrayVal):
        return f"[array of {len(value.items)}]"
    if isinstance(value, ObjectVal):
        return f"{value.cls.name}@instance"
    return str(value)


class Interp:
    def __init__(self, project: Project):
        self.project = project
        self.profile = project.profile
        self.statics: dict[str, dict[str, object]] = {}
        self.initialized: set[str] = set()
        self.initializing: set[str] = set()

    # -- class machinery ---------------------------------------------------

    def ensure_initialized(self, cls: ClassInfo) -> None:
        if cls.name in self.initialized or cls.name in self.initializing:
            return
        self.initializing.add(cls.name)
        store = self.statics.setdefault(cls.name, {})
        for finfo in cls.fields.values():
            if finfo.is_static:
                store[finfo.name] = _default_for(finfo.type_name)
        for member in cls.static_order:
            if isinstance(member, FieldInfo):
                store[member.name] = self.eval(member.init, _Frame(self, cls, None, {}))
            elif isinstance(member, MethodInfo):
                self.exec_method(cls, member, None, [])
        self.initializing.discard(cls.name)
        self.initialized.add(cls.name)

    def instantiate(self, cls: ClassInfo, args: list) -> ObjectVal:
        self.ensure_initialized(cls)
        obj = ObjectVal(cls)
        instance_fields = [f for f in cls.fields.values() if not f.is_static]
        for finfo in instance_fields:
            obj.fields[finfo.name] = _default_for(finfo.type_name)
        for finfo in sorted(instance_fields, key=lambda f: f.order):
            if finfo.init is not None:
                obj.fields[finfo.name] = self.eval(finfo.init, _Frame(self, cls, obj, {}))
        ctor = cls.find_method("<init>", len(args))
        if ctor is not None:
            self.exec_method(cls, ctor, obj, args)
        elif len(args) > 0:
            raise InterpError(
                f"no constructor {cls.name}/{len(args)}"
            )
        return obj

    def exec_method(self, cls: ClassInfo, minfo: MethodInfo, this: ObjectVal | None, args: list):
        decl = minfo.decl
        if minfo.body is None and minfo.body_error is None:
            unit = self.project.units[decl.unit_path]
            span = decl.body_span
            if span is None:
                raise InterpError(f"abstract method {cls.name}.{decl.name} has no body")
            try:
                if decl.body_style == "expression":
                    expr = b.parse_expression(span.slice(unit.text), span.start)
                    minfo.body = b.Block([b.Return(expr)])
                else:
                    minfo.body = b.parse_body(span.slice(unit.text), span.start)
            except b.BodyParseError as err:
                minfo.body_error = err
        if minfo.body_error is not None:
            raise InterpError(f"unparseable body in {cls.name}.{decl.name}: {minfo.body_error}")
        frame = _Frame(self, cls, this, dict(zip(decl.param_names, args)))
        try:
            self.exec_block(minfo.body, frame)
        except _ReturnSignal as ret:
            return ret.value
        return None

    def call_named(self, cls_name: str, method: str, args: list):
        cls = self.project.class_named(cls_name)
        if cls is None:
            raise InterpError(f"unknown class {cls_name}")
        minfo = cls.find_method(method, len(args))
        if minfo is None:
            raise InterpError(f"no method {cls_name}.{method}/{len(args)}")
        self.ensure_initialized(cls)
        this = None
        if "static" not in minfo.decl.modifiers:
            this = self.instantiate(cls, [])
        return self.exec_method(cls, minfo, this, args)

    # -- statements ---------------------------------------------------------

    def exec_block(self, block: b.Block, frame: "_Frame") -> None:
        frame.push_scope()
        try:
            for stmt in block.stmts:
                self.exec_stmt(stmt, frame)
        finally:
            frame.pop_scope()

    def exec_stmt(self, stmt, frame: "_Frame") -> None:
        if isinstance(stmt, b.Block):
            self.exec_block(stmt, frame)
        elif isinstance(stmt, b.ExprStmt):
            self.eval(stmt.expr, frame)
        elif isinstance(stmt, b.LocalDecl):
            for name, init in stmt.declarators:
                value = self.eval(init, frame) if init is not None else _default_for(stmt.type_name)
                frame.declare(name, value)
        elif isinstance(stmt, b.If):
            if self._truth(self.eval(stmt.cond, frame)):
                self.exec_stmt(stmt.then, frame)
            elif stmt.orelse is not None:
                self.exec_stmt(stmt.orelse, frame)
        elif isinstance(stmt, b.While):
            while self._truth(self.eval(stmt.cond, frame)):
                self.exec_stmt(stmt.body, frame)
        elif isinstance(stmt, b.For):
            frame.push_scope()
            try:
                if stmt.init is not None:
                    self.exec_stmt(stmt.init, frame)
                while stmt.cond is None or self._truth(self.eval(stmt.cond, frame)):
                    self.exec_stmt(stmt.body, frame)
                    for upd in stmt.update:
                        self.eval(upd, frame)
            finally:
                frame.pop_scope()
        elif isinstance(stmt, b.Return):
            value = self.eval(stmt.value, frame) if stmt.value is not None else None
            raise _ReturnSignal(value)
        elif isinstance(stmt, b.Throw):
            value = self.eval(stmt.value, frame)
            if isinstance(value, ExceptionVal):
                raise LangThrow(value.type_name, value.message)
            raise LangThrow("RuntimeException", render(value))
        else:
            raise InterpError(f"unsupported statement {type(stmt).__name__}")

    # -- expressions ----------------------------------------------------------

    def eval(self, expr, frame: "_Frame"):
        if isinstance(expr, b.Literal):
            return expr.value
        if isinstance(expr, b.Name):
            return self._resolve_name(expr.ident, frame, expr.pos)
        if isinstance(expr, b.This):
            if frame.this is None:
                raise InterpError("'this' in static context")
            return frame.this
        if isinstance(expr, b.FieldAccess):
            return self._field_value(self.eval(expr.obj, frame), expr.name)
        if isinstance(expr, b.Index):
            return self._index_value(expr, frame)
        if isinstance(expr, b.Call):
            return self._call(expr, frame)
        if isinstance(expr, b.New):
            return self._new(expr, frame)
        if isinstance(expr, b.NewArray):
            return self._new_array(expr, frame)
        if isinstance(expr, b.Unary):
            return self._unary(expr, frame)
        if isinstance(expr, b.Binary):
            return self._binary(expr, frame)
        if isinstance(expr, b.Assign):
            return self._assign(expr, frame)
        if isinstance(expr, b.Ternary):
            if self._truth(self.eval(expr.cond, frame)):
                return self.eval(expr.then, frame)
            return self.eval(expr.orelse, frame)
        if isinstance(expr, b.IncDec):
            return self._incdec(expr, frame)
        raise InterpError(f"unsupported expression {type(expr).__name__}")

    def _resolve_name(self, ident: str, frame: "_Frame", pos: int):
        found, value = frame.lookup(ident)
        if found:
            return value
        if frame.this is not None and ident in frame.this.fields:
            return frame.this.fields[ident]
        cls = frame.cls
        if cls is not None and ident in cls.fields and cls.fields[ident].is_static:
            self.ensure_initialized(cls)
            return self.statics[cls.name][ident]
        if self.project.class_named(ident) is not None:
            return ClassRef(ident)
        if ident in _INTRINSIC_CLASSES or ident == TRACE_RUNTIME_CLASS:
            return ClassRef(ident)
        raise InterpError(f"unresolved name '{ident}'")

    def _field_value(self, obj, name: str):
        if obj is None:
            raise self._null_deref()
        if isinstance(obj, ClassRef):
            cls = self.project.class_named(obj.name)
            if cls is not None:
                self.ensure_initialized(cls)
                store = self.statics.get(cls.name, {})
                if name in store:
                    return store[name]
            raise InterpError(f"no static field {obj.name}.{name}")
        if isinstance(obj, ArrayVal):
            if name in ("length", "Length"):
                return len(obj.items)
            raise InterpError(f"arrays have no field '{name}'")
        if isinstance(obj, str):
            if name == "Length":
                return len(obj)
            raise InterpError(f"strings have no field '{name}'")
        if isinstance(obj, ObjectVal):
            if name in obj.fields:
                return obj.fields[name]
            finfo = obj.cls.fields.get(name)
            if finfo is not None and finfo.is_static:
                self.ensure_initialized(obj.cls)
                return self.statics[obj.cls.name][name]
            raise InterpError(f"no field {obj.cls.name}.{name}")
        raise InterpError(f"cannot read field '{name}' of {type(obj).__name__}")

    def _index_value(self, expr: b.Index, frame: "_Frame"):
        arr = self.eval(expr.obj, frame)
        idx = self.eval(expr.index, frame)
        if arr is None:
            raise self._null_deref()
        if not isinstance(arr, ArrayVal):
            raise InterpError("indexing a non-array value")
        if not isinstance(idx, int) or isinstance(idx, bool):
            raise InterpError("array index must be an int")
        if idx < 0 or idx >= len(arr.items):
            name = (
                "IndexOutOfRangeException"
                if self.profile.profile_id == "csharp"
                else "ArrayIndexOutOfBoundsException"
            )
            raise LangThrow(name, f"Index {idx} out of range for length {len(arr.items)}")
        return arr.items[idx]

    def _call(self, expr: b.Call, frame: "_Frame"):
        args = None
        if expr.receiver is None:
            cls = frame.cls
            if cls is None:
                raise InterpError(f"unqualified call '{expr.name}' outside a class")
            args = [self.eval(a, frame) for a in expr.args]
            minfo = cls.find_method(expr.name, len(args))
            if minfo is None:
                raise InterpError(f"no method {cls.name}.{expr.name}/{len(args)}")
            this = frame.this if "static" not in minfo.decl.modifiers else None
            if this is None and "static" not in minfo.decl.modifiers:
                raise InterpError(f"instance method {expr.name} called statically")
            return self.exec_method(cls, minfo, this, args)
        receiver = self.eval(expr.receiver, frame)
        args = [self.eval(a, frame) for a in expr.args]
        if receiver is None:
            raise self._null_deref()
        if isinstance(receiver, ClassRef):
            return self._static_call(receiver.name, expr.name, args)
        if isinstance(receiver, str):
            return self._string_method(receiver, expr.name, args)
        if isinstance(receiver, ObjectVal):
            minfo = receiver.cls.find_method(expr.name, len(args))
            if minfo is None:
                raise InterpError(f"no method {receiver.cls.name}.{expr.name}/{len(args)}")
            self.ensure_initialized(receiver.cls)
            this = receiver if "static" not in minfo.decl.modifiers else None
            return self.exec_method(receiver.cls, minfo, this, args)
        raise InterpError(f"cannot call '{expr.name}' on {type(receiver).__name__}")

    def _static_call(self, cls_name: str, method: str, args: list):
        if cls_name == TRACE_RUNTIME_CLASS:
            return _trace_emit(args)
        if cls_name in _INTRINSIC_CLASSES:
            handler = _INTRINSIC_CLASSES[cls_name].get(method)
            if handler is None:
                raise InterpError(f"no intrinsic {cls_name}.{method}")
            return handler(self, args)
        cls = self.project.class_named(cls_name)
        if cls is None:
            raise InterpError(f"unknown class {cls_name}")
        self.ensure_initialized(cls)
        minfo = cls.find_method(method, len(args))
        if minfo is None:
            raise InterpError(f"no method {cls_name}.{method}/{len(args)}")
        if "static" not in minfo.decl.modifiers:
            raise InterpError(f"instance method {cls_name}.{method} called statically")
        return self.exec_method(cls, minfo, None, args)

    def _string_method(self, value: str, method: str, args: list):
        if method in ("length", "Length") and not args:
            return len(value)
        if method in ("equals", "Equals") and len(args) == 1:
            return isinstance(args[0], str) and value == args[0]
        if method in ("contains", "Contains") and len(args) == 1:
            return args[0] in value
        if method in ("isEmpty",) and not args:
            return value == ""
        if method in ("charAt",) and len(args) == 1:
            return value[args[0]]
        if method in ("substring", "Substring") and len(args) in (1, 2):
            return value[args[0] : args[1]] if len(args) == 2 else value[args[0] :]
        if method in ("toString", "ToString") and not args:
            return value
        raise InterpError(f"unsupported string method '{method}'")

    def _new(self, expr: b.New, frame: "_Frame"):
        simple = expr.type_name.rsplit(".", 1)[-1]
        cls = self.project.class_named(simple)
        if cls is not None:
            if cls.kind in ("interface",):
                raise InterpError(f"cannot instantiate interface {simple}")
            args = [self.eval(a, frame) for a in expr.args]
            return self.instantiate(cls, args)
        if simple.endswith(_EXCEPTION_SUFFIXES):
            args = [self.eval(a, frame) for a in expr.args]
            message = render(args[0]) if args else ""
            return ExceptionVal(simple, message)
        raise InterpError(f"unknown class {expr.type_name}")

    def _new_array(self, expr: b.NewArray, frame: "_Frame"):
        if expr.init is not None:
            return ArrayVal([self.eval(item, frame) for item in expr.init])
        size = self.eval(expr.size, frame)
        if not isinstance(size, int) or isinstance(size, bool) or size < 0:
            raise LangThrow("NegativeArraySizeException", render(size))
        return ArrayVal([_default_for(expr.elem_type)] * size)

    def _unary(self, expr: b.Unary, frame: "_Frame"):
        value = self.eval(expr.operand, frame)
        if expr.op == "-":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InterpError("unary '-' on non-number")
            return -value
        if expr.op == "!":
            return not self._truth(value)
        raise InterpError(f"unsupported unary {expr.op}")

    def _binary(self, expr: b.Binary, frame: "_Frame"):
        op = expr.op
        if op == "&&":
            return self._truth(self.eval(expr.left, frame)) and self._truth(
                self.eval(expr.right, frame)
            )
        if op == "||":
            return self._truth(self.eval(expr.left, frame)) or self._truth(
                self.eval(expr.right, frame)
            )
        left = self.eval(expr.left, frame)
        right = self.eval(expr.right, frame)
        return self.apply_binary(op, left, right)

    def apply_binary(self, op: str, left, right):
        if op == "+" and (isinstance(left, str) or isinstance(right, str)):
            return render(left) + render(right) if not isinstance(left, str) else left + render(right)
        if op in ("==", "!="):
            eq = values_equal(left, right)
            return eq if op == "==" else not eq
        if not _is_num(left) or not _is_num(right):
            raise InterpError(f"operator {op} on non-numeric operands")
        if op == "+":
            return self._arith(left, right, lambda a, b2: a + b2)
        if op == "-":
            return self._arith(left, right, lambda a, b2: a - b2)
        if op == "*":
            return self._arith(left, right, lambda a, b2: a * b2)
        if op == "/":
            if isinstance(left, int) and isinstance(right, int):
                if right == 0:
                    raise self._div_zero()
                return _trunc_div(left, right)
            if right == 0:
                return math.inf if left > 0 else (-math.inf if left < 0 else math.nan)
            return left / right
        if op == "%":
            if isinstance(left, int) and isinstance(right, int):
                if right == 0:
                    raise self._div_zero()
                return left - _trunc_div(left, right) * right
            return math.fmod(left, right)
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        if op == ">=":
            return left >= right
        raise InterpError(f"unsupported operator {op}")

    @staticmethod
    def _arith(left, right, fn):
        return fn(left, right)

    def _assign(self, expr: b.Assign, frame: "_Frame"):
        if expr.op == "=":
            value = self.eval(expr.value, frame)
        else:
            current = self.eval(expr.target, frame)
            value = self.apply_binary(expr.op[:-1], current, self.eval(expr.value, frame))
        self._store(expr.target, value, frame)
        return value

    def _incdec(self, expr: b.IncDec, frame: "_Frame"):
        current = self.eval(expr.target, frame)
        if not _is_num(current):
            raise InterpError("++/-- on non-number")
        updated = current + (1 if expr.op == "++" else -1)
        self._store(expr.target, updated, frame)
        return updated if expr.prefix else current

    def _store(self, target, value, frame: "_Frame") -> None:
        if isinstance(target, b.Name):
            if frame.assign_existing(target.ident, value):
                return
            if frame.this is not None and target.ident in frame.this.fields:
                frame.this.fields[target.ident] = value
                return
            cls = frame.cls
            if cls is not None and target.ident in cls.fields and cls.fields[target.ident].is_static:
                self.ensure_initialized_for_store(cls)
                self.statics[cls.name][target.ident] = value
                return
            raise InterpError(f"assignment to unresolved name '{target.ident}'")
        if isinstance(target, b.FieldAccess):
            obj = self.eval(target.obj, frame)
            if obj is None:
                raise self._null_deref()
            if isinstance(obj, ObjectVal):
                obj.fields[target.name] = value
                return
            if isinstance(obj, ClassRef):
                cls = self.project.class_named(obj.name)
                if cls is not None:
                    self.ensure_initialized_for_store(cls)
                    self.statics[cls.name][target.name] = value
                    return
            raise InterpError(f"cannot assign field '{target.name}'")
        if isinstance(target, b.Index):
            arr = self.eval(target.obj, frame)
            idx = self.eval(target.index, frame)
            if arr is None:
                raise self._null_deref()
            if not isinstance(arr, ArrayVal):
                raise InterpError("indexing a non-array value")
            if idx < 0 or idx >= len(arr.items):
                name = (
                    "IndexOutOfRangeException"
                    if self.profile.profile_id == "csharp"
                    else "ArrayIndexOutOfBoundsException"
                )
                raise LangThrow(name, f"Index {idx} out of range for length {len(arr.items)}")
            arr.items[idx] = value
            return
        raise InterpError("invalid assignment target")

    def ensure_initialized_for_store(self, cls: ClassInfo) -> None:
        # during static init the class is mid-initialization; stores are fine
        if cls.name not in self.initializing:
            self.ensure_initialized(cls)
        else:
            self.statics.setdefault(cls.name, {})

    def _truth(self, value) -> bool:
        if isinstance(value, bool):
            return value
        raise InterpError(f"condition is not a boolean (got {type(value).__name__})")

    def _null_deref(self) -> LangThrow:
        if self.profile.profile_id == "csharp":
            return LangThrow(
                "NullReferenceException",
                "Object reference not set to an instance of an object.",
            )
        return LangThrow("NullPointerException", "null dereference")

    def _div_zero(self) -> LangThrow:
        if self.profile.profile_id == "csharp":
            return LangThrow("DivideByZeroException", "Attempted to divide by zero.")
        return LangThrow("ArithmeticException", "/ by zero")


class _Frame:
    __slots__ = ("interp", "cls", "this", "scopes")

    def __init__(self, interp: Interp, cls: ClassInfo | None, this: ObjectVal | None, params: dict):
        self.interp = interp
        self.cls = cls
        self.this = this
        self.scopes = [dict(params)]

    def push_scope(self) -> None:
        self.scopes.append({})

    def pop_scope(self) -> None:
        self.scopes.pop()

    def declare(self, name: str, value) -> None:
        self.scopes[-1][name] = value

    def lookup(self, name: str) -> tuple[bool, object]:
        for scope in reversed(self.scopes):
            if name in scope:
                return True, scope[name]
        return False, None

    def assign_existing(self, name: str, value) -> bool:
        for scope in reversed(self.scopes):
            if name in scope:
                scope[name] = value
                return True
        return False


def _is_num(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _trunc_div(a: int, b2: int) -> int:
    return int(math.trunc(a / b2)) if b2 != 0 else 0


def values_equal(left, right) -> bool:
    if left is None or right is None:
        return left is None and right is None
    if _is_num(left) and _is_num(right):
        return left == right
    if isinstance(left, bool) and isinstance(right, bool):
        return left == right
    if isinstance(left, str) and isinstance(right, str):
        return left == right
    return left is right


def _trace_emit(args: list):
    if len(args) != 1 or not isinstance(args[0], str):
        raise InterpError("trace emit expects one string key")
    path = os.environ.get(TRACE_ENV_VAR)
    if not path:
        return None
    run_id = os.environ.get(RUN_ID_ENV_VAR, "run")
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(f"TRACE\t{run_id}\t{args[0]}\n")
    return None


# -- intrinsic static classes -------------------------------------------------

def _format_expected(interp: Interp, expected, actual) -> str:
    if interp.project.spec.test_framework == "nunit":
        return f"Expected: {render(expected)} But was: {render(actual)}"
    return f"expected:<{render(expected)}> but was:<{render(actual)}>"


def _assert_equals(interp: Interp, args: list):
    if len(args) == 3:
        expected, actual, delta = args
        if not (_is_num(expected) and _is_num(actual) and _is_num(delta)):
            raise InterpError("3-arg equality assertion expects numbers")
        if abs(expected - actual) <= delta:
            return None
        raise LangThrow("AssertionError", _format_expected(interp, expected, actual), True)
    if len(args) != 2:
        raise InterpError("equality assertion expects 2 or 3 arguments")
    expected, actual = args
    if values_equal(expected, actual):
        return None
    raise LangThrow("AssertionError", _format_expected(interp, expected, actual), True)


def _assert_true(interp: Interp, args: list):
    if len(args) != 1 or not isinstance(args[0], bool):
        raise InterpError("truth assertion expects one boolean")
    if args[0]:
        return None
    raise LangThrow("AssertionError", _format_expected(interp, True, args[0]), True)


def _assert_false(interp: Interp, args: list):
    if len(args) != 1 or not isinstance(args[0], bool):
        raise InterpError("truth assertion expects one boolean")
    if not args[0]:
        return None
    raise LangThrow("AssertionError", _format_expected(interp, False, args[0]), True)


def _assert_not_null(interp: Interp, args: list):
    if len(args) != 1:
        raise InterpError("null assertion expects one argument")
    if args[0] is not None:
        return None
    raise LangThrow("AssertionError", "Expected: not null But was: null", True)


def _assert_null(interp: Interp, args: list):
    if len(args) != 1:
        raise InterpError("null assertion expects one argument")
    if args[0] is None:
        return None
    raise LangThrow("AssertionError", f"Expected: null But was: {render(args[0])}", True)


def _fail(interp: Interp, args: list):
    message = render(args[0]) if args else "explicit failure"
    raise LangThrow("AssertionError", message, True)


def _math_abs(interp: Interp, args: list):
    return abs(args[0])


def _math_max(interp: Interp, args: list):
    return max(args[0], args[1])


def _math_min(interp: Interp, args: list):
    return min(args[0], args[1])


_INTRINSIC_CLASSES: dict[str, dict] = {
    "Assert": {
        "assertEquals": _assert_equals,
        "assertTrue": _assert_true,
        "assertFalse": _assert_false,
        "assertNotNull": _assert_not_null,
        "assertNull": _assert_null,
        "fail": _fail,
        "AreEqual": _assert_equals,
        "IsTrue": _assert_true,
        "IsFalse": _assert_false,
        "IsNotNull": _assert_not_null,
        "IsNull": _assert_null,
        "Fail": _fail,
    },
    "Math": {"abs": _math_abs, "max": _math_max, "min": _math_min,
             "Abs": _math_abs, "Max": _math_max, "Min": _math_min},
}
