"""Statement/expression parser for the fixture-language subset.

Recursive descent over the shared lexer's token stream. Covers the
constructs the bundled repositories use: locals, assignment (plain and
compound), if/while/for, return/throw, calls, field and array access,
object and array creation, arithmetic/logical operators, ++/--, and
ternaries. Anything else raises BodyParseError with a byte position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from skelgraft.syntax.lexer import CHAR, NUMBER, PUNCT, STRING, WORD, Token, tokenize

_PRIMITIVES = frozenset(
    {"int", "long", "short", "byte", "float", "double", "boolean", "bool",
     "char", "string", "String", "var", "sbyte", "uint", "ulong", "ushort", "decimal",
     "object", "Object"}
)
_ASSIGN_OPS = ("=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=")


class BodyParseError(Exception):
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"@{position}: {message}")


# --- AST -----------------------------------------------------------------

@dataclass
class Block:
    stmts: list


@dataclass
class If:
    cond: object
    then: object
    orelse: object | None


@dataclass
class While:
    cond: object
    body: object


@dataclass
class For:
    init: object | None
    cond: object | None
    update: list
    body: object


@dataclass
class Return:
    value: object | None
    pos: int = 0


@dataclass
class Throw:
    value: object
    pos: int = 0


@dataclass
class LocalDecl:
    type_name: str
    declarators: list  # (name, init expr | None)
    pos: int = 0


@dataclass
class ExprStmt:
    expr: object
    pos: int = 0


@dataclass
class Literal:
    value: object


@dataclass
class Name:
    ident: str
    pos: int = 0


@dataclass
class This:
    pos: int = 0


@dataclass
class FieldAccess:
    obj: object
    name: str
    pos: int = 0


@dataclass
class Index:
    obj: object
    index: object
    pos: int = 0


@dataclass
class Call:
    receiver: object | None  # None -> unqualified call in current class
    name: str
    args: list = field(default_factory=list)
    pos: int = 0


@dataclass
class New:
    type_name: str
    args: list = field(default_factory=list)
    pos: int = 0


@dataclass
class NewArray:
    elem_type: str
    size: object | None
    init: list | None
    pos: int = 0


@dataclass
class Unary:
    op: str
    operand: object


@dataclass
class Binary:
    op: str
    left: object
    right: object


@dataclass
class Assign:
    target: object
    op: str
    value: object
    pos: int = 0


@dataclass
class Ternary:
    cond: object
    then: object
    orelse: object


@dataclass
class IncDec:
    op: str  # ++ | --
    target: object
    prefix: bool
    pos: int = 0


# --- Parser ----------------------------------------------------------------

def parse_body(text: bytes, base_offset: int = 0) -> Block:
    """Parse a brace-free body (the text between a function's braces)."""
    toks = tokenize(text)
    if base_offset:
        toks = [Token(t.kind, t.text, t.start + base_offset, t.end + base_offset) for t in toks]
    parser = _BodyParser(toks)
    stmts = []
    while not parser.at_end():
        stmts.append(parser.statement())
    return Block(stmts)


def parse_expression(text: bytes, base_offset: int = 0) -> object:
    """Parse a single expression (used for field initializers, arrow bodies)."""
    toks = tokenize(text)
    if base_offset:
        toks = [Token(t.kind, t.text, t.start + base_offset, t.end + base_offset) for t in toks]
    parser = _BodyParser(toks)
    expr = parser.expression()
    if not parser.at_end():
        raise BodyParseError(parser.peek().start, "trailing tokens after expression")
    return expr


class _BodyParser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    # -- token helpers

    def at_end(self) -> bool:
        return self.pos >= len(self.toks)

    def peek(self, offset: int = 0) -> Token:
        i = self.pos + offset
        if i >= len(self.toks):
            last = self.toks[-1].end if self.toks else 0
            raise BodyParseError(last, "unexpected end of body")
        return self.toks[i]

    def try_peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.toks[i] if i < len(self.toks) else None

    def advance(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.try_peek()
        if tok is not None and tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            raise BodyParseError(tok.start, f"expected {text!r}, found {tok.text!r}")
        return self.advance()

    # -- statements

    def statement(self):
        tok = self.peek()
        if tok.text == "{":
            return self.block()
        if tok.text == ";":
            self.advance()
            return Block([])
        if tok.kind == WORD:
            if tok.text == "if":
                return self.if_statement()
            if tok.text == "while":
                return self.while_statement()
            if tok.text == "for":
                return self.for_statement()
            if tok.text == "return":
                self.advance()
                if self.accept(";"):
                    return Return(None, tok.start)
                value = self.expression()
                self.expect(";")
                return Return(value, tok.start)
            if tok.text == "throw":
                self.advance()
                value = self.expression()
                self.expect(";")
                return Throw(value, tok.start)
            if tok.text in ("break", "continue"):
                raise BodyParseError(tok.start, f"{tok.text!r} is not supported")
            if self._looks_like_decl():
                return self.local_decl()
        expr = self.expression()
        self.expect(";")
        return ExprStmt(expr, tok.start)

    def block(self) -> Block:
        self.expect("{")
        stmts = []
        while not self.accept("}"):
            stmts.append(self.statement())
        return Block(stmts)

    def if_statement(self) -> If:
        self.expect("if")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        then = self.statement()
        orelse = None
        if self.try_peek() is not None and self.try_peek().text == "else":
            self.advance()
            orelse = self.statement()
        return If(cond, then, orelse)

    def while_statement(self) -> While:
        self.expect("while")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        return While(cond, self.statement())

    def for_statement(self) -> For:
        self.expect("for")
        self.expect("(")
        init = None
        if not self.accept(";"):
            init = self.local_decl() if self._looks_like_decl() else ExprStmt(self.expression(), self.peek().start)
            if isinstance(init, ExprStmt):
                self.expect(";")
        cond = None
        if not self.accept(";"):
            cond = self.expression()
            self.expect(";")
        update: list = []
        if self.peek().text != ")":
            update.append(self.expression())
            while self.accept(","):
                update.append(self.expression())
        self.expect(")")
        return For(init, cond, update, self.statement())

    def _looks_like_decl(self) -> bool:
        tok = self.try_peek()
        if tok is None or tok.kind != WORD:
            return False
        if tok.text == "var":
            return True
        if tok.text == "final":
            return True
        nxt = self.try_peek(1)
        if nxt is None:
            return False
        if tok.text in _PRIMITIVES:
            return nxt.kind == WORD or nxt.text == "["
        # "Type name" or "Type[] name"
        if nxt.kind == WORD:
            after = self.try_peek(2)
            return after is not None and after.text in ("=", ";", ",")
        if nxt.text == "[":
            n2, n3 = self.try_peek(2), self.try_peek(3)
            return n2 is not None and n2.text == "]" and n3 is not None and n3.kind == WORD
        return False

    def local_decl(self) -> LocalDecl:
        start = self.peek().start
        if self.peek().text == "final":
            self.advance()
        type_tok = self.advance()
        type_name = type_tok.text
        while self.try_peek() is not None and self.peek().text == "[":
            self.advance()
            self.expect("]")
            type_name += "[]"
        declarators = []
        while True:
            name_tok = self.advance()
            if name_tok.kind != WORD:
                raise BodyParseError(name_tok.start, "expected variable name")
            init = None
            if self.accept("="):
                init = self.expression()
            declarators.append((name_tok.text, init))
            if self.accept(","):
                continue
            self.expect(";")
            return LocalDecl(type_name, declarators, start)

    # -- expressions (precedence climbing)

    def expression(self):
        return self.assignment()

    def assignment(self):
        left = self.ternary()
        tok = self.try_peek()
        if tok is not None and tok.kind == PUNCT and tok.text in _ASSIGN_OPS:
            op = self.advance().text
            if not isinstance(left, (Name, FieldAccess, Index)):
                raise BodyParseError(tok.start, "invalid assignment target")
            value = self.assignment()
            return Assign(left, op, value, tok.start)
        return left

    def ternary(self):
        cond = self.logical_or()
        if self.try_peek() is not None and self.try_peek().text == "?":
            self.advance()
            then = self.expression()
            self.expect(":")
            orelse = self.expression()
            return Ternary(cond, then, orelse)
        return cond

    def logical_or(self):
        left = self.logical_and()
        while self.try_peek() is not None and self.try_peek().text == "||":
            self.advance()
            left = Binary("||", left, self.logical_and())
        return left

    def logical_and(self):
        left = self.equality()
        while self.try_peek() is not None and self.try_peek().text == "&&":
            self.advance()
            left = Binary("&&", left, self.equality())
        return left

    def equality(self):
        left = self.relational()
        while self.try_peek() is not None and self.try_peek().text in ("==", "!="):
            op = self.advance().text
            left = Binary(op, left, self.relational())
        return left

    def relational(self):
        left = self.additive()
        while self.try_peek() is not None and self.try_peek().text in ("<", "<=", ">", ">="):
            op = self.advance().text
            left = Binary(op, left, self.additive())
        return left

    def additive(self):
        left = self.multiplicative()
        while self.try_peek() is not None and self.try_peek().text in ("+", "-"):
            op = self.advance().text
            left = Binary(op, left, self.multiplicative())
        return left

    def multiplicative(self):
        left = self.unary()
        while self.try_peek() is not None and self.try_peek().text in ("*", "/", "%"):
            op = self.advance().text
            left = Binary(op, left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok.text in ("!", "-", "+"):
            self.advance()
            operand = self.unary()
            if tok.text == "+":
                return operand
            return Unary(tok.text, operand)
        if tok.text in ("++", "--"):
            self.advance()
            target = self.unary()
            return IncDec(tok.text, target, prefix=True, pos=tok.start)
        return self.postfix()

    def postfix(self):
        expr = self.primary()
        while True:
            tok = self.try_peek()
            if tok is None:
                return expr
            if tok.text == ".":
                self.advance()
                name_tok = self.advance()
                if name_tok.kind != WORD:
                    raise BodyParseError(name_tok.start, "expected member name after '.'")
                if self.try_peek() is not None and self.try_peek().text == "(":
                    args = self.arguments()
                    expr = Call(expr, name_tok.text, args, name_tok.start)
                else:
                    expr = FieldAccess(expr, name_tok.text, name_tok.start)
                continue
            if tok.text == "[":
                self.advance()
                idx = self.expression()
                self.expect("]")
                expr = Index(expr, idx, tok.start)
                continue
            if tok.text in ("++", "--"):
                self.advance()
                expr = IncDec(tok.text, expr, prefix=False, pos=tok.start)
                continue
            return expr

    def arguments(self) -> list:
        self.expect("(")
        args = []
        if not self.accept(")"):
            args.append(self.expression())
            while self.accept(","):
                args.append(self.expression())
            self.expect(")")
        return args

    def primary(self):
        tok = self.peek()
        if tok.kind == NUMBER:
            self.advance()
            return Literal(_parse_number(tok))
        if tok.kind == STRING:
            self.advance()
            return Literal(_unescape_string(tok.text))
        if tok.kind == CHAR:
            self.advance()
            return Literal(_unescape_char(tok.text))
        if tok.text == "(":
            self.advance()
            inner = self.expression()
            self.expect(")")
            return inner
        if tok.kind != WORD:
            raise BodyParseError(tok.start, f"unexpected token {tok.text!r}")
        if tok.text == "new":
            return self.new_expression()
        if tok.text in ("true", "false"):
            self.advance()
            return Literal(tok.text == "true")
        if tok.text == "null":
            self.advance()
            return Literal(None)
        if tok.text == "default":
            self.advance()
            return Literal(None)
        if tok.text == "this":
            self.advance()
            return This(tok.start)
        self.advance()
        if self.try_peek() is not None and self.try_peek().text == "(":
            args = self.arguments()
            return Call(None, tok.text, args, tok.start)
        return Name(tok.text, tok.start)

    def new_expression(self):
        new_tok = self.expect("new")
        type_tok = self.advance()
        if type_tok.kind != WORD:
            raise BodyParseError(type_tok.start, "expected type after 'new'")
        type_name = type_tok.text
        while self.try_peek() is not None and self.try_peek().text == ".":
            self.advance()
            type_name += "." + self.advance().text
        tok = self.peek()
        if tok.text == "(":
            args = self.arguments()
            return New(type_name, args, new_tok.start)
        if tok.text == "[":
            self.advance()
            if self.accept("]"):
                init_list = self._array_initializer()
                return NewArray(type_name, None, init_list, new_tok.start)
            size = self.expression()
            self.expect("]")
            return NewArray(type_name, size, None, new_tok.start)
        raise BodyParseError(tok.start, f"unexpected token {tok.text!r} after 'new {type_name}'")

    def _array_initializer(self) -> list:
        self.expect("{")
        items = []
        if not self.accept("}"):
            items.append(self.expression())
            while self.accept(","):
                if self.try_peek() is not None and self.try_peek().text == "}":
                    break
                items.append(self.expression())
            self.expect("}")
        return items


def _parse_number(tok: Token):
    text = tok.text.rstrip("fFdDlL")
    lowered = text.lower()
    if lowered.startswith("0x"):
        return int(lowered, 16)
    if "." in text or "e" in lowered:
        return float(text)
    if tok.text.endswith(("f", "F", "d", "D")):
        return float(text)
    return int(text)


def _unescape_string(text: str) -> str:
    if text.startswith('@"'):
        return text[2:-1].replace('""', '"')
    body = text[1:-1]
    return _unescape(body)


def _unescape_char(text: str) -> str:
    return _unescape(text[1:-1])


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "0": "\0", "\\": "\\", "'": "'", '"': '"', "b": "\b", "f": "\f"}


def _unescape(body: str) -> str:
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            if nxt == "u" and i + 5 < len(body):
                out.append(chr(int(body[i + 2 : i + 6], 16)))
                i += 6
                continue
            out.append(_ESCAPES.get(nxt, nxt))
            i += 2
            continue
        out.append(ch)
        i += 1
    return "".join(out)
