"""Tokenizer for brace-structured languages (Java-like, C#-like).

Operates on raw bytes so every token carries exact byte offsets into the
original file; downstream splicing is byte-exact and newline-preserving.
Comments and whitespace are skipped but never alter offsets of what follows.
"""

from __future__ import annotations

from dataclasses import dataclass

from skelgraft.errors import ParseError

WORD = "word"
NUMBER = "number"
STRING = "string"
CHAR = "char"
PUNCT = "punct"

_IDENT_START = frozenset(
    b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$"
)
_IDENT_CONT = frozenset(
    b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_$"
)
_DIGITS = frozenset(b"0123456789")

# Longest-match first; only operators the structural scan cares to keep whole.
_MULTI_PUNCT = (
    b"...",
    b"<<=", b">>=",
    b"=>", b"==", b"!=", b"<=", b">=", b"&&", b"||",
    b"++", b"--", b"+=", b"-=", b"*=", b"/=", b"%=", b"&=", b"|=", b"^=",
    b"::", b"->",
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int  # byte offset, inclusive
    end: int    # byte offset, exclusive

    def __repr__(self) -> str:  # compact for test failures
        return f"Token({self.kind},{self.text!r},{self.start}:{self.end})"


def tokenize(data: bytes, path: str = "<memory>") -> list[Token]:
    """Lex ``data`` into tokens with byte-exact spans.

    Raises ParseError on unterminated strings, chars, or block comments.
    """
    toks: list[Token] = []
    i = 0
    n = len(data)
    while i < n:
        b = data[i]
        ch = bytes((b,))
        if b in b" \t\r\n\f":
            i += 1
            continue
        if ch == b"/" and i + 1 < n:
            nxt = data[i + 1 : i + 2]
            if nxt == b"/":
                j = data.find(b"\n", i)
                i = n if j < 0 else j + 1
                continue
            if nxt == b"*":
                j = data.find(b"*/", i + 2)
                if j < 0:
                    raise ParseError(path, i, "unterminated block comment")
                i = j + 2
                continue
        if ch == b"@" and data[i : i + 2] == b'@"':
            # C# verbatim string; doubled quotes escape.
            j = i + 2
            while True:
                j = data.find(b'"', j)
                if j < 0:
                    raise ParseError(path, i, "unterminated verbatim string")
                if data[j + 1 : j + 2] == b'"':
                    j += 2
                    continue
                break
            toks.append(Token(STRING, data[i : j + 1].decode("utf-8"), i, j + 1))
            i = j + 1
            continue
        if ch == b'"':
            j = _scan_quoted(data, i, b'"', path)
            toks.append(Token(STRING, data[i:j].decode("utf-8"), i, j))
            i = j
            continue
        if ch == b"'":
            j = _scan_quoted(data, i, b"'", path)
            toks.append(Token(CHAR, data[i:j].decode("utf-8"), i, j))
            i = j
            continue
        if b in _IDENT_START or b >= 0x80:
            j = i + 1
            while j < n and (data[j] in _IDENT_CONT or data[j] >= 0x80):
                j += 1
            toks.append(Token(WORD, data[i:j].decode("utf-8"), i, j))
            i = j
            continue
        if b in _DIGITS:
            j = i + 1
            while j < n and (
                data[j] in _DIGITS
                or data[j : j + 1] in (b".", b"_", b"x", b"X", b"b", b"B", b"e", b"E")
                or data[j : j + 1].isalpha()
            ):
                # sign after exponent marker
                if data[j : j + 1] in (b"e", b"E") and data[j + 1 : j + 2] in (b"+", b"-"):
                    j += 1
                j += 1
            toks.append(Token(NUMBER, data[i:j].decode("utf-8"), i, j))
            i = j
            continue
        matched = False
        for op in _MULTI_PUNCT:
            if data[i : i + len(op)] == op:
                toks.append(Token(PUNCT, op.decode("ascii"), i, i + len(op)))
                i += len(op)
                matched = True
                break
        if matched:
            continue
        toks.append(Token(PUNCT, chr(b), i, i + 1))
        i += 1
    return toks


def _scan_quoted(data: bytes, start: int, quote: bytes, path: str) -> int:
    """Return the exclusive end offset of a quoted literal starting at ``start``."""
    i = start + 1
    n = len(data)
    while i < n:
        c = data[i : i + 1]
        if c == b"\\":
            i += 2
            continue
        if c == quote:
            return i + 1
        if c == b"\n" and quote == b'"':
            raise ParseError(path, start, "unterminated string literal")
        i += 1
    raise ParseError(path, start, "unterminated literal")
