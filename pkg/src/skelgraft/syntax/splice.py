"""Byte-exact simultaneous text splicing."""

from __future__ import annotations

from skelgraft.errors import OverlappingEdits, SpanOutOfBounds
from skelgraft.syntax.model import Span


def splice(text: bytes, edits: list[tuple[Span, bytes]]) -> bytes:
    """Replace each span of ``text`` with its replacement, simultaneously.

    Offsets are interpreted against the input; bytes outside all spans are
    unchanged. Spans must be pairwise disjoint (zero-length insertion points
    may not coincide with another edit's start).
    """
    if not edits:
        return text
    ordered = sorted(edits, key=lambda e: (e[0].start, e[0].end))
    n = len(text)
    prev_end = -1
    prev_start = -1
    for span, _ in ordered:
        if span.end > n:
            raise SpanOutOfBounds(f"span {span.start}..{span.end} exceeds text length {n}")
        if span.start < prev_end or (span.start == prev_start):
            raise OverlappingEdits(f"edit at {span.start}..{span.end} overlaps a prior edit")
        prev_end = span.end
        prev_start = span.start
    parts: list[bytes] = []
    cursor = 0
    for span, replacement in ordered:
        parts.append(text[cursor : span.start])
        parts.append(replacement)
        cursor = span.end
    parts.append(text[cursor:])
    return b"".join(parts)
