"""Streaming reader for the line-oriented subset of N-Triples used by WordNet dumps."""

from __future__ import annotations

import gzip
import io
import re
from collections.abc import Iterator
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

__all__ = ["Literal", "NTriplesError", "parse_line", "read_triples", "open_text"]

_IRI = r"<([^<>\"{}|^`\\\s]*)>"
_BNODE = r"(_:[A-Za-z0-9_][A-Za-z0-9_.\-]*)"
_LITERAL = r"\"((?:[^\"\\\n\r]|\\.)*)\"(?:@([A-Za-z]+(?:-[A-Za-z0-9]+)*)|\^\^<([^>]*)>)?"
_LINE = re.compile(
    rf"^\s*(?:{_IRI}|{_BNODE})\s*<([^<>\"\s]*)>\s*(?:{_IRI}|{_BNODE}|{_LITERAL})\s*\.\s*(?:#.*)?$"
)
_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE_RE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))")


class NTriplesError(ValueError):
    """A line that is not a valid triple; carries the 1-based line number."""

    def __init__(self, lineno: int, line: str, reason: str = "malformed triple"):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line.strip()[:200]!r}")


@dataclass(frozen=True, slots=True)
class Literal:
    value: str
    language: str | None = None
    datatype: str | None = None


Term = Union[str, Literal]


def _unescape(text: str) -> str:
    if "\\" not in text:
        return text

    def repl(m: re.Match[str]) -> str:
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        ch = m.group(3)
        if ch not in _ESCAPES:
            raise ValueError(f"bad escape \\{ch}")
        return _ESCAPES[ch]

    return _ESCAPE_RE.sub(repl, text)


def parse_line(line: str, lineno: int = 0) -> tuple[str, str, Term] | None:
    """Parse one N-Triples line.

    Returns ``None`` for blank and comment lines. IRIs are returned without
    angle brackets, blank nodes keep their ``_:`` prefix, and literal objects
    come back as :class:`Literal`.
    """
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    m = _LINE.match(stripped)
    if m is None:
        raise NTriplesError(lineno, line)
    subj = m.group(1) if m.group(1) is not None else m.group(2)
    pred = m.group(3)
    if m.group(4) is not None:
        obj: Term = m.group(4)
    elif m.group(5) is not None:
        obj = m.group(5)
    else:
        try:
            value = _unescape(m.group(6))
        except ValueError as exc:
            raise NTriplesError(lineno, line, str(exc)) from None
        obj = Literal(value, m.group(7), m.group(8))
    return subj, pred, obj


def open_text(source: str | Path | IO[bytes] | IO[str]) -> IO[str]:
    """Open a path or binary stream as text, transparently gunzipping."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        with open(path, "rb") as fh:
            magic = fh.read(2)
        if magic == b"\x1f\x8b":
            return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
        return open(path, encoding="utf-8")
    if isinstance(source, io.TextIOBase):
        return source  # type: ignore[return-value]
    buffered = source if hasattr(source, "peek") else io.BufferedReader(source)  # type: ignore[arg-type]
    if buffered.peek(2)[:2] == b"\x1f\x8b":  # type: ignore[union-attr]
        buffered = gzip.GzipFile(fileobj=buffered)  # type: ignore[assignment]
    return io.TextIOWrapper(buffered, encoding="utf-8")  # type: ignore[arg-type]


def read_triples(source: str | Path | IO[bytes] | IO[str]) -> Iterator[tuple[int, str, str, Term]]:
    """Yield ``(lineno, subject, predicate, object)`` for every triple in *source*."""
    fh = open_text(source)
    try:
        for lineno, line in enumerate(fh, start=1):
            triple = parse_line(line, lineno)
            if triple is not None:
                yield (lineno, *triple)
    finally:
        if isinstance(source, (str, Path)):
            fh.close()
