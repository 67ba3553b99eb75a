"""Reader and canonical printer for set description files.

    p 3
    cyl 1.
    cyl 0.2
    tail r 1 from 1 anchor 0. body { cyl 1. }

``#`` starts a comment; a ``tail`` body may span several lines.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from src.errors import InputError, OverlapError
from src.group.group_core import as_prime, format_point, parse_point
from src.sets.set_algebra import Cylinder, CylinderSet, intersect, parse_cylinder
from src.sets.streams import DEFAULT_DEPTH, PieceStream, TailFamily

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        while col < len(line):
            ch = line[col]
            if ch.isspace():
                col += 1
                continue
            if ch in "{}":
                tokens.append(_Token(ch, lineno, col + 1))
                col += 1
                continue
            start = col
            while col < len(line) and not line[col].isspace() and line[col] not in "{}":
                col += 1
            tokens.append(_Token(line[start:col], lineno, start + 1))
    return tokens


class _Reader:
    def __init__(self, tokens: list[_Token], path):
        self.tokens = tokens
        self.pos = 0
        self.path = path

    def error(self, message: str, tok: _Token | None = None) -> InputError:
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            return InputError(message, path=self.path, line=last.line if last else None)
        return InputError(message, path=self.path, line=tok.line, column=tok.column)

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, what: str) -> _Token:
        tok = self.peek()
        if tok is None:
            raise self.error(f"unexpected end of file, expected {what}")
        self.pos += 1
        return tok

    def expect(self, word: str) -> _Token:
        tok = self.next(repr(word))
        if tok.text != word:
            raise self.error(f"expected {word!r}, got {tok.text!r}", tok)
        return tok

    def integer(self, what: str) -> int:
        tok = self.next(what)
        try:
            return int(tok.text)
        except ValueError:
            raise self.error(f"{what} must be an integer, got {tok.text!r}", tok) from None

    def relocate(self, err: InputError, tok: _Token) -> InputError:
        column = tok.column + (err.column - 1 if err.column else 0)
        return InputError(err.message, path=self.path, line=tok.line, column=column)


@dataclass
class ParsedSet:
    """A parsed stream together with the source line of every piece."""

    stream: PieceStream
    finite_lines: list
    tail_lines: list


def _cylinder(reader: _Reader, prime) -> tuple[Cylinder, int]:
    tok = reader.next("a cylinder token")
    try:
        return parse_cylinder(tok.text, prime), tok.line
    except InputError as err:
        raise reader.relocate(err, tok) from None


def _first_overlap(entries):
    """First pair of (cylinder, line) entries meeting in positive measure."""
    ordered = sorted(entries, key=lambda e: (e[0].lo, e[0].resolution))
    holder = None
    for entry in ordered:
        if holder is not None and entry[0].lo < holder[0].hi:
            return holder, entry
        if holder is None or entry[0].hi > holder[0].hi:
            holder = entry
    return None


def parse_set_text(text: str, path=None, depth: int = DEFAULT_DEPTH) -> ParsedSet:
    reader = _Reader(_tokenize(text), path)
    head = reader.peek()
    if head is None or head.text != "p":
        raise reader.error("file must start with 'p <prime>'", head)
    reader.next("'p'")
    ptok = reader.peek()
    value = reader.integer("prime")
    try:
        prime = as_prime(value)
    except InputError as err:
        raise reader.error(err.message, ptok) from None

    finite: list[tuple[Cylinder, int]] = []
    families: list[TailFamily] = []
    tail_lines: list[int] = []
    while reader.peek() is not None:
        tok = reader.next("a statement")
        if tok.text == "cyl":
            finite.append(_cylinder(reader, prime))
        elif tok.text == "tail":
            families.append(_tail(reader, prime, tok))
            tail_lines.append(tok.line)
        elif tok.text == "p":
            raise reader.error("the prime may only be given once", tok)
        else:
            raise reader.error(f"unknown statement {tok.text!r}", tok)

    hit = _first_overlap(finite)
    if hit is not None:
        (a, line_a), (b, line_b) = hit
        raise OverlapError(
            f"cylinders {a} (line {line_a}) and {b} (line {line_b}) overlap",
            first=a,
            second=b,
            lines=(line_a, line_b),
            path=path,
        )

    stream = PieceStream(prime, CylinderSet.of(prime, [c for c, _ in finite]), tuple(families))
    parsed = ParsedSet(stream, [line for _, line in finite], tail_lines)
    _validate(parsed, finite, depth, path)
    logger.debug("parsed %d cylinders and %d tail families over p=%s", len(finite), len(families), prime)
    return parsed


def _tail(reader: _Reader, prime, start_tok: _Token) -> TailFamily:
    ratio, start, anchor = 1, 0, None
    seen = set()
    while True:
        tok = reader.next("'body'")
        if tok.text in seen:
            raise reader.error(f"{tok.text!r} given twice", tok)
        seen.add(tok.text)
        if tok.text == "r":
            ratio = reader.integer("ratio")
        elif tok.text == "from":
            start = reader.integer("start index")
        elif tok.text == "anchor":
            atok = reader.next("an anchor token")
            try:
                anchor = parse_point(atok.text, prime)
            except InputError as err:
                raise reader.relocate(err, atok) from None
        elif tok.text == "body":
            break
        else:
            raise reader.error(f"unknown tail field {tok.text!r}", tok)
    reader.expect("{")
    body = []
    while True:
        tok = reader.next("'}'")
        if tok.text == "}":
            break
        if tok.text != "cyl":
            raise reader.error(f"expected 'cyl' or '}}' in a tail body, got {tok.text!r}", tok)
        body.append(_cylinder(reader, prime))
    hit = _first_overlap(body)
    if hit is not None:
        (a, line_a), (b, line_b) = hit
        raise OverlapError(
            f"tail body cylinders {a} and {b} overlap",
            first=a,
            second=b,
            lines=(line_a, line_b),
            path=reader.path,
        )
    if anchor is None:
        anchor = parse_point("0.", prime)
    try:
        return TailFamily(ratio=ratio, anchor=anchor, body=CylinderSet.of(prime, [c for c, _ in body]), start=start)
    except InputError as err:
        raise InputError(err.message, path=reader.path, line=start_tok.line, column=start_tok.column) from None


def _source_line(label: str, common: CylinderSet, parsed: ParsedSet, finite) -> int | None:
    if label == "finite":
        for c, line in finite:
            if not intersect(CylinderSet(common.prime, (c,)), common).is_empty():
                return line
        return parsed.finite_lines[0] if parsed.finite_lines else None
    if label.startswith("tail["):
        return parsed.tail_lines[int(label[5:label.index("]")])]
    return None


def _validate(parsed: ParsedSet, finite, depth: int, path) -> None:
    hit = parsed.stream.find_overlap(depth)
    if hit is None:
        return
    first, second, common = hit
    lines = tuple(
        line for line in (_source_line(first, common, parsed, finite), _source_line(second, common, parsed, finite)) if line is not None
    )
    where = " and ".join(f"line {line}" for line in lines)
    raise OverlapError(
        f"pieces {first} and {second} overlap on {common} ({where})",
        first=first,
        second=second,
        lines=lines,
        path=path,
    )


def parse_set_file(path, depth: int = DEFAULT_DEPTH) -> PieceStream:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise InputError(f"cannot read set file: {err.strerror}", path=path) from None
    return parse_set_text(text, path=path, depth=depth).stream


def format_set_file(s) -> str:
    """Canonical text of a set or stream; parsing it back gives an equal stream."""
    stream = s if isinstance(s, PieceStream) else PieceStream.of(s)
    if stream.generator is not None:
        raise InputError("generated streams have no file form")
    lines = [f"p {stream.prime}"]
    lines.extend(f"cyl {token}" for token in stream.finite.tokens())
    for family in stream.families:
        body = " ".join(f"cyl {token}" for token in family.body.tokens())
        lines.append(
            f"tail r {family.ratio} from {family.start} anchor {format_point(family.anchor)} body {{ {body} }}"
        )
    return "\n".join(lines) + "\n"
