"""Reader for mask files.

    p 2
    n 2
    a 0 1/2
    a 3 1/2

``a <alpha> <q0> [q1 .. q(p-2)]`` gives a coefficient by its rational
coordinates over 1, zeta, ..., zeta^(p-2); ``v <cell> ...`` gives a cell value
the same way.  The two forms are exclusive.  A value written as a Python
float or complex literal (``0.5``, ``0.5+0.5j``) switches the whole mask to
the floating backend.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from pathlib import Path

from src.errors import InputError
from src.group.group_core import as_prime
from src.masks.cyclotomic import Cyclotomic
from src.masks.mask_analysis import DEFAULT_TOLERANCE, Mask

logger = logging.getLogger(__name__)


def _is_float_literal(text: str) -> bool:
    return any(ch in text for ch in ".eEjJ") and "/" not in text


def _fields(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_mask_text(text: str, path=None, tolerance: float = DEFAULT_TOLERANCE) -> Mask:
    def fail(message, line=None):
        return InputError(message, path=path, line=line)

    p = n = None
    entries: dict[str, dict[int, tuple[int, list[str]]]] = {"a": {}, "v": {}}
    for lineno, fields in _fields(text):
        key = fields[0]
        if key in ("p", "n"):
            if len(fields) != 2:
                raise fail(f"'{key}' takes one integer", lineno)
            try:
                value = int(fields[1])
            except ValueError:
                raise fail(f"'{key}' must be an integer, got {fields[1]!r}", lineno) from None
            if key == "p":
                try:
                    p = as_prime(value).value
                except InputError as err:
                    raise fail(err.message, lineno) from None
            else:
                n = value
        elif key in ("a", "v"):
            if p is None or n is None:
                raise fail("'p' and 'n' must precede coefficient lines", lineno)
            if len(fields) < 3:
                raise fail(f"'{key}' needs an index and a value", lineno)
            try:
                index = int(fields[1])
            except ValueError:
                raise fail(f"index must be an integer, got {fields[1]!r}", lineno) from None
            if not 0 <= index < p ** n:
                raise fail(f"index {index} is outside 0..{p ** n - 1}", lineno)
            if index in entries[key]:
                raise fail(f"index {index} given twice (line {entries[key][index][0]})", lineno)
            entries[key][index] = (lineno, fields[2:])
        else:
            raise fail(f"unknown line kind {key!r}", lineno)

    if p is None or n is None:
        raise fail("mask file needs both 'p' and 'n'")
    if n < 1:
        raise fail(f"n must be >= 1, got {n}")
    if entries["a"] and entries["v"]:
        raise fail("'a' and 'v' lines cannot be mixed")
    kind = "v" if entries["v"] else "a"
    rows = entries[kind]
    floating = any(_is_float_literal(t) for _, values in rows.values() for t in values)

    if floating:
        values = [0j] * p ** n
        for index, (lineno, fields) in rows.items():
            if len(fields) != 1:
                raise fail("a floating value is a single complex literal", lineno)
            try:
                values[index] = complex(fields[0])
            except ValueError:
                raise fail(f"invalid complex literal {fields[0]!r}", lineno) from None
        logger.info("mask uses the floating backend (tolerance %g)", tolerance)
        if kind == "v":
            return Mask.from_values(p, n, values, tolerance=tolerance)
        return Mask.floating(p, n, values, tolerance=tolerance)

    values = [Cyclotomic.zero(p)] * p ** n
    for index, (lineno, fields) in rows.items():
        if len(fields) > p - 1:
            raise fail(f"at most {p - 1} coordinates allowed for p={p}", lineno)
        try:
            coords = [Fraction(t) for t in fields]
        except (ValueError, ZeroDivisionError):
            raise fail(f"invalid rational in {' '.join(fields)!r}", lineno) from None
        values[index] = Cyclotomic(p, coords + [Fraction(0)] * (p - 1 - len(coords)))
    if kind == "v":
        return Mask.from_values(p, n, values)
    return Mask.exact(p, n, values)


def parse_mask_file(path, tolerance: float = DEFAULT_TOLERANCE) -> Mask:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise InputError(f"cannot read mask file: {err.strerror}", path=path) from None
    return parse_mask_text(text, path=path, tolerance=tolerance)
