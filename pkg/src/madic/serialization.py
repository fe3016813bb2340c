"""Line-oriented text format for :class:`~madic.measure.TreeMeasure`.

::

    MADIC 1
    m=3 depth=2
    alpha=5/6            # optional
    node eps 1/1
    node 0 1/2
    ...

Nodes are written in preorder, masses as reduced ``num/den``.  ``#`` starts a
comment.  Reading re-reduces every rational and validates the tree.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .core import format_prefix, parse_prefix
from .measure import MeasureValidationError, TreeMeasure, validate

__all__ = ["serialize", "deserialize", "save", "load", "MeasureFormatError"]

MAGIC = "MADIC 1"
_HEADER = re.compile(r"m=(\d+)\s+depth=(\d+)$")
_ALPHA = re.compile(r"alpha=(\d+)/(\d+)$")
_RATIONAL = re.compile(r"(-?\d+)/(\d+)$")


class MeasureFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


def serialize(mu: TreeMeasure) -> str:
    violations = validate(mu)
    if violations:
        raise MeasureValidationError(violations)
    lines = [MAGIC, f"m={mu.m} depth={mu.depth}"]
    if mu.alpha is not None:
        lines.append(f"alpha={mu.alpha.numerator}/{mu.alpha.denominator}")
    for key in mu.nodes():
        v = mu.mass(key)
        lines.append(f"node {format_prefix(key, mu.m)} {v.numerator}/{v.denominator}")
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def deserialize(text: str) -> TreeMeasure:
    lines = _content_lines(text)
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise MeasureFormatError(1, "empty input") from None
    if line != MAGIC:
        raise MeasureFormatError(lineno, f"expected {MAGIC!r}, got {line!r}")
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise MeasureFormatError(lineno + 1, "missing 'm=<int> depth=<int>' header") from None
    header = _HEADER.match(line)
    if not header:
        raise MeasureFormatError(lineno, f"expected 'm=<int> depth=<int>', got {line!r}")
    m, depth = int(header.group(1)), int(header.group(2))
    if m < 2:
        raise MeasureFormatError(lineno, f"base m must be >= 2, got {m}")

    alpha = None
    masses = {}
    last = lineno
    for lineno, line in lines:
        last = lineno
        if line.startswith("alpha="):
            if alpha is not None or masses:
                raise MeasureFormatError(lineno, "alpha line must appear once, before the nodes")
            am = _ALPHA.match(line)
            if not am or int(am.group(2)) == 0:
                raise MeasureFormatError(lineno, f"malformed alpha line {line!r}; expected alpha=<p>/<q>")
            alpha = Fraction(int(am.group(1)), int(am.group(2)))
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "node":
            raise MeasureFormatError(lineno, f"expected 'node <prefix> <num>/<den>', got {line!r}")
        try:
            key = parse_prefix(parts[1], m)
        except ValueError as exc:
            raise MeasureFormatError(lineno, str(exc)) from None
        rm = _RATIONAL.match(parts[2])
        if not rm or int(rm.group(2)) == 0:
            raise MeasureFormatError(lineno, f"malformed rational {parts[2]!r}")
        if key in masses:
            raise MeasureFormatError(lineno, f"duplicate node {parts[1]}")
        masses[key] = Fraction(int(rm.group(1)), int(rm.group(2)))
    if not masses:
        raise MeasureFormatError(last + 1, "no nodes: a measure must be nonzero")
    mu = TreeMeasure(m, depth, masses, alpha)
    violations = validate(mu)
    if violations:
        raise MeasureValidationError(violations)
    return mu


def save(mu: TreeMeasure, path) -> None:
    Path(path).write_text(serialize(mu), encoding="utf-8")


def load(path) -> TreeMeasure:
    return deserialize(Path(path).read_text(encoding="utf-8"))
