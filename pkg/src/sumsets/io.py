"""Point-set text format.

    dim 2
    # optional comment
    1/2 0
    3 4

First significant line is ``dim d``; every following non-comment line is one
point given as d whitespace-separated rationals written ``num/den`` or
``num``.  Lines starting with ``#`` and blank lines are ignored.  Duplicate
points are a parse error naming the offending line.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import PointSet, _nrm

__all__ = ["ParseError", "loads_points", "dumps_points", "read_points", "write_points"]

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class ParseError(ValueError):
    """Malformed point-set text; the message names the line number."""


def loads_points(text: str) -> PointSet:
    """Parse point-set text into a PointSet."""
    dim = None
    pts = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if dim is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "dim" or not parts[1].isdigit():
                raise ParseError(f"line {lineno}: expected 'dim d' header, got {line!r}")
            dim = int(parts[1])
            if dim < 1:
                raise ParseError(f"line {lineno}: dimension must be positive")
            continue
        toks = line.split()
        if len(toks) != dim:
            raise ParseError(
                f"line {lineno}: expected {dim} coordinates, got {len(toks)}"
            )
        coords = []
        for tok in toks:
            if not _RATIONAL.match(tok):
                raise ParseError(f"line {lineno}: bad rational {tok!r}")
            coords.append(_nrm(Fraction(tok)))
        p = tuple(coords)
        if p in seen:
            raise ParseError(f"line {lineno}: duplicate point {line!r}")
        seen.add(p)
        pts.append(p)
    if dim is None:
        raise ParseError("line 1: missing 'dim d' header")
    return PointSet(dim, pts)


def dumps_points(a: PointSet, comments=()) -> str:
    """Serialise a PointSet; points in canonical order, exact rationals."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"dim {a.dim}")
    for p in a.points:
        lines.append(" ".join(str(c) for c in p))
    return "\n".join(lines) + "\n"


def read_points(path) -> PointSet:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_points(fh.read())


def write_points(a: PointSet, path, comments=()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_points(a, comments))
