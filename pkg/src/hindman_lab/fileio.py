"""Text formats: `cayley v1` tables and `coloring v1` assignments."""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable

import numpy as np

from .coloring import Coloring
from .core import FiniteSemigroup, build_cayley
from .errors import FormatError


def _clean_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def dumps_cayley(s: FiniteSemigroup) -> str:
    """Render a semigroup in the line-oriented `cayley v1` format."""
    for lbl in s.labels:
        if any(ch.isspace() for ch in lbl):
            raise FormatError(f"label {lbl!r} contains whitespace and cannot be exported")
    buf = io.StringIO()
    buf.write("cayley v1\n")
    buf.write(f"n={s.n}\n")
    buf.write("labels " + " ".join(s.labels) + "\n")
    for i in range(s.n):
        buf.write(f"row {i}: " + " ".join(str(x) for x in s.rows[i]) + "\n")
    return buf.getvalue()


def write_cayley(s: FiniteSemigroup, path: str | Path) -> None:
    Path(path).write_text(dumps_cayley(s), encoding="utf-8")


def loads_cayley(text: str) -> FiniteSemigroup:
    """Parse `cayley v1`; non-associative tables are rejected with the triple."""
    lines = _clean_lines(text)
    if not lines or lines[0] != "cayley v1":
        raise FormatError("expected header 'cayley v1'")
    if len(lines) < 3 or not lines[1].startswith("n="):
        raise FormatError("expected 'n=<int>' on the second line")
    try:
        n = int(lines[1][2:])
    except ValueError:
        raise FormatError(f"bad element count {lines[1]!r}")
    if n < 1:
        raise FormatError("n must be >= 1")
    if not lines[2].startswith("labels"):
        raise FormatError("expected a 'labels' line")
    labels = lines[2].split()[1:]
    if len(labels) != n:
        raise FormatError(f"expected {n} labels, got {len(labels)}")
    rows = lines[3:]
    if len(rows) != n:
        raise FormatError(f"expected {n} row lines, got {len(rows)}")
    table = np.empty((n, n), dtype=np.int32)
    for i, line in enumerate(rows):
        head, _, body = line.partition(":")
        if head.split() != ["row", str(i)]:
            raise FormatError(f"expected 'row {i}:', got {line!r}")
        entries = body.split()
        if len(entries) != n:
            raise FormatError(f"row {i} has {len(entries)} entries, expected {n}")
        try:
            table[i] = [int(x) for x in entries]
        except ValueError:
            raise FormatError(f"row {i} has a non-integer entry")
    return build_cayley(labels, table)


def read_cayley(path: str | Path) -> FiniteSemigroup:
    return loads_cayley(Path(path).read_text(encoding="utf-8"))


def dumps_coloring(c: Coloring) -> str:
    buf = io.StringIO()
    buf.write("coloring v1\n")
    buf.write(f"palette={c.palette_size}\n")
    for x in sorted(c.domain):
        buf.write(f"{x} {c.color(x)}\n")
    return buf.getvalue()


def write_coloring(c: Coloring, path: str | Path) -> None:
    Path(path).write_text(dumps_coloring(c), encoding="utf-8")


def loads_coloring(text: str, domain: Iterable[int] | None = None) -> Coloring:
    """Parse `coloring v1`; with a domain given, omitted or extra ids are illegal."""
    lines = _clean_lines(text)
    if not lines or lines[0] != "coloring v1":
        raise FormatError("expected header 'coloring v1'")
    if len(lines) < 2 or not lines[1].startswith("palette="):
        raise FormatError("expected 'palette=<int>' on the second line")
    try:
        palette = int(lines[1].split("=", 1)[1])
    except ValueError:
        raise FormatError(f"bad palette size {lines[1]!r}")
    assign: dict[int, int] = {}
    for line in lines[2:]:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected '<element-id> <color>', got {line!r}")
        try:
            x, col = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"non-integer entry in {line!r}")
        if x in assign:
            raise FormatError(f"element {x} colored twice")
        assign[x] = col
    if domain is not None:
        want = set(domain)
        have = set(assign)
        missing = sorted(want - have)
        extra = sorted(have - want)
        if missing:
            raise FormatError(f"omitted ids are illegal; missing {missing[:5]}")
        if extra:
            raise FormatError(f"ids outside the domain: {extra[:5]}")
    return Coloring(assign, palette)


def read_coloring(path: str | Path, domain: Iterable[int] | None = None) -> Coloring:
    return loads_coloring(Path(path).read_text(encoding="utf-8"), domain)
