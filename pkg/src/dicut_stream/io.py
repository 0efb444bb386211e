"""Text formats: edge lists, colorings, assignments and key=value reports.

Edge list: first non-comment line ``n m``, then ``m`` lines ``u v`` (0-based).
Lines starting with ``#`` are comments; ``# key=value`` comments are returned
as metadata. Coloring file: ``n`` lines, line ``i`` is the 1-based color of
vertex ``i``. Assignment file: ``n`` lines with one real each.
"""

from __future__ import annotations

import math
from typing import Dict, Iterator, Tuple

import numpy as np

from .exceptions import GraphFormatError

__all__ = [
    "EdgeListReader",
    "read_edge_list",
    "write_edge_list",
    "read_coloring",
    "write_coloring",
    "write_assignment",
    "read_assignment",
    "format_report",
]


class EdgeListReader:
    """Lazily stream an edge-list file; the header is parsed on construction.

    Iterating yields ``(u, v)`` pairs without holding the file in memory and
    raises :class:`GraphFormatError` with the offending line number.
    """

    def __init__(self, path):
        self.path = path
        self.meta: Dict[str, str] = {}
        self._fh = open(path, "r")
        self._lineno = 0
        header = self._next_content()
        if header is None:
            self._fh.close()
            raise GraphFormatError("missing 'n m' header", line=self._lineno or 1)
        parts = header.split()
        if len(parts) != 2:
            self._fh.close()
            raise GraphFormatError(f"header must be 'n m', got {header!r}", line=self._lineno)
        try:
            self.n, self.m = int(parts[0]), int(parts[1])
        except ValueError:
            self._fh.close()
            raise GraphFormatError(f"header must be two integers, got {header!r}", line=self._lineno) from None
        if self.n < 1 or self.m < 0:
            self._fh.close()
            raise GraphFormatError("header needs n >= 1 and m >= 0", line=self._lineno)

    def _next_content(self):
        for raw in self._fh:
            self._lineno += 1
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, value = body.split("=", 1)
                    self.meta[key.strip()] = value.strip()
                continue
            return line
        return None

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        count = 0
        n = self.n
        try:
            while True:
                line = self._next_content()
                if line is None:
                    break
                parts = line.split()
                if len(parts) != 2:
                    raise GraphFormatError(f"expected 'u v', got {line!r}", line=self._lineno)
                try:
                    u, v = int(parts[0]), int(parts[1])
                except ValueError:
                    raise GraphFormatError(f"non-integer endpoint in {line!r}", line=self._lineno) from None
                if not (0 <= u < n and 0 <= v < n):
                    raise GraphFormatError(f"endpoint outside 0..{n - 1}", line=self._lineno)
                if u == v:
                    raise GraphFormatError(f"self-loop on vertex {u}", line=self._lineno)
                count += 1
                yield u, v
            if count != self.m:
                raise GraphFormatError(f"header declares {self.m} edges, file has {count}", line=self._lineno)
        finally:
            self._fh.close()


def read_edge_list(path):
    """Read a whole edge list; returns ``(n, edges, meta)`` with edges as an (m, 2) array."""
    reader = EdgeListReader(path)
    edges = np.array(list(reader), dtype=np.int64).reshape(-1, 2)
    return reader.n, edges, reader.meta


def write_edge_list(path, n, edges, meta=None):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    with open(path, "w") as fh:
        for key, value in (meta or {}).items():
            fh.write(f"# {key}={value}\n")
        fh.write(f"{n} {len(edges)}\n")
        for u, v in edges.tolist():
            fh.write(f"{u} {v}\n")


def read_coloring(path, n=None):
    colors = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                c = int(line)
            except ValueError:
                raise GraphFormatError(f"color must be an integer, got {line!r}", line=lineno) from None
            if c < 1:
                raise GraphFormatError("colors are 1-based", line=lineno)
            colors.append(c)
    if n is not None and len(colors) != n:
        raise GraphFormatError(f"coloring has {len(colors)} entries, expected {n}")
    return np.array(colors, dtype=np.int64)


def write_coloring(path, coloring):
    with open(path, "w") as fh:
        for c in np.asarray(coloring).tolist():
            fh.write(f"{c}\n")


def write_assignment(path, values):
    with open(path, "w") as fh:
        for x in np.asarray(values, dtype=np.float64).tolist():
            fh.write(f"{x!r}\n")


def read_assignment(path):
    with open(path) as fh:
        return np.array([float(line) for line in fh if line.strip()], dtype=np.float64)


def _fmt(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    return str(value)


def format_report(items):
    """One ``key=value`` line per item, in the given order."""
    return "".join(f"{key}={_fmt(value)}\n" for key, value in items)
