"""Colored directed multigraphs, fractional assignments and cut values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import GraphFormatError, InvariantError, NumericError
from .validation import check_assignment, check_edges

Edge = Tuple[int, int]

__all__ = [
    "Edge",
    "ColoredDigraph",
    "DegreePartition",
    "clamp",
    "edge_value",
    "cut_value",
    "degree_partition",
    "is_proper",
]


def clamp(x):
    """Clip a finite real to [0, 1]."""
    if not math.isfinite(x):
        raise NumericError(f"clamp needs a finite value, got {x}")
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    return float(x)


@dataclass(frozen=True)
class DegreePartition:
    """Edges incident to one vertex, split by direction and by neighbor color.

    ``lo``/``hi`` refer to neighbors of lower/higher color than the vertex.
    The edge lists are filled only when requested.
    """

    in_lo: int = 0
    out_lo: int = 0
    in_hi: int = 0
    out_hi: int = 0
    in_lo_edges: Optional[Tuple[Edge, ...]] = None
    out_lo_edges: Optional[Tuple[Edge, ...]] = None
    in_hi_edges: Optional[Tuple[Edge, ...]] = None
    out_hi_edges: Optional[Tuple[Edge, ...]] = None

    @property
    def in_degree(self):
        return self.in_lo + self.in_hi

    @property
    def out_degree(self):
        return self.out_lo + self.out_hi

    @property
    def degree(self):
        return self.in_degree + self.out_degree


class ColoredDigraph:
    """Directed multigraph on vertices ``0..n-1`` with an optional coloring.

    Parameters
    ----------
    n : int
        Vertex count (declared, not inferred; isolated vertices are allowed).
    edges : array-like of shape (m, 2)
        Directed edges ``(source, target)``; duplicates are kept.
    coloring : array-like of shape (n,), optional
        Colors in ``1..k``.
    k : int, optional
        Number of colors; defaults to ``max(coloring)``.

    Self-loops are rejected.
    """

    def __init__(self, n, edges, coloring=None, k=None):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise GraphFormatError(f"vertex count must be a positive integer, got {n!r}")
        self.n = int(n)
        self.edges = check_edges(edges, self.n)
        if coloring is not None:
            coloring = np.asarray(coloring, dtype=np.int64)
            if coloring.shape != (self.n,):
                raise GraphFormatError(f"coloring must have {self.n} entries, got {coloring.shape}")
            if coloring.size and coloring.min() < 1:
                raise GraphFormatError("colors are 1-based")
            if k is None:
                k = int(coloring.max()) if coloring.size else 1
            elif coloring.size and coloring.max() > k:
                raise GraphFormatError(f"color {int(coloring.max())} exceeds k={k}")
            coloring.setflags(write=False)
        self.coloring = coloring
        self.k = k

    @property
    def m(self):
        return len(self.edges)

    def __repr__(self):
        return f"ColoredDigraph(n={self.n}, m={self.m}, k={self.k})"

    def color(self, v):
        return int(self.coloring[v])

    def edge_list(self) -> List[Edge]:
        return [tuple(e) for e in self.edges.tolist()]

    @cached_property
    def _incidence(self):
        # per vertex: incident edge indices in input order
        out_adj = [[] for _ in range(self.n)]
        in_adj = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges.tolist()):
            out_adj[u].append(i)
            in_adj[v].append(i)
        return out_adj, in_adj

    def out_edges(self, v):
        return [tuple(self.edges[i]) for i in self._incidence[0][v]]

    def in_edges(self, v):
        return [tuple(self.edges[i]) for i in self._incidence[1][v]]

    @cached_property
    def out_degrees(self):
        return np.bincount(self.edges[:, 0], minlength=self.n) if self.m else np.zeros(self.n, np.int64)

    @cached_property
    def in_degrees(self):
        return np.bincount(self.edges[:, 1], minlength=self.n) if self.m else np.zeros(self.n, np.int64)

    def degree(self, v):
        return int(self.out_degrees[v] + self.in_degrees[v])

    def is_proper(self):
        return is_proper(self)

    def with_coloring(self, coloring, k=None):
        return ColoredDigraph(self.n, self.edges, coloring, k)


def edge_value(f, e):
    """``f(u) * (1 - f(v))`` for the edge ``e = (u, v)``."""
    u, v = e
    try:
        return f[u] * (1.0 - f[v])
    except (IndexError, KeyError) as exc:
        raise KeyError(f"assignment has no value for an endpoint of {e}") from exc


def cut_value(G, f):
    """Average edge value of the fractional assignment ``f`` over all edges of ``G``.

    Parallel edges count with multiplicity. For a 0/1 assignment this is the
    fraction of edges going from the 1-side to the 0-side.
    """
    if G.m == 0:
        raise ValueError("cut value is undefined on a graph with no edges")
    f = check_assignment(f, G.n)
    src, dst = G.edges[:, 0], G.edges[:, 1]
    return float(np.mean(f[src] * (1.0 - f[dst])))


def is_proper(G):
    """True iff no edge joins two vertices of the same color."""
    if G.coloring is None:
        raise InvariantError("graph has no coloring")
    if G.m == 0:
        return True
    c = G.coloring
    return bool(np.all(c[G.edges[:, 0]] != c[G.edges[:, 1]]))


def degree_partition(G, v, with_edges=False):
    """Split the edges at ``v`` into in/out x lower/higher neighbor color."""
    if G.coloring is None:
        raise InvariantError("degree partition needs a coloring")
    cv = G.coloring[v]
    lists = {"in_lo": [], "out_lo": [], "in_hi": [], "out_hi": []}
    for u, w in G.out_edges(v):
        cw = G.coloring[w]
        if cw == cv:
            raise InvariantError(f"monochromatic edge ({u}, {w}) at vertex {v}")
        lists["out_lo" if cw < cv else "out_hi"].append((u, w))
    for u, w in G.in_edges(v):
        cu = G.coloring[u]
        if cu == cv:
            raise InvariantError(f"monochromatic edge ({u}, {w}) at vertex {v}")
        lists["in_lo" if cu < cv else "in_hi"].append((u, w))
    counts = {key: len(val) for key, val in lists.items()}
    if with_edges:
        return DegreePartition(**counts, **{f"{key}_edges": tuple(val) for key, val in lists.items()})
    return DegreePartition(**counts)
