"""Test oracles: the all-vertices-succeed intermediate estimator and diagnostics.

:func:`intermediate_estimator` is written independently of the streaming
estimator (it reads a materialized graph and a selection fixture, not a sketch)
so the two can be checked against each other.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ._random import TAG_FIXTURE, derived_rng
from .exceptions import FixtureError, ParameterError
from .graph import clamp, degree_partition

__all__ = [
    "SelectionFixture",
    "fixture_from_state",
    "random_fixture",
    "intermediate_estimator",
    "ContainmentReport",
    "tree_containment_histogram",
    "monte_carlo_mean",
]


@dataclass
class SelectionFixture:
    """Fixed neighbor selections and sampled edge set.

    ``in_sel[v]`` lists the ``d`` chosen edges ``(u, v)`` from lower-colored
    in-neighbors (with replacement), ``out_sel[v]`` the chosen ``(v, u)``; an
    empty list means the vertex has no such edges. ``B`` is the frozen edge sample.
    """

    d: int
    in_sel: Dict[int, List[Tuple[int, int]]]
    out_sel: Dict[int, List[Tuple[int, int]]]
    B: List[Tuple[int, int]] = field(default_factory=list)

    def to_text(self, edge_index):
        """Serialize as one line per vertex: ``v in:i,j out:i,j`` with edge indices.

        ``edge_index`` maps an edge ``(u, v)`` to its index in the graph's edge list.
        """
        lines = [f"d {self.d}"]
        for v in sorted(set(self.in_sel) | set(self.out_sel)):
            ins = ",".join(str(edge_index[e]) for e in self.in_sel.get(v, []))
            outs = ",".join(str(edge_index[e]) for e in self.out_sel.get(v, []))
            lines.append(f"{v} in:{ins} out:{outs}")
        lines.append("B " + ",".join(str(edge_index[e]) for e in self.B))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, edges):
        edges = [tuple(e) for e in edges]

        def idx_list(s):
            return [edges[int(i)] for i in s.split(",") if i]

        d = None
        in_sel, out_sel, B = {}, {}, []
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "d":
                d = int(parts[1])
            elif parts[0] == "B":
                B = idx_list(parts[1]) if len(parts) > 1 else []
            else:
                v = int(parts[0])
                in_sel[v] = idx_list(parts[1][3:])
                out_sel[v] = idx_list(parts[2][4:])
        if d is None:
            raise FixtureError("fixture text has no 'd' line")
        return cls(d, in_sel, out_sel, B)


def fixture_from_state(state):
    """The selections a streaming run actually made, for every sampled vertex."""
    in_sel = {}
    out_sel = {}
    for v, sk in state.W.items():
        in_sel[v] = [r.slots[0] for r in sk.r_in if r.slots[0] is not None]
        out_sel[v] = [r.slots[0] for r in sk.r_out if r.slots[0] is not None]
    return SelectionFixture(state.params.d, in_sel, out_sel, list(state.B))


def random_fixture(G, d, seed, B=None):
    """Draw ``d`` lower-colored in- and out-edges with replacement for every vertex."""
    rng = derived_rng(seed, TAG_FIXTURE)
    in_sel, out_sel = {}, {}
    for v in range(G.n):
        part = degree_partition(G, v, with_edges=True)
        in_sel[v] = [part.in_lo_edges[rng.randrange(part.in_lo)] for _ in range(d)] if part.in_lo else []
        out_sel[v] = [part.out_lo_edges[rng.randrange(part.out_lo)] for _ in range(d)] if part.out_lo else []
    return SelectionFixture(d, in_sel, out_sel, list(B) if B is not None else [])


def intermediate_estimator(G, fixture, params):
    """Positions when every vertex is sampled but neighbor selections are fixed.

    Low-degree vertices average their fixture selections scaled by
    ``|E^lo| / d``; high-degree vertices (``d_B(v) > threshold``) use the plain
    mean of their lower neighbors along ``B`` edges. Isolated vertices get 0.
    """
    n, k, alpha, d = G.n, params.k, params.alpha, params.d
    col = G.coloring
    b_deg = np.zeros(n, dtype=np.int64)
    b_out = np.zeros(n, dtype=np.int64)
    b_lower: Dict[int, List[int]] = {}
    for u, v in fixture.B:
        b_deg[u] += 1
        b_deg[v] += 1
        b_out[u] += 1
        if col[u] < col[v]:
            b_lower.setdefault(v, []).append(u)
        else:
            b_lower.setdefault(u, []).append(v)
    est = np.zeros(n)
    for v in sorted(range(n), key=lambda x: (col[x], x)):
        if G.degree(v) == 0:
            continue
        a = int(col[v])
        if b_deg[v] > params.threshold(a):
            nbrs = b_lower.get(v, [])
            zmean = sum(est[u] for u in nbrs) / len(nbrs) if nbrs else 0.0
            frac = b_out[v] / b_deg[v]
            if a == k:
                raw = (alpha + 1) / alpha * frac - zmean / alpha
            else:
                raw = (k - 1) / (k - a) * frac - (a - 1) / (k - a) * zmean
            est[v] = clamp(raw)
            continue
        if v not in fixture.in_sel or v not in fixture.out_sel:
            raise FixtureError(f"fixture has no selection for low-degree vertex {v}")
        part = degree_partition(G, v)
        z_in = part.in_lo / d * sum(est[u] for u, _ in fixture.in_sel[v])
        z_out = part.out_lo / d * sum(1.0 - est[w] for _, w in fixture.out_sel[v])
        y_in = max(part.in_hi, alpha * part.in_lo)
        y_out = max(part.out_hi, alpha * part.out_lo)
        est[v] = clamp((y_out + z_out - z_in) / (y_in + y_out))
    return est


@dataclass
class ContainmentReport:
    counts: Dict[int, int]
    bound: float
    flagged: List[int]


def tree_containment_histogram(state, bound=None):
    """How many successful estimates have each real vertex in their dependency tree.

    Only estimates already in the memo table are counted, so run
    :func:`~dicut_stream.streaming.estimate_all` first. ``bound`` defaults to the
    largest finite color threshold; vertices above it are flagged.
    """
    if bound is None:
        finite = [t for t in state.params.thresholds if math.isfinite(t)]
        bound = max(finite) if finite else math.inf
    counts: Dict[int, int] = {}
    for est in state.memo.values():
        if est is None:
            continue
        for member in est.tree:
            if isinstance(member, int):
                counts[member] = counts.get(member, 0) + 1
    flagged = sorted(u for u, c in counts.items() if c > bound)
    return ContainmentReport(counts, bound, flagged)


def monte_carlo_mean(run, trials, confidence=0.99):
    """Mean of ``run(i)`` over ``trials`` calls and its normal-approximation half-width."""
    if trials < 2:
        raise ParameterError(f"monte_carlo_mean needs at least 2 trials, got {trials}")
    if not 0 < confidence < 1:
        raise ParameterError(f"confidence must be in (0, 1), got {confidence}")
    xs = [float(run(i)) for i in range(trials)]
    mean = statistics.fmean(xs)
    sd = statistics.stdev(xs)
    z = statistics.NormalDist().inv_cdf(0.5 + confidence / 2)
    return mean, z * sd / math.sqrt(trials)
