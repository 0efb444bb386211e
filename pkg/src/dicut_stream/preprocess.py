"""One-pass stream reductions: edge subsampling, orientation flips, random coloring.

Each transform is a generator over ``(u, v)`` pairs, so composing them still
looks at every input edge exactly once. Per-edge coins come from a seeded
``random.Random``; vertex colors are a keyed hash of ``(seed, vertex)``, so no
color table is stored and the coloring does not depend on stream order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ._random import TAG_COLOR, TAG_FLIP, TAG_KEEP, TAG_LADDER, derived_rng, keyed_uint
from .exceptions import ParameterError
from .validation import check_probability

__all__ = [
    "StageStats",
    "HashColoring",
    "ReductionConfig",
    "subsample_edges",
    "flip_orientations",
    "color_and_filter",
    "reduce_stream",
    "edge_scale",
    "AssumptionReport",
    "check_assumptions",
    "GuessLadder",
    "build_guess_ladder",
]


@dataclass
class StageStats:
    """Counters filled in while a transform is consumed."""

    seen: int = 0
    emitted: int = 0
    changed: int = 0
    scale: float = 1.0

    @property
    def dropped(self):
        return self.seen - self.emitted


class HashColoring:
    """Uniform coloring ``1..k`` computed on demand from ``(seed, vertex)``."""

    def __init__(self, k, seed):
        if k < 1:
            raise ParameterError(f"k must be >= 1, got {k}")
        self.k = int(k)
        self.seed = seed

    def __getitem__(self, v):
        return 1 + keyed_uint(self.seed, TAG_COLOR, int(v)) % self.k

    def materialize(self, n):
        return np.array([self[v] for v in range(n)], dtype=np.int64)

    def __repr__(self):
        return f"HashColoring(k={self.k}, seed={self.seed})"


@dataclass(frozen=True)
class ReductionConfig:
    """Settings for the three reductions; a step is disabled by listing it in ``skip``."""

    edge_keep_prob: float = 1.0
    flip_prob: float = 0.0
    k: int = 3
    seed: int = 0
    skip: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        check_probability("edge_keep_prob", self.edge_keep_prob, allow_zero=False)
        check_probability("flip_prob", self.flip_prob, allow_one=False)
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        unknown = set(self.skip) - {"subsample", "flip", "color"}
        if unknown:
            raise ParameterError(f"unknown preprocessing steps: {sorted(unknown)}")


def subsample_edges(edges, keep_prob, seed, stats=None):
    """Keep each edge independently with probability ``keep_prob``.

    ``stats.scale`` is set to ``1 / keep_prob``: cut counts measured downstream
    estimate the original ones after multiplying by it.
    """
    keep_prob = check_probability("keep_prob", keep_prob, allow_zero=False)
    stats = stats if stats is not None else StageStats()
    stats.scale = 1.0 / keep_prob
    rng = derived_rng(seed, TAG_KEEP)
    for u, v in edges:
        stats.seen += 1
        if keep_prob >= 1.0 or rng.random() < keep_prob:
            stats.emitted += 1
            yield u, v


def flip_orientations(edges, flip_prob, seed, stats=None):
    """Reverse each edge independently with probability ``flip_prob``."""
    flip_prob = check_probability("flip_prob", flip_prob, allow_one=False)
    stats = stats if stats is not None else StageStats()
    rng = derived_rng(seed, TAG_FLIP)
    for u, v in edges:
        stats.seen += 1
        stats.emitted += 1
        if flip_prob > 0 and rng.random() < flip_prob:
            stats.changed += 1
            yield v, u
        else:
            yield u, v


def color_and_filter(edges, n, k, seed, stats=None, coloring=None):
    """Color vertices uniformly from ``1..k`` and drop monochromatic edges.

    Returns ``(stream, coloring)``. ``coloring`` may be supplied to filter
    against a fixed coloring instead of the hashed one.
    """
    if coloring is None:
        coloring = HashColoring(k, seed)
    stats = stats if stats is not None else StageStats()

    def _stream():
        col = coloring
        for u, v in edges:
            stats.seen += 1
            if col[u] != col[v]:
                stats.emitted += 1
                yield u, v

    return _stream(), coloring


def reduce_stream(edges, n, config, coloring=None):
    """Compose the enabled reductions; returns ``(stream, coloring, stats)``.

    ``stats`` maps step name to :class:`StageStats` (filled as the stream is
    consumed). The coloring step always runs its monochromatic filter; skipping
    it requires an explicit ``coloring``.
    """
    stats = {"input": StageStats(), "subsample": StageStats(), "flip": StageStats(), "color": StageStats()}
    stream = _count(edges, stats["input"])
    if "subsample" not in config.skip:
        stream = subsample_edges(stream, config.edge_keep_prob, config.seed, stats["subsample"])
    if "flip" not in config.skip:
        stream = flip_orientations(stream, config.flip_prob, config.seed, stats["flip"])
    if "color" in config.skip and coloring is None:
        raise ParameterError("skipping the coloring step needs an explicit coloring")
    stream, coloring = color_and_filter(stream, n, config.k, config.seed, stats["color"], coloring=coloring)
    return stream, coloring, stats


def _count(edges, stats):
    for e in edges:
        stats.seen += 1
        stats.emitted += 1
        yield e


def edge_scale(stats):
    """Multiplier turning a cut fraction of the reduced graph into an absolute cut estimate.

    Edges surviving subsampling, times ``1 / keep_prob``; coloring and flips are
    treated as fraction-preserving.
    """
    sub = stats["subsample"]
    if sub.seen:
        return sub.emitted * sub.scale
    return float(stats["input"].seen)


# -- assumption checks on materialized graphs --------------------------------


@dataclass
class AssumptionReport:
    """Outcome of the three structural checks; witnesses name the first violation found."""

    a1_ok: bool
    a1_edges: int
    a1_limit: Optional[float]
    a2_ok: bool
    a2_witness: Optional[dict]
    a3_ok: bool
    a3_witness: Optional[dict]

    @property
    def all_ok(self):
        return self.a1_ok and self.a2_ok and self.a3_ok


def check_assumptions(G, *, max_edges=None, min_edges=None, degree_cutoff, balance, color_deviation):
    """Check edge count, in/out balance and color balance on a colored graph.

    * edge count: ``min_edges <= m <= max_edges`` (bounds optional);
    * balance: every vertex with ``d(v) >= degree_cutoff`` has
      ``d-(v), d+(v) >= balance * d(v)``;
    * colors: every such vertex and color ``a != chi(v)`` has
      ``|d_a^-(v) - d^-(v)/(k-1)| <= color_deviation * d(v)/(k-1)`` and the same
      for out-edges.
    """
    m = G.m
    a1_ok = (max_edges is None or m <= max_edges) and (min_edges is None or m >= min_edges)
    k = G.k
    col = G.coloring
    n = G.n
    in_deg = G.in_degrees
    out_deg = G.out_degrees
    a2_witness = None
    a3_witness = None
    heavy = [v for v in range(n) if in_deg[v] + out_deg[v] >= degree_cutoff]
    if heavy and k is not None and k >= 2:
        per_color_in = np.zeros((n, k + 1), dtype=np.int64)
        per_color_out = np.zeros((n, k + 1), dtype=np.int64)
        if m:
            np.add.at(per_color_out, (G.edges[:, 0], col[G.edges[:, 1]]), 1)
            np.add.at(per_color_in, (G.edges[:, 1], col[G.edges[:, 0]]), 1)
    for v in heavy:
        d = int(in_deg[v] + out_deg[v])
        if a2_witness is None and (in_deg[v] < balance * d or out_deg[v] < balance * d):
            a2_witness = {"vertex": v, "in_degree": int(in_deg[v]), "out_degree": int(out_deg[v]), "degree": d}
        if a3_witness is None and k is not None and k >= 2:
            bound = color_deviation * d / (k - 1)
            for a in range(1, k + 1):
                if a == col[v]:
                    continue
                for direction, counts, total in (("in", per_color_in, in_deg[v]), ("out", per_color_out, out_deg[v])):
                    dev = abs(counts[v, a] - total / (k - 1))
                    if dev > bound and a3_witness is None:
                        a3_witness = {"vertex": v, "color": a, "direction": direction, "deviation": float(dev), "bound": bound}
    return AssumptionReport(
        a1_ok=bool(a1_ok),
        a1_edges=m,
        a1_limit=max_edges,
        a2_ok=a2_witness is None,
        a2_witness=a2_witness,
        a3_ok=a3_witness is None,
        a3_witness=a3_witness,
    )


# -- guessing the edge count --------------------------------------------------


@dataclass(frozen=True)
class LadderCopy:
    guess: int
    keep_prob: float
    seed: int


@dataclass(frozen=True)
class GuessLadder:
    """Parallel pipeline copies, one per guessed edge count ``2^i``."""

    copies: Tuple[LadderCopy, ...]

    @property
    def guesses(self):
        return [c.guess for c in self.copies]

    def select(self, m):
        """Index of the copy whose guess ``g`` satisfies ``g <= m < 2g`` (clipped to the ends)."""
        if m < 1:
            return 0
        i = int(math.floor(math.log2(m)))
        # guard against float log2 rounding
        while i + 1 < len(self.copies) and self.copies[i + 1].guess <= m:
            i += 1
        while i > 0 and self.copies[min(i, len(self.copies) - 1)].guess > m:
            i -= 1
        return min(i, len(self.copies) - 1)

    def run(self, edges, consumer_factory):
        """Feed one pass of ``edges`` to every copy; returns ``(selected_index, consumers, m)``.

        ``consumer_factory(copy)`` must return an object with ``update(u, v)``.
        Each copy subsamples independently with its own keep probability.
        """
        consumers = [consumer_factory(c) for c in self.copies]
        rngs = [derived_rng(c.seed, TAG_KEEP) for c in self.copies]
        m = 0
        for u, v in edges:
            m += 1
            for c, rng, consumer in zip(self.copies, rngs, consumers):
                if c.keep_prob >= 1.0 or rng.random() < c.keep_prob:
                    consumer.update(u, v)
        return self.select(m), consumers, m


def build_guess_ladder(m_max, target_edges=None, seed=0):
    """Copies for guesses ``1, 2, 4, ..., 2^ceil(log2 m_max)``.

    Copy ``i`` keeps edges with probability ``min(1, target_edges / 2^i)``;
    ``target_edges`` defaults to ``m_max`` (every copy keeps everything).
    """
    if m_max < 1:
        raise ParameterError(f"m_max must be >= 1, got {m_max}")
    target = m_max if target_edges is None else target_edges
    top = max(0, math.ceil(math.log2(m_max)))
    if 2 ** top < m_max:
        top += 1
    copies = tuple(
        LadderCopy(guess=2**i, keep_prob=min(1.0, target / 2**i), seed=keyed_uint(seed, TAG_LADDER, i))
        for i in range(top + 1)
    )
    return GuessLadder(copies)
