"""Single-pass sketch and the vertex/edge estimators built on it.

The sketch keeps three independent samples of the stream:

* ``W`` -- sampled vertices, each with exact degree counters split by direction
  and neighbor color, plus ``d`` size-1 reservoirs per side over the edges to
  lower-colored neighbors (``d`` samples with replacement);
* ``B`` -- edges kept independently with ``edge_sample_prob``, used to classify
  and estimate high-degree vertices;
* ``C`` -- a reservoir of ``eval_reservoir_size`` edges the final average runs over.

After the pass, :func:`vertex_estimator` recursively estimates positions of
vertices from lower colors upward. A low-degree estimate depends on every vertex
in its dependency tree being sampled; trees are padded with dummy vertices so
the success probability only depends on the color, and the final Horvitz-Thompson
average divides each surviving edge estimate by that probability.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple

from ._random import TAG_B, TAG_C, TAG_DUMMY, TAG_MEMBER, TAG_RES_IN, TAG_RES_OUT, derived_rng, keyed_uniform
from .exceptions import GraphFormatError, InvariantError, NumericError
from .offline import high_degree_position, position_from_counts

__all__ = [
    "Reservoir",
    "Dummy",
    "Estimate",
    "VertexSketch",
    "StreamSketch",
    "StreamState",
    "CutValResult",
    "initialize_reservoir",
    "reservoir_update",
    "ht_avg",
    "process_stream",
    "resample_membership",
    "vertex_estimator",
    "edge_estimator",
    "evaluate",
    "finalize",
    "estimate_all",
    "success_probability",
]

# tracked-memory cost model (bytes)
EDGE_BYTES = 16
COUNTER_BYTES = 8
ID_BYTES = 8


class Reservoir:
    """Fixed-capacity uniform sample of a stream.

    ``count`` is the 1-based index the next item will get. The first
    ``capacity`` items are stored directly; after that item number ``count``
    replaces a uniform slot with probability ``capacity / count``.
    """

    __slots__ = ("slots", "count")

    def __init__(self, capacity):
        if capacity < 1:
            raise ValueError("reservoir capacity must be >= 1")
        self.slots = [None] * capacity
        self.count = 1

    @property
    def capacity(self):
        return len(self.slots)

    def update(self, item, u):
        """Offer ``item``; ``u`` is a uniform draw in [0, 1) that drives the choice."""
        s = len(self.slots)
        if self.count <= s:
            self.slots[self.count - 1] = item
        else:
            # j uniform on 0..count-1: kept w.p. s/count, into a uniform slot
            j = int(u * self.count)
            if j < s:
                self.slots[j] = item
        self.count += 1
        return self

    def items(self):
        """Stored items, in slot order (only the filled prefix before the reservoir is full)."""
        return [x for x in self.slots if x is not None]

    @property
    def seen(self):
        return self.count - 1

    def __repr__(self):
        return f"Reservoir(capacity={self.capacity}, seen={self.seen})"


def initialize_reservoir(size):
    return Reservoir(size)


def reservoir_update(r, e, rng):
    """Update ``r`` with ``e`` drawing randomness from ``rng.random()``."""
    return r.update(e, rng.random())


def ht_avg(entries):
    """Horvitz-Thompson mean of ``(value, success_prob)`` entries; ``None`` is a failure.

    Failures count in the divisor. The empty list averages to 0.
    """
    if not entries:
        return 0.0
    total = 0.0
    for entry in entries:
        if entry is None:
            continue
        value, prob = entry
        if not prob > 0:
            raise NumericError(f"success probability must be positive, got {prob}")
        total += value / prob
    return total / len(entries)


def success_probability(p, size):
    """``p ** size`` evaluated in log space."""
    if size == 0:
        return 1.0
    if p <= 0:
        return 0.0
    return math.exp(size * math.log(p))


class Dummy(NamedTuple):
    """Padding member of a dependency tree; real members are plain vertex ids."""

    owner: int
    ordinal: int


class Estimate(NamedTuple):
    position: float
    tree: frozenset


class VertexSketch:
    """Per-sampled-vertex state: exact degree counters and lower-neighbor reservoirs."""

    __slots__ = ("in_lo", "out_lo", "in_hi", "out_hi", "r_in", "r_out")

    def __init__(self, d):
        self.in_lo = self.out_lo = self.in_hi = self.out_hi = 0
        self.r_in = [Reservoir(1) for _ in range(d)]
        self.r_out = [Reservoir(1) for _ in range(d)]

    @property
    def degree(self):
        return self.in_lo + self.out_lo + self.in_hi + self.out_hi


def _vertex_bytes(d):
    return ID_BYTES + 4 * COUNTER_BYTES + 2 * d * (EDGE_BYTES + COUNTER_BYTES)


def _as_lookup(coloring):
    if hasattr(coloring, "tolist"):
        return coloring.tolist()
    return coloring


class StreamSketch:
    """One-pass ingestion of an edge stream into the ``W``/``B``/``C`` sketch.

    ``seed`` drives ``B``, ``C`` and the neighbor reservoirs; ``membership_seed``
    (defaults to ``seed``) drives membership in ``W`` and the dummy coins, so
    the vertex sample can be redrawn with everything else held fixed.
    """

    def __init__(self, n, coloring, params, seed=0, membership_seed=None):
        if params.mode != "practical" and not params.executable:
            raise InvariantError("theory parameters are not executable; use practical_params")
        self.n = int(n)
        self.coloring = coloring
        self._col = _as_lookup(coloring)
        self.params = params
        self.seed = seed
        self.membership_seed = seed if membership_seed is None else membership_seed
        self.d = params.d
        p = params.vertex_sample_prob
        self.W: Dict[int, VertexSketch] = {}
        for v in range(self.n):
            if keyed_uniform(self.membership_seed, TAG_MEMBER, v) < p:
                self.W[v] = VertexSketch(self.d)
        self.B: List[Tuple[int, int]] = []
        self.C = Reservoir(params.eval_reservoir_size)
        self._b_rng = derived_rng(seed, TAG_B)
        self._c_rng = derived_rng(seed, TAG_C)
        self.edges_seen = 0
        self.tracked_bytes = (
            len(self.W) * _vertex_bytes(self.d) + params.eval_reservoir_size * EDGE_BYTES + COUNTER_BYTES
        )
        self.peak_tracked_bytes = self.tracked_bytes

    def _track(self, nbytes):
        self.tracked_bytes += nbytes
        if self.tracked_bytes > self.peak_tracked_bytes:
            self.peak_tracked_bytes = self.tracked_bytes

    def update(self, u, v):
        n = self.n
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
        if u == v:
            raise GraphFormatError(f"self-loop on vertex {u}")
        col = self._col
        cu, cv = col[u], col[v]
        if cu == cv:
            raise InvariantError(f"monochromatic edge ({u}, {v}); filter the stream through color_and_filter")
        e = (u, v)
        self.edges_seen += 1
        if self._b_rng.random() < self.params.edge_sample_prob:
            self.B.append(e)
            self._track(EDGE_BYTES)
        self.C.update(e, self._c_rng.random())
        sk = self.W.get(u)
        if sk is not None:
            if cv < cu:
                sk.out_lo += 1
                for i, r in enumerate(sk.r_out):
                    r.update(e, keyed_uniform(self.seed, TAG_RES_OUT, u, i, r.count))
            else:
                sk.out_hi += 1
        sk = self.W.get(v)
        if sk is not None:
            if cu < cv:
                sk.in_lo += 1
                for i, r in enumerate(sk.r_in):
                    r.update(e, keyed_uniform(self.seed, TAG_RES_IN, v, i, r.count))
            else:
                sk.in_hi += 1

    def consume(self, edges):
        for u, v in edges:
            self.update(int(u), int(v))
        return self

    def freeze(self):
        return StreamState(
            n=self.n,
            coloring=self.coloring,
            params=self.params,
            seed=self.seed,
            membership_seed=self.membership_seed,
            W=self.W,
            B=self.B,
            C=self.C,
            edges_seen=self.edges_seen,
            sketch_peak_bytes=self.peak_tracked_bytes,
        )


@dataclass
class StreamState:
    """Frozen sketch plus the write-once estimator memo table."""

    n: int
    coloring: object
    params: object
    seed: int
    membership_seed: int
    W: Dict[int, VertexSketch]
    B: List[Tuple[int, int]]
    C: Reservoir
    edges_seen: int
    sketch_peak_bytes: int
    memo: Dict[int, Optional[Estimate]] = field(default_factory=dict)
    dummies_created: int = 0
    max_depth: int = 0

    def __post_init__(self):
        self._col = _as_lookup(self.coloring)
        k = self.params.k
        # derived from the stored B edges rather than maintained online
        d_b = {}
        d_b_out = {}
        lower = {}
        for u, v in self.B:
            d_b[u] = d_b.get(u, 0) + 1
            d_b[v] = d_b.get(v, 0) + 1
            d_b_out[u] = d_b_out.get(u, 0) + 1
            cu, cv = self._col[u], self._col[v]
            if cu < cv:
                lower.setdefault(v, []).append(u)
            else:
                lower.setdefault(u, []).append(v)
        self.d_b = d_b
        self.d_b_out = d_b_out
        self.b_lower = lower
        for c in (self._col[v] for v in self.W):
            if not 1 <= c <= k:
                raise InvariantError(f"color {c} outside 1..{k}")

    def color(self, v):
        return self._col[v]

    def is_high_degree(self, v):
        return self.d_b.get(v, 0) > self.params.threshold(self._col[v])

    @property
    def peak_tracked_bytes(self):
        return self.sketch_peak_bytes + self.dummies_created * ID_BYTES

    def reset_memo(self):
        self.memo = {}
        self.dummies_created = 0
        self.max_depth = 0


def process_stream(edges, n, coloring, params, seed=0, membership_seed=None):
    """Run the single pass over ``edges`` and return the frozen :class:`StreamState`."""
    return StreamSketch(n, coloring, params, seed, membership_seed).consume(edges).freeze()


def resample_membership(state, membership_seed, vertex_sample_prob=None):
    """Redraw ``W`` (and dummy coins) keeping ``B``, ``C`` and every reservoir fixed.

    The new sample is ``{v in state.W : coin(membership_seed, v) < prob}``. This
    matches a fresh :func:`process_stream` with the same ``seed`` whenever
    ``state.W`` contains every vertex the new coins select -- always true if
    ``state`` was built with ``vertex_sample_prob = 1``.
    """
    params = state.params
    if vertex_sample_prob is not None and vertex_sample_prob != params.vertex_sample_prob:
        params = params.with_overrides(vertex_sample_prob=vertex_sample_prob)
    p = params.vertex_sample_prob
    W = {v: sk for v, sk in state.W.items() if keyed_uniform(membership_seed, TAG_MEMBER, v) < p}
    d = params.d
    removed = len(state.W) - len(W)
    return StreamState(
        n=state.n,
        coloring=state.coloring,
        params=params,
        seed=state.seed,
        membership_seed=membership_seed,
        W=W,
        B=state.B,
        C=state.C,
        edges_seen=state.edges_seen,
        sketch_peak_bytes=state.sketch_peak_bytes - removed * _vertex_bytes(d),
    )


def vertex_estimator(state, v, _depth=1):
    """Memoized estimate of the position of ``v``; ``None`` on failure."""
    memo = state.memo
    if v in memo:
        return memo[v]
    if _depth > state.max_depth:
        state.max_depth = _depth
    params = state.params
    color = state.color(v)
    if state.is_high_degree(v):
        p = params.vertex_sample_prob
        entries = []
        for u in state.b_lower.get(v, ()):
            est = vertex_estimator(state, u, _depth + 1)
            entries.append(None if est is None else (est.position, success_probability(p, len(est.tree))))
        z = ht_avg(entries)
        out_frac = state.d_b_out.get(v, 0) / state.d_b[v]
        result = Estimate(high_degree_position(color, params.k, params.alpha, out_frac, z), frozenset())
    else:
        result = _low_degree(state, v, color, _depth)
    memo[v] = result
    return result


def _low_degree(state, v, color, depth):
    sk = state.W.get(v)
    if sk is None:
        return None
    if sk.degree == 0:
        raise InvariantError(f"vertex {v} is isolated and cannot be estimated")
    params = state.params
    tree = {v}
    z_in = z_out = 0.0
    for r in sk.r_in:
        # an empty reservoir means no lower in-edges: no child, no contribution
        e = r.slots[0]
        if e is None:
            continue
        est = vertex_estimator(state, e[0], depth + 1)
        if est is None:
            return None
        tree |= est.tree
        z_in += est.position
    for r in sk.r_out:
        e = r.slots[0]
        if e is None:
            continue
        est = vertex_estimator(state, e[1], depth + 1)
        if est is None:
            return None
        tree |= est.tree
        z_out += 1.0 - est.position
    target = params.tree_size_of(color)
    if len(tree) > target:
        raise InvariantError(f"dependency tree of {v} has {len(tree)} > {target} members before padding")
    p = params.vertex_sample_prob
    for j in range(target - len(tree)):
        state.dummies_created += 1
        if keyed_uniform(state.membership_seed, TAG_DUMMY, v, j) >= p:
            return None
        tree.add(Dummy(v, j))
    d = params.d
    z_in *= sk.in_lo / d
    z_out *= sk.out_lo / d
    position = position_from_counts(sk.in_lo, sk.out_lo, sk.in_hi, sk.out_hi, z_in, z_out, params.alpha)
    return Estimate(position, frozenset(tree))


def edge_estimator(state, e):
    """``P(u) * (1 - P(v))`` with the union of both trees, or ``None``."""
    u, v = e
    eu = vertex_estimator(state, u)
    if eu is None:
        return None
    ev = vertex_estimator(state, v)
    if ev is None:
        return None
    return Estimate(eu.position * (1.0 - ev.position), eu.tree | ev.tree)


@dataclass(frozen=True)
class CutValResult:
    cut_val: float
    fail_fraction: float
    n_entries: int
    entries: tuple


def evaluate(state):
    """Estimate every edge held in ``C`` and Horvitz-Thompson average them."""
    C = state.C
    edges = C.items()
    if C.seen < C.capacity:
        warnings.warn(
            f"evaluation reservoir only saw {C.seen} of {C.capacity} edges; averaging the partial sample",
            RuntimeWarning,
            stacklevel=2,
        )
    p = state.params.vertex_sample_prob
    entries = []
    for e in edges:
        est = edge_estimator(state, e)
        entries.append(None if est is None else (est.position, success_probability(p, len(est.tree))))
    fails = sum(1 for x in entries if x is None)
    return CutValResult(
        cut_val=ht_avg(entries),
        fail_fraction=fails / len(entries) if entries else 0.0,
        n_entries=len(entries),
        entries=tuple(entries),
    )


def finalize(state):
    """The streaming estimate of the maximum directed cut fraction."""
    return evaluate(state).cut_val


def estimate_all(state, vertices=None):
    """Estimate every vertex in ``vertices`` (default: every vertex the sketch has seen)."""
    if vertices is None:
        seen = {v for v, sk in state.W.items() if sk.degree > 0}
        for u, v in state.B:
            seen.add(u)
            seen.add(v)
        for u, v in state.C.items():
            seen.add(u)
            seen.add(v)
        vertices = sorted(seen)
    return {v: vertex_estimator(state, v) for v in vertices}
