"""Deterministic reference algorithms: recursive fractional cut and exact Max-DiCut."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvariantError, OracleBoundError
from .graph import clamp, degree_partition, is_proper

__all__ = [
    "YPair",
    "ZPair",
    "y_pair",
    "compute_pos",
    "zbar",
    "compute_tpos",
    "exact_maxdicut",
    "round_assignment",
]

EXACT_MAX_N = 24


@dataclass(frozen=True)
class YPair:
    y_in: float
    y_out: float


@dataclass(frozen=True)
class ZPair:
    z_in_lo: float
    z_out_lo: float
    zbar: float


def _y_from_counts(in_lo, out_lo, in_hi, out_hi, alpha):
    return max(in_hi, alpha * in_lo), max(out_hi, alpha * out_lo)


def y_pair(G, v, alpha):
    """``y_in = max(|E_in^hi|, alpha |E_in^lo|)`` and the same for out-edges."""
    p = degree_partition(G, v)
    y_in, y_out = _y_from_counts(p.in_lo, p.out_lo, p.in_hi, p.out_hi, alpha)
    return YPair(float(y_in), float(y_out))


def position_from_counts(in_lo, out_lo, in_hi, out_hi, z_in, z_out, alpha):
    """Clamped position shared by the offline, streaming and intermediate estimators."""
    y_in, y_out = _y_from_counts(in_lo, out_lo, in_hi, out_hi, alpha)
    denom = y_in + y_out
    if denom <= 0:
        raise InvariantError("y_in + y_out = 0 for a non-isolated vertex (alpha must be > 0)")
    return clamp((y_out + z_out - z_in) / denom)


def high_degree_position(color, k, alpha, out_frac, zbar_value):
    """Closed-form position from the out-degree fraction and the lower-neighbor mean."""
    if color == k:
        x = (alpha + 1) / alpha * out_frac - zbar_value / alpha
    else:
        x = (k - 1) / (k - color) * out_frac - (color - 1) / (k - color) * zbar_value
    return clamp(x)


def _check_colored(G):
    if G.coloring is None:
        raise InvariantError("graph has no coloring")
    if not is_proper(G):
        raise InvariantError("coloring is not proper")


def compute_pos(G, alpha):
    """Fractional cut of the recursive offline algorithm, as a length-n array.

    Colors are processed in increasing order; within a vertex the lower-neighbor
    sums run over incident edges in input order. Isolated vertices get 0.
    """
    _check_colored(G)
    if alpha <= 0:
        raise InvariantError("alpha must be positive")
    pos = np.zeros(G.n)
    col = G.coloring
    order = sorted(range(G.n), key=lambda v: (col[v], v))
    for v in order:
        if G.degree(v) == 0:
            continue
        cv = col[v]
        z_in = z_out = 0.0
        in_lo = out_lo = in_hi = out_hi = 0
        for _, w in G.out_edges(v):
            if col[w] < cv:
                out_lo += 1
                z_out += 1.0 - pos[w]
            else:
                out_hi += 1
        for u, _ in G.in_edges(v):
            if col[u] < cv:
                in_lo += 1
                z_in += pos[u]
            else:
                in_hi += 1
        pos[v] = position_from_counts(in_lo, out_lo, in_hi, out_hi, z_in, z_out, alpha)
    return pos


def z_pair(G, v, pos):
    """Lower-neighbor sums at ``v`` together with their mean ``zbar``."""
    col = G.coloring
    cv = col[v]
    z_in = z_out = total = 0.0
    count = 0
    for u, _ in G.in_edges(v):
        if col[u] < cv:
            z_in += pos[u]
            total += pos[u]
            count += 1
    for _, w in G.out_edges(v):
        if col[w] < cv:
            z_out += 1.0 - pos[w]
            total += pos[w]
            count += 1
    return ZPair(z_in, z_out, total / count if count else 0.0)


def zbar(G, v, pos):
    """Mean position of lower-colored neighbors (with multiplicity), 0 if there are none."""
    return z_pair(G, v, pos).zbar


def compute_tpos(G, v, alpha, pos, k=None):
    """Degree-ratio approximation of ``pos(v)`` used for high-degree vertices."""
    k = G.k if k is None else k
    deg = G.degree(v)
    if deg == 0:
        raise ValueError(f"tpos is undefined for isolated vertex {v}")
    out_frac = float(G.out_degrees[v]) / deg
    return high_degree_position(G.color(v), k, alpha, out_frac, zbar(G, v, pos))


def exact_maxdicut(G, max_n=EXACT_MAX_N):
    """Best boolean cut by Gray-code enumeration of all ``2^n`` vertex subsets.

    Returns ``(value, witness)`` where value is the crossing-edge fraction and
    witness is a 0/1 array (1 = source side).
    """
    if G.n > max_n:
        raise OracleBoundError(f"exact Max-DiCut refuses n={G.n} > {max_n}")
    if G.m == 0:
        raise ValueError("max dicut value is undefined on a graph with no edges")
    n = G.n
    # multiplicity-aware neighbor lists
    out_nbrs = [[] for _ in range(n)]
    in_nbrs = [[] for _ in range(n)]
    for u, v in G.edges.tolist():
        out_nbrs[u].append(v)
        in_nbrs[v].append(u)
    side = [False] * n
    crossing = best = 0
    best_mask = 0
    mask = 0
    for i in range(1, 1 << n):
        w = (i & -i).bit_length() - 1
        # crossing edges gained/lost by moving w across
        out_gain = sum(1 for x in out_nbrs[w] if not side[x])
        in_loss = sum(1 for x in in_nbrs[w] if side[x])
        if side[w]:
            crossing -= out_gain - in_loss
        else:
            crossing += out_gain - in_loss
        side[w] = not side[w]
        mask ^= 1 << w
        if crossing > best:
            best = crossing
            best_mask = mask
    witness = np.array([(best_mask >> v) & 1 for v in range(n)], dtype=np.int64)
    return best / G.m, witness


def round_assignment(G, f):
    """Round a fractional assignment to 0/1 without lowering its cut value.

    The cut value is affine in each coordinate, so fixing vertices one at a
    time to the better endpoint never decreases it.
    """
    g = np.array(f, dtype=np.float64)
    src, dst = G.edges[:, 0], G.edges[:, 1]
    for v in range(G.n):
        # coefficient of g[v] in the edge sum
        slope = np.sum(1.0 - g[dst[src == v]]) - np.sum(g[src[dst == v]])
        g[v] = 1.0 if slope > 0 else 0.0
    return g
