"""Synthetic graph families for tests, benchmarks and the ``gen`` command.

All generators return simple digraphs (no self-loops, no parallel edges) as an
``(m, 2)`` int64 array, deterministically from ``seed``.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ParameterError

__all__ = ["uniform_random", "planted_dicut", "layered_dag", "power_law_out", "GENERATORS"]


def _fill_unique(rng, m, draw, limit):
    """Draw candidate edges in batches until ``m`` distinct ones are collected."""
    if m > limit:
        raise ParameterError(f"cannot place {m} distinct edges; at most {limit} exist")
    codes = np.empty(0, dtype=np.int64)
    while codes.size < m:
        need = m - codes.size
        batch = draw(max(2 * need, 16))
        merged = np.concatenate([codes, batch])
        _, first = np.unique(merged, return_index=True)
        # keep first occurrences in draw order
        codes = merged[np.sort(first)]
    return codes[:m]


def uniform_random(n, m, seed):
    """``m`` distinct edges with uniform endpoints."""
    if n < 2:
        raise ParameterError("need n >= 2")
    rng = np.random.default_rng(seed)

    def draw(size):
        u = rng.integers(0, n, size)
        v = rng.integers(0, n, size)
        keep = u != v
        return u[keep] * n + v[keep]

    codes = _fill_unique(rng, m, draw, n * (n - 1))
    return np.stack([codes // n, codes % n], axis=1)


def planted_dicut(n, m, seed, plant_fraction=0.9):
    """Edges mostly from a hidden source half ``S`` to its complement.

    ``round(plant_fraction * m)`` edges go from ``S`` to ``V \\ S``; the rest are
    uniform. Returns ``(edges, source_side)`` where ``source_side`` is a 0/1 array.
    """
    if not 0 <= plant_fraction <= 1:
        raise ParameterError("plant_fraction must be in [0, 1]")
    if n < 2:
        raise ParameterError("need n >= 2")
    rng = np.random.default_rng(seed)
    side = np.zeros(n, dtype=np.int64)
    side[rng.permutation(n)[: n // 2]] = 1
    src_nodes = np.flatnonzero(side == 1)
    dst_nodes = np.flatnonzero(side == 0)
    planted = int(round(plant_fraction * m))

    def draw_planted(size):
        return rng.choice(src_nodes, size) * n + rng.choice(dst_nodes, size)

    p_codes = _fill_unique(rng, planted, draw_planted, len(src_nodes) * len(dst_nodes))

    def draw_rest(size):
        u = rng.integers(0, n, size)
        v = rng.integers(0, n, size)
        keep = u != v
        return u[keep] * n + v[keep]

    # the uniform part avoids duplicating planted edges
    taken = set(p_codes.tolist())
    rest = []
    need = m - planted
    if need > n * (n - 1) - planted:
        raise ParameterError(f"cannot place {m} distinct edges on {n} vertices")
    while len(rest) < need:
        for c in draw_rest(2 * (need - len(rest)) + 16).tolist():
            if c not in taken:
                taken.add(c)
                rest.append(c)
                if len(rest) == need:
                    break
    codes = np.concatenate([p_codes, np.array(rest, dtype=np.int64)])
    codes = codes[rng.permutation(codes.size)]
    return np.stack([codes // n, codes % n], axis=1), side


def layered_dag(n, m, seed, k=3):
    """Edges between ``k`` layers, every edge joining two different layers.

    Returns ``(edges, layers)`` with 1-based layers, which form a proper coloring.
    Orientation is random, so the graph is a DAG only in its layer structure.
    """
    if k < 2:
        raise ParameterError("layered_dag needs k >= 2")
    rng = np.random.default_rng(seed)
    layers = 1 + (np.arange(n) * k) // n
    sizes = np.bincount(layers, minlength=k + 1)[1:]
    limit = int(n * n - np.sum(sizes.astype(np.int64) ** 2))

    def draw(size):
        u = rng.integers(0, n, size)
        v = rng.integers(0, n, size)
        keep = layers[u] != layers[v]
        return u[keep] * n + v[keep]

    codes = _fill_unique(rng, m, draw, limit)
    return np.stack([codes // n, codes % n], axis=1), layers


def power_law_out(n, m, seed, exponent=2.0):
    """Sources drawn with Zipf-like weights ``rank^-1/(exponent-1)``, targets uniform."""
    if n < 2:
        raise ParameterError("need n >= 2")
    rng = np.random.default_rng(seed)
    weights = np.arange(1, n + 1, dtype=np.float64) ** (-1.0 / max(exponent - 1.0, 1e-9))
    weights /= weights.sum()
    perm = rng.permutation(n)

    def draw(size):
        u = perm[rng.choice(n, size, p=weights)]
        v = rng.integers(0, n, size)
        keep = u != v
        return u[keep] * n + v[keep]

    codes = _fill_unique(rng, m, draw, n * (n - 1))
    return np.stack([codes // n, codes % n], axis=1)


GENERATORS = ("uniform-random", "planted-dicut", "layered-dag", "power-law-out")
