import random

import numpy as np
import pytest

from conftest import random_colored_graph
from dicut_stream.exceptions import ParameterError
from dicut_stream.generators import uniform_random
from dicut_stream.graph import ColoredDigraph
from dicut_stream.preprocess import (
    HashColoring,
    ReductionConfig,
    StageStats,
    build_guess_ladder,
    check_assumptions,
    color_and_filter,
    edge_scale,
    flip_orientations,
    reduce_stream,
    subsample_edges,
)

EDGES = [(i, (i + 1) % 50) for i in range(50)] + [(i, (i + 7) % 50) for i in range(50)]


def test_subsample_extremes_and_scale():
    stats = StageStats()
    assert list(subsample_edges(EDGES, 1.0, 0, stats)) == EDGES
    assert stats.seen == stats.emitted == 100 and stats.scale == 1.0
    stats = StageStats()
    kept = list(subsample_edges(EDGES, 0.25, 3, stats))
    assert stats.scale == 4.0 and stats.emitted == len(kept) < 100
    assert set(kept) <= set(EDGES)
    with pytest.raises(ParameterError):
        list(subsample_edges(EDGES, 0.0, 0))


def test_subsample_is_seeded():
    a = list(subsample_edges(EDGES, 0.5, 7))
    b = list(subsample_edges(EDGES, 0.5, 7))
    c = list(subsample_edges(EDGES, 0.5, 8))
    assert a == b and a != c


def test_flip_counts_and_reversals():
    stats = StageStats()
    out = list(flip_orientations(EDGES, 0.3, 1, stats))
    flipped = sum(1 for e, f in zip(EDGES, out) if e != f)
    assert flipped == stats.changed > 0
    assert all(f in (e, e[::-1]) for e, f in zip(EDGES, out))
    assert list(flip_orientations(EDGES, 0.0, 1)) == EDGES
    with pytest.raises(ParameterError):
        list(flip_orientations(EDGES, 1.0, 1))


def test_hash_coloring_is_deterministic_and_in_range():
    c = HashColoring(4, 9)
    cols = c.materialize(200)
    assert cols.min() >= 1 and cols.max() <= 4
    assert np.array_equal(cols, HashColoring(4, 9).materialize(200))
    assert not np.array_equal(cols, HashColoring(4, 10).materialize(200))
    assert c[17] == cols[17]


def test_color_filter_drops_exactly_monochromatic():
    stats = StageStats()
    stream, col = color_and_filter(EDGES, 50, 3, 5, stats)
    out = list(stream)
    expected = [(u, v) for u, v in EDGES if col[u] != col[v]]
    assert out == expected
    assert stats.dropped == len(EDGES) - len(expected)


def test_fixed_coloring_is_respected():
    colors = np.array([1 + (v % 2) for v in range(50)])
    stream, col = color_and_filter(EDGES, 50, 2, 0, coloring=colors)
    assert all(colors[u] != colors[v] for u, v in stream)


def test_reduce_stream_stats_and_skip():
    cfg = ReductionConfig(edge_keep_prob=0.5, flip_prob=0.2, k=3, seed=4)
    stream, col, stats = reduce_stream(EDGES, 50, cfg)
    out = list(stream)
    assert stats["input"].seen == 100
    assert stats["subsample"].seen == 100
    assert stats["flip"].seen == stats["subsample"].emitted
    assert stats["color"].emitted == len(out)
    assert edge_scale(stats) == pytest.approx(stats["subsample"].emitted * 2.0)

    colors = np.array([1 + (v % 2) for v in range(50)])
    cfg = ReductionConfig(k=2, skip=frozenset({"subsample", "flip", "color"}))
    stream, _, stats = reduce_stream(EDGES, 50, cfg, coloring=colors)
    assert len(list(stream)) == 100  # odd offsets always join different parities
    assert edge_scale(stats) == 100.0
    with pytest.raises(ParameterError):
        reduce_stream(EDGES, 50, cfg)


def test_config_validation():
    with pytest.raises(ParameterError):
        ReductionConfig(skip=frozenset({"shuffle"}))
    with pytest.raises(ParameterError):
        ReductionConfig(k=0)
    with pytest.raises(ParameterError):
        ReductionConfig(edge_keep_prob=1.5)


def test_drop_rate_close_to_one_over_k():
    edges = uniform_random(2000, 20000, 1).tolist()
    stats = StageStats()
    stream, _ = color_and_filter(edges, 2000, 4, 2, stats)
    for _ in stream:
        pass
    assert abs(stats.dropped / stats.seen - 0.25) < 0.02


def test_assumption_checks():
    rng = random.Random(0)
    G = random_colored_graph(rng, 10, 60, 3)
    rep = check_assumptions(G, max_edges=100, degree_cutoff=1000, balance=0.1, color_deviation=0.5)
    assert rep.all_ok and rep.a1_edges == 60
    rep = check_assumptions(G, max_edges=10, degree_cutoff=1000, balance=0.1, color_deviation=0.5)
    assert not rep.a1_ok
    # a pure source fails the balance check
    star = ColoredDigraph(4, [(0, 1), (0, 2), (0, 3)], [1, 2, 2, 3])
    rep = check_assumptions(star, degree_cutoff=3, balance=0.1, color_deviation=10)
    assert not rep.a2_ok and rep.a2_witness["vertex"] == 0
    # all out-edges of 0 go to color 2, none to color 3
    rep = check_assumptions(star, degree_cutoff=3, balance=0.0, color_deviation=0.1)
    assert not rep.a3_ok and rep.a3_witness["vertex"] == 0


def test_guess_ladder_selects_power_of_two():
    ladder = build_guess_ladder(1000, target_edges=100, seed=1)
    assert ladder.guesses[0] == 1 and ladder.guesses[-1] >= 1000
    for m in (1, 2, 3, 64, 65, 127, 128, 999, 1000):
        g = ladder.guesses[ladder.select(m)]
        assert g <= m < 2 * g or ladder.select(m) == len(ladder.guesses) - 1

    class Counter:
        def __init__(self, copy):
            self.count = 0

        def update(self, u, v):
            self.count += 1

    idx, consumers, m = ladder.run(EDGES, Counter)
    assert m == 100 and ladder.guesses[idx] == 64
    assert consumers[0].count == 100  # guess 1 keeps everything
    with pytest.raises(ParameterError):
        build_guess_ladder(0)
