import math
import random

import numpy as np
import pytest

from conftest import random_colored_graph
from dicut_stream.exceptions import FixtureError, ParameterError
from dicut_stream.graph import ColoredDigraph
from dicut_stream.offline import compute_pos
from dicut_stream.oracle import (
    SelectionFixture,
    fixture_from_state,
    intermediate_estimator,
    monte_carlo_mean,
    random_fixture,
    tree_containment_histogram,
)
from dicut_stream.params import practical_params
from dicut_stream.streaming import estimate_all, process_stream, vertex_estimator


def test_random_fixture_selects_lower_neighbors():
    G = random_colored_graph(random.Random(1), 12, 40, 3)
    fx = random_fixture(G, 3, seed=2)
    for v in range(G.n):
        for u, w in fx.in_sel[v]:
            assert w == v and G.color(u) < G.color(v)
        for u, w in fx.out_sel[v]:
            assert u == v and G.color(w) < G.color(v)
        assert len(fx.in_sel[v]) in (0, 3)


def test_fixture_text_round_trip():
    G = random_colored_graph(random.Random(2), 8, 20, 3, simple=True)
    edges = G.edge_list()
    fx = random_fixture(G, 2, seed=0, B=edges[:5])
    index = {e: i for i, e in enumerate(edges)}
    back = SelectionFixture.from_text(fx.to_text(index), edges)
    assert back.d == fx.d and back.B == fx.B
    assert {v: s for v, s in back.in_sel.items() if s} == {v: s for v, s in fx.in_sel.items() if s}
    with pytest.raises(FixtureError):
        SelectionFixture.from_text("B 0\n", edges)


def test_intermediate_equals_pos_when_selection_is_forced():
    # every vertex has at most one lower neighbor per side, so any selection is the full set
    G = ColoredDigraph(5, [(0, 1), (1, 2), (3, 2), (2, 4)], [1, 2, 3, 1, 4], 4)
    params = practical_params(k=4, alpha=0.05, d=3)
    est = intermediate_estimator(G, random_fixture(G, 3, seed=0), params)
    assert np.allclose(est, compute_pos(G, 0.05), atol=1e-12)


def test_intermediate_matches_streaming_at_full_sampling():
    G = random_colored_graph(random.Random(3), 20, 60, 3)
    params = practical_params(k=3, alpha=0.05, d=2, thresholds=(math.inf, 3, 4))
    state = process_stream(G.edge_list(), G.n, G.coloring, params, seed=4)
    est = intermediate_estimator(G, fixture_from_state(state), params)
    for v in range(G.n):
        if G.degree(v):
            assert vertex_estimator(state, v).position == pytest.approx(est[v], abs=1e-12)


def test_missing_low_degree_selection_raises():
    G = ColoredDigraph(2, [(0, 1)], [1, 2])
    params = practical_params(k=2, alpha=0.05, d=1)
    with pytest.raises(FixtureError):
        intermediate_estimator(G, SelectionFixture(1, {}, {}), params)


def test_containment_histogram():
    G = random_colored_graph(random.Random(5), 15, 40, 3)
    params = practical_params(k=3, alpha=0.05, d=1, thresholds=(math.inf, math.inf, 5))
    state = process_stream(G.edge_list(), G.n, G.coloring, params)
    estimate_all(state)
    rep = tree_containment_histogram(state)
    assert rep.bound == 5
    manual = {}
    for est in state.memo.values():
        for x in est.tree:
            if isinstance(x, int):
                manual[x] = manual.get(x, 0) + 1
    assert rep.counts == manual
    assert rep.flagged == sorted(u for u, c in manual.items() if c > 5)


def test_monte_carlo_mean():
    mean, half = monte_carlo_mean(lambda i: i % 2, 1000)
    assert mean == 0.5 and 0 < half < 0.1
    with pytest.raises(ParameterError):
        monte_carlo_mean(lambda i: 0.0, 1)
    with pytest.raises(ParameterError):
        monte_carlo_mean(lambda i: 0.0, 10, confidence=1.0)
