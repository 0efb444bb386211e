import math

import numpy as np
import pytest

from dicut_stream.exceptions import GraphFormatError, InvariantError, NumericError
from dicut_stream.graph import ColoredDigraph, clamp, cut_value, degree_partition, edge_value, is_proper


def test_clamp_values():
    assert clamp(-3.0) == 0.0
    assert clamp(0.25) == 0.25
    assert clamp(7) == 1.0
    with pytest.raises(NumericError):
        clamp(math.nan)
    with pytest.raises(NumericError):
        clamp(math.inf)


def test_edge_value_and_cut_value_by_hand():
    G = ColoredDigraph(3, [(0, 1), (1, 2), (0, 1)])
    f = np.array([1.0, 0.5, 0.0])
    assert edge_value(f, (0, 1)) == 0.5
    assert edge_value(f, (1, 2)) == 0.5
    # parallel edge counted twice
    assert cut_value(G, f) == pytest.approx(0.5)
    assert cut_value(G, [1, 0, 0]) == pytest.approx(2 / 3)


def test_cut_value_rejects_empty_graph_and_bad_assignments():
    with pytest.raises(ValueError):
        cut_value(ColoredDigraph(2, []), [0, 1])
    G = ColoredDigraph(2, [(0, 1)])
    with pytest.raises(ValueError):
        cut_value(G, [0.5])
    with pytest.raises(ValueError):
        cut_value(G, [1.5, 0])
    with pytest.raises(NumericError):
        cut_value(G, [math.nan, 0])


def test_graph_validation():
    with pytest.raises(GraphFormatError):
        ColoredDigraph(2, [(0, 2)])
    with pytest.raises(GraphFormatError):
        ColoredDigraph(2, [(1, 1)])
    with pytest.raises(GraphFormatError):
        ColoredDigraph(0, [])
    with pytest.raises(GraphFormatError):
        ColoredDigraph(2, [(0, 1)], coloring=[0, 1])
    with pytest.raises(GraphFormatError):
        ColoredDigraph(2, [(0, 1)], coloring=[1, 3], k=2)
    with pytest.raises(GraphFormatError):
        ColoredDigraph(3, [(0, 1)], coloring=[1, 2])


def test_edges_are_read_only():
    G = ColoredDigraph(3, [(0, 1)])
    with pytest.raises(ValueError):
        G.edges[0, 0] = 2


def test_degrees_and_adjacency_keep_input_order():
    G = ColoredDigraph(4, [(0, 1), (2, 1), (1, 3), (0, 1)])
    assert G.out_degrees.tolist() == [2, 1, 1, 0]
    assert G.in_degrees.tolist() == [0, 3, 0, 1]
    assert G.in_edges(1) == [(0, 1), (2, 1), (0, 1)]
    assert G.degree(1) == 4


def test_is_proper():
    G = ColoredDigraph(3, [(0, 1), (1, 2)], coloring=[1, 2, 1])
    assert is_proper(G)
    assert not is_proper(G.with_coloring([1, 1, 2]))
    with pytest.raises(InvariantError):
        is_proper(ColoredDigraph(3, [(0, 1)]))


def test_degree_partition_counts_and_edges():
    # vertex 1 has color 2: in from 0 (lower), in from 3 (higher), out to 2 (lower) twice
    G = ColoredDigraph(4, [(0, 1), (3, 1), (1, 2), (1, 2)], coloring=[1, 2, 1, 3])
    p = degree_partition(G, 1, with_edges=True)
    assert (p.in_lo, p.in_hi, p.out_lo, p.out_hi) == (1, 1, 2, 0)
    assert list(p.in_lo_edges) == [(0, 1)]
    assert list(p.out_lo_edges) == [(1, 2), (1, 2)]
    assert p.degree == 4
    bad = G.with_coloring([1, 1, 1, 3])
    with pytest.raises(InvariantError):
        degree_partition(bad, 1)
