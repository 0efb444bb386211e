"""scikit-learn style front ends over the functional core.

``fit`` consumes a graph or an edge stream; fitted attributes end in ``_``.
Hyperparameters are plain constructor arguments, so ``get_params`` /
``set_params`` / ``clone`` work as usual.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .graph import ColoredDigraph, cut_value
from .offline import compute_pos, exact_maxdicut
from .params import practical_params
from .preprocess import ReductionConfig, edge_scale, reduce_stream
from .streaming import StreamSketch, evaluate, vertex_estimator
from .validation import check_edges

__all__ = ["OfflineDiCut", "ExactDiCut", "StreamingDiCut"]


def _as_graph(X, n=None, coloring=None):
    if isinstance(X, ColoredDigraph):
        return X if coloring is None else X.with_coloring(coloring)
    edges = np.asarray(X, dtype=np.int64).reshape(-1, 2)
    if n is None:
        n = int(edges.max()) + 1 if edges.size else 1
    return ColoredDigraph(n, edges, coloring)


class OfflineDiCut(TransformerMixin, BaseEstimator):
    """Recursive fractional cut on a properly colored graph.

    ``transform`` returns the position of every vertex; ``score`` the cut value.
    """

    def __init__(self, alpha=0.05):
        self.alpha = alpha

    def fit(self, X, y=None, n=None, coloring=None):
        G = _as_graph(X, n, coloring)
        self.positions_ = compute_pos(G, self.alpha)
        self.cut_value_ = cut_value(G, self.positions_) if G.m else 0.0
        self.n_vertices_ = G.n
        return self

    def transform(self, X):
        check_is_fitted(self, "positions_")
        return self.positions_.copy()

    def score(self, X, y=None, n=None, coloring=None):
        check_is_fitted(self, "positions_")
        return cut_value(_as_graph(X, n, coloring), self.positions_)


class ExactDiCut(BaseEstimator):
    """Brute-force maximum directed cut for small graphs."""

    def __init__(self, max_n=24):
        self.max_n = max_n

    def fit(self, X, y=None, n=None):
        G = _as_graph(X, n)
        self.value_, self.witness_ = exact_maxdicut(G, self.max_n)
        return self

    def predict(self, X=None):
        check_is_fitted(self, "witness_")
        return self.witness_.copy()


class StreamingDiCut(BaseEstimator):
    """Single-pass Max-DiCut estimator.

    Parameters
    ----------
    k, alpha, d : algorithm constants (colors, offline slack, neighbor samples per side).
    vertex_sample_prob, edge_sample_prob : sampling rates for ``W`` and ``B``.
    eval_reservoir_size : size of the evaluation reservoir ``C``.
    thresholds : high-degree threshold on ``d_B(v)``; scalar or one per color.
    keep_prob, flip_prob : edge subsampling and orientation-flip rates.
    skip : preprocessing steps to skip (``"subsample"``, ``"flip"``, ``"color"``).
    random_state : int seed; all randomness is derived from it.

    Attributes
    ----------
    cut_val_ : float
        Horvitz-Thompson estimate of the max-dicut fraction of the reduced graph.
    rescaled_estimate_ : float
        ``cut_val_`` times the number of edges kept by subsampling, times ``1/keep_prob``.
    fail_fraction_ : float
        Fraction of evaluation edges whose estimate failed.
    state_ : StreamState
        The frozen sketch (estimator memo included).
    """

    def __init__(
        self,
        k=3,
        alpha=0.05,
        d=4,
        vertex_sample_prob=1.0,
        edge_sample_prob=1.0,
        eval_reservoir_size=1000,
        thresholds=math.inf,
        keep_prob=1.0,
        flip_prob=0.0,
        skip=(),
        random_state=0,
    ):
        self.k = k
        self.alpha = alpha
        self.d = d
        self.vertex_sample_prob = vertex_sample_prob
        self.edge_sample_prob = edge_sample_prob
        self.eval_reservoir_size = eval_reservoir_size
        self.thresholds = thresholds
        self.keep_prob = keep_prob
        self.flip_prob = flip_prob
        self.skip = skip
        self.random_state = random_state

    def _params(self):
        return practical_params(
            k=self.k,
            alpha=self.alpha,
            d=self.d,
            vertex_sample_prob=self.vertex_sample_prob,
            edge_sample_prob=self.edge_sample_prob,
            eval_reservoir_size=self.eval_reservoir_size,
            thresholds=self.thresholds,
        )

    def fit(self, X, y=None, n=None, coloring=None):
        """Consume the edge stream ``X`` (iterable of pairs, array or graph) in one pass."""
        if isinstance(X, ColoredDigraph):
            n = X.n
            coloring = X.coloring if coloring is None else coloring
            X = X.edges
        elif isinstance(X, np.ndarray):
            if n is None:
                n = int(X.max()) + 1 if X.size else 1
            check_edges(X, n)
        if n is None:
            raise ValueError("n must be given when fitting on a lazy edge stream")
        params = self._params()
        seed = int(self.random_state)
        config = ReductionConfig(
            edge_keep_prob=self.keep_prob, flip_prob=self.flip_prob, k=self.k, seed=seed, skip=frozenset(self.skip)
        )
        rows = X.tolist() if isinstance(X, np.ndarray) else X
        stream, col, stats = reduce_stream(rows, n, config, coloring=coloring)
        sketch = StreamSketch(n, col, params, seed=seed).consume(stream)
        self.state_ = sketch.freeze()
        result = evaluate(self.state_)
        self.params_ = params
        self.coloring_ = col
        self.stage_stats_ = stats
        self.cut_val_ = result.cut_val
        self.fail_fraction_ = result.fail_fraction
        self.rescaled_estimate_ = self.cut_val_ * edge_scale(stats)
        return self

    def predict(self, vertices):
        """Position estimates for ``vertices``; NaN where the estimate fails."""
        check_is_fitted(self, "state_")
        out = np.full(len(vertices), np.nan)
        for i, v in enumerate(vertices):
            est = vertex_estimator(self.state_, int(v))
            if est is not None:
                out[i] = est.position
        return out

    def score(self, X=None, y=None):
        check_is_fitted(self, "cut_val_")
        return self.cut_val_
