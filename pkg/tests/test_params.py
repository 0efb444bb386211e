import math

import mpmath
import pytest

from dicut_stream.exceptions import InvariantError, ParameterError
from dicut_stream.params import NPower, ParamSet, derive_theory_params, practical_params, tree_sizes
from dicut_stream.streaming import StreamSketch


def test_tree_sizes_recursion():
    assert tree_sizes(1, 3) == (2, 5, 11)
    assert tree_sizes(2, 3) == (4, 17, 69)
    assert tree_sizes(4, 1) == (8,)


def test_practical_defaults():
    p = practical_params(k=3, alpha=0.05, d=2)
    assert p.thresholds == (math.inf,) * 3
    assert p.tree_size == (4, 17, 69)
    assert p.threshold(2) == math.inf and p.tree_size_of(3) == 69 and p.t_max == 69
    assert all(a < b for a, b in zip(p.delta, p.delta[1:]))
    assert all(s == pytest.approx(x * x) for s, x in zip(p.sigma, p.delta))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(k=3, alpha=0.5, d=2),  # alpha >= 1/(k-1)
        dict(k=3, alpha=0.0, d=2),
        dict(k=0, alpha=0.05, d=2),
        dict(k=3, alpha=0.05, d=0),
        dict(k=3, alpha=0.05, d=2, vertex_sample_prob=1.5),
        dict(k=3, alpha=0.05, d=2, edge_sample_prob=-0.1),
        dict(k=3, alpha=0.05, d=2, eval_reservoir_size=0),
        dict(k=3, alpha=0.05, d=2, thresholds=(1, 2)),
        dict(k=3, alpha=0.05, d=2, thresholds=-1),
        dict(k=3, alpha=0.05, d=2, epsilon=1.0),
    ],
)
def test_practical_rejects_bad_values(kwargs):
    with pytest.raises(ParameterError):
        practical_params(**kwargs)


def test_text_round_trip_and_overrides():
    p = practical_params(k=3, alpha=0.05, d=2, thresholds=(1, 2, math.inf), eval_reservoir_size=50)
    assert ParamSet.from_text(p.to_text()) == p
    q = p.with_overrides(d=3, vertex_sample_prob=0.5)
    assert q.tree_size == tree_sizes(3, 3) and q.vertex_sample_prob == 0.5
    assert q.thresholds == p.thresholds
    # changing k resizes a uniform threshold tuple
    assert p.with_overrides(k=2, thresholds=math.inf).thresholds == (math.inf, math.inf)


def test_partial_text_fills_defaults():
    p = ParamSet.from_text("k=2\nalpha=0.1\nd=3\n")
    assert p == practical_params(k=2, alpha=0.1, d=3)


def test_from_text_rejects_garbage():
    with pytest.raises(ParameterError):
        ParamSet.from_text("k=3\nalpha=0.05\nd=two\n")
    with pytest.raises(ParameterError):
        ParamSet.from_text("nonsense line\n")


def test_npower_arithmetic_and_json():
    a = NPower(mpmath.mpf(2), mpmath.mpf("0.5"), 100)
    assert float(a) == pytest.approx(20.0)
    b = a * a
    assert float(b) == pytest.approx(400.0)
    assert float(a * 3) == pytest.approx(60.0)
    assert NPower.from_json(a.to_json()) == a
    with pytest.raises(ParameterError):
        a * NPower(mpmath.mpf(1), mpmath.mpf(1), 10)
    huge = NPower(mpmath.mpf(1), mpmath.mpf(10**6), 10**6)
    assert huge.log() == pytest.approx(10**6 * math.log(10**6))


def test_theory_params_shape():
    t = derive_theory_params(0.5, 10**6)
    assert t.k == 4 and t.alpha == 0.0625
    assert t.mode == "theory" and not t.executable
    # q = 2^-(k+1); color-a threshold n^(q 2^a)
    assert float(t.thresholds[0]) == pytest.approx((10**6) ** (2 / 32))
    assert float(t.tree_size[1].coef) == 4.0
    assert ParamSet.from_text(t.to_text()) == t
    with pytest.raises(InvariantError):
        StreamSketch(10, [1] * 10, t)


def test_theory_k_rounding():
    assert derive_theory_params(0.1, 1000).k == 100
    assert derive_theory_params(0.3, 1000).k == 12


def test_theory_rejects_bad_input():
    with pytest.raises(ParameterError):
        derive_theory_params(0.0, 100)
    with pytest.raises(ParameterError):
        derive_theory_params(0.5, 1)
