"""Input validation helpers shared by the functional core and the estimators."""

import math

import numpy as np

from .exceptions import GraphFormatError, NumericError, ParameterError


def check_edges(edges, n):
    """Return ``edges`` as a read-only ``(m, 2)`` int64 array.

    Raises GraphFormatError for endpoints outside ``0..n-1`` and self-loops.
    """
    arr = np.asarray(edges, dtype=np.int64) if len(edges) else np.empty((0, 2), np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphFormatError(f"edges must have shape (m, 2), got {arr.shape}")
    if arr.size:
        bad = (arr < 0) | (arr >= n)
        if bad.any():
            i = int(np.flatnonzero(bad.any(axis=1))[0])
            raise GraphFormatError(f"edge {i} {tuple(arr[i])} has an endpoint outside 0..{n - 1}")
        loops = arr[:, 0] == arr[:, 1]
        if loops.any():
            i = int(np.flatnonzero(loops)[0])
            raise GraphFormatError(f"edge {i} is a self-loop on vertex {arr[i, 0]}")
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def check_edge(u, v, n):
    """Validate one streamed edge; returns it as a tuple of ints."""
    u, v = int(u), int(v)
    if not (0 <= u < n and 0 <= v < n):
        raise GraphFormatError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
    if u == v:
        raise GraphFormatError(f"self-loop on vertex {u}")
    return u, v


def check_assignment(f, n):
    """Return ``f`` as a float array of length ``n`` with every value in [0, 1]."""
    arr = np.asarray(f, dtype=np.float64)
    if arr.shape != (n,):
        raise ValueError(f"assignment must have {n} values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericError("assignment has non-finite values")
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise ValueError("assignment values must lie in [0, 1]")
    return arr


def check_probability(name, p, *, allow_zero=True, allow_one=True):
    p = float(p)
    if not math.isfinite(p):
        raise ParameterError(f"{name} must be finite, got {p}")
    lo_ok = p >= 0 if allow_zero else p > 0
    hi_ok = p <= 1 if allow_one else p < 1
    if not (lo_ok and hi_ok):
        lo = "[0" if allow_zero else "(0"
        hi = "1]" if allow_one else "1)"
        raise ParameterError(f"{name} must be in {lo}, {hi}, got {p}")
    return p
