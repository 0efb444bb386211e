"""Algorithm constants.

Two ways to build a :class:`ParamSet`:

* :func:`practical_params` -- every field supplied by the caller. This is what the
  algorithms actually run with.
* :func:`derive_theory_params` -- the asymptotic constants as a function of the
  approximation slack ``epsilon`` and the vertex count ``n``. These are far too
  large to execute (``d = epsilon ** -(4 ** (k + 3))``), so the huge/tiny ones are
  kept as :class:`NPower` values ``coef * n ** exp`` with arbitrary-precision
  coefficient and exponent.

The algorithms only ever read ParamSet fields; nothing re-derives from epsilon.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from typing import Optional, Union

import mpmath

from .exceptions import ParameterError

__all__ = [
    "NPower",
    "ParamSet",
    "practical_params",
    "derive_theory_params",
    "tree_sizes",
]


@dataclass(frozen=True)
class NPower:
    """The number ``coef * n ** exp`` for the vertex count ``n`` of the instance."""

    coef: mpmath.mpf
    exp: mpmath.mpf
    n: int

    def __mul__(self, other):
        if isinstance(other, NPower):
            if other.n != self.n:
                raise ParameterError("cannot multiply NPower values with different n")
            return NPower(self.coef * other.coef, self.exp + other.exp, self.n)
        return NPower(self.coef * other, self.exp, self.n)

    __rmul__ = __mul__

    def log(self):
        """Natural log of the value, as an mpf (never overflows)."""
        return mpmath.log(self.coef) + self.exp * mpmath.log(self.n)

    def value(self):
        """The value as an mpf (mpmath exponents are unbounded)."""
        return self.coef * mpmath.power(self.n, self.exp)

    def __float__(self):
        return float(self.value())

    def to_json(self):
        return {"base": "n", "n": self.n, "coef": repr(self.coef)[5:-2], "exp": repr(self.exp)[5:-2]}

    @classmethod
    def from_json(cls, obj):
        if obj.get("base") != "n":
            raise ParameterError(f"unsupported log base {obj.get('base')!r}")
        return cls(mpmath.mpf(obj["coef"]), mpmath.mpf(obj["exp"]), int(obj["n"]))


Number = Union[int, float, NPower]


def tree_sizes(d, k):
    """Dependency-tree size per color, ``sizes[a - 1]`` for color ``a``.

    ``sizes[0] = 2d`` and ``sizes[a] = 2d * sizes[a - 1] + 1``. The ``+ 1`` leaves
    room for the vertex itself on top of up to 2d disjoint child trees, so
    padding can always reach the target exactly.
    """
    sizes = []
    prev = None
    for a in range(1, k + 1):
        prev = 2 * d if prev is None else 2 * d * prev + 1
        sizes.append(prev)
    return tuple(sizes)


@dataclass(frozen=True)
class ParamSet:
    """All constants consumed by the preprocessing, offline and streaming code.

    ``delta`` and ``sigma`` are indexed ``0..k+1``; ``tree_size`` and
    ``thresholds`` are indexed by ``color - 1``. A threshold of ``math.inf``
    means no vertex of that color is high-degree.
    """

    k: int
    alpha: float
    d: Number
    tree_size: tuple
    vertex_sample_prob: float
    edge_sample_prob: float
    eval_reservoir_size: Number
    thresholds: tuple
    delta: tuple
    sigma: tuple
    epsilon: Optional[float] = None
    q: Optional[Number] = None
    c: Optional[Number] = None
    mode: str = "practical"
    executable: bool = True

    def threshold(self, color):
        return self.thresholds[color - 1]

    def tree_size_of(self, color):
        return self.tree_size[color - 1]

    @property
    def t_max(self):
        return self.tree_size[-1]

    def with_overrides(self, **changes):
        """Copy with some practical fields replaced; tree sizes follow ``d``/``k``."""
        if self.mode != "practical":
            raise ParameterError("overrides are only supported in practical mode")
        merged = {f.name: getattr(self, f.name) for f in fields(self)}
        merged.update(changes)
        thresholds = merged["thresholds"]
        if "k" in changes and not isinstance(thresholds, (int, float)) and len(thresholds) != merged["k"]:
            if len(set(thresholds)) != 1:
                raise ParameterError("per-color thresholds do not match the new k")
            thresholds = thresholds[0]
        return practical_params(
            k=merged["k"],
            alpha=merged["alpha"],
            d=merged["d"],
            vertex_sample_prob=merged["vertex_sample_prob"],
            edge_sample_prob=merged["edge_sample_prob"],
            eval_reservoir_size=merged["eval_reservoir_size"],
            thresholds=thresholds,
            epsilon=merged["epsilon"],
        )

    # -- key=value text format ------------------------------------------------

    def to_text(self):
        lines = []
        for f in fields(self):
            lines.append(f"{f.name}={_encode(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        raw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"params line {lineno}: expected key=value")
            key, value = line.split("=", 1)
            raw[key.strip()] = value.strip()
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ParameterError(f"unknown parameter keys: {sorted(unknown)}")
        mode = raw.get("mode", "practical")
        if mode == "practical" and set(raw) - {"mode"} != known - {"mode"}:
            return _partial_practical(raw)
        missing = known - set(raw)
        if missing:
            raise ParameterError(f"missing parameter keys: {sorted(missing)}")
        values = {name: _decode(raw[name]) for name in known}
        values["tree_size"] = tuple(values["tree_size"])
        values["thresholds"] = tuple(values["thresholds"])
        values["delta"] = tuple(values["delta"])
        values["sigma"] = tuple(values["sigma"])
        ps = cls(**values)
        if ps.mode == "practical":
            _validate_practical(ps)
        return ps


def _encode(value):
    if isinstance(value, NPower):
        return json.dumps(value.to_json(), sort_keys=True)
    if isinstance(value, (tuple, list)):
        return "[" + ",".join(_encode(v) for v in value) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _split_top(s):
    # split a bracketed list on commas that are not inside {...}
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur))
    return parts


def _decode(s):
    s = s.strip()
    if s.startswith("["):
        inner = s[1:-1].strip()
        return [_decode(p) for p in _split_top(inner)] if inner else []
    if s.startswith("{"):
        return NPower.from_json(json.loads(s))
    if s in ("true", "false"):
        return s == "true"
    if s == "none":
        return None
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def _partial_practical(raw):
    # hand-written config files only need the practical inputs
    def get(name, default=None):
        return _decode(raw[name]) if name in raw else default

    if "k" not in raw or "d" not in raw:
        raise ParameterError("practical params need at least k and d")
    return practical_params(
        k=get("k"),
        alpha=get("alpha", 0.05),
        d=get("d"),
        vertex_sample_prob=get("vertex_sample_prob", 1.0),
        edge_sample_prob=get("edge_sample_prob", 1.0),
        eval_reservoir_size=get("eval_reservoir_size", 1000),
        thresholds=get("thresholds", math.inf),
        epsilon=get("epsilon"),
    )


def _default_delta(k, base):
    # strictly increasing in a, only used to size test tolerances
    delta = tuple(base ** (k + 2 - a) for a in range(k + 2))
    return delta, tuple(x * x for x in delta)


def _validate_practical(ps):
    if not isinstance(ps.k, int) or ps.k < 1:
        raise ParameterError(f"k must be a positive integer, got {ps.k!r}")
    if not 0 < ps.alpha < 1:
        raise ParameterError(f"alpha must be in (0, 1), got {ps.alpha}")
    if ps.k >= 2 and ps.alpha >= 1.0 / (ps.k - 1):
        raise ParameterError(
            f"alpha={ps.alpha} must be < 1/(k-1) = {1.0 / (ps.k - 1):.6g}; "
            "the high-color term must dominate the y_in/y_out maximum"
        )
    if not isinstance(ps.d, int) or ps.d < 1:
        raise ParameterError(f"d must be a positive integer, got {ps.d!r}")
    for name in ("vertex_sample_prob", "edge_sample_prob"):
        p = getattr(ps, name)
        if not 0 <= p <= 1:
            raise ParameterError(f"{name} must be in [0, 1], got {p}")
    if not isinstance(ps.eval_reservoir_size, int) or ps.eval_reservoir_size < 1:
        raise ParameterError("eval_reservoir_size must be a positive integer")
    if len(ps.thresholds) != ps.k:
        raise ParameterError("need one threshold per color")
    if any(not (t >= 0) for t in ps.thresholds):
        raise ParameterError("thresholds must be >= 0 (inf allowed)")
    if ps.tree_size != tree_sizes(ps.d, ps.k):
        raise ParameterError("tree_size is inconsistent with d and k")
    if len(ps.delta) != ps.k + 2 or len(ps.sigma) != ps.k + 2:
        raise ParameterError("delta and sigma need k + 2 entries")
    if any(b <= a for a, b in zip(ps.delta, ps.delta[1:])):
        raise ParameterError("delta must be strictly increasing")
    if any(not math.isclose(s, x * x, rel_tol=1e-12, abs_tol=0.0) for s, x in zip(ps.sigma, ps.delta)):
        raise ParameterError("sigma must equal delta squared")


def practical_params(
    k,
    alpha,
    d,
    vertex_sample_prob=1.0,
    edge_sample_prob=1.0,
    eval_reservoir_size=1000,
    thresholds=math.inf,
    epsilon=None,
):
    """Caller-chosen parameters that the pipeline can actually run with.

    ``thresholds`` is either one value for every color or a sequence of ``k``
    values. ``epsilon`` (optional) only seeds the delta/sigma tolerance budget.

    Note: a vertex with ``d_B(v) > threshold`` is high-degree, so a threshold of
    0 makes every vertex with at least one sampled edge high-degree.
    Probabilities of exactly 0 are accepted so tests can force the all-fail path.
    """
    if isinstance(thresholds, (int, float)):
        thresholds = (float(thresholds),) * (k if isinstance(k, int) and k > 0 else 1)
    else:
        thresholds = tuple(float(t) for t in thresholds)
    base = 0.5 if epsilon is None else float(epsilon)
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    if not isinstance(d, int) or d < 1:
        raise ParameterError(f"d must be a positive integer, got {d!r}")
    if not 0 < base < 1:
        raise ParameterError(f"epsilon must be in (0, 1), got {epsilon}")
    delta, sigma = _default_delta(k, base)
    ps = ParamSet(
        k=k,
        alpha=float(alpha),
        d=d,
        tree_size=tree_sizes(d, k),
        vertex_sample_prob=float(vertex_sample_prob),
        edge_sample_prob=float(edge_sample_prob),
        eval_reservoir_size=eval_reservoir_size,
        thresholds=thresholds,
        delta=delta,
        sigma=sigma,
        epsilon=epsilon,
    )
    _validate_practical(ps)
    return ps


def derive_theory_params(epsilon, n, max_executable=10**7):
    """Asymptotic constants for slack ``epsilon`` on an ``n``-vertex instance.

    ``k = ceil(1/eps^2)``, ``alpha = eps^4``, ``delta_a = eps^(4^(k+2-a))``,
    ``d = eps^-(4^(k+3))``, ``T_a = (2d)^a``, ``q = 2^-(k+1)``, ``c = q / (10 T_k)``.
    Vertex/edge sampling use ``n^-c``, the evaluation reservoir holds
    ``n^(1-c)`` edges and the color-``a`` threshold is ``n^(q 2^a)``.

    The ``+ 1`` slack in :func:`tree_sizes` is far below the precision of the
    log representation, so theory tree sizes are stored as ``2^a * n^(a log_n d)``.
    ``executable`` is False when ``d`` or ``T_k`` exceed ``max_executable``.
    """
    if not isinstance(n, int) or n < 2:
        raise ParameterError(f"n must be an integer >= 2, got {n!r}")
    if not 0 < epsilon < 1:
        raise ParameterError(f"epsilon must be in (0, 1), got {epsilon}")
    eps = mpmath.mpf(epsilon)
    # guard against 1/0.1**2 = 100.00000000000001
    k = int(mpmath.ceil(mpmath.nint(1 / eps**2 * 10**9) / 10**9))
    alpha = float(eps**4)
    ln_n = mpmath.log(n)
    ln_eps = mpmath.log(eps)
    one = mpmath.mpf(1)

    def eps_pow(e):
        # eps ** e as an NPower with unit coefficient
        return NPower(one, e * ln_eps / ln_n, n)

    delta = tuple(eps_pow(mpmath.mpf(4) ** (k + 2 - a)) for a in range(k + 2))
    sigma = tuple(NPower(one, 2 * x.exp, n) for x in delta)
    d = eps_pow(-(mpmath.mpf(4) ** (k + 3)))
    tree = tuple(NPower(mpmath.mpf(2) ** a, a * d.exp, n) for a in range(1, k + 1))
    q = mpmath.mpf(2) ** (-(k + 1))
    t_k = tree[-1]
    c = NPower(q / (10 * t_k.coef), -t_k.exp, n)
    c_val = c.value()
    vertex_prob = float(mpmath.power(n, -c_val))
    eval_size = NPower(one, 1 - c_val, n)
    thresholds = tuple(NPower(one, q * 2**a, n) for a in range(1, k + 1))
    executable = bool(d.log() <= math.log(max_executable) and t_k.log() <= math.log(max_executable))
    return ParamSet(
        k=k,
        alpha=alpha,
        d=d,
        tree_size=tree,
        vertex_sample_prob=vertex_prob,
        edge_sample_prob=vertex_prob,
        eval_reservoir_size=eval_size,
        thresholds=thresholds,
        delta=delta,
        sigma=sigma,
        epsilon=float(epsilon),
        q=NPower(q, mpmath.mpf(0), n),
        c=c,
        mode="theory",
        executable=executable,
    )
