"""Command-line front end: ``dicut gen``, ``dicut run`` and ``dicut bench``.

Exit codes: 0 success, 2 parameter error (including oracle refusals),
3 graph format error, 1 any other failure.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import math
import sys
import time
import warnings

import numpy as np

from . import generators
from .exceptions import DiCutError, GraphFormatError, OracleBoundError, ParameterError
from .graph import ColoredDigraph, cut_value
from .io import EdgeListReader, format_report, read_coloring, read_edge_list, write_assignment, write_coloring, write_edge_list
from .offline import compute_pos, exact_maxdicut
from .params import ParamSet, practical_params
from .preprocess import ReductionConfig, edge_scale, reduce_stream
from .streaming import StreamSketch, evaluate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARAM = 2
EXIT_FORMAT = 3

COMPARE_EXACT_MAX_N = 20

# flag name -> ParamSet field
_PARAM_FLAGS = {
    "colors": "k",
    "alpha": "alpha",
    "d": "d",
    "vertex_prob": "vertex_sample_prob",
    "edge_prob": "edge_sample_prob",
    "eval_size": "eval_reservoir_size",
    "thresholds": "thresholds",
}


def _parse_thresholds(text):
    values = []
    for part in text.split(","):
        part = part.strip().lower()
        if part in ("inf", "infinity", "none"):
            values.append(math.inf)
        else:
            try:
                values.append(float(part))
            except ValueError:
                raise ParameterError(f"bad threshold {part!r}") from None
    return values[0] if len(values) == 1 else tuple(values)


def _parse_skip(text):
    if not text:
        return frozenset()
    steps = frozenset(s.strip() for s in text.split(",") if s.strip())
    if "all" in steps:
        return frozenset({"subsample", "flip", "color"})
    return steps


def resolve_params(args):
    """Start from ``--params`` (or defaults) and apply individual flag overrides."""
    if args.params:
        with open(args.params) as fh:
            base = ParamSet.from_text(fh.read())
    else:
        base = practical_params(k=3, alpha=0.05, d=4)
    overrides = {}
    for flag, name in _PARAM_FLAGS.items():
        value = getattr(args, flag, None)
        if value is None:
            continue
        overrides[name] = _parse_thresholds(value) if name == "thresholds" else value
    return base.with_overrides(**overrides) if overrides else base


def _add_pipeline_flags(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--params", help="key=value parameter file")
    p.add_argument("--keep-prob", type=float, default=1.0, help="edge subsampling probability")
    p.add_argument("--flip-prob", type=float, default=0.0, help="orientation flip probability")
    p.add_argument("--colors", type=int, help="number of colors k")
    p.add_argument("--alpha", type=float)
    p.add_argument("--d", type=int, help="neighbor samples per side")
    p.add_argument("--vertex-prob", type=float)
    p.add_argument("--edge-prob", type=float)
    p.add_argument("--eval-size", type=int)
    p.add_argument("--thresholds", help="'inf', one number, or one per color separated by commas")
    p.add_argument("--skip-preprocess", default="", help="comma list of subsample,flip,color (or all)")
    p.add_argument("--coloring", help="coloring file to use instead of a random coloring")
    p.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identical output)")


def _reduced_graph(edges_iter, n, params, args, coloring):
    config = ReductionConfig(
        edge_keep_prob=args.keep_prob,
        flip_prob=args.flip_prob,
        k=params.k,
        seed=args.seed,
        skip=_parse_skip(args.skip_preprocess),
    )
    stream, col, stats = reduce_stream(edges_iter, n, config, coloring=coloring)
    return stream, col, stats


def _materialize_coloring(col, n):
    return col.materialize(n) if hasattr(col, "materialize") else np.asarray(col, dtype=np.int64)


def run_pipeline(path, params, args, mode, exact_max_n=24):
    """Run one mode on a graph file and return the ordered report items."""
    t0 = time.perf_counter()
    reader = EdgeListReader(path)
    n = reader.n
    coloring = read_coloring(args.coloring, n) if args.coloring else None
    stream, col, stats = _reduced_graph(reader, n, params, args, coloring)
    items = [("input", path), ("mode", mode), ("seed", args.seed), ("n", n)]
    items += [(f"params.{key}", value) for key, value in _param_items(params)]
    result = {}
    if mode == "stream":
        state = StreamSketch(n, col, params, seed=args.seed).consume(stream).freeze()
        _stream_items(state, stats, result)
    else:
        reduced = np.array(list(stream), dtype=np.int64).reshape(-1, 2)
        col_arr = _materialize_coloring(col, n)
        G = ColoredDigraph(n, reduced, col_arr, params.k)
        if mode == "exact" or (mode == "compare" and n <= min(exact_max_n, COMPARE_EXACT_MAX_N)):
            if n > exact_max_n:
                raise OracleBoundError(f"exact mode refuses n={n} > {exact_max_n}")
            result["exact_maxval"] = exact_maxdicut(G, exact_max_n)[0] if G.m else None
        if mode in ("offline", "compare"):
            pos = compute_pos(G, params.alpha)
            result["offline_cut_value"] = cut_value(G, pos) if G.m else None
            result["_pos"] = pos
        if mode == "compare":
            state = StreamSketch(n, col_arr, params, seed=args.seed).consume(reduced.tolist()).freeze()
            _stream_items(state, stats, result)
    items += [
        ("edges_in", stats["input"].seen),
        ("edges_kept", stats["subsample"].emitted if stats["subsample"].seen else stats["input"].seen),
        ("edges_flipped", stats["flip"].changed),
        ("edges_dropped_by_coloring", stats["color"].dropped),
        ("edges_reduced", stats["color"].emitted),
    ]
    for key in ("cut_val", "rescaled_estimate", "offline_cut_value", "exact_maxval", "fail_fraction",
                "W_size", "B_size", "C_size", "peak_tracked_bytes", "max_depth"):
        if key in result:
            items.append((key, result[key]))
    if args.timing:
        items.append(("wall_time_s", round(time.perf_counter() - t0, 6)))
    return items, result


def _param_items(params):
    return [
        ("k", params.k),
        ("alpha", params.alpha),
        ("d", params.d),
        ("tree_size", ",".join(str(t) for t in params.tree_size)),
        ("vertex_sample_prob", params.vertex_sample_prob),
        ("edge_sample_prob", params.edge_sample_prob),
        ("eval_reservoir_size", params.eval_reservoir_size),
        ("thresholds", ",".join("inf" if math.isinf(t) else repr(t) for t in params.thresholds)),
    ]


def _stream_items(state, stats, result):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = evaluate(state)
    result["cut_val"] = res.cut_val
    result["rescaled_estimate"] = res.cut_val * edge_scale(stats)
    result["fail_fraction"] = res.fail_fraction
    result["W_size"] = len(state.W)
    result["B_size"] = len(state.B)
    result["C_size"] = res.n_entries
    result["peak_tracked_bytes"] = state.peak_tracked_bytes
    result["max_depth"] = state.max_depth


# -- commands -----------------------------------------------------------------


def cmd_gen(args):
    kind, n, m, seed = args.kind, args.n, args.m, args.seed
    if m < 1:
        raise ParameterError("m must be >= 1")
    meta = {"generator": kind, "seed": seed}
    if kind == "uniform-random":
        edges = generators.uniform_random(n, m, seed)
    elif kind == "planted-dicut":
        edges, side = generators.planted_dicut(n, m, seed, args.plant_fraction)
        crossing = int(np.sum((side[edges[:, 0]] == 1) & (side[edges[:, 1]] == 0)))
        meta.update(plant_fraction=args.plant_fraction, planted_crossing=crossing)
    elif kind == "layered-dag":
        edges, layers = generators.layered_dag(n, m, seed, args.layers)
        write_coloring(args.out + ".colors", layers)
        meta.update(layers=args.layers, coloring_file=args.out + ".colors")
    elif kind == "power-law-out":
        edges = generators.power_law_out(n, m, seed)
    else:
        raise ParameterError(f"unknown generator {kind!r}")
    write_edge_list(args.out, n, edges, meta)
    return EXIT_OK


def cmd_run(args):
    params = resolve_params(args)
    items, result = run_pipeline(args.graph, params, args, args.mode, args.exact_max_n)
    text = format_report(items)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.assignment_out and "_pos" in result:
        write_assignment(args.assignment_out, result["_pos"])
    return EXIT_OK


def _parse_grid(specs):
    grid = []
    for spec in specs or []:
        if "=" not in spec:
            raise ParameterError(f"grid spec must be name=v1,v2,..., got {spec!r}")
        name, values = spec.split("=", 1)
        name = name.strip().replace("-", "_")
        if name not in _PARAM_FLAGS:
            raise ParameterError(f"unknown grid parameter {name!r}")
        field_name = _PARAM_FLAGS[name]
        parsed = []
        for raw in values.split(","):
            if field_name in ("k", "d", "eval_reservoir_size"):
                parsed.append(int(raw))
            elif field_name == "thresholds":
                parsed.append(_parse_thresholds(raw))
            else:
                parsed.append(float(raw))
        grid.append((field_name, parsed))
    return grid


def bench_rows(n, edges, base_params, args, grid, trials):
    """Yield benchmark rows for every grid point and trial (deterministic per seed)."""
    coloring = read_coloring(args.coloring, n) if args.coloring else None
    names = [name for name, _ in grid]
    for point in itertools.product(*[values for _, values in grid]):
        params = base_params.with_overrides(**dict(zip(names, point))) if grid else base_params
        for trial in range(trials):
            seed = args.seed + trial
            trial_args = argparse.Namespace(**{**vars(args), "seed": seed})
            t0 = time.perf_counter()
            stream, col, stats = _reduced_graph(edges.tolist(), n, params, trial_args, coloring)
            reduced = np.array(list(stream), dtype=np.int64).reshape(-1, 2)
            col_arr = _materialize_coloring(col, n)
            state = StreamSketch(n, col_arr, params, seed=seed).consume(reduced.tolist()).freeze()
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                res = evaluate(state)
            elapsed = time.perf_counter() - t0
            G = ColoredDigraph(n, reduced, col_arr, params.k)
            offline = cut_value(G, compute_pos(G, params.alpha)) if G.m else 0.0
            row = dict(zip(names, point))
            row.update(
                trial=trial,
                seed=seed,
                cut_val=res.cut_val,
                error_vs_offline=abs(res.cut_val - offline),
                peak_tracked_bytes=state.peak_tracked_bytes,
            )
            if args.timing:
                row["time_s"] = round(elapsed, 6)
            yield row


def cmd_bench(args):
    if args.trials < 1:
        raise ParameterError("trials must be >= 1")
    if args.graph:
        n, edges, _ = read_edge_list(args.graph)
    elif args.gen:
        parts = args.gen.split(":")
        if len(parts) != 4:
            raise ParameterError("--gen expects kind:n:m:seed")
        kind, n, m, seed = parts[0], int(parts[1]), int(parts[2]), int(parts[3])
        if kind == "uniform-random":
            edges = generators.uniform_random(n, m, seed)
        elif kind == "planted-dicut":
            edges, _ = generators.planted_dicut(n, m, seed)
        elif kind == "layered-dag":
            edges, _ = generators.layered_dag(n, m, seed)
        elif kind == "power-law-out":
            edges = generators.power_law_out(n, m, seed)
        else:
            raise ParameterError(f"unknown generator {kind!r}")
    else:
        raise ParameterError("bench needs a graph file or --gen")
    params = resolve_params(args)
    grid = _parse_grid(args.grid)
    rows = list(bench_rows(n, edges, params, args, grid, args.trials))
    fieldnames = list(rows[0].keys()) if rows else []
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="dicut", description="Streaming maximum directed cut estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic edge-list file")
    g.add_argument("kind", choices=generators.GENERATORS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--plant-fraction", type=float, default=0.9)
    g.add_argument("--layers", type=int, default=3)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run the pipeline on an edge-list file")
    r.add_argument("graph")
    r.add_argument("--mode", choices=("stream", "offline", "exact", "compare"), default="stream")
    r.add_argument("--out", help="report path (default: stdout)")
    r.add_argument("--assignment-out", help="write offline positions (offline/compare modes)")
    r.add_argument("--exact-max-n", type=int, default=24)
    _add_pipeline_flags(r)
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", help="CSV benchmark over a parameter grid")
    b.add_argument("graph", nargs="?")
    b.add_argument("--gen", help="generator spec kind:n:m:seed instead of a file")
    b.add_argument("--grid", action="append", help="name=v1,v2,... (repeatable; names as the flags, e.g. d, eval_size)")
    b.add_argument("--trials", type=int, default=1)
    b.add_argument("--out", help="CSV path (default: stdout)")
    _add_pipeline_flags(b)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, OracleBoundError) as exc:
        print(f"dicut: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except GraphFormatError as exc:
        print(f"dicut: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (DiCutError, OSError) as exc:
        print(f"dicut: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
