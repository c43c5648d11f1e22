"""Command-line front end: ``extscalefree <command> ...``.

Commands: ``fit``, ``generate``, ``subsample``, ``metrics``, ``experiment``.
Exit status: 0 success, 1 usage error, 2 data error (unreadable or
malformed input), 3 numerical failure (fit or generation did not succeed).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import distributions as dd
from . import estimation as est
from . import experiments as exps
from .graph import Graph
from .netgen import GenerationError, generate
from .netops import average_shortest_path, degrees, largest_connected_component, node_subsample

__all__ = ["ParsedEdgeList", "parse_edge_list", "parse_edge_text", "read_degree_file", "main"]

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class DataError(ValueError):
    """Malformed or empty input file."""


# -- input formats ------------------------------------------------------------


@dataclass
class ParsedEdgeList:
    graph: Graph
    node_ids: np.ndarray  # dense id i <- original id node_ids[i]
    duplicates: int
    self_loops: int


def _read_text(source):
    """Contents of a path, or of an open text file."""
    if hasattr(source, "read"):
        return source.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {source}: {exc.strerror or exc}") from exc


def parse_edge_list(source) -> ParsedEdgeList:
    """Parse a SNAP-style edge list from a path or an open text file.

    One whitespace-separated ``u v`` pair of non-negative integers per
    line; blank lines and lines starting with ``#`` are skipped.  Edges are
    undirected; repeats and self-loops are dropped and counted.  Original
    ids are mapped to ``0..n-1`` in increasing order.
    """
    return parse_edge_text(_read_text(source))


def parse_edge_text(text: str) -> ParsedEdgeList:
    """:func:`parse_edge_list` on a string."""
    us, vs = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise DataError(f"line {lineno}: expected two node ids, got {s!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError(f"line {lineno}: node ids must be integers, got {s!r}") from None
        if u < 0 or v < 0:
            raise DataError(f"line {lineno}: node ids must be non-negative")
        us.append(u)
        vs.append(v)
    if not us:
        raise DataError("edge list contains no edges")
    raw = np.column_stack([np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64)])
    loops = raw[:, 0] == raw[:, 1]
    ids, dense = np.unique(raw[~loops], return_inverse=True)
    dense = dense.reshape(-1, 2)
    graph = Graph.from_edges(int(ids.size), dense)
    return ParsedEdgeList(graph, ids, int(dense.shape[0] - graph.m), int(loops.sum()))


def read_degree_file(source) -> np.ndarray:
    """One positive integer per line; ``#`` comments and blank lines skipped."""
    text = _read_text(source)
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            k = int(s)
        except ValueError:
            raise DataError(f"line {lineno}: expected a positive integer, got {s!r}") from None
        if k < 1:
            raise DataError(f"line {lineno}: degrees must be >= 1, got {k}")
        out.append(k)
    if not out:
        raise DataError("degree file contains no degrees")
    return np.array(out, dtype=np.int64)


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_graph(path):
    parsed = parse_edge_list(path)
    if parsed.duplicates or parsed.self_loops:
        print(
            f"note: dropped {parsed.duplicates} duplicate edge(s) and "
            f"{parsed.self_loops} self-loop(s)",
            file=sys.stderr,
        )
    return parsed.graph


# -- commands ------------------------------------------------------------------


def cmd_fit(args):
    if args.input_kind == "edges":
        data = degrees(_load_graph(args.input))
    else:
        data = read_degree_file(args.input)
    try:
        res = est.fit(args.family, args.method, data, seed=args.seed)
    except (ValueError, RuntimeError, OverflowError) as exc:
        raise CliError(f"fit failed: {exc}", EXIT_NUMERIC) from exc
    if not math.isfinite(res.objective):
        raise CliError("fit failed: objective is not finite", EXIT_NUMERIC)
    report = res.to_dict()
    report["n_degrees"] = int(data.size)
    report["input"] = str(args.input)
    k = np.unique(data)
    emp = 1.0 - np.searchsorted(np.sort(data), k, side="right") / data.size
    fitted = dd.ccdf(res.dist, k)
    lines = ["k,empirical_ccdf,fitted_ccdf\n"]
    lines += [f"{kk},{e!r},{f!r}\n" for kk, e, f in zip(k.tolist(), emp.tolist(), fitted.tolist())]
    curve = args.curve or (None if args.output in (None, "-") else str(Path(args.output).with_suffix(".ccdf.csv")))
    _write(args.output, _json(report))
    if curve is not None:
        _write(curve, "".join(lines))
    if not res.converged:
        print("warning: optimiser hit its iteration cap", file=sys.stderr)
    return EXIT_OK


def _dist_from_args(args):
    fam = args.family
    need = {
        "zipf": ("alpha",),
        "pareto": ("xi",),
        "gpd": ("sigma", "xi"),
        "epd": ("xi", "tau", "delta"),
        "mixture": ("c1", "gamma1", "c2", "gamma2"),
        "point": ("k",),
    }[fam]
    missing = [p for p in need if getattr(args, p) is None]
    if missing:
        raise CliError(f"family {fam} needs --{' --'.join(missing)}", EXIT_USAGE)
    vals = {p: getattr(args, p) for p in need}
    try:
        if fam == "point":
            return dd.point_mass(int(vals["k"]))
        cls = {"zipf": dd.Zipf, "pareto": dd.DPareto, "gpd": dd.DGpd, "epd": dd.DEpd, "mixture": dd.Mixture}[fam]
        return cls(**vals)
    except (ValueError, TypeError) as exc:
        raise CliError(f"invalid parameters: {exc}", EXIT_USAGE) from exc


def cmd_generate(args):
    dist = _dist_from_args(args)
    if args.n < 2:
        raise CliError("--n must be at least 2", EXIT_USAGE)
    rng = np.random.default_rng(args.seed)
    try:
        rep = generate(dist, args.n, rng)
    except GenerationError as exc:
        raise CliError(f"generation failed: {exc}", EXIT_NUMERIC) from exc
    report = rep.summary()
    report.update(
        distribution=dd.to_dict(dist),
        seed=args.seed,
        isolated_nodes=int(np.sum(rep.graph.degree() == 0)),
    )
    _write(args.output, rep.graph.to_edge_list())
    text = _json(report)
    if args.report:
        _write(args.report, text)
    sys.stderr.write(text)
    return EXIT_OK


def cmd_subsample(args):
    if not 0 < args.p <= 1:
        raise CliError(f"--p must lie in (0, 1], got {args.p}", EXIT_USAGE)
    g = _load_graph(args.input)
    rep = node_subsample(g, args.p, np.random.default_rng(args.seed))
    report = rep.summary()
    report.update(seed=args.seed, input_nodes=g.n)
    _write(args.output, rep.subgraph.to_edge_list())
    text = _json(report)
    if args.report:
        _write(args.report, text)
    sys.stderr.write(text)
    return EXIT_OK


def cmd_metrics(args):
    g = _load_graph(args.input)
    if args.which == "degrees":
        d = degrees(g)
        _write(args.output, "node,degree\n" + "".join(f"{i},{k}\n" for i, k in enumerate(d.tolist())))
        return EXIT_OK
    if args.which == "hillplot":
        curve = est.hill_plot(degrees(g))
        rows = "".join(f"{k},{x!r}\n" for k, x in zip(curve.k.tolist(), curve.xi_hat.tolist()))
        _write(args.output, "k,xi_hat\n" + rows)
        return EXIT_OK
    lcc, nodes = largest_connected_component(g)
    out = {"metric": args.which, "nodes": g.n, "edges": g.m}
    if args.which == "lcc":
        out.update(lcc_nodes=lcc.n, lcc_edges=lcc.m, lcc_fraction=lcc.n / g.n if g.n else 0.0)
    else:
        target = lcc if args.lcc else g
        try:
            out["asp"] = average_shortest_path(target)
        except ValueError as exc:
            raise CliError(f"{exc} (pass --lcc)", EXIT_DATA) from exc
        out["lcc_only"] = bool(args.lcc)
    _write(args.output, _json(out))
    return EXIT_OK


def cmd_experiment(args):
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(_read_text(args.config))
        except json.JSONDecodeError as exc:
            raise CliError(f"config is not valid JSON: {exc}", EXIT_DATA) from exc
        if not isinstance(cfg, dict):
            raise CliError("config must be a JSON object", EXIT_DATA)
    try:
        config = exps.ExperimentConfig.from_dict(cfg)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid config: {exc}", EXIT_DATA) from exc
    try:
        tables = exps.EXPERIMENTS[args.name](config)
    except GenerationError as exc:
        raise CliError(f"experiment failed: {exc}", EXIT_NUMERIC) from exc
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.name.replace("-", "_")
    (out / f"{stem}_config.json").write_text(_json(config.to_dict()))
    (out / f"{stem}_replicates.csv").write_text(exps.rows_to_csv(tables["replicates"]))
    (out / f"{stem}_summary.csv").write_text(exps.rows_to_csv(tables["summary"]))
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: {message}", EXIT_USAGE)


def build_parser():
    p = _Parser(prog="extscalefree", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fit", help="fit a degree law to an edge list or a degree file")
    f.add_argument("input")
    f.add_argument("--input-kind", choices=("edges", "degrees"), default="edges")
    f.add_argument("--family", choices=est.FIT_FAMILIES, required=True)
    f.add_argument("--method", choices=("mle", "chisq"), default="mle")
    f.add_argument("--seed", type=int, default=0, help="seed for optimiser restarts")
    f.add_argument("-o", "--output", default="-", help="FitResult JSON (default stdout)")
    f.add_argument("--curve", help="ccdf CSV (default: <output>.ccdf.csv)")
    f.set_defaults(func=cmd_fit)

    g = sub.add_parser("generate", help="generate a random graph with a given degree law")
    g.add_argument("--family", choices=("zipf", "pareto", "gpd", "epd", "mixture", "point"), required=True)
    for name in ("alpha", "xi", "sigma", "tau", "delta", "c1", "gamma1", "c2", "gamma2"):
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--k", type=int, help="degree of the point-mass law")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", default="-", help="edge list (default stdout)")
    g.add_argument("--report", help="also write the generation report JSON here")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("subsample", help="keep each node with probability p")
    s.add_argument("input")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", default="-")
    s.add_argument("--report")
    s.set_defaults(func=cmd_subsample)

    m = sub.add_parser("metrics", help="graph metrics")
    m.add_argument("input")
    m.add_argument("--which", choices=("asp", "lcc", "degrees", "hillplot"), required=True)
    m.add_argument("--lcc", action="store_true", help="compute asp on the largest component")
    m.add_argument("-o", "--output", default="-")
    m.set_defaults(func=cmd_metrics)

    e = sub.add_parser("experiment", help="run a Monte Carlo study")
    e.add_argument("name", choices=sorted(exps.EXPERIMENTS))
    e.add_argument("--config", help="JSON file of ExperimentConfig fields")
    e.add_argument("--output-dir", required=True)
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        # remaining domain errors come from the input data (e.g. isolated nodes)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
