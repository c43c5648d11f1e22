"""Seeded Monte Carlo studies built on the generation and fitting layers.

Three studies are provided:

* :func:`asp_vs_tau` -- average shortest path of the largest component as
  the second-order index ``tau`` of the EPD degree law varies;
* :func:`estimator_study` -- tail-index estimates of several families and
  both fitting methods on i.i.d. degree samples;
* :func:`subnet_tail_study` -- EPD fits to the degrees of uniformly
  node-subsampled graphs.

Randomness: replicate ``r`` draws from
``SeedSequence(seed, spawn_key=(r,))`` and nothing else, so its results do
not depend on how many replicates run or in which order.  Within a
replicate the same stream is reused for every grid point (common random
numbers), which makes comparisons along a grid much less noisy.

Replicates can run in a process pool; set ``workers`` in the config or the
``EXTSCALEFREE_WORKERS`` environment variable.  Output ordering never
depends on the pool.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import distributions as dd
from . import estimation as est
from .netgen import GenerationError, generate
from .netops import average_shortest_path, largest_connected_component, node_subsample

__all__ = [
    "ExperimentConfig",
    "CurveWithBand",
    "replicate_rng",
    "asp_vs_tau",
    "estimator_study",
    "summarize_estimates",
    "subnet_tail_study",
    "rows_to_csv",
    "EXPERIMENTS",
]

WORKERS_ENV = "EXTSCALEFREE_WORKERS"
DEFAULT_TAU_GRID = tuple(-0.5 * i for i in range(11))
DEFAULT_SCENARIOS = (
    {"name": "pareto", "family": "pareto", "xi": 1.15},
    {"name": "epd_tau-1", "family": "epd", "xi": 1.15, "tau": -1.0, "delta": 0.5},
    {"name": "epd_tau-1.6", "family": "epd", "xi": 1.15, "tau": -1.6, "delta": 0.5},
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings shared by the studies; unused fields are ignored by each.

    ``identical_replicates`` gives every replicate the stream of replicate
    0, which is only useful for checking the band machinery.
    """

    n_nodes: int = 1000
    n_replicates: int = 100
    seed: int = 0
    band_level: float = 0.90
    xi: float = 1.15
    delta: float = 0.5
    tau_grid: tuple = DEFAULT_TAU_GRID
    scenarios: tuple = DEFAULT_SCENARIOS
    families: tuple = ("pareto", "gpd", "epd")
    methods: tuple = ("chisq", "mle")
    parent: str = "pareto"
    p_grid: tuple = (0.25, 0.5, 0.75)
    workers: int | None = None
    identical_replicates: bool = False

    def __post_init__(self):
        for name in ("tau_grid", "p_grid"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        for name in ("families", "methods"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "scenarios", tuple(dict(s) for s in self.scenarios))
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 10:
            raise ValueError("n_nodes must be an integer >= 10")
        if int(self.n_replicates) != self.n_replicates or self.n_replicates < 2:
            raise ValueError("n_replicates must be an integer >= 2")
        if not 0 < self.band_level < 1:
            raise ValueError("band_level must lie in (0, 1)")
        if any(t > 0 for t in self.tau_grid):
            raise ValueError("tau grid values must be <= 0")
        if any(not 0 < p <= 1 for p in self.p_grid):
            raise ValueError("p grid values must lie in (0, 1]")
        if self.parent not in ("pareto", "zipf"):
            raise ValueError("parent must be 'pareto' or 'zipf'")
        for fam in self.families:
            if fam not in est.FIT_FAMILIES:
                raise ValueError(f"unknown family {fam!r}")
        for m in self.methods:
            if m not in ("chisq", "mle"):
                raise ValueError(f"unknown method {m!r}")
        for sc in self.scenarios:
            _scenario_dist(sc)

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    def to_dict(self) -> dict:
        out = asdict(self)
        for k, v in out.items():
            if isinstance(v, tuple):
                out[k] = list(v)
        return out


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(replicate,)))


def _rep_index(config, r):
    return 0 if config.identical_replicates else r


def _n_workers(config):
    if config.workers is not None:
        return max(1, int(config.workers))
    env = os.environ.get(WORKERS_ENV)
    return max(1, int(env)) if env else 1


def _map(config, fn, tasks):
    """Run ``fn`` over ``tasks`` serially or in a process pool, order kept."""
    workers = _n_workers(config)
    if workers == 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


# -- average shortest path versus tau ----------------------------------------


@dataclass
class CurveWithBand:
    """Per-grid-point mean and empirical band of a replicated statistic.

    ``replicates`` has shape ``(len(x), n_replicates)`` with NaN for failed
    replicates; ``lcc_fraction`` holds the matching largest-component share.
    """

    x: list
    mean: list
    lo: list
    hi: list
    band_level: float
    replicates: np.ndarray | None = None
    lcc_fraction: np.ndarray | None = None
    failures: list = field(default_factory=list)

    def rows(self):
        out = []
        for i, x in enumerate(self.x):
            for r in range(self.replicates.shape[1]):
                out.append(
                    {
                        "tau": x,
                        "replicate": r,
                        "asp": self.replicates[i, r],
                        "lcc_fraction": self.lcc_fraction[i, r],
                    }
                )
        return out

    def summary_rows(self):
        return [
            {
                "tau": x,
                "mean": m,
                "lo": lo,
                "hi": hi,
                "band_level": self.band_level,
                "mean_lcc_fraction": float(np.nanmean(self.lcc_fraction[i])),
                "failures": self.failures[i],
            }
            for i, (x, m, lo, hi) in enumerate(zip(self.x, self.mean, self.lo, self.hi))
        ]


def band(values, level):
    """Mean and central empirical ``level`` band of finite ``values``."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    a = (1.0 - level) / 2.0
    lo, hi = np.quantile(v, [a, 1.0 - a])
    m = float(v.mean())
    # guard against rounding when all values coincide
    return m, float(min(lo, m)), float(max(hi, m))


def _asp_task(args):
    config, r = args
    out = []
    for tau in config.tau_grid:
        rng = replicate_rng(config.seed, _rep_index(config, r))
        delta = config.delta if tau < 0 else 0.0
        dist = dd.DEpd(config.xi, tau, delta)
        try:
            g = generate(dist, config.n_nodes, rng).graph
        except GenerationError:
            out.append((math.nan, math.nan))
            continue
        lcc, nodes = largest_connected_component(g)
        out.append((average_shortest_path(lcc), nodes.size / g.n))
    return out


def asp_vs_tau(config: ExperimentConfig) -> CurveWithBand:
    """Mean ASP of the largest component, with band, for each ``tau`` in the grid.

    At ``tau = 0`` the law is generated with ``delta = 0`` (strict Pareto).
    A grid point fails if fewer than half of its replicates generate.
    """
    results = _map(config, _asp_task, [(config, r) for r in range(config.n_replicates)])
    asp = np.array([[res[i][0] for res in results] for i in range(len(config.tau_grid))])
    lcc = np.array([[res[i][1] for res in results] for i in range(len(config.tau_grid))])
    mean, lo, hi, failures = [], [], [], []
    for i, tau in enumerate(config.tau_grid):
        bad = int(np.sum(~np.isfinite(asp[i])))
        if bad * 2 > config.n_replicates:
            raise GenerationError(f"tau={tau}: {bad} of {config.n_replicates} replicates failed")
        m, a, b = band(asp[i], config.band_level)
        mean.append(m)
        lo.append(a)
        hi.append(b)
        failures.append(bad)
    return CurveWithBand(
        list(config.tau_grid), mean, lo, hi, config.band_level, asp, lcc, failures
    )


# -- estimator calibration ------------------------------------------------------


def _scenario_dist(sc):
    fam = sc.get("family")
    if fam == "pareto":
        return dd.DPareto(sc["xi"])
    if fam == "epd":
        return dd.DEpd(sc["xi"], sc["tau"], sc["delta"])
    if fam == "zipf":
        return dd.Zipf(sc["alpha"])
    raise ValueError(f"scenario {sc.get('name')!r}: unsupported family {fam!r}")


def _fit_row(family, method, degrees):
    try:
        res = est.fit(family, method, degrees)
    except (ValueError, RuntimeError):
        return math.nan, False, False, None
    return res.params.get("xi", math.nan), res.converged, res.boundary, res


def _estimator_task(args):
    config, r = args
    rows = []
    for sc in config.scenarios:
        rng = replicate_rng(config.seed, _rep_index(config, r))
        degrees = dd.sample(_scenario_dist(sc), rng, config.n_nodes)
        for family in config.families:
            for method in config.methods:
                xi_hat, ok, boundary, _ = _fit_row(family, method, degrees)
                rows.append(
                    {
                        "scenario": sc["name"],
                        "family": family,
                        "method": method,
                        "replicate": r,
                        "xi_hat": xi_hat,
                        "converged": ok,
                        "boundary": boundary,
                    }
                )
    return rows


def estimator_study(config: ExperimentConfig) -> list:
    """``xi`` estimates for every scenario x family x method x replicate.

    Each replicate fits i.i.d. samples of ``n_nodes`` degrees.  Failed or
    non-converged fits stay in the table with ``converged`` False.
    """
    results = _map(config, _estimator_task, [(config, r) for r in range(config.n_replicates)])
    rows = [row for rep in results for row in rep]
    order = {sc["name"]: i for i, sc in enumerate(config.scenarios)}
    fam = {f: i for i, f in enumerate(config.families)}
    meth = {m: i for i, m in enumerate(config.methods)}
    rows.sort(key=lambda d: (order[d["scenario"]], fam[d["family"]], meth[d["method"]], d["replicate"]))
    return rows


def summarize_estimates(rows) -> list:
    """Median and quartiles of converged ``xi_hat`` per scenario/family/method."""
    groups = {}
    for row in rows:
        groups.setdefault((row["scenario"], row["family"], row["method"]), []).append(row)
    out = []
    for (scenario, family, method), grp in groups.items():
        vals = np.array([g["xi_hat"] for g in grp if g["converged"]], dtype=float)
        q = np.quantile(vals, [0.25, 0.5, 0.75]) if vals.size else [math.nan] * 3
        out.append(
            {
                "scenario": scenario,
                "family": family,
                "method": method,
                "n": len(grp),
                "non_converged": len(grp) - int(vals.size),
                "q25": float(q[0]),
                "median": float(q[1]),
                "q75": float(q[2]),
            }
        )
    return out


# -- sub-network tail study -----------------------------------------------------


def _parent_dist(config):
    if config.parent == "zipf":
        return dd.Zipf(1.0 + 1.0 / config.xi)
    return dd.DPareto(config.xi)


def _subnet_task(args):
    config, r = args
    ss = np.random.SeedSequence(config.seed, spawn_key=(_rep_index(config, r),))
    streams = [np.random.default_rng(s) for s in ss.spawn(1 + len(config.p_grid))]
    rows = []
    try:
        g = generate(_parent_dist(config), config.n_nodes, streams[0]).graph
    except GenerationError:
        g = None
    for p, rng in zip(config.p_grid, streams[1:]):
        row = {"p": p, "replicate": r, "nodes": 0, "xi_hat": math.nan, "tau_hat": math.nan,
               "delta_hat": math.nan, "converged": False, "boundary": False}
        if g is not None:
            sub = node_subsample(g, p, rng).subgraph
            row["nodes"] = sub.n
            _, ok, boundary, res = _fit_row("epd", "mle", sub.degree())
            if res is not None:
                prm = res.params
                row.update(xi_hat=prm["xi"], tau_hat=prm["tau"], delta_hat=prm["delta"],
                           converged=ok, boundary=boundary)
        rows.append(row)
    return rows


def subnet_tail_study(config: ExperimentConfig) -> list:
    """EPD maximum-likelihood fits to node-subsampled parent graphs.

    One parent graph per replicate (d-Pareto or Zipf with tail index
    ``xi``); each ``p`` in the grid subsamples it independently.
    """
    results = _map(config, _subnet_task, [(config, r) for r in range(config.n_replicates)])
    rows = [row for rep in results for row in rep]
    pidx = {p: i for i, p in enumerate(config.p_grid)}
    rows.sort(key=lambda d: (pidx[d["p"]], d["replicate"]))
    return rows


# -- output -----------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def rows_to_csv(rows) -> str:
    """CSV text with a header from the first row; floats at full precision."""
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = list(rows[0])
    w.writerow(keys)
    for row in rows:
        w.writerow([_fmt(row[k]) for k in keys])
    return buf.getvalue()


def _run_asp(config):
    curve = asp_vs_tau(config)
    return {"replicates": curve.rows(), "summary": curve.summary_rows()}


def _run_estimators(config):
    rows = estimator_study(config)
    return {"replicates": rows, "summary": summarize_estimates(rows)}


def _run_subnet(config):
    rows = subnet_tail_study(config)
    summary = []
    for p in config.p_grid:
        grp = [r for r in rows if r["p"] == p]
        tau = np.array([r["tau_hat"] for r in grp], dtype=float)
        fin = tau[np.isfinite(tau)]
        summary.append(
            {
                "p": p,
                "n": len(grp),
                "failed": int(np.sum(~np.isfinite(tau))),
                "non_converged": sum(not r["converged"] for r in grp),
                "boundary": sum(r["boundary"] for r in grp),
                "frac_tau_negative": float(np.mean(fin < 0)) if fin.size else math.nan,
                "median_tau": float(np.median(fin)) if fin.size else math.nan,
                "median_xi": float(np.nanmedian([r["xi_hat"] for r in grp])) if fin.size else math.nan,
            }
        )
    return {"replicates": rows, "summary": summary}


# name -> runner returning {"replicates": rows, "summary": rows}
EXPERIMENTS = {
    "asp-vs-tau": _run_asp,
    "estimators": _run_estimators,
    "subnet-tail": _run_subnet,
}
