"""Graph measurements and node subsampling.

The subsampled degree law is available two ways: :func:`subsampled_pgf`
composes the parent PGF with binomial thinning and truncates at zero;
:func:`subsampled_pmf` sums the thinning directly.  They agree term by
term, which the test-suite uses as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.special import gammaln

from . import distributions as dd
from .graph import Graph

__all__ = [
    "degrees",
    "largest_connected_component",
    "average_shortest_path",
    "SubsampleReport",
    "node_subsample",
    "subsampled_pgf",
    "subsampled_pmf",
]

SUBSAMPLE_TOL = 1e-12
_BFS_BLOCK = 512


def degrees(graph: Graph) -> np.ndarray:
    """Degree of every node; raises if some node is isolated."""
    deg = graph.degree()
    if np.any(deg == 0):
        raise ValueError(f"{int(np.sum(deg == 0))} node(s) have degree 0")
    return deg


def largest_connected_component(graph: Graph):
    """Induced subgraph on the largest component and the kept original ids.

    Equal-sized components are ranked by their smallest node id.  The
    returned ``nodes`` array maps new id ``i`` to original id ``nodes[i]``.
    """
    if graph.n == 0:
        return graph, np.zeros(0, dtype=np.int64)
    ncomp, labels = connected_components(graph.adjacency(), directed=False)
    sizes = np.bincount(labels, minlength=ncomp)
    # labels are assigned in order of first appearance, so ties go to the lower label
    best = int(np.argmax(sizes))
    nodes = np.flatnonzero(labels == best)
    return graph.subgraph(nodes), nodes


def _distance_sums(graph: Graph, sources: np.ndarray):
    """Sum of BFS distances from each source and the number of nodes reached."""
    adj = graph.adjacency().astype(np.float32)
    n = graph.n
    total = np.zeros(sources.size)
    reached = np.ones(sources.size, dtype=np.int64)
    visited = np.zeros((n, sources.size), dtype=bool)
    visited[sources, np.arange(sources.size)] = True
    frontier = visited.astype(np.float32)
    depth = 0
    while True:
        depth += 1
        nxt = (adj @ frontier) > 0
        nxt &= ~visited
        counts = nxt.sum(axis=0)
        if not counts.any():
            break
        total += depth * counts
        reached += counts
        visited |= nxt
        frontier = nxt.astype(np.float32)
    return total, reached


def average_shortest_path(graph: Graph) -> float:
    """Mean hop distance over all unordered node pairs of a connected graph.

    Runs a breadth-first search from every node; sources are processed in
    blocks so the frontier of a whole block advances with one sparse
    matrix product.
    """
    n = graph.n
    if n < 2:
        raise ValueError("average shortest path needs at least two nodes")
    grand = 0.0
    for start in range(0, n, _BFS_BLOCK):
        sources = np.arange(start, min(n, start + _BFS_BLOCK))
        total, reached = _distance_sums(graph, sources)
        if np.any(reached < n):
            raise ValueError("graph is disconnected; take the largest component first")
        grand += float(total.sum())
    return grand / (n * (n - 1))


@dataclass
class SubsampleReport:
    subgraph: Graph
    kept_nodes: int
    orphans_removed: int
    p: float
    nodes: np.ndarray

    def summary(self):
        return {
            "p": self.p,
            "kept_nodes": self.kept_nodes,
            "orphans_removed": self.orphans_removed,
            "nodes": self.subgraph.n,
            "edges": self.subgraph.m,
        }


def node_subsample(graph: Graph, p: float, rng: np.random.Generator) -> SubsampleReport:
    """Keep each node independently with probability ``p`` and induce.

    Nodes left without neighbours are removed.  ``kept_nodes`` counts nodes
    kept before that clean-up; ``nodes`` maps the final ids to the original.
    """
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p!r}")
    keep = rng.random(graph.n) < p
    kept = np.flatnonzero(keep)
    sub = graph.subgraph(kept)
    alive = sub.degree() > 0
    final = sub.subgraph(np.flatnonzero(alive))
    return SubsampleReport(final, int(kept.size), int((~alive).sum()), float(p), kept[alive])


def _check_p(p):
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p!r}")


def subsampled_pgf(dist: dd.DegreeDistribution, p: float, s):
    """PGF of a surviving node's degree after keeping nodes with probability ``p``.

    ``[G(1 - p(1 - s)) - G(1 - p)] / [1 - G(1 - p)]`` with ``G`` the parent
    PGF: binomial thinning, then conditioning on degree >= 1.  ``s`` is
    normally in ``[0, 1]``; any real or complex ``s`` with
    ``|1 - p(1 - s)| <= 1`` is accepted.
    """
    _check_p(p)
    is_complex = isinstance(s, (complex, np.complexfloating))
    arg = 1.0 - p * (1.0 - (complex(s) if is_complex else float(s)))
    if not abs(arg) <= 1.0:
        raise ValueError(f"s={s!r} maps outside the unit disk under thinning with p={p!r}")
    g0 = dd.pgf(dist, 1.0 - p)
    if g0 >= 1.0:
        raise ZeroDivisionError("no node survives thinning (G(1 - p) = 1)")
    return (dd.pgf(dist, arg) - g0) / (1.0 - g0)


def _log_binom_pmf(j, k, p):
    return gammaln(j + 1) - gammaln(k + 1) - gammaln(j - k + 1) + k * math.log(p) + (j - k) * math.log1p(-p)


def subsampled_pmf(dist: dd.DegreeDistribution, p: float, k):
    """Probability that a surviving node has degree ``k`` after thinning.

    ``sum_{j>=k} pmf(j) C(j,k) p^k (1-p)^(j-k) / (1 - G(1-p))``, summed
    until the binomial factor certifies a remainder below 1e-12.  ``k`` may
    be a scalar or an array of positive integers.
    """
    _check_p(p)
    karr = np.atleast_1d(np.asarray(k))
    if np.any(karr < 1):
        raise ValueError("k must be >= 1")
    if p == 1.0:
        out = np.asarray(dd.pmf(dist, karr), dtype=float)
        return float(out[0]) if np.ndim(k) == 0 else out
    denom = 1.0 - dd.pgf(dist, 1.0 - p)
    out = np.array([_thinned_mass(dist, p, int(kk)) for kk in karr.ravel()]) / denom
    return float(out[0]) if np.ndim(k) == 0 else out.reshape(karr.shape)


def _thinned_mass(dist, p, k):
    # b_j = C(j,k) p^k (1-p)^(j-k) decreases in j once j + 1 > k / p, with
    # ratio r_j = (j+1)(1-p)/(j+1-k) < 1; the tail is then <= b_{J+1}/(1 - r_{J+1})
    q = 1.0 - p
    j_min = max(k, int(math.ceil(k / p)))
    total = 0.0
    start = k
    stop = max(j_min + 64, 2 * j_min)
    while True:
        j = np.arange(start, stop + 1, dtype=float)
        total += float(np.sum(dist._pmf(j) * np.exp(_log_binom_pmf(j, k, p))))
        nxt = stop + 1
        r = (nxt + 1) * q / (nxt + 1 - k)
        bound = math.exp(_log_binom_pmf(nxt, k, p)) / (1.0 - r)
        if bound <= SUBSAMPLE_TOL * max(total, 1e-300) or bound <= 1e-300:
            return total
        start, stop = nxt, 2 * stop
