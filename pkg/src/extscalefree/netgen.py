"""Random simple graphs with a prescribed degree law.

Pipeline: :func:`sample_degree_sequence` draws a graphical degree sequence
from a :class:`~extscalefree.distributions.DegreeDistribution`, then
:func:`configuration_model` wires it by uniform stub matching and erases
self-loops and multi-edges.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import distributions as dd
from .graph import Graph

__all__ = [
    "GenerationError",
    "DegreeSequenceReport",
    "WiringReport",
    "erdos_gallai_check",
    "sample_degree_sequence",
    "configuration_model",
    "generate",
]

MAX_RETRIES = 100
MAX_REDRAWS = 10_000


class GenerationError(RuntimeError):
    """The degree law kept producing non-graphical sequences."""


def erdos_gallai_check(seq) -> bool:
    """True iff ``seq`` is the degree sequence of some simple graph.

    Checks the even sum and, on the non-increasing sort ``d``, that for all
    ``k``::

        sum_{i<=k} d_i <= k(k-1) + sum_{i>k} min(d_i, k)

    in ``O(n log n)``.
    """
    d = np.sort(np.asarray(seq, dtype=np.int64).ravel())[::-1]
    if d.size == 0:
        return True
    if d[-1] < 0:
        return False
    if int(d.sum()) % 2:
        return False
    n = d.size
    k = np.arange(1, n + 1, dtype=np.int64)
    lhs = np.cumsum(d)
    # entries >= k occupy positions 0..n_ge-1 of the descending sort
    n_ge = n - np.searchsorted(d[::-1], k, side="left")
    suffix = np.concatenate([np.cumsum(d[::-1])[::-1], [0]])  # suffix[j] = sum(d[j:])
    # the tail d[k:] holds (cut - k) entries >= k, each contributing k
    cut = np.maximum(n_ge, k)
    tail_big = (cut - k) * k
    tail_small = suffix[cut]
    rhs = k * (k - 1) + tail_big + tail_small
    return bool(np.all(lhs <= rhs))


@dataclass
class DegreeSequenceReport:
    degrees: np.ndarray
    retries: int
    redraws: int


def sample_degree_sequence(
    dist: dd.DegreeDistribution, n: int, rng: np.random.Generator, max_retries: int = MAX_RETRIES
) -> DegreeSequenceReport:
    """Draw a graphical degree sequence of ``n`` i.i.d. degrees from ``dist``.

    Draws above ``n - 1`` are redrawn; an odd total is fixed by redrawing
    the last entry.  Non-graphical sequences are discarded and the whole
    sequence redrawn, at most ``max_retries`` times.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    redraws = 0
    for attempt in range(max_retries + 1):
        d = dd.sample(dist, rng, n)
        too_big = d > n - 1
        while np.any(too_big):
            redraws += int(too_big.sum())
            if redraws > MAX_REDRAWS * (attempt + 1):
                raise GenerationError(f"degree law rarely produces degrees <= {n - 1}")
            d[too_big] = dd.sample(dist, rng, int(too_big.sum()))
            too_big = d > n - 1
        tries = 0
        while d.sum() % 2:
            tries += 1
            if tries > MAX_REDRAWS:
                raise GenerationError("could not repair the parity of the degree sum")
            x = dd.sample(dist, rng, 1)[0]
            if x <= n - 1:
                d[-1] = x
        if erdos_gallai_check(d):
            return DegreeSequenceReport(d, attempt, redraws)
    raise GenerationError(f"no graphical degree sequence after {max_retries} retries")


@dataclass
class WiringReport:
    graph: Graph
    self_loops: int
    multi_edges: int

    @property
    def erased_edges(self):
        return self.self_loops + self.multi_edges


def configuration_model(seq, rng: np.random.Generator) -> WiringReport:
    """Erased configuration model: pair shuffled stubs, drop loops and repeats."""
    d = np.asarray(seq, dtype=np.int64).ravel()
    if not erdos_gallai_check(d):
        raise ValueError("degree sequence is not graphical")
    n = d.size
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    loops = pairs[:, 0] == pairs[:, 1]
    pairs = pairs[~loops]
    u = np.minimum(pairs[:, 0], pairs[:, 1])
    v = np.maximum(pairs[:, 0], pairs[:, 1])
    n_unique = np.unique(u * n + v).size
    graph = Graph.from_edges(n, np.column_stack([u, v]))
    return WiringReport(graph, int(loops.sum()), int(pairs.shape[0] - n_unique))


@dataclass
class GenerationReport:
    graph: Graph
    degrees: np.ndarray
    retries: int
    redraws: int
    self_loops: int
    multi_edges: int

    def summary(self):
        return {
            "nodes": self.graph.n,
            "edges": self.graph.m,
            "retries": self.retries,
            "redraws": self.redraws,
            "self_loops_erased": self.self_loops,
            "multi_edges_erased": self.multi_edges,
        }


def generate(dist: dd.DegreeDistribution, n: int, rng: np.random.Generator) -> GenerationReport:
    """Degree sequence plus wiring in one call."""
    seq = sample_degree_sequence(dist, n, rng)
    wired = configuration_model(seq.degrees, rng)
    return GenerationReport(
        wired.graph, seq.degrees, seq.retries, seq.redraws, wired.self_loops, wired.multi_edges
    )
