"""Simple undirected graphs in compressed adjacency (CSR) form."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Graph"]


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on nodes ``0..n-1``.

    ``indices[indptr[i]:indptr[i+1]]`` are the sorted neighbours of ``i``.
    Build instances with :meth:`from_edges`, which symmetrises, drops
    self-loops and removes duplicate edges.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        u = np.minimum(e[:, 0], e[:, 1])
        v = np.maximum(e[:, 0], e[:, 1])
        key = np.unique(u * n + v)
        u, v = key // n, key % n
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(int(n), indptr, dst)

    @property
    def m(self) -> int:
        return int(self.indices.size // 2)

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges ``u < v`` in ascending order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degree())
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def adjacency(self):
        from scipy.sparse import csr_matrix

        data = np.ones(self.indices.size, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def subgraph(self, nodes) -> "Graph":
        """Induced subgraph on ``nodes`` (sorted), relabelled ``0..len(nodes)-1``."""
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        relabel = np.full(self.n, -1, dtype=np.int64)
        relabel[nodes] = np.arange(nodes.size)
        e = self.edges()
        e = relabel[e]
        e = e[(e[:, 0] >= 0) & (e[:, 1] >= 0)]
        return Graph.from_edges(int(nodes.size), e)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.n, self.indices.tobytes()))

    def to_edge_list(self) -> str:
        """SNAP-style text: one ``"u v"`` line per edge, ascending."""
        return "".join(f"{u} {v}\n" for u, v in self.edges().tolist())
