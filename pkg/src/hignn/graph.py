"""Undirected graph representation and symmetric adjacency normalization.

Graphs are stored in canonical form: a deduplicated, self-loop-free edge
list over 0-based node indices plus a CSR-style neighbor index. All
structures are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Graph",
    "GraphError",
    "build_graph",
    "strip_self_loops_and_symmetrize",
    "NormalizedAdjacency",
    "normalize_adjacency",
    "union_graph",
    "permute_graph",
]

# Graphs up to this many nodes keep a dense normalized adjacency; larger
# ones use CSR so PubMed-scale inputs stay cheap.
DENSE_CUTOFF = 512


class GraphError(ValueError):
    """Invalid graph input (bad index, malformed edge, ...)."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Graph:
    """Undirected graph: canonical edge list + CSR neighbor index.

    Attributes:
        n_nodes: number of nodes.
        edges: (E, 2) int array, each row (u, v) with u < v, sorted
            lexicographically, no duplicates, no self-loops.
        offsets: (n_nodes + 1,) CSR row pointer into ``targets``.
        targets: per-node sorted neighbor lists, concatenated.
        degrees: (n_nodes,) neighbor counts.
    """

    n_nodes: int
    edges: np.ndarray
    offsets: np.ndarray = field(repr=False)
    targets: np.ndarray = field(repr=False)
    degrees: np.ndarray = field(repr=False)

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def neighbors(self, u: int) -> np.ndarray:
        return self.targets[self.offsets[u] : self.offsets[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}


def build_graph(raw_edges, n_nodes: int) -> Graph:
    """Build a canonical Graph from an arbitrary directed/duplicated edge list.

    Self-loops are dropped, directions collapsed, duplicates removed.
    Raises GraphError for indices outside [0, n_nodes).
    """
    if n_nodes < 0:
        raise GraphError(f"n_nodes must be nonnegative, got {n_nodes}")
    e = np.asarray(raw_edges, dtype=np.int64).reshape(-1, 2)
    if e.size:
        bad = (e < 0) | (e >= n_nodes)
        if bad.any():
            u, v = e[np.nonzero(bad.any(axis=1))[0][0]]
            raise GraphError(
                f"edge ({u},{v}) references a node outside [0, {n_nodes})"
            )
        e = e[e[:, 0] != e[:, 1]]  # self-loops never stored
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0)
    else:
        e = np.zeros((0, 2), dtype=np.int64)

    both = np.concatenate([e, e[:, ::-1]], axis=0) if e.size else e
    degrees = np.bincount(both[:, 0], minlength=n_nodes) if both.size else np.zeros(
        n_nodes, dtype=np.int64
    )
    offsets = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(degrees, out=offsets[1:])
    targets = np.zeros(both.shape[0], dtype=np.int64)
    if both.size:
        order = np.lexsort((both[:, 1], both[:, 0]))
        targets = both[order, 1]
    return Graph(
        n_nodes=n_nodes,
        edges=_freeze(e),
        offsets=_freeze(offsets),
        targets=_freeze(targets),
        degrees=_freeze(degrees.astype(np.int64)),
    )


def strip_self_loops_and_symmetrize(raw_edges, n: int) -> Graph:
    """Alias of build_graph with the contract spelled out in the name."""
    return build_graph(raw_edges, n)


def union_graph(a: Graph, b: Graph) -> Graph:
    """Binary union of two edge sets over the same node set."""
    if a.n_nodes != b.n_nodes:
        raise GraphError(
            f"node count mismatch: {a.n_nodes} vs {b.n_nodes}"
        )
    edges = np.concatenate([a.edges, b.edges], axis=0)
    return build_graph(edges, a.n_nodes)


def permute_graph(graph: Graph, perm: np.ndarray) -> Graph:
    """Relabel nodes: node i becomes perm[i]."""
    perm = np.asarray(perm, dtype=np.int64)
    return build_graph(perm[graph.edges], graph.n_nodes)


class NormalizedAdjacency:
    """Symmetrically normalized adjacency with self-loops.

    Entry (i, j) is (dt_i * dt_j)**-0.5 when i == j or {i, j} is an edge,
    where dt is the degree after adding self-loops. Every row contains at
    least the diagonal entry, so isolated nodes map to 1 on the diagonal.

    Stored dense for small graphs (n <= DENSE_CUTOFF) and CSR otherwise;
    ``matmul`` runs the product against a dense matrix either way.
    """

    def __init__(self, matrix, n: int, is_dense: bool):
        self.matrix = matrix
        self.n = n
        self.is_dense = is_dense

    @classmethod
    def from_graph(cls, graph: Graph, dense_cutoff: int = DENSE_CUTOFF) -> "NormalizedAdjacency":
        n = graph.n_nodes
        dt = graph.degrees.astype(np.float64) + 1.0
        inv_sqrt = 1.0 / np.sqrt(dt)
        rows = np.concatenate([graph.edges[:, 0], graph.edges[:, 1], np.arange(n)])
        cols = np.concatenate([graph.edges[:, 1], graph.edges[:, 0], np.arange(n)])
        vals = inv_sqrt[rows] * inv_sqrt[cols]
        mat = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
        # Dense for small graphs and for dense rewired graphs (low
        # thresholds), where CSR products would be slower than BLAS.
        density = len(rows) / max(1, n * n)
        if n <= dense_cutoff or density >= 0.25:
            return cls(mat.toarray(), n, True)
        return cls(mat, n, False)

    @classmethod
    def identity(cls, n: int, dense_cutoff: int = DENSE_CUTOFF) -> "NormalizedAdjacency":
        """Adjacency of the empty graph: self-loops only."""
        if n <= dense_cutoff:
            return cls(np.eye(n), n, True)
        return cls(sp.identity(n, format="csr"), n, False)

    def matmul(self, z: np.ndarray) -> np.ndarray:
        """A_hat @ z for dense z."""
        out = self.matrix @ z
        return np.asarray(out)

    def high_pass_matmul(self, z: np.ndarray) -> np.ndarray:
        """(I - A_hat) @ z for dense z."""
        return z - self.matmul(z)

    def toarray(self) -> np.ndarray:
        if self.is_dense:
            return np.array(self.matrix)
        return self.matrix.toarray()


def normalize_adjacency(graph: Graph, dense_cutoff: int = DENSE_CUTOFF) -> NormalizedAdjacency:
    """Normalized adjacency with added self-loops for ``graph``."""
    return NormalizedAdjacency.from_graph(graph, dense_cutoff=dense_cutoff)
