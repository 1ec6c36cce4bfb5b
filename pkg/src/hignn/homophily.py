"""Homophily metrics, neighbor-label distributions, and similarity rewiring.

The central object is the per-node neighbor-label distribution: row u is
the empirical class distribution of u's neighbors, a length-c probability
vector. Nodes whose distributions have cosine similarity above a threshold
get connected in a rewired graph, which typically has a much higher
homophily degree than the original on heterophilous inputs.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Graph, build_graph

__all__ = [
    "HomophilyReport",
    "HeteroInfoMatrix",
    "edge_homophily",
    "node_homophily",
    "homophily_report",
    "hetero_info",
    "build_hi_adjacency",
    "sigma_bar",
    "homophily_improvement",
    "ImprovementRow",
]

# Threshold slack so that delta=1.0 admits pairs whose similarity is 1 up
# to float rounding; a strict comparison would make the top threshold
# unreachable.
COSINE_TOL = 1e-9

# Row-block size for the all-pairs similarity kernel. Results are
# independent of this value (and of the worker count).
DEFAULT_BLOCK = 1024


def _worker_count(n_workers: int | None) -> int:
    if n_workers is not None:
        return max(1, int(n_workers))
    env = os.environ.get("HIGNN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


@dataclass(frozen=True)
class HomophilyReport:
    h_edge: float
    h_node: float
    n_edges_counted: int
    n_nodes_counted: int


def _check_labels(graph: Graph, labels: np.ndarray) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (graph.n_nodes,):
        raise ValueError(
            f"labels must have shape ({graph.n_nodes},), got {labels.shape}"
        )
    if labels.size and labels.min() < 0:
        raise ValueError("labels must be nonnegative class indices")
    return labels


def edge_homophily(graph: Graph, labels) -> float:
    """Fraction of (undirected) edges whose endpoints share a label.

    Returns 0.0 with a warning for an empty edge set.
    """
    labels = _check_labels(graph, labels)
    if graph.n_edges == 0:
        warnings.warn("edge_homophily over an empty edge set; returning 0.0")
        return 0.0
    same = labels[graph.edges[:, 0]] == labels[graph.edges[:, 1]]
    return float(same.mean())


def node_homophily(graph: Graph, labels) -> float:
    """Mean over nodes with degree > 0 of the same-label neighbor fraction."""
    labels = _check_labels(graph, labels)
    deg = graph.degrees
    counted = deg > 0
    if not counted.any():
        warnings.warn("node_homophily with no positive-degree nodes; returning 0.0")
        return 0.0
    same = (labels[graph.targets] == np.repeat(labels, deg)).astype(np.float64)
    per_node = np.zeros(graph.n_nodes)
    np.add.at(per_node, np.repeat(np.arange(graph.n_nodes), deg), same)
    frac = per_node[counted] / deg[counted]
    return float(frac.mean())


def homophily_report(graph: Graph, labels) -> HomophilyReport:
    labels = _check_labels(graph, labels)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        he = edge_homophily(graph, labels)
        hn = node_homophily(graph, labels)
    return HomophilyReport(
        h_edge=he,
        h_node=hn,
        n_edges_counted=graph.n_edges,
        n_nodes_counted=int((graph.degrees > 0).sum()),
    )


@dataclass(frozen=True)
class HeteroInfoMatrix:
    """N x c matrix of neighbor-label distributions.

    Every row is nonnegative and sums to 1. Degree-0 nodes get a uniform
    row and are flagged in ``isolated_mask``; they are barred from rewired
    edges.
    """

    rows: np.ndarray
    isolated_mask: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.rows.shape[0])

    @property
    def n_classes(self) -> int:
        return int(self.rows.shape[1])


def hetero_info(graph: Graph, labels, c: int) -> HeteroInfoMatrix:
    """Empirical class distribution of each node's neighbors."""
    labels = _check_labels(graph, labels)
    if labels.size and labels.max() >= c:
        raise ValueError(f"label {int(labels.max())} >= c={c}")
    n = graph.n_nodes
    counts = np.zeros((n, c), dtype=np.float64)
    if graph.n_edges:
        u, v = graph.edges[:, 0], graph.edges[:, 1]
        np.add.at(counts, (u, labels[v]), 1.0)
        np.add.at(counts, (v, labels[u]), 1.0)
    deg = graph.degrees.astype(np.float64)
    isolated = deg == 0
    rows = counts
    rows[~isolated] /= deg[~isolated, None]
    rows[isolated] = 1.0 / c
    rows.flags.writeable = False
    iso = isolated.copy()
    iso.flags.writeable = False
    return HeteroInfoMatrix(rows=rows, isolated_mask=iso)


def build_hi_adjacency(
    H: HeteroInfoMatrix,
    delta: float,
    *,
    block_size: int = DEFAULT_BLOCK,
    n_workers: int | None = None,
) -> Graph:
    """Rewired graph: edge {i, j} iff cos(row_i, row_j) >= delta - COSINE_TOL.

    Isolated-flagged rows produce no edges; a zero-norm row (guarded,
    cannot occur for valid distributions) is treated as similarity 0 to
    everything. Self-loops are never emitted. Row blocks may be scored
    concurrently; the edge set is identical for any block size and worker
    count.
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    rows = np.asarray(H.rows, dtype=np.float64)
    n = rows.shape[0]
    norms = np.linalg.norm(rows, axis=1)
    active = (~H.isolated_mask) & (norms > 0.0)
    unit = np.zeros_like(rows)
    nz = norms > 0.0
    unit[nz] = rows[nz] / norms[nz, None]
    unit[~active] = 0.0  # inactive rows match nothing
    thresh = delta - COSINE_TOL

    starts = list(range(0, n, block_size))

    def score_block(i0: int) -> np.ndarray:
        i1 = min(i0 + block_size, n)
        sims = unit[i0:i1] @ unit.T
        bi, bj = np.nonzero(sims >= thresh)
        gi = bi + i0
        keep = (bj > gi) & active[gi] & active[bj]
        return np.stack([gi[keep], bj[keep]], axis=1)

    workers = min(_worker_count(n_workers), max(1, len(starts)))
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(score_block, starts))
    else:
        parts = [score_block(i0) for i0 in starts]
    edges = (
        np.concatenate(parts, axis=0) if parts else np.zeros((0, 2), dtype=np.int64)
    )
    return build_graph(edges, n)


def sigma_bar(H: HeteroInfoMatrix, labels) -> float:
    """Average within-class spread of neighbor-label distributions.

    For every class, take the per-entry standard deviation of the member
    rows around the class mean row, then average those values over entries
    and classes. Isolated nodes are excluded; their uniform rows are a
    fallback, not observed distributions.
    """
    labels = np.asarray(labels, dtype=np.int64)
    c = H.n_classes
    per_class = []
    for k in range(c):
        members = H.rows[(labels == k) & ~H.isolated_mask]
        if members.shape[0] >= 2:
            per_class.append(members.std(axis=0))
    if not per_class:
        return 0.0
    return float(np.mean(np.stack(per_class)))


@dataclass(frozen=True)
class ImprovementRow:
    delta: float
    h_hat: float
    h_hat_minus_h: float
    sigma_bar: float
    n_edges_new: int


def homophily_improvement(
    graph: Graph,
    H: HeteroInfoMatrix,
    labels,
    deltas,
    *,
    block_size: int = DEFAULT_BLOCK,
    n_workers: int | None = None,
) -> list[ImprovementRow]:
    """Homophily of the rewired graph at each threshold, vs. the original."""
    labels = _check_labels(graph, labels)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        h = edge_homophily(graph, labels)
    sb = sigma_bar(H, labels)
    out = []
    for delta in deltas:
        new = build_hi_adjacency(H, float(delta), block_size=block_size, n_workers=n_workers)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            h_hat = edge_homophily(new, labels)
        out.append(
            ImprovementRow(
                delta=float(delta),
                h_hat=h_hat,
                h_hat_minus_h=h_hat - h,
                sigma_bar=sb,
                n_edges_new=new.n_edges,
            )
        )
    return out
