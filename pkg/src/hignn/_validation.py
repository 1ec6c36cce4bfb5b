"""Input-validation helpers shared by the estimator layer."""

from __future__ import annotations

import numpy as np

from .graph import Graph, build_graph

__all__ = ["check_features", "check_semi_labels", "as_graph", "resolve_mask"]


def check_features(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"feature matrix must be 2-D, got shape {X.shape}")
    if X.shape[0] == 0:
        raise ValueError("feature matrix has no rows")
    if not np.isfinite(X).all():
        raise ValueError("feature matrix contains non-finite values")
    return X


def check_semi_labels(y, n_nodes: int) -> np.ndarray:
    """Integer labels with -1 marking unlabeled nodes."""
    y = np.asarray(y)
    if y.shape != (n_nodes,):
        raise ValueError(f"y must have shape ({n_nodes},), got {y.shape}")
    if not np.issubdtype(y.dtype, np.integer):
        yf = np.asarray(y, dtype=np.float64)
        if not np.all(yf == np.round(yf)):
            raise ValueError("y must hold integer class indices (-1 for unlabeled)")
        y = yf.astype(np.int64)
    else:
        y = y.astype(np.int64)
    if y.min() < -1:
        raise ValueError("labels below -1 are not valid")
    if (y >= 0).sum() == 0:
        raise ValueError("y has no labeled nodes")
    return y


def as_graph(graph, n_nodes: int) -> Graph:
    """Accept a Graph or a raw edge list over ``n_nodes`` nodes."""
    if isinstance(graph, Graph):
        if graph.n_nodes != n_nodes:
            raise ValueError(
                f"graph has {graph.n_nodes} nodes but data has {n_nodes} rows"
            )
        return graph
    return build_graph(np.asarray(graph, dtype=np.int64), n_nodes)


def resolve_mask(mask, n_nodes: int) -> np.ndarray:
    """Normalize a boolean mask or index array into a sorted index array."""
    mask = np.asarray(mask)
    if mask.dtype == bool:
        if mask.shape != (n_nodes,):
            raise ValueError(f"boolean mask must have shape ({n_nodes},)")
        return np.nonzero(mask)[0].astype(np.int64)
    idx = mask.astype(np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n_nodes):
        raise ValueError(f"mask index outside [0, {n_nodes})")
    return np.sort(idx)
