"""Synthetic class-balanced datasets with controllable homophily.

Edges come from a stochastic block model calibrated so the expected edge
homophily equals the requested h and the expected degree equals
avg_degree. With m = n/c nodes per class, expected intra-class edges are
h * n * d / 2 and inter-class edges (1-h) * n * d / 2, giving

    p_in  = h * d / (m - 1)
    p_out = (1 - h) * d / ((c - 1) * m)

equivalently h = p_in / (p_in + (c-1) * p_out * m / (m - 1)). Features are
spherical Gaussian clusters: class means sit pairwise feature_separation
apart, entries get unit noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, build_graph
from .homophily import HeteroInfoMatrix, hetero_info, sigma_bar
from .io import Dataset, Split

__all__ = ["SynthSpec", "SynthesisError", "generate", "effective_sigma"]


class SynthesisError(ValueError):
    """Infeasible generator parameters."""


@dataclass(frozen=True)
class SynthSpec:
    n_nodes: int = 2000
    c: int = 5
    h: float = 0.5
    avg_degree: float = 20.0
    feature_dim: int = 32
    feature_separation: float = 4.0
    seed: int = 0

    def __post_init__(self):
        if self.c < 2:
            raise SynthesisError(f"c must be at least 2, got {self.c}")
        if self.n_nodes < self.c or self.n_nodes % self.c != 0:
            raise SynthesisError(
                f"n_nodes must be a positive multiple of c for balanced classes, "
                f"got n_nodes={self.n_nodes}, c={self.c}"
            )
        if not 0.0 <= self.h <= 1.0:
            raise SynthesisError(f"h must lie in [0, 1], got {self.h}")
        if not self.avg_degree > 0.0:
            raise SynthesisError(f"avg_degree must be positive, got {self.avg_degree}")
        if self.feature_dim < self.c:
            raise SynthesisError(
                f"feature_dim must be at least c, got {self.feature_dim} < {self.c}"
            )
        if self.feature_separation < 0.0:
            raise SynthesisError(
                f"feature_separation must be nonnegative, got {self.feature_separation}"
            )


def _block_probabilities(spec: SynthSpec) -> tuple[float, float]:
    m = spec.n_nodes // spec.c
    if m < 2:
        raise SynthesisError("need at least 2 nodes per class")
    p_in = spec.h * spec.avg_degree / (m - 1)
    p_out = (1.0 - spec.h) * spec.avg_degree / ((spec.c - 1) * m)
    for name, p in (("p_in", p_in), ("p_out", p_out)):
        if not 0.0 <= p <= 1.0:
            raise SynthesisError(
                f"(h={spec.h}, avg_degree={spec.avg_degree}, n={spec.n_nodes}, "
                f"c={spec.c}) needs {name}={p:.4f} outside [0, 1]"
            )
    return p_in, p_out


def generate(spec: SynthSpec) -> Dataset:
    """Deterministic dataset for ``spec``: graph, features, labels, one
    60/20/20 split."""
    p_in, p_out = _block_probabilities(spec)
    n, c = spec.n_nodes, spec.c
    m = n // c
    rng = np.random.default_rng(spec.seed)
    labels = np.repeat(np.arange(c, dtype=np.int64), m)

    rows, cols = [], []
    for i in range(n - 1):
        p = np.where(labels[i + 1 :] == labels[i], p_in, p_out)
        hits = np.nonzero(rng.random(n - 1 - i) < p)[0]
        if hits.size:
            rows.append(np.full(hits.size, i, dtype=np.int64))
            cols.append(hits + i + 1)
    if rows:
        edges = np.stack(
            [np.concatenate(rows), np.concatenate(cols)], axis=1
        )
    else:
        edges = np.zeros((0, 2), dtype=np.int64)
    graph = build_graph(edges, n)

    # Class mean k = (sep / sqrt(2)) * e_k, so means sit exactly
    # feature_separation apart; unit Gaussian noise on every entry.
    means = np.zeros((c, spec.feature_dim))
    scale = spec.feature_separation / np.sqrt(2.0)
    means[np.arange(c), np.arange(c)] = scale
    features = means[labels] + rng.normal(0.0, 1.0, size=(n, spec.feature_dim))

    perm = rng.permutation(n)
    n_train = int(0.6 * n)
    n_val = int(0.2 * n)
    split = Split(
        train=np.sort(perm[:n_train]),
        val=np.sort(perm[n_train : n_train + n_val]),
        test=np.sort(perm[n_train + n_val :]),
    )
    features.flags.writeable = False
    labels.flags.writeable = False
    return Dataset(graph=graph, features=features, labels=labels, n_classes=c, splits=[split])


def effective_sigma(graph: Graph, labels, c: int) -> float:
    """Within-class spread of measured neighbor distributions.

    This is the plug-in noise level for the closed-form homophily
    prediction: finite degrees make each node's observed neighbor
    distribution a noisy sample of its class prototype, with per-entry
    spread roughly sqrt(p * (1 - p) / degree).
    """
    H: HeteroInfoMatrix = hetero_info(graph, labels, c)
    return sigma_bar(H, labels)
