import numpy as np
import pytest

import hignn


@pytest.fixture
def path3():
    """3-node path 0-1-2."""
    return hignn.build_graph([[0, 1], [1, 2]], 3)


@pytest.fixture
def star5():
    """Center 0 with leaves 1..4."""
    return hignn.build_graph([[0, i] for i in range(1, 5)], 5)


@pytest.fixture
def two_triangles():
    """Two disjoint triangles: nodes 0-2 (class 0) and 3-5 (class 1)."""
    edges = [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]]
    return hignn.build_graph(edges, 6), np.array([0, 0, 0, 1, 1, 1])


@pytest.fixture(scope="session")
def small_synth():
    """Separable homophilous dataset shared by the slower model tests."""
    spec = hignn.SynthSpec(
        n_nodes=300, c=3, h=0.9, avg_degree=10, feature_dim=8,
        feature_separation=4.0, seed=7,
    )
    return hignn.generate(spec)


@pytest.fixture(scope="session")
def hetero_synth():
    """Separable heterophilous dataset shared by the slower model tests."""
    spec = hignn.SynthSpec(
        n_nodes=300, c=3, h=0.1, avg_degree=10, feature_dim=8,
        feature_separation=4.0, seed=7,
    )
    return hignn.generate(spec)


def random_labeled_graph(rng, max_nodes=30, n_classes=3):
    n = int(rng.integers(2, max_nodes))
    n_edges = int(rng.integers(0, 3 * n))
    edges = rng.integers(0, n, size=(n_edges, 2))
    graph = hignn.build_graph(edges, n)
    labels = rng.integers(0, n_classes, size=n)
    return graph, labels, n_classes
