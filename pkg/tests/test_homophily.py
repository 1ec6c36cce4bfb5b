import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import hignn
from hignn.homophily import COSINE_TOL, build_hi_adjacency, sigma_bar

from conftest import random_labeled_graph


def naive_rewire(H, delta):
    """Quadratic double-loop reference for the blocked similarity kernel."""
    rows, iso = H.rows, H.isolated_mask
    n = rows.shape[0]
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if iso[i] or iso[j]:
                continue
            ni, nj = np.linalg.norm(rows[i]), np.linalg.norm(rows[j])
            sim = 0.0 if ni == 0 or nj == 0 else float(rows[i] @ rows[j] / (ni * nj))
            if sim >= delta - COSINE_TOL:
                edges.add((i, j))
    return edges


def test_edge_homophily_triangle():
    g = hignn.build_graph([(0, 1), (1, 2), (0, 2)], 3)
    assert hignn.edge_homophily(g, [1, 1, 1]) == 1.0


def test_edge_homophily_single_edge_distinct():
    g = hignn.build_graph([(0, 1)], 2)
    assert hignn.edge_homophily(g, [0, 1]) == 0.0


def test_edge_homophily_empty_warns():
    g = hignn.build_graph([], 3)
    with pytest.warns(UserWarning, match="empty edge set"):
        assert hignn.edge_homophily(g, [0, 1, 2]) == 0.0


def test_node_homophily_uniform_star(star5):
    assert hignn.node_homophily(star5, [0, 0, 0, 0, 0]) == 1.0


def test_node_homophily_path():
    g = hignn.build_graph([(0, 1), (1, 2)], 3)
    # per node: 1, 1/2, 0
    assert hignn.node_homophily(g, [0, 0, 1]) == pytest.approx(0.5)


def test_node_homophily_bipartite_star(star5):
    # center and leaves disagree, so every same-label neighbor count is 0
    assert hignn.node_homophily(star5, [0, 1, 1, 1, 1]) == 0.0


def test_node_homophily_skips_isolated():
    g = hignn.build_graph([(0, 1)], 3)
    assert hignn.node_homophily(g, [0, 0, 1]) == 1.0


def test_missing_label_rejected(star5):
    with pytest.raises(ValueError):
        hignn.edge_homophily(star5, [0, 1])


def test_homophily_report(path3):
    rep = hignn.homophily_report(path3, [0, 0, 1])
    assert rep.h_edge == pytest.approx(0.5)
    assert rep.h_node == pytest.approx(0.5)
    assert rep.n_edges_counted == 2
    assert rep.n_nodes_counted == 3


def test_hetero_info_counts():
    g = hignn.build_graph([(0, 1), (0, 2), (0, 3)], 4)
    H = hignn.hetero_info(g, [1, 0, 0, 1], 3)
    assert np.allclose(H.rows[0], [2 / 3, 1 / 3, 0.0])


def test_hetero_info_one_hot():
    g = hignn.build_graph([(0, 1), (0, 2)], 3)
    H = hignn.hetero_info(g, [2, 2, 2], 4)
    assert H.rows[0].tolist() == [0.0, 0.0, 1.0, 0.0]


def test_hetero_info_isolated_uniform():
    g = hignn.build_graph([], 1)
    H = hignn.hetero_info(g, [0], 5)
    assert np.allclose(H.rows[0], 0.2)
    assert H.isolated_mask[0]


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_hetero_rows_are_distributions(seed):
    rng = np.random.default_rng(seed)
    g, labels, c = random_labeled_graph(rng)
    H = hignn.hetero_info(g, labels, c)
    assert (H.rows >= 0).all()
    assert np.abs(H.rows.sum(axis=1) - 1.0).max() < 1e-9
    # one-hot exactly when all neighbors share one class
    for u in range(g.n_nodes):
        nb = g.neighbors(u)
        if nb.size and len(set(labels[nb].tolist())) == 1:
            k = labels[nb[0]]
            assert H.rows[u, k] == 1.0


def test_rewire_identical_rows():
    H = hignn.HeteroInfoMatrix(
        rows=np.array([[0.5, 0.5], [0.5, 0.5]]), isolated_mask=np.zeros(2, bool)
    )
    assert build_hi_adjacency(H, 0.9).edge_set() == {(0, 1)}


def test_rewire_orthogonal_rows():
    H = hignn.HeteroInfoMatrix(
        rows=np.eye(2), isolated_mask=np.zeros(2, bool)
    )
    assert build_hi_adjacency(H, 0.5).n_edges == 0


def test_rewire_delta_zero_complete():
    rng = np.random.default_rng(1)
    rows = rng.random((6, 3))
    rows /= rows.sum(1, keepdims=True)
    iso = np.array([False, False, True, False, False, False])
    H = hignn.HeteroInfoMatrix(rows=rows, isolated_mask=iso)
    g = build_hi_adjacency(H, 0.0)
    active = [0, 1, 3, 4, 5]
    expect = {(i, j) for a, i in enumerate(active) for j in active[a + 1 :]}
    assert g.edge_set() == expect


def test_rewire_delta_one_includes_exact_matches():
    rows = np.array([[0.25, 0.75], [0.25, 0.75], [0.75, 0.25]])
    H = hignn.HeteroInfoMatrix(rows=rows, isolated_mask=np.zeros(3, bool))
    assert build_hi_adjacency(H, 1.0).edge_set() == {(0, 1)}


def test_rewire_delta_out_of_range():
    H = hignn.HeteroInfoMatrix(rows=np.eye(2), isolated_mask=np.zeros(2, bool))
    with pytest.raises(ValueError):
        build_hi_adjacency(H, 1.5)


def test_rewire_zero_norm_row_guarded():
    rows = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 0.0]])
    H = hignn.HeteroInfoMatrix(rows=rows, isolated_mask=np.zeros(3, bool))
    assert build_hi_adjacency(H, 0.0).edge_set() == {(1, 2)}


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_rewire_matches_naive_oracle(seed):
    rng = np.random.default_rng(seed)
    g, labels, c = random_labeled_graph(rng, max_nodes=50)
    H = hignn.hetero_info(g, labels, c)
    delta = float(rng.choice([0.0, 0.3, 0.7, 0.9, 1.0]))
    fast = build_hi_adjacency(H, delta, block_size=7)
    assert fast.edge_set() == naive_rewire(H, delta)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_rewire_monotone_in_delta(seed):
    rng = np.random.default_rng(seed)
    g, labels, c = random_labeled_graph(rng)
    H = hignn.hetero_info(g, labels, c)
    lo = build_hi_adjacency(H, 0.4).edge_set()
    hi = build_hi_adjacency(H, 0.8).edge_set()
    assert hi <= lo


def test_rewire_block_and_worker_independence():
    rng = np.random.default_rng(9)
    g, labels, c = random_labeled_graph(rng, max_nodes=80)
    H = hignn.hetero_info(g, labels, c)
    base = build_hi_adjacency(H, 0.8, block_size=1024, n_workers=1)
    for block in (1, 3, 17):
        for workers in (1, 4):
            other = build_hi_adjacency(H, 0.8, block_size=block, n_workers=workers)
            assert np.array_equal(other.edges, base.edges)


def test_rewire_permutation_equivariant():
    rng = np.random.default_rng(3)
    g, labels, c = random_labeled_graph(rng, max_nodes=25)
    H = hignn.hetero_info(g, labels, c)
    perm = rng.permutation(g.n_nodes)
    gp = hignn.graph.permute_graph(g, perm)
    Hp = hignn.hetero_info(gp, labels[np.argsort(perm)], c)
    a = build_hi_adjacency(H, 0.7)
    b = build_hi_adjacency(Hp, 0.7)
    mapped = {tuple(sorted((perm[u], perm[v]))) for u, v in a.edges}
    assert mapped == b.edge_set()


def test_sigma_bar_binomial_prediction():
    # Per-entry spread of a frequency over d draws is sqrt(p(1-p)/d).
    spec = hignn.SynthSpec(n_nodes=2000, c=5, h=0.1, avg_degree=20.0,
                           feature_dim=8, feature_separation=0.0, seed=0)
    ds = hignn.generate(spec)
    H = hignn.hetero_info(ds.graph, ds.labels, 5)
    measured = sigma_bar(H, ds.labels)
    probs = np.full(5, 0.9 / 4)
    probs[0] = 0.1
    predicted = float(np.mean(np.sqrt(probs * (1 - probs) / 20.0)))
    assert measured == pytest.approx(predicted, abs=0.01)


def test_sigma_bar_concentrates_on_complete_graph():
    n = 100
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    g = hignn.build_graph(edges, n)
    labels = np.arange(n) % 4
    H = hignn.hetero_info(g, labels, 4)
    assert sigma_bar(H, labels) < 0.02


def test_improvement_with_empty_rewired_graph():
    # distinct one-hot rows match nobody at the top threshold
    g = hignn.build_graph([(0, 1), (1, 2), (0, 2)], 3)
    H = hignn.HeteroInfoMatrix(rows=np.eye(3), isolated_mask=np.zeros(3, bool))
    rows = hignn.homophily_improvement(g, H, [0, 1, 2], [1.0])
    assert rows[0].n_edges_new == 0
    assert rows[0].h_hat == 0.0


def test_improvement_perfectly_homophilous(two_triangles):
    g, labels = two_triangles
    H = hignn.hetero_info(g, labels, 2)
    rows = hignn.homophily_improvement(g, H, labels, [0.5, 0.9, 1.0])
    for row in rows:
        assert row.h_hat == 1.0
        assert row.h_hat_minus_h == 0.0
    assert rows[0].sigma_bar == 0.0


def test_improvement_reports_sigma_and_edges():
    spec = hignn.SynthSpec(n_nodes=500, c=5, h=0.1, avg_degree=12.0,
                           feature_dim=8, feature_separation=0.0, seed=2)
    ds = hignn.generate(spec)
    H = hignn.hetero_info(ds.graph, ds.labels, 5)
    rows = hignn.homophily_improvement(ds.graph, H, ds.labels, [0.6, 0.9])
    assert rows[0].sigma_bar == rows[1].sigma_bar > 0
    assert rows[1].h_hat > rows[0].h_hat  # higher threshold, higher homophily here
    assert rows[1].h_hat_minus_h == pytest.approx(
        rows[1].h_hat - hignn.edge_homophily(ds.graph, ds.labels)
    )
