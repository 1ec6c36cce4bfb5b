import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import hignn
from hignn.graph import NormalizedAdjacency


def test_self_loops_stripped():
    g = hignn.strip_self_loops_and_symmetrize([(0, 0), (0, 1)], 2)
    assert g.edge_set() == {(0, 1)}


def test_duplicates_and_directions_collapse():
    g = hignn.strip_self_loops_and_symmetrize([(1, 0), (0, 1), (0, 1)], 2)
    assert g.edge_set() == {(0, 1)}
    assert g.n_edges == 1


def test_empty_graph():
    g = hignn.strip_self_loops_and_symmetrize([], 4)
    assert g.n_nodes == 4
    assert g.n_edges == 0
    assert g.degrees.tolist() == [0, 0, 0, 0]


def test_out_of_range_rejected():
    with pytest.raises(hignn.GraphError, match=r"\(5,1\)"):
        hignn.build_graph([(5, 1)], 3)


def test_path_degrees(path3):
    assert path3.degrees.tolist() == [1, 2, 1]
    assert path3.neighbors(1).tolist() == [0, 2]


edge_lists = st.integers(2, 25).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=60),
    )
)


@given(edge_lists)
@settings(max_examples=60, deadline=None)
def test_canonical_invariants(case):
    n, raw = case
    g = hignn.build_graph(raw, n)
    # symmetry of the neighbor index
    for u, v in g.edges:
        assert v in g.neighbors(u) and u in g.neighbors(v)
    assert (g.edges[:, 0] < g.edges[:, 1]).all()
    assert int(g.degrees.sum()) == 2 * g.n_edges
    # neighbor lists sorted and duplicate-free
    for u in range(n):
        nb = g.neighbors(u)
        assert (np.diff(nb) > 0).all() if nb.size > 1 else True


@given(edge_lists, st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_degree_multiset_invariant_under_relabeling(case, seed):
    n, raw = case
    g = hignn.build_graph(raw, n)
    perm = np.random.default_rng(seed).permutation(n)
    gp = hignn.graph.permute_graph(g, perm)
    assert sorted(g.degrees.tolist()) == sorted(gp.degrees.tolist())
    assert gp.degrees[perm[0]] == g.degrees[0]


def test_normalize_isolated_node():
    g = hignn.build_graph([], 1)
    assert hignn.normalize_adjacency(g).toarray().tolist() == [[1.0]]


def test_normalize_single_edge():
    g = hignn.build_graph([(0, 1)], 2)
    A = hignn.normalize_adjacency(g).toarray()
    assert np.allclose(A, 0.5)


def test_normalize_path_values(path3):
    A = hignn.normalize_adjacency(path3).toarray()
    assert np.allclose(np.diag(A), [0.5, 1.0 / 3.0, 0.5])
    assert A[0, 1] == pytest.approx(1.0 / np.sqrt(6.0), abs=1e-15)
    assert A[0, 2] == 0.0
    assert np.allclose(A, A.T)


@given(edge_lists)
@settings(max_examples=40, deadline=None)
def test_normalization_invariants(case):
    # Row sums of the symmetric normalization can exceed 1 on hub nodes
    # (star center: 1/3 + 2/sqrt(6) > 1), so the sharp facts are positivity,
    # the sqrt-degree eigenvector at eigenvalue 1, and the unit spectral
    # bound.
    n, raw = case
    g = hignn.build_graph(raw, n)
    A = hignn.normalize_adjacency(g).toarray()
    assert (A @ np.ones(n) > 0).all()
    root_deg = np.sqrt(g.degrees + 1.0)
    assert np.allclose(A @ root_deg, root_deg, atol=1e-12)
    eigs = np.linalg.eigvalsh(A)
    assert eigs.max() <= 1.0 + 1e-9 and eigs.min() >= -1.0 - 1e-9
    assert np.allclose(np.diag(A), 1.0 / (g.degrees + 1.0))


def test_dense_and_sparse_paths_agree():
    rng = np.random.default_rng(0)
    g = hignn.build_graph(rng.integers(0, 40, (120, 2)), 40)
    dense = NormalizedAdjacency.from_graph(g, dense_cutoff=512)
    sparse = NormalizedAdjacency.from_graph(g, dense_cutoff=1)
    assert dense.is_dense and not sparse.is_dense
    z = rng.normal(size=(40, 7))
    assert np.allclose(dense.matmul(z), sparse.matmul(z), atol=1e-14)
    assert np.allclose(dense.high_pass_matmul(z), sparse.high_pass_matmul(z), atol=1e-14)


def test_identity_adjacency():
    for cutoff in (512, 1):
        eye = NormalizedAdjacency.identity(5, dense_cutoff=cutoff)
        z = np.arange(15.0).reshape(5, 3)
        assert np.array_equal(eye.matmul(z), z)
        assert np.allclose(eye.high_pass_matmul(z), 0.0)


def test_union_graph():
    a = hignn.build_graph([(0, 1)], 3)
    b = hignn.build_graph([(1, 2), (0, 1)], 3)
    u = hignn.union_graph(a, b)
    assert u.edge_set() == {(0, 1), (1, 2)}
    # idempotent on identical inputs
    assert hignn.union_graph(a, a).edge_set() == a.edge_set()
    with pytest.raises(hignn.GraphError):
        hignn.union_graph(a, hignn.build_graph([], 4))


def test_graph_arrays_immutable(path3):
    with pytest.raises(ValueError):
        path3.edges[0, 0] = 5
    with pytest.raises(ValueError):
        path3.degrees[0] = 9
