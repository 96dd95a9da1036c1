import numpy as np
import pytest

from neuromark.graph import (
    BrainGraph,
    build_graph,
    load_graph,
    pearson_adjacency,
    save_graph,
)

from conftest import make_segment


def brute_force_pearson(F):
    """Direct double-loop evaluation of the correlation formula."""
    n, d = F.shape
    out = np.eye(n)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            xi, xj = F[i], F[j]
            num = np.sum((xi - xi.mean()) * (xj - xj.mean()))
            den = np.sqrt(np.sum((xi - xi.mean()) ** 2)
                          * np.sum((xj - xj.mean()) ** 2))
            out[i, j] = num / den if den > 0 else 0.0
    return out


class TestPearsonAdjacency:
    def test_identical_rows(self):
        F = np.vstack([np.arange(5.0)] * 3)
        adj = pearson_adjacency(F)
        np.testing.assert_allclose(adj, np.ones((3, 3)), atol=1e-12)

    def test_anticorrelated_rows(self):
        adj = pearson_adjacency(np.array([[1.0, 2.0, 3.0], [3.0, 2.0, 1.0]]))
        assert adj[0, 1] == pytest.approx(-1.0, abs=1e-12)

    def test_matches_bruteforce_on_random_fixtures(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            F = rng.standard_normal((19, 40))
            adj = pearson_adjacency(F)
            np.testing.assert_allclose(adj, brute_force_pearson(F), atol=1e-12)
            np.testing.assert_allclose(adj, adj.T, atol=1e-12)
            np.testing.assert_array_equal(np.diag(adj), np.ones(19))

    def test_zero_variance_row(self):
        F = np.vstack([np.full(6, 2.0), np.arange(6.0), np.arange(6.0) ** 2])
        adj = pearson_adjacency(F)
        assert adj[0, 1] == 0.0 and adj[1, 0] == 0.0
        assert adj[0, 0] == 1.0

    def test_too_few_features(self):
        with pytest.raises(ValueError):
            pearson_adjacency(np.ones((19, 1)))

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(1)
        F = rng.standard_normal((19, 40))
        perm = rng.permutation(19)
        adj = pearson_adjacency(F)
        adj_p = pearson_adjacency(F[perm])
        np.testing.assert_allclose(adj_p, adj[np.ix_(perm, perm)], atol=1e-12)

    def test_affine_invariance_per_row(self):
        rng = np.random.default_rng(2)
        F = rng.standard_normal((5, 30))
        scales = rng.uniform(0.5, 3.0, size=5)[:, None]
        shifts = rng.uniform(-2, 2, size=5)[:, None]
        np.testing.assert_allclose(
            pearson_adjacency(F * scales + shifts), pearson_adjacency(F),
            atol=1e-10,
        )


class TestBuildGraph:
    def test_identical_channels_all_ones(self):
        rng = np.random.default_rng(3)
        row = rng.standard_normal(400)
        seg = make_segment("same", data=np.vstack([row] * 19), n_samples=400)
        g = build_graph(seg)
        np.testing.assert_allclose(g.adjacency, np.ones((19, 19)), atol=1e-9)

    def test_abs_transform_nonnegative(self):
        seg = make_segment("r", n_samples=400, seed=4)
        g = build_graph(seg, edge_transform="abs")
        assert g.adjacency.min() >= 0.0
        assert g.n_nodes == 19

    def test_raw_transform_in_range(self):
        seg = make_segment("r2", n_samples=400, seed=5)
        g = build_graph(seg, edge_transform="raw")
        assert g.adjacency.min() >= -1.0 and g.adjacency.max() <= 1.0

    def test_save_load_round_trip(self, tmp_path):
        seg = make_segment("rt", n_samples=400, seed=6, label=1)
        g = build_graph(seg)
        path = save_graph(g, tmp_path / "graphs")
        back = load_graph(path)
        assert back.label == 1
        assert back.edge_transform == "abs"
        np.testing.assert_allclose(back.adjacency, g.adjacency, rtol=1e-11)
        np.testing.assert_allclose(back.node_features, g.node_features,
                                   rtol=1e-11)
