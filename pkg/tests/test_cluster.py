import json

import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from temario.cluster import (
    assign,
    dispersion,
    kmeans,
    load_cluster_model,
    plot_filter,
    representatives,
    save_cluster_model,
)

from conftest import two_blob_vectors
from oracles import mean_member_distance


def square_points():
    """Four well-separated tight pairs at the corners of a square."""
    corners = np.array([[0, 0], [10, 0], [0, 10], [10, 10]], dtype=float)
    pts = np.vstack([corners + [0.1, 0], corners - [0.1, 0]])
    truth = np.tile(np.arange(4), 2)
    return pts, truth


class TestKmeans:
    def test_recovers_blobs(self):
        X, truth = two_blob_vectors(n_per=60, dim=5, seed=3)
        model = kmeans(X, 2, seed=1)
        got = [model.assignments[i] for i in range(len(X))]
        assert adjusted_rand_score(truth, got) == 1.0

    def test_recovers_square_corners(self):
        pts, truth = square_points()
        model = kmeans(pts, 4, seed=0)
        got = [model.assignments[i] for i in range(len(pts))]
        assert adjusted_rand_score(truth, got) == 1.0
        assert sorted(model.sizes) == [2, 2, 2, 2]

    def test_k_one_centroid_is_mean(self):
        X, _ = two_blob_vectors(n_per=20, dim=4, seed=5)
        model = kmeans(X, 1, seed=0)
        np.testing.assert_allclose(model.centroids[0], X.mean(axis=0), atol=1e-12)
        assert model.sizes == [len(X)]

    def test_k_equals_points(self):
        pts = np.array([[0.0], [5.0], [9.0]])
        model = kmeans(pts, 3, seed=2)
        assert sorted(model.sizes) == [1, 1, 1]
        assert all(model.distances[i] == 0.0 for i in range(3))
        np.testing.assert_allclose(np.sort(model.centroids.ravel()), [0.0, 5.0, 9.0])

    def test_identical_points_k_one(self):
        pts = np.zeros((7, 3)) + 2.5
        model = kmeans(pts, 1, seed=0)
        np.testing.assert_allclose(model.centroids[0], 2.5)
        assert all(model.distances[i] == 0.0 for i in range(7))

    def test_centroid_is_member_mean(self):
        X, _ = two_blob_vectors(n_per=40, dim=6, seed=9)
        model = kmeans(X, 3, seed=4)
        for c in range(3):
            members = model.members(c)
            assert members, "no cluster may end empty"
            np.testing.assert_allclose(model.centroids[c], X[members].mean(axis=0), atol=1e-9)

    def test_objective_monotone_nonincreasing(self):
        gen = np.random.default_rng(0)
        for trial in range(20):
            X = gen.normal(size=(gen.integers(20, 60), gen.integers(2, 6)))
            model = kmeans(X, int(gen.integers(2, 6)), seed=trial)
            hist = model.objective_history
            assert all(b <= a + 1e-9 for a, b in zip(hist, hist[1:]))

    def test_deterministic(self):
        X, _ = two_blob_vectors(n_per=30, dim=4, seed=2)
        m1 = kmeans(X, 3, seed=7)
        m2 = kmeans(X, 3, seed=7)
        assert np.array_equal(m1.centroids, m2.centroids)
        assert m1.assignments == m2.assignments

    def test_permutation_invariant_via_ids(self):
        X, _ = two_blob_vectors(n_per=25, dim=4, seed=8)
        ids = [f"doc{i:03d}" for i in range(len(X))]
        perm = np.random.default_rng(1).permutation(len(X))
        m1 = kmeans(X, 2, seed=5, ids=ids)
        m2 = kmeans(X[perm], 2, seed=5, ids=[ids[i] for i in perm])
        assert np.array_equal(m1.centroids, m2.centroids)
        assert m1.assignments == m2.assignments
        assert m1.distances == m2.distances

    def test_stored_distances_match_assignments(self):
        X, _ = two_blob_vectors(n_per=30, dim=5, seed=11)
        model = kmeans(X, 3, seed=3)
        for i in range(len(X)):
            c = model.assignments[i]
            d = np.linalg.norm(X[i] - model.centroids[c])
            assert model.distances[i] == pytest.approx(d, abs=1e-12)
            got_c, got_d = assign(model, X[i])
            assert got_d >= d - 1e-12  # own centroid is nearest or tied

    def test_validation(self):
        X = np.zeros((4, 2))
        with pytest.raises(ValueError):
            kmeans(X, 0)
        with pytest.raises(ValueError):
            kmeans(X, 5)
        with pytest.raises(ValueError):
            kmeans(np.array([1.0, 2.0]), 1)
        with pytest.raises(ValueError):
            kmeans(np.array([[np.nan, 0.0]]), 1)
        with pytest.raises(ValueError):
            kmeans(X, 2, ids=["a"])


class TestDispersion:
    def test_hand_value(self):
        pts = np.array([[0.0, 0.0], [2.0, 0.0], [10.0, 0.0], [12.0, 0.0]])
        model = kmeans(pts, 2, seed=0)
        c_left = model.assignments[0]
        assert dispersion(model, c_left) == pytest.approx(1.0)

    def test_matches_oracle(self):
        X, _ = two_blob_vectors(n_per=35, dim=4, seed=6)
        model = kmeans(X, 2, seed=2)
        asg = [model.assignments[i] for i in range(len(X))]
        for c in range(2):
            expected = mean_member_distance(X, asg, model.centroids[c], c)
            assert dispersion(model, c) == pytest.approx(expected, abs=1e-9)

    def test_singleton_zero(self):
        pts = np.array([[0.0], [100.0], [100.2]])
        model = kmeans(pts, 2, seed=0)
        c = model.assignments[0]
        assert dispersion(model, c) == 0.0


class TestRepresentatives:
    def test_ordering_distance_then_id(self):
        pts = np.array([[0.0], [1.0], [-1.0], [3.0]])
        model = kmeans(pts, 1, seed=0, ids=["d", "b", "c", "a"])
        # centroid 0.75; distances: d=0.75 b=0.25 c=1.75 a=2.25
        assert representatives(model, 0, n=3) == ["b", "d", "c"]

    def test_tie_breaks_by_id(self):
        pts = np.array([[1.0], [-1.0], [0.0]])
        model = kmeans(pts, 1, seed=0, ids=["z", "a", "m"])
        assert representatives(model, 0, n=2) == ["m", "a"]

    def test_n_larger_than_cluster(self):
        pts = np.array([[0.0], [1.0]])
        model = kmeans(pts, 1, seed=0)
        assert len(representatives(model, 0, n=15)) == 2

    def test_empty_cluster_error(self):
        pts = np.array([[0.0], [1.0]])
        model = kmeans(pts, 1, seed=0)
        with pytest.raises(ValueError):
            representatives(model, 5, n=2)


class TestPlotFilter:
    def _model(self):
        pts = np.array([[0.0], [0.1], [0.5], [4.0]])
        return kmeans(pts, 2, seed=0)

    def test_radius_none_keeps_all(self):
        model = self._model()
        assert plot_filter(model, None) == model.doc_ids

    def test_radius_filters_by_own_centroid(self):
        model = self._model()
        kept = plot_filter(model, 0.2)
        assert set(kept) == {i for i in range(4) if model.distances[i] <= 0.2}

    def test_radius_zero(self):
        pts = np.array([[0.0], [0.0], [7.0]])
        model = kmeans(pts, 2, seed=0)
        kept = plot_filter(model, 0.0)
        assert sorted(kept) == [0, 1, 2]

    def test_negative_radius_error(self):
        with pytest.raises(ValueError):
            plot_filter(self._model(), -0.1)


class TestAssign:
    def test_nearest_and_tie(self):
        pts = np.array([[0.0], [0.0], [10.0], [10.0]])
        model = kmeans(pts, 2, seed=0)
        c, d = assign(model, np.array([1.0]))
        low = min(range(2), key=lambda i: model.centroids[i, 0])
        assert c == low
        assert d == pytest.approx(1.0)
        # equidistant from both centroids: smaller cluster id wins
        c_tie, _ = assign(model, np.array([5.0]))
        assert c_tie == 0

    def test_dim_mismatch(self):
        pts = np.zeros((3, 2))
        model = kmeans(pts, 1, seed=0)
        with pytest.raises(ValueError):
            assign(model, np.zeros(3))

    def test_agrees_with_training_assignments(self):
        X, _ = two_blob_vectors(n_per=30, dim=5, seed=13)
        model = kmeans(X, 2, seed=1)
        for i in range(len(X)):
            c, d = assign(model, X[i])
            assert c == model.assignments[i]
            assert d == pytest.approx(model.distances[i], abs=1e-12)


class TestSerialization:
    def test_roundtrip(self, tmp_path):
        X, _ = two_blob_vectors(n_per=20, dim=3, seed=21)
        ids = [f"doc{i}" for i in range(len(X))]
        model = kmeans(X, 2, seed=6, ids=ids)
        model.labels[1] = "robos"
        jp, cp = tmp_path / "model.json", tmp_path / "assign.csv"
        save_cluster_model(model, jp, cp)
        loaded = load_cluster_model(jp, cp)
        assert loaded.k == 2 and loaded.dim == 3
        np.testing.assert_allclose(loaded.centroids, model.centroids)
        assert loaded.sizes == model.sizes
        assert loaded.labels == {1: "robos"}
        assert loaded.doc_ids == model.doc_ids
        assert loaded.assignments == model.assignments
        assert loaded.distances == model.distances  # repr() round-trips floats

    def test_json_contents(self, tmp_path):
        pts = np.array([[0.0], [1.0], [10.0]])
        model = kmeans(pts, 2, seed=0)
        jp = tmp_path / "model.json"
        save_cluster_model(model, jp)
        payload = json.loads(jp.read_text(encoding="utf-8"))
        assert payload["k"] == 2
        assert len(payload["centroids"]) == 2
        assert len(payload["dispersions"]) == 2
        assert payload["labels"] == {}
