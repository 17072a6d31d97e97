import math

import numpy as np
import pytest

import momentdist as md
from oracles import brute_graphlet3_counts, brute_graphlet4_distribution, random_graph


# -- covariance descriptor -------------------------------------------------------


def test_cov_regular_graph_zero():
    for g in (md.complete_graph(4), md.cycle_graph(8)):
        c = md.cov_descriptor(g, k=4)
        assert np.allclose(c, 0.0, atol=1e-14)


def test_cov_star_hand_computed():
    g = md.star_graph(5)
    x1 = np.array([4.0, 1, 1, 1, 1]) / math.sqrt(20)
    x2 = np.ones(5) / math.sqrt(5)
    cols = np.stack([x1, x2], axis=1)
    centered = cols - cols.mean(axis=1, keepdims=True)
    expected = centered.T @ centered / 5
    got = md.cov_descriptor(g, k=2)
    assert np.allclose(got, expected, atol=1e-12)
    assert np.linalg.matrix_rank(got, tol=1e-10) == 1


def test_cov_permutation_invariant_spectrum():
    rng = np.random.default_rng(0)
    g = random_graph(rng, 25, 0.3)
    h = md.permute(g, md.Permutation.random(25, seed=1))
    ea = np.linalg.eigvalsh(md.cov_descriptor(g, k=4))
    eb = np.linalg.eigvalsh(md.cov_descriptor(h, k=4))
    assert np.allclose(ea, eb, atol=1e-9)


def test_cov_uncentered_is_gram():
    g = md.star_graph(5)
    c = md.cov_descriptor(g, k=2, center=False)
    assert c[1, 1] == pytest.approx(1.0 / 5)  # unit column squared over n


# -- Bhattacharyya ----------------------------------------------------------------


def test_bhattacharyya_identity_zero():
    c = md.cov_descriptor(md.star_graph(5), k=3)
    assert md.bhattacharyya_dist(c, c) == pytest.approx(0.0, abs=1e-12)


def test_bhattacharyya_diagonal_closed_form():
    c1, c2 = np.diag([1.0, 1.0]), np.diag([4.0, 4.0])
    expected = 0.5 * math.log(6.25 / 4.0)
    assert md.bhattacharyya_dist(c1, c2, jitter=0.0) == pytest.approx(expected, rel=1e-12)


def test_bhattacharyya_symmetric():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(3, 3)); a = a @ a.T
    b = rng.normal(size=(3, 3)); b = b @ b.T
    assert md.bhattacharyya_dist(a, b) == pytest.approx(md.bhattacharyya_dist(b, a), rel=1e-12)


def test_bhattacharyya_zero_matrices():
    z = np.zeros((3, 3))
    assert md.bhattacharyya_dist(z, z) == pytest.approx(0.0, abs=1e-12)


# -- log trace moments -------------------------------------------------------------


def test_nclm_k4_entry():
    fv = md.nclm_vector(md.complete_graph(4))
    assert fv.values[0] == pytest.approx(math.log(0.75), rel=1e-12)  # tr(A^2)/n^2


def test_nclm_cospectral_identical():
    a = md.nclm_vector(md.named_graph("C4uK1")).values
    b = md.nclm_vector(md.named_graph("S5")).values
    assert np.array_equal(a, b)


def test_nclm_isomorphic_identical():
    g = md.named_graph("paw")
    h = md.permute(g, md.Permutation.random(4, seed=2))
    assert np.array_equal(md.nclm_vector(g).values, md.nclm_vector(h).values)


def test_nclm_edgeless_rejected():
    with pytest.raises(ValueError):
        md.nclm_vector(md.empty_graph(5))


# -- top-k eigenvalues ---------------------------------------------------------------


def test_eigs_k4_padded():
    fv = md.top_k_eigenvalues(md.complete_graph(4), k=10)
    assert np.allclose(fv.values, [3, -1, -1, -1, 0, 0, 0, 0, 0, 0], atol=1e-9)


def test_eigs_regular_leading_value():
    fv = md.top_k_eigenvalues(md.cycle_graph(12), k=3)
    assert fv.values[0] == pytest.approx(2.0, abs=1e-9)


def test_eigs_cospectral_identical():
    a = md.top_k_eigenvalues(md.named_graph("C4uK1")).values
    b = md.top_k_eigenvalues(md.named_graph("S5")).values
    assert np.linalg.norm(a - b) <= 1e-10


def test_eigs_sparse_path_matches_dense():
    g = md.generate_rewired(600, 1800, 0.3, seed=5)
    dense = md.top_k_eigenvalues(g, k=6).values
    sparse = md.top_k_eigenvalues(g, k=6, dense_threshold=100).values
    assert np.allclose(dense, sparse, atol=1e-6)


# -- graphlets -------------------------------------------------------------------------


def test_gk3_complete_and_cycle():
    assert md.graphlet3_distribution(md.complete_graph(4)).tolist() == [0, 0, 0, 1]
    assert md.graphlet3_distribution(md.cycle_graph(4)).tolist() == [0, 0, 1, 0]


def test_gk3_matches_exhaustive_enumeration():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = int(rng.integers(3, 13))
        g = random_graph(rng, n, rng.uniform(0, 1))
        counts = brute_graphlet3_counts(g)
        expected = counts / counts.sum()
        assert np.array_equal(md.graphlet3_distribution(g), expected)


def test_gk3_distribution_sums_to_one():
    g = random_graph(np.random.default_rng(3), 30, 0.2)
    assert md.graphlet3_distribution(g).sum() == pytest.approx(1.0, abs=1e-12)


def test_gk4_point_masses():
    d = md.graphlet4_distribution(md.complete_graph(4), samples=50, seed=0)
    assert d[md.GRAPHLET4_TYPES.index("K4")] == 1.0
    d = md.graphlet4_distribution(md.cycle_graph(5), samples=50, seed=0)
    assert d[md.GRAPHLET4_TYPES.index("P4")] == 1.0  # C5 minus a vertex is P4


def test_gk4_deterministic_and_normalized():
    g = random_graph(np.random.default_rng(4), 15, 0.3)
    a = md.graphlet4_distribution(g, samples=500, seed=7)
    b = md.graphlet4_distribution(g, samples=500, seed=7)
    assert np.array_equal(a, b)
    assert a.sum() == pytest.approx(1.0, abs=1e-12)


def test_gk4_sampled_close_to_exhaustive():
    g = random_graph(np.random.default_rng(5), 9, 0.4)
    exact = brute_graphlet4_distribution(g)
    sampled = md.graphlet4_distribution(g, samples=20000, seed=11)
    assert np.max(np.abs(exact - sampled)) <= 0.02


def test_graphlet_kernel_value():
    d1 = np.array([0.5, 0.5, 0.0, 0.0])
    d2 = np.array([0.0, 1.0, 0.0, 0.0])
    assert md.graphlet_kernel_value(d1, d2) == 0.5


def test_graphlet_size_guards():
    with pytest.raises(ValueError):
        md.graphlet3_distribution(md.complete_graph(2))
    with pytest.raises(ValueError):
        md.graphlet4_distribution(md.complete_graph(3))


# -- eigendecomposition-overlap dissimilarity ---------------------------------------------


def test_wicker_self_distance_zero():
    # C4 u K1 has repeated zero eigenvalues, exercising the 0/0 convention
    g = md.named_graph("C4uK1")
    assert md.wicker_distance(g, g) == pytest.approx(0.0, abs=1e-10)


def test_wicker_symmetric():
    rng = np.random.default_rng(6)
    g1 = random_graph(rng, 7, 0.4)
    g2 = random_graph(rng, 7, 0.4)
    try:
        d12 = md.wicker_distance(g1, g2, k=3)
        d21 = md.wicker_distance(g2, g1, k=3)
        assert d12 == pytest.approx(d21, rel=1e-9, abs=1e-9)
    except md.DegenerateDenominatorError:
        pytest.skip("degenerate draw")


def test_wicker_coincidence_at_complete_graph():
    # the known failure mode: two non-isomorphic graphs at the same distance
    # from a complete reference graph
    k5 = md.complete_graph(5)
    d1 = md.wicker_distance(md.named_graph("C4uK1"), k5, k=2)
    d2 = md.wicker_distance(md.named_graph("S5"), k5, k=2)
    assert abs(d1 - d2) <= 1e-10


def test_wicker_degenerate_denominator_raises():
    p3 = md.path_graph(3)
    relabeled = md.permute(p3, md.Permutation(np.array([1, 0, 2])))
    with pytest.raises(md.DegenerateDenominatorError):
        md.wicker_distance(p3, relabeled)


def test_wicker_size_mismatch():
    with pytest.raises(ValueError):
        md.wicker_distance(md.complete_graph(3), md.complete_graph(4))


def test_feature_vector_requires_finite():
    with pytest.raises(ValueError):
        md.FeatureVector(np.array([1.0, np.inf]), "x")


def test_feature_vector_serialization(tmp_path):
    import json

    fvs = [md.nclm_vector(md.named_graph("K4")), md.nclm_vector(md.cycle_graph(4))]
    text = md.feature_vectors_to_csv(fvs, labels=["K4", "C4"])
    lines = text.strip().splitlines()
    assert lines[0] == "label,method," + ",".join(f"f{i}" for i in range(6))
    assert lines[1].startswith("K4,nclm,")
    path = tmp_path / "features.csv"
    md.feature_vectors_to_csv(fvs, labels=["K4", "C4"], path=path)
    assert path.read_text() == text

    payload = json.loads(fvs[0].to_json())
    assert payload["method"] == "nclm" and len(payload["values"]) == 6
