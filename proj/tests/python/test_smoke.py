import math
import os
import random

import pytest

import p2n

SAMPLES = os.environ.get("P2N_SAMPLES_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "samples"))


def sample(name):
    return p2n.load_facts(os.path.join(SAMPLES, name))


def test_parse_and_round_trip():
    doc = p2n.parse_facts("E a object - - m1 coded\nE b object - - m2 tested\nR ref a b\n")
    assert doc.entity_ids == ["a", "b"]
    assert doc.declared_modules == ["m1", "m2"]
    assert doc.relationship_count == 1
    assert len(doc) == 2
    assert p2n.parse_facts(doc.to_facts()) == doc


def test_input_error_carries_line():
    with pytest.raises(p2n.InputError, match="line 2"):
        p2n.parse_facts("E a object - - m coded\nE a object - - m coded\n")


def test_metrics():
    assert p2n.euclidean_distance([0, 0], [3, 4]) == 5.0
    assert p2n.similarity(5.0) == 0.2
    assert p2n.similarity(0.0) == 1e12
    with pytest.raises(ValueError):
        p2n.euclidean_distance([0], [1, 2])


def test_update_rules():
    assert p2n.update_similarity("single", 0.5, 0.8) == 0.8
    assert p2n.update_similarity("complete", 0.5, 0.8) == 0.5
    assert p2n.update_similarity("uavg", 0.5, 0.8, 2, 3) == pytest.approx(0.68, abs=1e-15)
    assert p2n.update_similarity("wavg", 0.5, 0.8, 2, 3) == pytest.approx(0.65, abs=1e-15)


def test_cluster_cut_newick():
    sim = [[0, 0.9, 0.1], [0.9, 0, 0.2], [0.1, 0.2, 0]]
    merges = p2n.cluster(sim, "single")
    assert merges == [(0, 1, 0.9, 2), (2, 3, 0.2, 3)]
    assert p2n.cut(3, merges, k=2) == [0, 0, 1]
    assert p2n.cut(3, merges, threshold=0.1) == [0, 0, 0]
    assert p2n.to_newick(["a", "b", "c"], merges) == "((a,b):0.9,c):0.2;\n"
    assert p2n.cluster(sim, "uavg")[1][2] == pytest.approx(0.15)


def test_single_and_complete_match_scipy():
    scipy = pytest.importorskip("scipy.cluster.hierarchy")
    np = pytest.importorskip("numpy")
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(3, 15)
        d = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                d[i, j] = d[j, i] = rng.uniform(0.1, 10.0)
        sim = [[0.0 if i == j else 1.0 / d[i, j] for j in range(n)] for i in range(n)]
        condensed = d[np.triu_indices(n, 1)]
        for ours, theirs in (("single", "single"), ("complete", "complete")):
            heights = sorted(1.0 / m[2] for m in p2n.cluster(sim, ours))
            expected = sorted(scipy.linkage(condensed, theirs)[:, 2])
            assert heights == pytest.approx(expected, rel=1e-12)


def test_agreement_and_maintenance():
    assert p2n.agreement([0, 0, 1], [0, 1, 1]) == pytest.approx(1 / 3)
    assert p2n.classify_maintenance("modifiability") == ["corrective", "adaptability"]
    assert p2n.classify_maintenance("efficiency") == ["perfection"]
    with pytest.raises(ValueError):
        p2n.classify_maintenance("elegance")


def test_plan_tasks():
    assert p2n.plan_tasks(10, 1) == [(0, 3), (3, 6), (6, 9), (9, 10)]
    assert p2n.plan_tasks(2, 8) == [(0, 2)]


def test_pipeline_on_two_cliques():
    doc = sample("two_cliques.p2n")
    for linkage in ("single", "complete", "wavg", "uavg"):
        r = p2n.run_pipeline(doc, linkage, k=2)
        assert r["labels"] == [0] * 5 + [1] * 5
        assert r["agreement"] == 1.0
        assert r["files"]["agreement.txt"] == "rand_index 1\n"
        assert r["files"]["assignment.csv"].startswith("entity,cluster\n")


def test_similarity_matrix_is_symmetric():
    m = p2n.similarity_matrix(sample("shop.p2n"))
    n = len(m)
    for i in range(n):
        assert m[i][i] == 0.0
        for j in range(n):
            assert m[i][j] == m[j][i]
            if i != j:
                assert 0 < m[i][j] <= 1e12 and math.isfinite(m[i][j])


def test_degenerate_input():
    with pytest.raises(p2n.DegenerateInput):
        p2n.run_pipeline(p2n.parse_facts("E a object - - m -\nE b object - - m -\n"))


def test_worker_unreachable():
    with pytest.raises(p2n.NetworkError):
        p2n.serve_worker("127.0.0.1:1")
