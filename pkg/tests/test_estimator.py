from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone

from hypers2v.estimator import HyperS2V
from hypers2v.hypergraph import Hypergraph
from hypers2v.toys import generate_toy


@pytest.fixture(scope="module")
def fitted():
    g, colors = generate_toy("star")
    est = HyperS2V(dim=4, walks_per_node=10, walk_length=20, seed=0)
    est.fit(g)
    return g, est


def test_sklearn_params_and_clone():
    est = HyperS2V(dim=16, k_max=3)
    params = est.get_params()
    assert params["dim"] == 16 and params["k_max"] == 3
    est2 = clone(est).set_params(dim=8)
    assert est2.get_params()["dim"] == 8
    assert est.get_params()["dim"] == 16


def test_fit_accepts_edge_lists_and_paths(tmp_path):
    edges = [["a", "b", "c"], ["b", "c"], ["a", "d"]]
    est = HyperS2V(dim=3, walks_per_node=3, walk_length=10, k_max=2, seed=0)
    emb_list = est.fit_transform(edges)
    assert emb_list.shape == (4, 3)

    p = tmp_path / "g.hyperedges"
    Hypergraph.from_edges(edges).save(p)
    emb_path = HyperS2V(dim=3, walks_per_node=3, walk_length=10, k_max=2, seed=0).fit_transform(p)
    assert np.array_equal(emb_list, emb_path)


def test_transform_variants(fitted):
    g, est = fitted
    full = est.transform()
    assert full.shape == (g.n_nodes, 4)
    assert np.array_equal(est.transform(g), full)
    rows = est.transform(["n2", "n0"])
    assert np.array_equal(rows[0], full[g.id_of("n2")])
    assert np.array_equal(rows[1], full[g.id_of("n0")])


def test_transform_missing_labels_listed(fitted):
    _, est = fitted
    with pytest.raises(ValueError, match="zz"):
        est.transform(["n0", "zz"])


def test_transform_other_graph_rejected(fitted):
    _, est = fitted
    other, _ = generate_toy("twin")  # disjoint label set
    with pytest.raises(ValueError, match="transductive"):
        est.transform(other)


def test_unfitted_transform_raises():
    with pytest.raises(RuntimeError):
        HyperS2V().transform()


def test_fit_deterministic(fitted):
    g, est = fitted
    again = HyperS2V(dim=4, walks_per_node=10, walk_length=20, seed=0).fit(g)
    assert np.array_equal(est.embedding_, again.embedding_)


def test_fit_artifacts_exposed(fitted):
    g, est = fitted
    assert est.distances_.n_nodes == g.n_nodes
    assert est.multilayer_.n_nodes == g.n_nodes
    assert len(est.corpus_) == g.n_nodes * 10
    assert len(est.loss_history_) == est.epochs + 1
    m = est.embedding_matrix()
    assert m.labels == g.labels


def test_parameter_validation():
    g, _ = generate_toy("star")
    with pytest.raises(ValueError):
        HyperS2V(dim=0).fit(g)
    with pytest.raises(ValueError):
        HyperS2V(stay_prob=1.5).fit(g)
    with pytest.raises(ValueError):
        HyperS2V(mode="nope").fit(g)
    with pytest.raises(ValueError):
        HyperS2V(k_max=-1).fit(g)


def test_uncollapsed_mode_runs():
    g, _ = generate_toy("circle")
    est = HyperS2V(dim=3, mode="uncollapsed", walks_per_node=3, walk_length=10,
                   k_max=2, seed=0)
    emb = est.fit_transform(g)
    assert np.all(np.isfinite(emb))
