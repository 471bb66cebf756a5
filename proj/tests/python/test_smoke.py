import numpy as np
import pytest

import pcfi


def two_node_graph():
    return pcfi.Graph(np.array([[0, 1]]), 2)


def test_graph_basics():
    g = pcfi.Graph(np.array([[0, 1], [1, 0], [1, 2], [2, 2]]), 4)
    assert g.num_nodes == 4
    assert g.num_edges == 2
    assert g.neighbors(1) == [0, 2]
    assert g.edges().tolist() == [[0, 1], [1, 2]]
    lc, id_map = pcfi.largest_component(g)
    assert lc.num_nodes == 3
    assert list(id_map) == [0, 1, 2]


def test_bad_edge_raises_value_error():
    with pytest.raises(ValueError, match=r"\(0, 5\)"):
        pcfi.Graph(np.array([[0, 5]]), 3)


def test_two_node_fixture():
    known = np.array([[True], [False]])
    x = np.array([[1.0], [123.0]])  # hidden value is ignored
    out = pcfi.impute(two_node_graph(), x, known, alpha=0.5, steps=100)
    assert out["imputed"][0, 0] == 1.0
    assert abs(out["imputed"][1, 0] - 1.0) < 1e-6
    assert out["spds"].tolist() == [[0], [1]]
    one = pcfi.impute(two_node_graph(), x, known, alpha=0.5, steps=1, method="pcfi_stage1_only")
    assert one["imputed"][1, 0] == pytest.approx(2.0 / 3.0)


def test_masks():
    m = pcfi.structural_mask(10, 3, 0.5, seed=4)
    assert m.dtype == np.bool_
    assert m.shape == (10, 3)
    assert (~m.any(axis=1)).sum() == 5
    np.testing.assert_array_equal(m, pcfi.structural_mask(10, 3, 0.5, seed=4))
    u = pcfi.uniform_mask(10, 3, 0.4, seed=1)
    assert (~u).sum() == 12
    with pytest.raises(ValueError):
        pcfi.structural_mask(4, 2, 1.0)


def test_spds_and_confidence():
    g = pcfi.Graph(np.array([[0, 1], [1, 2]]), 3)
    known = np.array([[True, False], [False, False], [False, False]])
    s = pcfi.compute_spds(g, known)
    assert s[:, 0].tolist() == [0, 1, 2]
    assert (s[:, 1] == pcfi.UNREACHABLE).all()
    xi = pcfi.pseudo_confidence(s, 0.5)
    assert xi[:, 0].tolist() == [1.0, 0.5, 0.25]
    assert (xi[:, 1] == 0).all()


def test_no_source_channel_strict_and_lenient():
    g = two_node_graph()
    known = np.array([[True, False], [False, False]])
    x = np.ones((2, 2))
    with pytest.raises(pcfi.InputError, match="channel"):
        pcfi.impute(g, x, known)
    out = pcfi.impute(g, x, known, lenient=True)
    assert out["flagged_channels"] == [1]


def test_stage2_toy():
    xhat = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    s = np.zeros((3, 2), dtype=np.int32)
    s[2, 1] = 1
    out = pcfi.propagate_stage2(xhat, s, alpha=0.5, beta=0.1)
    assert out[2, 1] == pytest.approx(3.05)
    r, means, stds = pcfi.correlation(xhat)
    assert r[0, 1] == pytest.approx(1.0)
    assert r[0, 0] == 0.0


def test_synthetic_pipeline_beats_zero_fill():
    d = pcfi.generate_synthetic(num_nodes=600, num_classes=4, feature_dim=3,
                                intra=0.03, inter=0.002, seed=3)
    g, x = d["graph"], d["features"]
    assert x.shape == (g.num_nodes, 3)
    assert pcfi.class_homophily(g, d["labels"]) > 0.5
    known = pcfi.structural_mask(g.num_nodes, 3, 0.8, seed=1)
    res = pcfi.impute(g, x, known)
    rep = pcfi.evaluate(x, res["imputed"], known, res["spds"])
    zero = pcfi.evaluate(x, np.where(known, x, 0.0), known)
    assert rep["rmse"] < zero["rmse"]
    assert rep["spds_buckets"]


def test_threads_do_not_change_results():
    d = pcfi.generate_synthetic(num_nodes=500, num_classes=3, feature_dim=4,
                                intra=0.04, inter=0.004, seed=5)
    known = pcfi.uniform_mask(d["graph"].num_nodes, 4, 0.7, seed=2)
    pcfi.set_num_threads(1)
    a = pcfi.impute(d["graph"], d["features"], known)["imputed"]
    pcfi.set_num_threads(4)
    b = pcfi.impute(d["graph"], d["features"], known)["imputed"]
    pcfi.set_num_threads(0)
    np.testing.assert_array_equal(a, b)
