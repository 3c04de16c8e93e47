import numpy as np
import pytest

from torusgg import functionals as fn
from torusgg.gilbert import FiltrationGraph, build_filtration
from torusgg.graphs import (SmallGraph, complete_graph, cycle_graph,
                            from_edges, path_graph)
from torusgg.homology import betti as hom_betti
from torusgg.torus import PointCloud, WindowSpec, sample_poisson_cloud

ALL_ADDITIVE_SPECS = ["component_count", "subgraph:0-1", "subgraph:0-1,0-2,1-2",
                      "induced:0-1,1-2", "simplex:q=2", "betti:q=1", "euler"]
ALL_MULTI_SPECS = ["pbetti:q=1", "dynsub:0-1|0-1,1-2"]


def synthetic(n, edges):
    i, j, tau = (np.array([e[0] for e in edges], dtype=np.int64),
                 np.array([e[1] for e in edges], dtype=np.int64),
                 np.array([e[2] for e in edges], dtype=float))
    return FiltrationGraph(n=n, i=i, j=j, tau=tau)


def test_builtin_examples_on_graphs():
    cc = fn.component_count()
    assert cc.evaluate(complete_graph(3)) == 1.0
    two_edges = from_edges([(0, 1), (2, 3)])
    assert cc.evaluate(two_edges) == 2.0
    assert fn.subgraph_count(complete_graph(3)).evaluate(complete_graph(4)) == 4.0
    assert fn.betti(1).evaluate(cycle_graph(4)) == 1.0
    assert fn.betti(0).evaluate(SmallGraph(1, 0)) == 1.0
    assert fn.simplex_count(0).evaluate(two_edges) == 4.0
    assert fn.euler_char().evaluate(complete_graph(4)) == 1.0


def test_additive_evaluate_is_additive_on_disjoint_unions():
    parts = [cycle_graph(4), complete_graph(3), path_graph(2)]
    union_edges = []
    offset = 0
    for g in parts:
        union_edges += [(i + offset, j + offset) for i, j in g.edges()]
        offset += g.n
    union = from_edges(union_edges, n=offset)
    for spec in ALL_ADDITIVE_SPECS:
        f = fn.parse_functional(spec)
        assert f.evaluate(union) == pytest.approx(
            sum(f.evaluate(g) for g in parts)), spec


def test_pattern_must_be_connected():
    with pytest.raises(ValueError):
        fn.subgraph_count(from_edges([(0, 1), (2, 3)]))
    with pytest.raises(ValueError):
        fn.dynamic_subgraph_count([path_graph(2), from_edges([(0, 1), (2, 3)])])


def test_evaluate_additive_on_filtrations():
    empty = synthetic(0, [])
    assert fn.evaluate_additive(fn.subgraph_count(path_graph(2)), empty, 1.0) == 0.0
    # one triangle completing at tau 0.4
    tri = synthetic(3, [(0, 1, 0.1), (1, 2, 0.3), (0, 2, 0.4)])
    assert fn.evaluate_additive(fn.subgraph_count(complete_graph(3)), tri, 1.0) == 1.0
    assert fn.evaluate_additive(fn.simplex_count(2), tri, 1.0) == 1.0
    assert fn.evaluate_additive(fn.betti(1), tri, 1.0) == 0.0
    assert fn.evaluate_additive(fn.component_count(), tri, 0.2) == 2.0


def test_by_size_tallies_sum_to_total():
    w = WindowSpec(d=2, b=8.0, lam=0.5)
    filt = build_filtration(sample_poisson_cloud(w, 5))
    f = fn.subgraph_count(path_graph(2))
    for t in (0.4, 1.0):
        by_size = fn.evaluate_additive_by_size(f, filt, t)
        assert sum(by_size.values()) == pytest.approx(
            fn.evaluate_additive(f, filt, t))


def test_global_snapshot_oracle_small_clouds():
    # component decomposition equals one evaluation of the whole snapshot graph
    w = WindowSpec(d=2, b=9.0, lam=0.45)
    for seed in range(6):
        cloud = sample_poisson_cloud(w, seed)
        if len(cloud) > 30 or len(cloud) == 0:
            continue
        filt = build_filtration(cloud)
        adj_at = {}
        for t in (0.5, 1.0):
            m = filt.edges_upto(t)
            edges = [(int(filt.i[r]), int(filt.j[r])) for r in range(m)]
            adj_at[t] = from_edges(edges, n=filt.n)
        for spec in ALL_ADDITIVE_SPECS:
            f = fn.parse_functional(spec)
            for t in (0.5, 1.0):
                whole = adj_at[t]
                expected = f.evaluate(whole) if whole is not None else 0.0
                assert fn.evaluate_additive(f, filt, t) == pytest.approx(expected), (
                    spec, seed, t)


def test_global_pair_and_triangle_oracle_100_points():
    # independent coordinate-level count of pairs/triangles at threshold t
    w = WindowSpec(d=3, b=10.0, lam=0.465)
    cloud = sample_poisson_cloud(w, 17)
    assert 50 < len(cloud) <= 200
    filt = build_filtration(cloud)
    pts = cloud.points
    for t in (0.5, 1.0):
        r = t ** (1.0 / w.d)
        close = np.zeros((len(cloud), len(cloud)), dtype=bool)
        for a in range(len(cloud)):
            diff = np.abs(pts - pts[a])
            dist = np.minimum(diff, w.b - diff).max(axis=1)
            close[a] = dist <= r
            close[a, a] = False
        pairs = close.sum() // 2
        triangles = 0
        idx = np.arange(len(cloud))
        for a in range(len(cloud)):
            nbrs = idx[close[a]]
            nbrs = nbrs[nbrs > a]
            for bi in range(len(nbrs)):
                for ci in range(bi + 1, len(nbrs)):
                    if close[nbrs[bi], nbrs[ci]]:
                        triangles += 1
        assert fn.evaluate_additive(
            fn.subgraph_count(path_graph(2)), filt, t) == pairs
        assert fn.evaluate_additive(
            fn.subgraph_count(complete_graph(3)), filt, t) == triangles


def test_evaluate_process_examples():
    filt = synthetic(4, [(0, 1, 0.2), (1, 2, 0.5), (2, 3, 0.9)])
    f = fn.subgraph_count(path_graph(2))
    vals = fn.evaluate_process(f, filt, [0.1, 0.2, 0.5, 0.9, 1.0])
    assert list(vals) == [0.0, 1.0, 2.0, 3.0, 3.0]
    single = fn.evaluate_process(f, filt, [0.5])
    assert single[0] == fn.evaluate_additive(f, filt, 0.5)
    with pytest.raises(ValueError):
        fn.evaluate_process(f, filt, [0.5, 0.2])


def test_betti_process_on_planted_cycle():
    # 4-cycle completing at tau 0.7, never merged or filled
    filt = synthetic(4, [(0, 1, 0.1), (1, 2, 0.3), (2, 3, 0.5), (0, 3, 0.7)])
    vals = fn.evaluate_process(fn.betti(1), filt, [0.2, 0.5, 0.65, 0.7, 1.0])
    assert list(vals) == [0.0, 0.0, 0.0, 1.0, 1.0]


def test_monotone_paths_for_increasing_builtins():
    w = WindowSpec(d=2, b=8.0, lam=0.5)
    grid = [0.2, 0.4, 0.6, 0.8, 1.0]
    for seed in range(10):
        filt = build_filtration(sample_poisson_cloud(w, seed))
        for spec in ("subgraph:0-1", "subgraph:0-1,1-2", "simplex:q=2"):
            f = fn.parse_functional(spec)
            assert f.increasing
            vals = fn.evaluate_process(f, filt, grid)
            assert np.all(np.diff(vals) >= 0)


def test_scale_consistency():
    w = WindowSpec(d=2, b=8.0, lam=0.5)
    filt = build_filtration(sample_poisson_cloud(w, 12))
    t0 = 0.4
    m = filt.edges_upto(t0)
    rescaled = FiltrationGraph(n=filt.n, i=filt.i[:m], j=filt.j[:m],
                               tau=filt.tau[:m] / t0)
    for spec in ALL_ADDITIVE_SPECS:
        f = fn.parse_functional(spec)
        assert fn.evaluate_additive(f, filt, t0) == pytest.approx(
            fn.evaluate_additive(f, rescaled, 1.0)), spec


def two_cluster_data():
    # clusters placed > 2 apart in wrapped distance: no interaction at radius 1
    w = WindowSpec(d=2, b=10.0, lam=0.3)
    rng = np.random.default_rng(3)
    a = rng.random((8, 2)) * 1.0
    b = rng.random((7, 2)) * 1.0 + 5.0
    cloud_a = PointCloud(window=w, points=a, seed=0)
    cloud_b = PointCloud(window=w, points=b, seed=0)
    cloud_ab = PointCloud(window=w, points=np.vstack([a, b]), seed=0)
    return cloud_a, cloud_b, cloud_ab


def test_additivity_under_separation_every_builtin():
    cloud_a, cloud_b, cloud_ab = two_cluster_data()
    fa, fb, fab = (build_filtration(c) for c in (cloud_a, cloud_b, cloud_ab))
    for spec in ALL_ADDITIVE_SPECS:
        f = fn.parse_functional(spec)
        for t in (0.3, 1.0):
            assert fn.evaluate_additive(f, fab, t) == pytest.approx(
                fn.evaluate_additive(f, fa, t) + fn.evaluate_additive(f, fb, t)), spec
    for spec in ALL_MULTI_SPECS:
        f = fn.parse_functional(spec)
        t_vec = (0.3, 1.0)
        assert fn.evaluate_multi(f, fab, t_vec) == pytest.approx(
            fn.evaluate_multi(f, fa, t_vec) + fn.evaluate_multi(f, fb, t_vec)), spec


def test_multi_pbetti_equal_times_matches_betti():
    w = WindowSpec(d=2, b=8.0, lam=0.5)
    pb = fn.persistent_betti(1)
    for seed in range(6):
        filt = build_filtration(sample_poisson_cloud(w, seed))
        for t in (0.5, 1.0):
            assert fn.evaluate_multi(pb, filt, (t, t)) == pytest.approx(
                fn.evaluate_additive(fn.betti(1), filt, t))


def test_multi_pbetti_dominated():
    w = WindowSpec(d=2, b=8.0, lam=0.5)
    pb = fn.persistent_betti(1)
    b1 = fn.betti(1)
    for seed in range(6):
        filt = build_filtration(sample_poisson_cloud(w, seed))
        assert fn.evaluate_multi(pb, filt, (0.5, 1.0)) <= fn.evaluate_additive(
            b1, filt, 1.0) + 1e-12


def test_dynamic_subgraph_all_equal_reduces_to_subgraph_count():
    w = WindowSpec(d=2, b=8.0, lam=0.5)
    dyn = fn.dynamic_subgraph_count([path_graph(2), path_graph(2)])
    sub = fn.subgraph_count(path_graph(2))
    for seed in range(6):
        filt = build_filtration(sample_poisson_cloud(w, seed))
        assert fn.evaluate_multi(dyn, filt, (0.5, 1.0)) == pytest.approx(
            fn.evaluate_additive(sub, filt, 0.5))


def test_dynamic_subgraph_hand_example():
    filt = synthetic(3, [(0, 1, 0.3), (1, 2, 0.8)])
    dyn = fn.dynamic_subgraph_count([path_graph(2), path_graph(3)])
    assert fn.evaluate_multi(dyn, filt, (0.5, 1.0)) == 1.0  # only the early edge
    assert fn.evaluate_multi(dyn, filt, (0.9, 1.0)) == 2.0
    assert fn.evaluate_multi(dyn, filt, (0.1, 1.0)) == 0.0


def test_linear_combination_decomposes():
    w = WindowSpec(d=2, b=8.0, lam=0.5)
    f1 = fn.subgraph_count(path_graph(2))
    f2 = fn.simplex_count(2)
    combo = fn.linear_combination([2.0, 0.5], [f1, f2])
    for seed in range(5):
        filt = build_filtration(sample_poisson_cloud(w, seed))
        got = fn.evaluate_multi(combo, filt, (0.4, 1.0))
        want = (2.0 * fn.evaluate_additive(f1, filt, 0.4)
                + 0.5 * fn.evaluate_additive(f2, filt, 1.0))
        assert got == pytest.approx(want)


def test_table_functional():
    from torusgg.graphs import canonical_code
    table = {canonical_code(complete_graph(3)): 7.0}
    f = fn.table_functional("triangles7", table)
    assert f.evaluate(complete_graph(3)) == 7.0
    assert f.evaluate(path_graph(3)) == 0.0


def test_builtin_registry():
    assert fn.builtin("component_count").name == "component_count"
    assert fn.builtin("betti", q=1).name == "betti(q=1)"
    assert fn.builtin("subgraph_count", pattern=complete_graph(3)).evaluate(
        complete_graph(4)) == 4.0
    assert fn.builtin("persistent_betti", q=1).arity == 2
    combo = fn.builtin("linear_combination", coefficients=(1.0,),
                       parts=(fn.builtin("euler_char"),))
    assert combo.arity == 1
    with pytest.raises(ValueError):
        fn.builtin("not_a_functional")
    with pytest.raises(ValueError):
        fn.builtin("betti", wrong_param=2)


def test_parse_functional_specs():
    assert fn.parse_functional("component_count").name == "component_count"
    assert fn.parse_functional("betti:q=1").name == "betti(q=1)"
    assert fn.parse_functional("pbetti:q=2").arity == 2
    assert fn.parse_functional("dynsub:0-1|0-1,1-2").arity == 2
    assert fn.parse_functional("euler").name == "euler_char"
    with pytest.raises(ValueError):
        fn.parse_functional("nope")
    with pytest.raises(ValueError):
        fn.parse_functional("betti:q=-1")
    with pytest.raises(ValueError):
        fn.parse_functional("simplex:2")


def test_evaluate_multi_validation():
    filt = synthetic(3, [(0, 1, 0.3), (1, 2, 0.8)])
    pb = fn.persistent_betti(1)
    with pytest.raises(ValueError):
        fn.evaluate_multi(pb, filt, (0.9, 0.5))
    with pytest.raises(ValueError):
        fn.evaluate_multi(pb, filt, (0.5,))


def test_betti_functional_matches_homology_and_parts():
    f = fn.betti(1)
    plus, minus = f.increasing_parts
    for g in (cycle_graph(4), complete_graph(4), path_graph(5), cycle_graph(6)):
        assert f.evaluate(g) == hom_betti(g, 1)
        assert plus(g) - minus(g) == pytest.approx(f.evaluate(g))
