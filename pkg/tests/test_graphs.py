import itertools

import numpy as np
import pytest

from torusgg.graphs import (SmallGraph, automorphism_count, canonical_code,
                            complete_graph, count_embeddings, cycle_graph,
                            enumerate_connected, format_graph, from_edges,
                            is_connected, pair_index, parse_graph, path_graph,
                            relabel)

RNG = np.random.default_rng(20260808)


def random_graph(n, p=0.5):
    adj = 0
    for j in range(1, n):
        for i in range(j):
            if RNG.random() < p:
                adj |= 1 << pair_index(i, j)
    return SmallGraph(n, adj)


def test_pair_index_bijective():
    seen = set()
    for j in range(1, 8):
        for i in range(j):
            seen.add(pair_index(i, j))
    assert seen == set(range(28))
    assert pair_index(3, 1) == pair_index(1, 3)
    with pytest.raises(ValueError):
        pair_index(2, 2)


def test_smallgraph_validation():
    with pytest.raises(ValueError):
        SmallGraph(0, 0)
    with pytest.raises(ValueError):
        SmallGraph(2, 2)  # only bit 0 exists for n=2
    g = from_edges([(0, 1), (1, 2)])
    assert g.n == 3 and g.edge_count == 2
    assert g.edges() == [(0, 1), (1, 2)]
    assert g.has_edge(1, 0) and not g.has_edge(0, 2)


def test_relabel_and_connectivity():
    g = path_graph(4)
    h = relabel(g, [3, 1, 0, 2])
    assert h.edge_count == 3
    assert is_connected(g) and is_connected(h)
    assert not is_connected(from_edges([(0, 1)], n=3))
    assert is_connected(SmallGraph(1, 0))


def test_canonical_code_examples():
    p3 = path_graph(3)
    for perm in itertools.permutations(range(3)):
        assert canonical_code(relabel(p3, perm)) == canonical_code(p3)
    assert canonical_code(complete_graph(3)) != canonical_code(p3)
    codes = {canonical_code(g) for g in enumerate_connected(2)}
    assert len(codes) == 2  # P3 class and K3 class


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8])
def test_canonical_code_permutation_invariance(n):
    for _ in range(8):
        g = random_graph(n)
        code = canonical_code(g)
        for _ in range(12):
            perm = list(RNG.permutation(n))
            assert canonical_code(relabel(g, perm)) == code


def test_canonical_code_pruned_matches_exhaustive():
    # the pruned search path (n > 8) must agree with the table path under
    # padding: embed an 8-vertex graph among isolated vertices and compare
    # equal-graph classifications
    for _ in range(5):
        g = random_graph(9, p=0.4)
        code = canonical_code(g)
        for _ in range(6):
            perm = list(RNG.permutation(9))
            assert canonical_code(relabel(g, perm)) == code


def test_canonical_code_size_cap():
    with pytest.raises(ValueError):
        canonical_code(SmallGraph(13, 0))


def test_enumerate_connected_counts():
    assert len(enumerate_connected(0)) == 1
    assert len(enumerate_connected(1)) == 1
    assert len(enumerate_connected(2)) == 4
    assert len(enumerate_connected(3)) == 38
    assert len(enumerate_connected(4)) == 728
    with pytest.raises(ValueError):
        enumerate_connected(7)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_enumerate_connected_against_independent_bruteforce(k):
    # independent oracle: adjacency sets + stack DFS over all masks
    n = k + 1
    npairs = n * (n - 1) // 2
    pairs = [(i, j) for j in range(n) for i in range(j)]
    expected = set()
    for mask in range(1 << npairs):
        nbrs = {v: set() for v in range(n)}
        for idx, (i, j) in enumerate(pairs):
            if (mask >> pair_index(i, j)) & 1:
                nbrs[i].add(j)
                nbrs[j].add(i)
        seen, stack = {0}, [0]
        while stack:
            for u in nbrs[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) == n:
            expected.add(mask)
    got = {g.adj for g in enumerate_connected(k)}
    assert got == expected


def test_automorphism_examples():
    assert automorphism_count(complete_graph(2)) == 2
    assert automorphism_count(complete_graph(3)) == 6
    assert automorphism_count(cycle_graph(4)) == 8
    assert automorphism_count(path_graph(3)) == 2
    assert automorphism_count(SmallGraph(1, 0)) == 1


def test_automorphism_pruned_path():
    g = cycle_graph(10)
    assert automorphism_count(g) == 20


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_orbit_counting_consistency(k):
    # sum over isomorphism classes of (k+1)!/|Aut| equals the labeled count
    import math
    graphs = enumerate_connected(k)
    classes = {}
    for g in graphs:
        classes.setdefault(canonical_code(g), g)
    total = sum(math.factorial(k + 1) // automorphism_count(g)
                for g in classes.values())
    assert total == len(graphs)


def test_count_embeddings_examples():
    k4 = complete_graph(4)
    assert count_embeddings(k4, SmallGraph(1, 0)) == 4
    assert count_embeddings(k4, complete_graph(3)) == 4
    assert count_embeddings(cycle_graph(4), path_graph(3), induced=True) == 4
    assert count_embeddings(cycle_graph(4), path_graph(3), induced=False) == 4
    assert count_embeddings(k4, path_graph(3), induced=True) == 0
    for g in (complete_graph(4), cycle_graph(5), path_graph(4)):
        assert count_embeddings(g, g, induced=True) == 1
    # pattern larger than host has no copies
    assert count_embeddings(complete_graph(3), complete_graph(4)) == 0


def test_count_embeddings_against_itertools_bruteforce():
    # independent oracle: enumerate vertex subsets and edge-preserving bijections
    for _ in range(10):
        g = random_graph(6, p=0.5)
        pattern = random_graph(3, p=0.7)
        for induced in (False, True):
            expected = 0
            for verts in itertools.combinations(range(g.n), pattern.n):
                found = set()
                for perm in itertools.permutations(verts):
                    ok = True
                    for j in range(pattern.n):
                        for i in range(j):
                            pe = pattern.has_edge(i, j)
                            ge = g.has_edge(perm[i], perm[j])
                            if pe and not ge:
                                ok = False
                            if induced and not pe and ge:
                                ok = False
                    if ok:
                        edges = frozenset(
                            frozenset((perm[i], perm[j]))
                            for i, j in pattern.edges())
                        found.add(edges)
                expected += len(found)
            assert count_embeddings(g, pattern, induced) == expected


def test_parse_and_format_graph():
    g = parse_graph("0-1,1-2,2-3,3-0")
    assert g.n == 4 and g.edge_count == 4
    assert parse_graph("n=5;0-1").n == 5
    assert parse_graph("n=2;").edge_count == 0
    assert format_graph(cycle_graph(4)) == "0-1,0-3,1-2,2-3"
    assert format_graph(SmallGraph(3, 0)) == "n=3;"
    assert format_graph(from_edges([(0, 1)], n=3)) == "n=3;0-1"
    roundtrip = parse_graph(format_graph(from_edges([(0, 1)], n=3)))
    assert roundtrip.n == 3 and roundtrip.edge_count == 1
    with pytest.raises(ValueError):
        parse_graph("0-0")
    with pytest.raises(ValueError):
        parse_graph("01")
    with pytest.raises(ValueError):
        parse_graph("")
    with pytest.raises(ValueError):
        parse_graph("n=2;0-5")
