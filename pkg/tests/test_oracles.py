"""Exact solvers and verifiers, cross-checked against hand values and
a brute-force subset enumerator."""

from itertools import combinations

import pytest

from awakesim.errors import OracleTooLarge
from awakesim.graphs import (Graph, Matching, complete_graph, cycle_graph,
                             gen_bipartite, gen_gnp, path_graph,
                             petersen_graph, star_graph)
from awakesim.oracles import (exact_max_matching, exact_min_vertex_cover,
                              find_short_augmenting_path,
                              greedy_maximal_matching, max_bipartite_matching,
                              two_coloring, verify_matching, verify_mis,
                              verify_vertex_cover)


def brute_max_matching(g):
    """Reference by enumeration; only for very small graphs."""
    edges = g.edges()
    best = 0
    for k in range(len(edges), 0, -1):
        if k <= best:
            break
        for combo in combinations(edges, k):
            nodes = [v for e in combo for v in e]
            if len(nodes) == len(set(nodes)):
                best = max(best, k)
                break
    return best


def brute_min_cover(g):
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            s = set(combo)
            if all(u in s or v in s for u, v in g.edges()):
                return k
    return g.n


def test_verify_mis_hand_cases():
    g = cycle_graph(5)
    assert verify_mis(g, {0, 2})
    assert not verify_mis(g, {0, 1})      # adjacent
    assert not verify_mis(g, {0})         # 2 and 3 uncovered
    assert verify_mis(Graph(3), {0, 1, 2})  # edgeless: everyone joins


def test_verify_matching_and_cover():
    g = path_graph(4)
    assert verify_matching(g, Matching([(0, 1), (2, 3)]))
    assert not verify_matching(g, [(0, 2)])
    assert verify_vertex_cover(g, {1, 2})
    assert not verify_vertex_cover(g, {1})


def test_two_coloring():
    g = gen_bipartite(5, 7, 0.5, seed=1)
    colors = two_coloring(g)
    assert colors is not None
    assert all(colors[u] != colors[v] for u, v in g.edges())
    assert two_coloring(cycle_graph(5)) is None
    assert two_coloring(cycle_graph(6)) is not None


def test_petersen_values():
    # 3-regular, 10 nodes: perfect matching of size 5, min cover 6
    p = petersen_graph()
    assert len(exact_max_matching(p)) == 5
    assert len(exact_min_vertex_cover(p)) == 6


def test_small_family_values():
    assert len(exact_max_matching(cycle_graph(5))) == 2
    assert len(exact_min_vertex_cover(cycle_graph(5))) == 3
    assert len(exact_max_matching(complete_graph(6))) == 3
    assert len(exact_max_matching(star_graph(5))) == 1
    assert len(exact_min_vertex_cover(star_graph(5))) == 1


def test_exact_matching_against_enumeration():
    for seed in range(12):
        g = gen_gnp(9, 0.35, seed=seed)
        m = exact_max_matching(g)
        assert verify_matching(g, m)
        assert len(m) == brute_max_matching(g)


def test_exact_cover_against_enumeration():
    for seed in range(10):
        g = gen_gnp(9, 0.3, seed=100 + seed)
        c = exact_min_vertex_cover(g)
        assert verify_vertex_cover(g, c)
        assert len(c) == brute_min_cover(g)


def test_hopcroft_karp_matches_branch_and_bound():
    for seed in range(10):
        g = gen_bipartite(8, 8, 0.3, seed=seed)
        hk = max_bipartite_matching(g)
        assert verify_matching(g, hk)
        assert len(hk) == len(exact_max_matching(g))


def test_koenig_on_bipartite():
    # min cover size equals max matching size on bipartite graphs
    for seed in range(8):
        g = gen_bipartite(7, 7, 0.35, seed=40 + seed)
        cover = exact_min_vertex_cover(g)
        assert verify_vertex_cover(g, cover)
        assert len(cover) == len(max_bipartite_matching(g))


def test_oracle_size_caps():
    big = gen_gnp(30, 0.2, seed=1)
    with pytest.raises(OracleTooLarge):
        exact_max_matching(big)
    with pytest.raises(OracleTooLarge):
        exact_min_vertex_cover(big)
    # explicit cap override still works
    assert len(exact_max_matching(big, node_cap=30)) >= 1


def test_find_short_augmenting_path():
    g = path_graph(4)
    m = Matching([(1, 2)])
    assert find_short_augmenting_path(g, m, 1) is None
    path = find_short_augmenting_path(g, m, 3)
    assert path == [0, 1, 2, 3] or path == [3, 2, 1, 0]
    # empty matching: any edge is a length-1 augmenting path
    p1 = find_short_augmenting_path(g, Matching(), 1)
    assert p1 is not None and len(p1) == 2
    # perfect matching: nothing to find
    assert find_short_augmenting_path(g, Matching([(0, 1), (2, 3)]), 9) is None


def test_greedy_maximal_matching():
    m = greedy_maximal_matching(path_graph(4))
    assert m == Matching([(0, 1), (2, 3)])
    for seed in range(10):
        g = gen_gnp(20, 0.2, seed=seed)
        m = greedy_maximal_matching(g)
        assert verify_matching(g, m)
        assert find_short_augmenting_path(g, m, 1) is None  # maximal
