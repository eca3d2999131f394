import random
from itertools import combinations

import numpy as np
import pytest

from corrcolor.errors import InputError
from corrcolor.graph import (
    Graph,
    build_graph,
    clique_number,
    complete_graph,
    complete_join,
    cycle_graph,
    degeneracy,
    empty_graph,
    forbidden_quadruple_scan,
    maximal_cliques_at_least,
    maximum_clique,
    neighborhood_nonedge_count,
    path_graph,
    petersen_graph,
    strong_product,
)

from conftest import all_graphs, edge_slots, graph_from_mask


def test_build_graph_k3():
    g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert g.degree_sequence() == (2, 2, 2)
    assert g.m == 3


def test_build_graph_empty():
    g = build_graph(2, [])
    assert g.degree_sequence() == (0, 0)


def test_build_graph_c4_clique_number():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert clique_number(g) == 2


def test_build_graph_duplicates_collapse():
    g = build_graph(3, [(0, 1), (1, 0), (0, 1)])
    assert g.m == 1


def test_build_graph_errors():
    with pytest.raises(InputError):
        build_graph(3, [(0, 3)])
    with pytest.raises(InputError):
        build_graph(3, [(1, 1)])


def test_strong_product_c5_k3():
    g = strong_product(cycle_graph(5), complete_graph(3))
    assert g.n == 15
    assert set(g.degree_sequence()) == {8}
    assert clique_number(g) == 6


def test_strong_product_identity_factor():
    g = petersen_graph()
    prod = strong_product(g, complete_graph(1))
    assert prod.m == g.m
    assert prod.degree_sequence() == g.degree_sequence()


def test_strong_product_k2_k2():
    prod = strong_product(complete_graph(2), complete_graph(2))
    assert prod.m == 6 and prod.n == 4  # K4


def test_strong_product_degree_formula():
    rng = random.Random(4)
    for _ in range(5):
        gm = rng.randrange(1 << 6)
        hm = rng.randrange(1 << 3)
        g = graph_from_mask(4, gm)
        h = graph_from_mask(3, hm)
        prod = strong_product(g, h)
        for a in range(g.n):
            for b in range(h.n):
                want = (g.degree(a) + 1) * (h.degree(b) + 1) - 1
                assert prod.degree(a * h.n + b) == want


def test_complete_join_k1_c4():
    g = complete_join(complete_graph(1), cycle_graph(4))
    assert g.n == 5 and g.m == 8


def test_complete_join_two_nonedges_gives_c4():
    g = complete_join(empty_graph(2), empty_graph(2))
    assert g.degree_sequence() == (2, 2, 2, 2) and g.m == 4


def test_complete_join_edge_count():
    g = complete_join(complete_graph(6), empty_graph(3))
    assert g.n == 9 and g.m == 15 + 0 + 18


def test_clique_number_kn_and_petersen():
    for n in range(1, 7):
        assert clique_number(complete_graph(n)) == n
    assert clique_number(petersen_graph()) == 2


def test_clique_number_vs_all_subsets_oracle():
    rng = random.Random(0)
    for trial in range(30):
        n = rng.randrange(1, 8)
        g = graph_from_mask(n, rng.randrange(1 << len(edge_slots(n))))
        best = 0
        for size in range(1, n + 1):
            for sub in combinations(range(n), size):
                if g.is_clique(sub):
                    best = max(best, size)
        assert clique_number(g) == best


def test_maximum_clique_is_maximum():
    g = strong_product(cycle_graph(5), complete_graph(3))
    c = maximum_clique(g)
    assert len(c) == 6 and g.is_clique(c)


def test_maximal_cliques_k5_minus_edge():
    edges = [e for e in complete_graph(5).edges() if e != (0, 1)]
    g = build_graph(5, edges)
    system = maximal_cliques_at_least(g, 3)
    assert len(system) == 2
    assert all(len(c) == 4 for c in system)
    inter = set(system.cliques[0]) & set(system.cliques[1])
    assert len(inter) == 3


def test_maximal_cliques_trivial_cases():
    assert maximal_cliques_at_least(complete_graph(4), 4).cliques == ((0, 1, 2, 3),)
    assert len(maximal_cliques_at_least(cycle_graph(5), 3)) == 0


def test_maximal_cliques_at_zero_cover_everything():
    rng = random.Random(1)
    for _ in range(10):
        n = rng.randrange(1, 7)
        g = graph_from_mask(n, rng.randrange(1 << len(edge_slots(n))))
        system = maximal_cliques_at_least(g, 0)
        covered_v = {v for c in system for v in c}
        assert covered_v == set(range(n))
        for u, v in g.edges():
            assert any(u in c and v in c for c in system)


def test_neighborhood_nonedge_count_star_and_clique():
    star = build_graph(5, [(0, i) for i in range(1, 5)])
    assert neighborhood_nonedge_count(star, 0) == 6
    assert neighborhood_nonedge_count(complete_graph(5), 2) == 0


def test_neighborhood_nonedge_count_c5_k3():
    # the non-adjacent pairs in N((g,h)) are exactly the 3x3 pairs between
    # the two non-adjacent neighboring cycle positions
    g = strong_product(cycle_graph(5), complete_graph(3))
    naive = []
    for v in range(g.n):
        nb = g.neighbors(v)
        naive.append(sum(1 for a, b in combinations(nb, 2) if not g.has_edge(a, b)))
    for v in range(g.n):
        assert neighborhood_nonedge_count(g, v) == naive[v] == 9


def test_forbidden_quadruple_scan_examples():
    c4 = cycle_graph(4)
    w = forbidden_quadruple_scan(c4)
    assert w is not None and w.kind == "C4"
    k5e = build_graph(5, [e for e in complete_graph(5).edges() if e != (0, 1)])
    assert forbidden_quadruple_scan(k5e) is None
    assert clique_number(k5e) == 4 == k5e.n - 1
    # P4 joined with K2: witness lives on the path side
    g = complete_join(path_graph(4), complete_graph(2))
    w = forbidden_quadruple_scan(g)
    assert w is not None and w.kind == "P4"
    assert set(w.vertices) == {0, 1, 2, 3}


def test_scan_none_implies_near_clique_small():
    for n in range(1, 6):
        for g in all_graphs(n):
            if forbidden_quadruple_scan(g) is None:
                assert clique_number(g) >= n - 1


@pytest.mark.slow
def test_scan_none_implies_near_clique_n7():
    # numpy prefilter: a complement triangle is already a witness, so only
    # complement-triangle-free graphs need the full scan
    n = 7
    slots = edge_slots(n)
    slot_index = {e: i for i, e in enumerate(slots)}
    masks = np.arange(1 << len(slots), dtype=np.int64)
    has_indep_triple = np.zeros(len(masks), dtype=bool)
    for triple in combinations(range(n), 3):
        a, b, c = triple
        e1 = slot_index[(a, b)]
        e2 = slot_index[(a, c)]
        e3 = slot_index[(b, c)]
        present = ((masks >> e1) | (masks >> e2) | (masks >> e3)) & 1
        has_indep_triple |= present == 0
    survivors = masks[~has_indep_triple]
    checked = 0
    for mask in survivors:
        g = graph_from_mask(n, int(mask))
        if forbidden_quadruple_scan(g) is None:
            checked += 1
            assert clique_number(g) >= n - 1
    assert checked > 0


def test_degeneracy_order_property():
    g = petersen_graph()
    d, order = degeneracy(g)
    assert d == 3
    pos = {v: i for i, v in enumerate(order)}
    for v in g.vertices():
        later = sum(1 for u in g.neighbors(v) if pos[u] > pos[v])
        assert later <= d
