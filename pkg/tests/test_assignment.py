import random
from itertools import permutations

import pytest

from corrcolor.assignment import (
    CorrespondenceAssignment,
    Matching,
    count_full_exact,
    enumerate_full_exact,
    identity_assignment,
    induced_assignment,
    random_exact_assignment,
    random_full_exact,
    random_minus_one_assignment,
    remove_colors,
    rename,
    residual,
    residual_list,
    RenamingSystem,
    spanning_forest,
    straighten_tree,
    trim_to_sizes,
    uniform_lists,
    validate,
)
from corrcolor.coloring import brute_force_colorings, is_valid_partial, solve
from corrcolor.errors import BudgetExceededError, InputError
from corrcolor.graph import (
    build_graph,
    complete_graph,
    complete_join,
    cycle_graph,
    path_graph,
)
from corrcolor.io import parse_assignment, serialize_assignment


def test_matching_condition_enforced():
    with pytest.raises(InputError):
        Matching.from_pairs([(0, 1), (0, 2)])
    with pytest.raises(InputError):
        Matching.from_pairs([(0, 1), (2, 1)])


def test_identity_assignment_matches_proper_colorings():
    k3 = complete_graph(3)
    ca = identity_assignment(k3, uniform_lists(k3, 3))
    colorings = brute_force_colorings(ca)
    assert len(colorings) == 6
    for phi in colorings:
        assert len(set(phi.values())) == 3


def test_identity_c4_bipartite_colorable():
    c4 = cycle_graph(4)
    ca = identity_assignment(c4, uniform_lists(c4, 2))
    assert solve(ca) is not None


def test_identity_c5_two_lists_not_colorable():
    c5 = cycle_graph(5)
    ca = identity_assignment(c5, uniform_lists(c5, 2))
    assert not brute_force_colorings(ca)
    assert solve(ca) is None


def test_rename_identity_noop():
    g = cycle_graph(4)
    ca = random_full_exact(g, 3, 9)
    sigma = RenamingSystem.identity(g.n, ca.universe)
    assert rename(ca, sigma) == ca


def test_rename_swap_on_identity_k2():
    g = complete_graph(2)
    ca = identity_assignment(g, uniform_lists(g, 2))
    sigma = RenamingSystem.from_maps(2, 2, {0: {0: 1, 1: 0}})
    out = rename(ca, sigma)
    assert out.matching(0, 1).fwd == ((0, 1), (1, 0))


def test_rename_round_trip_and_colorability():
    rng = random.Random(3)
    g = cycle_graph(4)
    for trial in range(40):
        ca = random_full_exact(g, 3, trial)
        maps = {}
        for v in range(g.n):
            perm = list(range(ca.universe))
            rng.shuffle(perm)
            maps[v] = dict(enumerate(perm))
        sigma = RenamingSystem.from_maps(g.n, ca.universe, maps)
        out = rename(ca, sigma)
        assert rename(out, sigma.inverse()) == ca
        assert (solve(ca) is None) == (solve(out) is None)


def test_rename_preserves_coloring_count():
    g = path_graph(3)
    for seed in range(10):
        ca = random_full_exact(g, 2, seed)
        sigma = RenamingSystem.from_maps(g.n, 2, {1: {0: 1, 1: 0}})
        assert len(brute_force_colorings(ca)) == len(
            brute_force_colorings(rename(ca, sigma))
        )


def test_straighten_single_edge():
    g = complete_graph(2)
    ca = CorrespondenceAssignment(
        g,
        [(0, 1), (0, 1)],
        {(0, 1): Matching.from_pairs([(0, 1), (1, 0)])},
    )
    out, system = straighten_tree(ca, [(0, 1)], 0, (0, 1))
    assert out.matching(0, 1).fwd == ((0, 0), (1, 1))
    assert system.sigma[0] == tuple(range(system.universe))


def test_straighten_empty_tree_noop():
    g = cycle_graph(4)
    ca = random_full_exact(g, 3, 1)
    out, _ = straighten_tree(ca, [], 0, ca.lists[0])
    assert out == ca


def test_straighten_path_all_edges_straight():
    g = path_graph(4)
    for seed in range(25):
        ca = random_full_exact(g, 3, seed)
        out, system = straighten_tree(ca, list(g.edges()), 0, ca.lists[0])
        for u, v in g.edges():
            assert all(a == b for a, b in out.matching(u, v).fwd)
        gamma = set(ca.lists[0])
        for v in range(4):
            assert set(out.lists[v]) <= gamma
        # renaming identity off the tree-minus-root
        assert system.sigma[0] == tuple(range(system.universe))
        assert (solve(ca) is None) == (solve(out) is None)


def test_straighten_errors():
    g = cycle_graph(3)
    ca = random_full_exact(g, 2, 0)
    with pytest.raises(InputError):
        straighten_tree(ca, list(g.edges()), 0, (0, 1))  # cycle, not a tree
    with pytest.raises(InputError):
        straighten_tree(ca, [(0, 1)], 0, (0,))  # gamma too small


def test_residual_identity_k2():
    g = complete_graph(2)
    ca = identity_assignment(g, uniform_lists(g, 3))
    res = residual(ca, {0: 1})
    assert res.assignment.graph.n == 1
    assert res.assignment.lists[0] == (0, 2)


def test_residual_empty_psi():
    g = cycle_graph(4)
    ca = random_full_exact(g, 3, 2)
    res = residual(ca, {})
    assert res.assignment == ca


def test_residual_full_middle_vertex_p3():
    g = path_graph(3)
    for seed in range(20):
        ca = random_full_exact(g, 2, seed)
        psi = {1: ca.lists[1][0]}
        res = residual(ca, psi)
        assert [len(l) for l in res.assignment.lists] == [1, 1]


def test_residual_combination_property():
    # a partial coloring extends exactly by residual colorings
    g = cycle_graph(4)
    for seed in range(15):
        ca = random_full_exact(g, 2, seed)
        psi = {0: ca.lists[0][seed % 2]}
        if not is_valid_partial(ca, psi):
            continue
        res = residual(ca, psi)
        ext_direct = set()
        for phi in brute_force_colorings(ca):
            if all(phi[v] == c for v, c in psi.items()):
                ext_direct.add(tuple(sorted((v, phi[v]) for v in phi if v not in psi)))
        ext_residual = set()
        for phi in brute_force_colorings(res.assignment):
            back = res.map_coloring_back(phi)
            ext_residual.add(tuple(sorted(back.items())))
        assert ext_direct == ext_residual


def test_residual_list_size_bound():
    rng = random.Random(7)
    g = complete_join(complete_graph(1), cycle_graph(4))
    for seed in range(20):
        ca = random_full_exact(g, 4, seed)
        psi = {}
        for v in list(g.vertices())[:3]:
            opts = residual_list(ca, psi, v)
            if opts:
                psi[v] = rng.choice(opts)
        for v in g.vertices():
            if v in psi:
                continue
            colored_nbrs = sum(1 for u in g.neighbors(v) if u in psi)
            assert len(residual_list(ca, psi, v)) >= len(ca.lists[v]) - colored_nbrs
            if colored_nbrs <= 1:
                assert len(residual_list(ca, psi, v)) == len(ca.lists[v]) - colored_nbrs


def test_enumerate_counts():
    k2 = complete_graph(2)
    assert len(list(enumerate_full_exact(k2, 2, reduce_symmetry=False))) == 2
    assert len(list(enumerate_full_exact(k2, 2))) == 1
    g = complete_join(complete_graph(1), cycle_graph(4))
    assert count_full_exact(g, 3) == 6**4
    assert sum(1 for _ in enumerate_full_exact(g, 3)) == 1296


def test_enumerate_budget():
    g = complete_graph(4)
    with pytest.raises(BudgetExceededError):
        list(enumerate_full_exact(g, 3, budget=10))


def test_enumeration_reaches_every_assignment_via_renaming():
    # renaming the tree vertices of each reduced item reaches each full
    # exact assignment exactly once
    for g, k in [(cycle_graph(3), 2), (path_graph(3), 2), (cycle_graph(4), 2)]:
        forest = spanning_forest(g)
        tree_verts = sorted({v for e in forest for v in e if v != 0})
        seen = set()
        perms = list(permutations(range(k)))
        import itertools

        for item in enumerate_full_exact(g, k):
            for assign in itertools.product(perms, repeat=len(tree_verts)):
                maps = {
                    v: dict(enumerate(p)) for v, p in zip(tree_verts, assign)
                }
                sigma = RenamingSystem.from_maps(g.n, k, maps)
                out = rename(item, sigma)
                seen.add(serialize_assignment(out))
        assert len(seen) == count_full_exact(g, k, reduce_symmetry=False)


def test_random_full_exact_deterministic():
    g = cycle_graph(5)
    assert random_full_exact(g, 3, 11) == random_full_exact(g, 3, 11)
    assert random_full_exact(g, 3, 11) != random_full_exact(g, 3, 12)
    ca = random_full_exact(g, 1, 0)
    for m in ca.matchings().values():
        assert m.fwd == ((0, 0),)


def test_random_full_exact_uniform_on_k2():
    g = complete_graph(2)
    hits = sum(
        1
        for seed in range(10_000)
        if random_full_exact(g, 2, seed).matching(0, 1).fwd == ((0, 0), (1, 1))
    )
    # binomial(10^4, 1/2): three sigma is 150
    assert abs(hits - 5000) <= 150


def test_random_exact_assignment_sizes_and_saturation():
    g = complete_join(complete_graph(6), cycle_graph(4))
    ca = random_minus_one_assignment(g, 5)
    rep = validate(ca)
    assert rep.ok and rep.is_deg_minus_one
    for (u, v), m in ca.matchings().items():
        assert len(m) == min(len(ca.lists[u]), len(ca.lists[v]))


def test_validate_flags():
    g = complete_graph(2)
    ca = identity_assignment(g, uniform_lists(g, 2))
    rep = validate(ca)
    assert rep.ok and rep.is_full and rep.exact_k == 2
    # drop one pair: still a matching, no longer full
    ca2 = CorrespondenceAssignment(
        g, uniform_lists(g, 2), {(0, 1): Matching.from_pairs([(0, 0)])}
    )
    rep2 = validate(ca2)
    assert rep2.ok and not rep2.is_full
    g2 = build_graph(3, [(0, 1), (1, 2)])
    ca3 = identity_assignment(g2, [(0,), (0, 1), (0,)])
    assert validate(ca3).is_deg_minus_one


def test_trim_and_remove_colors():
    g = complete_graph(2)
    ca = identity_assignment(g, uniform_lists(g, 3))
    trimmed = trim_to_sizes(ca, [2, 3])
    assert trimmed.lists[0] == (0, 1)
    assert all(a in (0, 1) for a, _ in trimmed.matching(0, 1).fwd)
    removed = remove_colors(ca, {1: [0]})
    assert removed.lists[1] == (1, 2)
    assert (0, 0) not in removed.matching(0, 1).fwd


def test_induced_assignment_round_trip():
    g = complete_join(complete_graph(2), cycle_graph(4))
    ca = random_full_exact(g, 4, 3)
    res = induced_assignment(ca, [2, 3, 4, 5])
    assert res.assignment.graph.m == 4
    for u, v in res.assignment.graph.edges():
        ou, ov = res.old_of_new[u], res.old_of_new[v]
        m = ca.matching(ou, ov)
        pairs = m.fwd if ou < ov else tuple((b, a) for a, b in m.fwd)
        assert res.assignment.matching(u, v).fwd == tuple(sorted(pairs))


def test_serialize_round_trip_random():
    for seed in range(100):
        g = cycle_graph(4)
        ca = random_exact_assignment(g, [2, 3, 2, 3], seed)
        text = serialize_assignment(ca)
        back = parse_assignment(text, g)
        assert back == ca
        assert serialize_assignment(back) == text


def test_universe_cap():
    g = complete_graph(2)
    with pytest.raises(InputError):
        identity_assignment(g, [(0, 64), (0,)])
