import random
from collections import Counter
from itertools import combinations

import pytest

from corrcolor.assignment import (
    enumerate_full_exact,
    identity_assignment,
    random_exact_assignment,
    random_full_exact,
    uniform_lists,
)
from corrcolor.coloring import (
    blocked_color,
    brute_force_colorings,
    check_extension_order,
    classify_clique_case,
    count_colorings,
    excess,
    greedy_extend,
    is_valid_coloring,
    pair_extend_for_excess,
    solve,
    uniform_coloring,
)
from corrcolor.errors import InputError
from corrcolor.graph import (
    build_graph,
    complete_graph,
    complete_join,
    cycle_graph,
    empty_graph,
    path_graph,
)

from conftest import all_graphs


def test_blocked_color_identity_and_empty():
    g = complete_graph(2)
    ca = identity_assignment(g, [(0, 1), (1, 2)])
    assert blocked_color(ca, 0, 1, 1) == 1
    assert blocked_color(ca, 0, 0, 1) is None  # 0 not in L(1)
    with pytest.raises(InputError):
        blocked_color(ca, 0, 5, 1)
    g2 = path_graph(3)
    ca2 = identity_assignment(g2, [(0,), (1,), (2,)])
    assert blocked_color(ca2, 0, 0, 1) is None
    with pytest.raises(InputError):
        blocked_color(ca2, 0, 0, 2)  # non-edge


def test_blocked_color_full_matchings_never_none():
    g = cycle_graph(3)
    for ca in enumerate_full_exact(g, 3):
        for u, v in g.edges():
            for c in ca.lists[u]:
                assert ca.blocked(u, c, v) is not None


def test_is_valid_coloring():
    g = complete_graph(3)
    ca = identity_assignment(g, uniform_lists(g, 3))
    assert is_valid_coloring(ca, {0: 0, 1: 1, 2: 2})
    g2 = complete_graph(2)
    ca2 = identity_assignment(g2, uniform_lists(g2, 2))
    assert not is_valid_coloring(ca2, {0: 0, 1: 0})
    assert not is_valid_coloring(ca2, {0: 0})  # not total


def test_solver_output_always_valid():
    for seed in range(30):
        g = cycle_graph(4)
        ca = random_full_exact(g, 2, seed)
        phi = solve(ca)
        if phi is not None:
            assert is_valid_coloring(ca, phi)


def test_excess_basic():
    g = empty_graph(1)
    ca = identity_assignment(g, [(0, 1)])
    assert excess(ca, {}, 0) == 2
    k3 = complete_graph(3)
    ca3 = identity_assignment(k3, uniform_lists(k3, 2))
    assert excess(ca3, {}, 0) == 0
    with pytest.raises(InputError):
        excess(ca3, {0: 0}, 0)


def test_excess_never_decreases_under_extension():
    rng = random.Random(5)
    g = complete_join(complete_graph(1), cycle_graph(4))
    for seed in range(25):
        ca = random_full_exact(g, 4, seed)
        psi = {}
        order = list(g.vertices())
        rng.shuffle(order)
        watch = order.pop()
        prev = excess(ca, psi, watch)
        for v in order:
            from corrcolor.assignment import residual_list

            opts = residual_list(ca, psi, v)
            if not opts:
                break
            psi[v] = rng.choice(opts)
            cur = excess(ca, psi, watch)
            assert cur >= prev
            prev = cur


def test_greedy_extend_k3():
    g = complete_graph(3)
    ca = identity_assignment(g, uniform_lists(g, 3))
    for order in ([0, 1, 2], [2, 0, 1]):
        phi = greedy_extend(ca, {}, order)
        assert phi is not None and is_valid_coloring(ca, phi)


def test_greedy_c5_two_lists_always_stuck():
    g = cycle_graph(5)
    ca = identity_assignment(g, uniform_lists(g, 2))
    assert greedy_extend(ca, {}, list(range(5))) is None


def test_positive_excess_vertex_never_stuck():
    # a vertex with positive excess placed after all its neighbors never
    # blocks the greedy pass
    rng = random.Random(9)
    g = complete_join(complete_graph(1), cycle_graph(4))
    for trial in range(60):
        ca = random_exact_assignment(g, [4, 4, 4, 4, 4], rng.randrange(1 << 30))
        v = rng.randrange(5)
        if excess(ca, {}, v) <= 0:
            continue
        others = [u for u in g.vertices() if u != v]
        rng.shuffle(others)
        order = others + [v]
        phi = greedy_extend(ca, {}, order)
        if phi is None:
            # the pass may die earlier, but never at v
            partial = {}
            from corrcolor.assignment import residual_list

            for u in order:
                opts = residual_list(ca, partial, u)
                if not opts:
                    assert u != v
                    break
                partial[u] = opts[0]


def test_greedy_hypothesis_guarantees_success():
    rng = random.Random(13)
    g = complete_join(complete_graph(2), cycle_graph(4))
    for trial in range(40):
        ca = random_exact_assignment(g, [g.degree(v) for v in g.vertices()], trial)
        order = list(g.vertices())
        rng.shuffle(order)
        if check_extension_order(ca, {}, order):
            assert greedy_extend(ca, {}, order) is not None


def test_pair_extend_guard():
    g = path_graph(3)
    ca = identity_assignment(g, [(0,), (0, 1), (0,)])
    with pytest.raises(InputError):
        pair_extend_for_excess(ca, {}, 1, 0, 2, 0)  # size inequality violated


def test_pair_extend_exhaustive_small():
    # P3 with the middle vertex as target: every full exact assignment obeys
    # the excess-increase contract
    g = path_graph(3)
    for k in (2, 3):
        for ca in enumerate_full_exact(g, k, reduce_symmetry=False):
            before = excess(ca, {}, 1)
            psi = pair_extend_for_excess(ca, {}, 1, 0, 2, before)
            assert set(psi) == {0, 2}
            assert excess(ca, psi, 1) >= before + 1


def test_pair_extend_unblocking_branch():
    # one endpoint has a color that blocks nothing at the target
    g = path_graph(3)
    ca = identity_assignment(g, [(2, 3), (0, 1), (1, 5)])
    psi = pair_extend_for_excess(ca, {}, 1, 0, 2, 0)
    assert excess(ca, psi, 1) >= 1


def test_solve_matches_brute_force_tiny():
    for n in range(1, 4):
        for g in all_graphs(n):
            for k in (1, 2):
                for ca in enumerate_full_exact(g, k):
                    got = solve(ca)
                    want = brute_force_colorings(ca)
                    assert (got is not None) == bool(want)
                    assert count_colorings(ca) == len(want)


def test_count_examples():
    k2 = complete_graph(2)
    assert count_colorings(identity_assignment(k2, uniform_lists(k2, 2))) == 2
    e2 = empty_graph(2)
    assert count_colorings(identity_assignment(e2, [(0,), (0,)])) == 1


def test_uniform_coloring_unique_and_deterministic():
    e2 = empty_graph(2)
    ca = identity_assignment(e2, [(0,), (1,)])
    assert uniform_coloring(ca, 7) == {0: 0, 1: 1}
    g = cycle_graph(4)
    ca2 = random_full_exact(g, 3, 2)
    assert uniform_coloring(ca2, 5) == uniform_coloring(ca2, 5)


def test_uniform_coloring_frequencies_k2():
    g = complete_graph(2)
    ca = identity_assignment(g, uniform_lists(g, 2))
    counts = Counter(
        tuple(sorted(uniform_coloring(ca, seed).items())) for seed in range(10_000)
    )
    assert set(counts) == {((0, 0), (1, 1)), ((0, 1), (1, 0))}
    for v in counts.values():
        assert abs(v - 5000) <= 150  # three sigma


def test_uniform_coloring_matches_enumeration_c4():
    g = cycle_graph(4)
    ca = identity_assignment(g, uniform_lists(g, 2))
    want = brute_force_colorings(ca)
    n = len(want)
    counts = Counter(
        tuple(sorted(uniform_coloring(ca, seed).items())) for seed in range(4000)
    )
    assert len(counts) == n
    exp = 4000 / n
    sigma = (4000 * (1 / n) * (1 - 1 / n)) ** 0.5
    for v in counts.values():
        assert abs(v - exp) <= 4 * sigma


def test_classify_clique_case_a_and_b():
    g = complete_graph(3)
    ca = identity_assignment(g, uniform_lists(g, 3))
    case = classify_clique_case(ca, [0, 1, 2])
    assert case.kind == "a"
    # non-full matching: some color blocks nothing
    from corrcolor.assignment import CorrespondenceAssignment, Matching

    lists = [(0, 1), (0, 1), (0, 1)]
    matchings = {
        (0, 1): Matching.from_pairs([(0, 0)]),
        (0, 2): Matching.from_pairs([(0, 0), (1, 1)]),
        (1, 2): Matching.from_pairs([(0, 0), (1, 1)]),
    }
    ca2 = CorrespondenceAssignment(g, lists, matchings)
    case2 = classify_clique_case(ca2, [0, 1, 2])
    assert case2.kind == "b"


def test_classify_clique_case_c_exhaustive():
    # full exact 2-assignments on K3: whenever colorable, one of the three
    # cases holds, and full equal-size lists force case (c)
    g = complete_graph(3)
    for ca in enumerate_full_exact(g, 2, reduce_symmetry=False):
        if solve(ca) is None:
            with pytest.raises(InputError):
                classify_clique_case(ca, [0, 1, 2])
            continue
        case = classify_clique_case(ca, [0, 1, 2])
        assert case.kind == "c"
        lv = set(ca.lists[case.v])
        b1 = ca.blocked(case.z1, case.alpha1, case.v)
        b2 = ca.blocked(case.z2, case.alpha2, case.v)
        together = {b for b in (b1, b2) if b is not None and b in lv}
        assert len(together) <= 1
        assert ca.blocked(case.z1, case.alpha1, case.z2) != case.alpha2


def test_classify_requires_list_sizes():
    g = complete_graph(3)
    ca = identity_assignment(g, [(0,), (0, 1), (0, 1)])
    with pytest.raises(InputError):
        classify_clique_case(ca, [0, 1, 2])
