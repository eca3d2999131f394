import random
from fractions import Fraction as F
from itertools import combinations

import pytest

from corrcolor.assignment import (
    identity_assignment,
    induced_assignment,
    random_full_exact,
    uniform_lists,
)
from corrcolor.coloring import (
    brute_force_colorings,
    excess,
    is_valid_coloring,
    is_valid_partial,
    solve,
    uniform_coloring,
)
from corrcolor.errors import HypothesisViolation, InputError
from corrcolor.fixtures import core_plus_sparse, random_gnp
from corrcolor.graph import build_graph, complete_graph, cycle_graph, path_graph
from corrcolor.params import PAPER, SCALED
from corrcolor.pipeline import (
    Transversal,
    approx_region_resample,
    bisects,
    build_setting,
    core_success_process,
    enumerate_region_colorings,
    f_invariant_resample,
    lll_pipeline,
    rich_check,
    sample_transversal,
    saving_state,
    selector_and_pruned_assignment,
    succ_count,
    together_block_at_most_one,
    transversal_check,
    vertex_saving_process,
    witness_state,
)
from corrcolor.structure import Benefactor


# -- setting and transversal ----------------------------------------------------


def test_build_setting_triangle_free():
    g = cycle_graph(12)
    setting = build_setting(g, 6, SCALED)
    assert not setting.cores
    tv = transversal_check(setting, [])
    assert tv.checklist["i"] and tv.checklist["iii"] and tv.checklist["iv"]


def test_build_setting_core_fixture():
    g = core_plus_sparse(delta=32, n_anchors=5)
    setting = build_setting(g, 30, SCALED)
    assert len(setting.cores) == 1 and len(setting.cores[0]) == 29
    assert len(setting.families[0]) == 6
    assert not setting.shortfalls


def test_transversal_empty_and_full():
    g = core_plus_sparse(delta=32, n_anchors=5)
    setting = build_setting(g, 30, SCALED)
    empty = transversal_check(setting, [])
    assert empty.checklist["i"]
    assert not empty.checklist["iii"] and not empty.checklist["iv"]
    full = transversal_check(setting, list(g.vertices()))
    assert not full.checklist["i"]  # the core is far too exposed


def test_transversal_hand_counts():
    g = core_plus_sparse(delta=32, n_anchors=5)
    setting = build_setting(g, 30, SCALED)
    s = list(range(10)) + [29 + i for i in range(8)]
    tv = transversal_check(setting, s)
    smask = set(s)
    core = set(setting.cores[0])
    assert (len(core & smask) >= 3) == tv.checklist["iii"]
    bis = sum(1 for x in setting.families[0] if bisects(smask, x))
    assert (bis >= 1) == tv.checklist["iv"]


def test_sample_transversal_p_zero_and_one():
    g = core_plus_sparse(delta=32, n_anchors=5)
    setting = build_setting(g, 30, SCALED)
    tv, _ = sample_transversal(setting, 0.0, 1, "reject", max_tries=3)
    assert tv is None  # condition (iii) unattainable with S empty
    tv2, _ = sample_transversal(setting, 1.0, 1, "reject", max_tries=3)
    assert tv2 is None  # condition (i) fails with everything chosen


def test_sample_transversal_deterministic():
    g = core_plus_sparse(delta=60)
    setting = build_setting(g, 60, SCALED)
    a = sample_transversal(setting, None, 5, "mt_resample", 50)
    b = sample_transversal(setting, None, 5, "mt_resample", 50)
    assert a[1] == b[1] and a[0].vertices == b[0].vertices


def test_sample_transversal_success_rate_delta60():
    g = core_plus_sparse(delta=60)
    setting = build_setting(g, 60, SCALED)
    wins = sum(
        1
        for seed in range(30)
        if sample_transversal(setting, None, seed, "mt_resample", 50)[0] is not None
    )
    assert wins >= 28


# -- saving and richness -----------------------------------------------------------


def test_saving_state_vacuous_and_identity():
    g = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    ca = identity_assignment(g, uniform_lists(g, 3))
    psi = {1: 0, 2: 0, 3: 1}
    st = saving_state(ca, psi, 0, [(1, 2)], delta=6)
    assert st.needed == 0 and st.saves
    assert st.monochromatic == [(1, 2)]  # equal colors block the same color


def test_saving_state_rejects_bad_pairs():
    g = build_graph(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
    ca = identity_assignment(g, uniform_lists(g, 3))
    with pytest.raises(InputError):
        saving_state(ca, {1: 0, 2: 1}, 0, [(1, 2)], 4)  # an edge
    with pytest.raises(InputError):
        saving_state(ca, {1: 0}, 0, [(1, 3)], 4)  # uncolored endpoint


def test_saving_state_agrees_with_excess():
    # disjoint saving family at a degree-delta vertex forces positive excess
    rng = random.Random(2)
    for seed in range(300):
        star = build_graph(6, [(0, i) for i in range(1, 6)] + [(1, 3)])
        delta = 5
        ca = random_full_exact(star, delta - 1, seed)
        psi = {}
        ok = True
        for v in (1, 2, 3, 4, 5):
            from corrcolor.assignment import residual_list

            opts = residual_list(ca, psi, v)
            if not opts:
                ok = False
                break
            psi[v] = rng.choice(opts)
        if not ok:
            continue
        pairs = [(2, 4), (2, 5), (4, 5)]
        st = saving_state(ca, psi, 0, pairs, delta)
        if st.disjoint_count >= st.needed and st.saves:
            assert excess(ca, psi, 0) > 0


def test_rich_check_cases():
    g = build_graph(8, [(0, i) for i in range(1, 8)])
    delta = 7  # deg(0) == delta: need 2, so singleton subsets matter
    disjoint = [(1, 2), (3, 4), (5, 6)]
    assert rich_check(g, disjoint, 0, delta, 2)
    star_pairs = [(1, 2), (1, 3), (1, 4)]
    assert not rich_check(g, star_pairs, 0, delta, 1)
    # low degree: no subset has size below the (non-positive) quota
    g2 = build_graph(6, [(0, i) for i in range(1, 4)])
    assert rich_check(g2, [(1, 2)], 0, delta, 5)


def test_together_block_semantics():
    g = path_graph(3)
    ca = identity_assignment(g, uniform_lists(g, 2))
    assert together_block_at_most_one(ca, {0: 0, 2: 0}, 0, 2, 1)
    assert not together_block_at_most_one(ca, {0: 0, 2: 1}, 0, 2, 1)


# -- witnesses --------------------------------------------------------------------


def brute_force_minimal_witness(ca, phi, s, core, x):
    """Reference: scan all helper subsets in sorted-tuple order."""
    st = witness_state(ca, phi, s, core, x)
    if not st.successful:
        return None
    pairs = st.saving_pairs
    helpers = st.helpers
    quota = len(x.vertices) - 1
    cands = []
    for size in range(1, len(helpers) + 1):
        cands += [tuple(c) for c in combinations(helpers, size)]
    cands.sort()
    for cand in cands:
        if sum(1 for a, _o in pairs if a in cand) >= quota:
            return cand
    return None


def test_witness_minimality_brute_force(small_core_fixture):
    g, core, s, family = small_core_fixture
    hit = 0
    for seed in range(100):
        ca = random_full_exact(g, 5, seed)
        res = induced_assignment(ca, s)
        phi = res.map_coloring_back(uniform_coloring(res.assignment, seed))
        for x in family:
            st = witness_state(ca, phi, s, core, x)
            if st.successful:
                hit += 1
                assert st.witness == brute_force_minimal_witness(ca, phi, s, core, x)
                mx = max(st.witness)
                assert st.zone == frozenset(
                    b for b in set(core) & set(s) if b not in st.witness and b < mx
                )
            else:
                assert st.witness == st.helpers
                assert len(st.witness) < len(x.vertices) - 1
                assert st.zone == frozenset(set(core) & set(s)) - set(st.witness)
            for b, cols in st.forbidden.items():
                assert len(cols) <= len(x.vertices) - 1
    assert hit >= 10


def test_witness_requires_bisection(small_core_fixture):
    g, core, s, family = small_core_fixture
    ca = random_full_exact(g, 5, 0)
    with pytest.raises(InputError):
        witness_state(ca, {}, [0, 2, 3], core, family[0])


def test_bisects_predicate(small_core_fixture):
    g, core, s, family = small_core_fixture
    x = family[0]
    assert bisects(s, x)
    assert not bisects([0] + s, x)  # anchor inside
    assert not bisects([2, 3, 4], x)  # outside part missing


# -- selector, pruning, resampling ---------------------------------------------------


def test_selector_no_processed_sets(small_core_fixture):
    g, core, s, family = small_core_fixture
    ca = random_full_exact(g, 5, 1)
    res = induced_assignment(ca, s)
    phi = res.map_coloring_back(uniform_coloring(res.assignment, 1))
    region, pruned = selector_and_pruned_assignment(ca, s, core, [], family[0], phi)
    assert region == frozenset(set(family[0].outside()) | (set(core) & set(s)))
    assert pruned == ca


def test_invariant_modifications_equal_pruned_colorings(small_core_fixture):
    g, core, s, family = small_core_fixture
    x1, x2 = family
    for seed in range(20):
        ca = random_full_exact(g, 5, seed)
        res = induced_assignment(ca, s)
        phi = res.map_coloring_back(uniform_coloring(res.assignment, seed + 100))
        region, pruned = selector_and_pruned_assignment(ca, s, core, [x1], x2, phi)

        def selector(psi):
            st = witness_state(ca, psi, s, core, x1)
            return frozenset(
                set(x2.outside()) | ((set(core) & set(s)) - set(st.witness))
            )

        assert frozenset(selector(phi)) == region
        mods = enumerate_region_colorings(ca, phi, region)
        inv = {
            tuple(sorted(m.items()))
            for m in mods
            if frozenset(selector(m)) == region
        }
        pruned_set = {
            tuple(sorted(m.items()))
            for m in enumerate_region_colorings(pruned, phi, region)
        }
        assert inv == pruned_set


def _exact_pushforward_is_uniform(ca, selector):
    colorings = brute_force_colorings(ca)
    n = len(colorings)
    push = {}
    for phi in colorings:
        region = frozenset(selector(phi))
        invs = [
            psi
            for psi in colorings
            if frozenset(selector(psi)) == region
            and all(psi[v] == phi[v] for v in phi if v not in region)
        ]
        for psi in invs:
            key = tuple(sorted(psi.items()))
            push[key] = push.get(key, F(0)) + F(1, n) * F(1, len(invs))
    return len(push) == n and all(p == F(1, n) for p in push.values())


def test_resampling_preserves_uniformity_exactly():
    g = path_graph(3)
    ca = identity_assignment(g, uniform_lists(g, 3))
    assert len(brute_force_colorings(ca)) <= 50
    selectors = [
        lambda phi: frozenset(),
        lambda phi: frozenset(range(3)),
        lambda phi: frozenset(v for v in range(3) if phi[v] == 0),
    ]
    for sel in selectors:
        assert _exact_pushforward_is_uniform(ca, sel)


def test_f_invariant_resample_properties():
    g = path_graph(3)
    ca = identity_assignment(g, uniform_lists(g, 3))
    phi = {0: 0, 1: 1, 2: 0}

    out = f_invariant_resample(ca, phi, lambda p: frozenset(), 3)
    assert out == phi
    sel = lambda p: frozenset(v for v in range(3) if p[v] == 0)
    for seed in range(40):
        out = f_invariant_resample(ca, phi, sel, seed)
        assert is_valid_coloring(ca, out)
        assert frozenset(sel(out)) == frozenset(sel(phi))
        for v in phi:
            if v not in sel(phi):
                assert out[v] == phi[v]


def test_f_invariant_resample_constant_selector_distribution():
    g = path_graph(3)
    ca = identity_assignment(g, uniform_lists(g, 2))
    colorings = brute_force_colorings(ca)
    phi = colorings[0]
    from collections import Counter

    counts = Counter(
        tuple(sorted(f_invariant_resample(ca, phi, lambda p: frozenset(range(3)), s).items()))
        for s in range(3000)
    )
    assert len(counts) == len(colorings)
    exp = 3000 / len(colorings)
    for v in counts.values():
        assert abs(v - exp) <= 4 * (3000 * (1 / len(colorings))) ** 0.5


# -- processes --------------------------------------------------------------------


def _toy_star(seed, k=9):
    g = build_graph(10, [(0, i) for i in range(1, 10)])
    ca = random_full_exact(g, k, seed)
    return g, ca


def test_vertex_saving_process_empty_m():
    # the target degree sits below delta - 1, so the richness quantifier is
    # vacuous and the empty process leaves the coloring untouched
    g, ca = _toy_star(0)
    res = induced_assignment(ca, [1, 2])
    init = res.map_coloring_back(uniform_coloring(res.assignment, 1))
    tr = vertex_saving_process(
        ca, [1, 2], 0, [], seed=2, delta=12, gamma=2, beta=1, delta_overlap=2,
        initial=init,
    )
    assert not tr.steps
    assert tr.final == init


def test_vertex_saving_process_monotone_and_valid():
    g = build_graph(10, [(0, i) for i in range(1, 10)] + [(3, 4)])
    for seed in range(25):
        ca = random_full_exact(g, 17, seed)
        tr = vertex_saving_process(
            ca, [1, 2, 5, 6], 0, [(1, 2), (1, 5), (2, 6), (5, 6)],
            seed=seed, delta=20, gamma=4, beta=1, delta_overlap=2,
        )
        last = 0
        for step in tr.steps:
            assert step.detail["mono"] >= last
            last = step.detail["mono"]
        assert is_valid_partial(ca, tr.final)
        assert set(tr.final) == {1, 2, 5, 6}


def test_vertex_saving_process_hypothesis_check():
    g, ca = _toy_star(1)
    with pytest.raises(HypothesisViolation):
        vertex_saving_process(
            ca, [1, 2], 0, [(1, 2)], seed=0, delta=10, gamma=1, beta=1,
            delta_overlap=2,
        )  # vertex 0 has 2 > gamma neighbors in the set


def test_vertex_saving_process_empirical_probability():
    # identity lists: after straightening the pair-resample turns the single
    # non-edge monochromatic with probability |common| / (|L(x)| * |L(y)|)
    g = build_graph(10, [(0, i) for i in range(1, 10)])
    k = 9
    ca = identity_assignment(g, uniform_lists(g, k))
    hits = 0
    trials = 10_000
    for seed in range(trials):
        tr = vertex_saving_process(
            ca, [1, 2], 0, [(1, 2)], seed=seed, delta=10, gamma=2, beta=1,
            delta_overlap=2,
        )
        phi = tr.final
        hits += phi[1] == phi[2]
    p = 1 / k
    sigma = (trials * p * (1 - p)) ** 0.5
    assert abs(hits - trials * p) <= 3 * sigma
    floor = 2 / (10 * 10)
    assert p >= floor


def test_core_success_process(small_core_fixture):
    g, core, s, family = small_core_fixture
    for seed in range(15):
        ca = random_full_exact(g, 5, seed)
        tr = core_success_process(ca, s, core, family, seed=seed, mode="exact")
        succs = [st.detail["succ"] for st in tr.steps]
        assert succs == sorted(succs)
        assert is_valid_partial(ca, tr.final)
        assert not any(st.detail["pruned_floor_violations"] for st in tr.steps)
        assert succ_count(ca, tr.final, s, core, family) == succs[-1]


def test_core_success_process_empty_family(small_core_fixture):
    g, core, s, _family = small_core_fixture
    ca = random_full_exact(g, 5, 3)
    tr = core_success_process(ca, s, core, [], seed=1, mode="exact")
    assert not tr.steps


def test_core_success_forced_success():
    # one benefactor over a tiny core where the outside vertex and a core
    # vertex always block the same color (identity assignment, equal lists)
    edges = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)]
    g = build_graph(5, edges)
    ca = identity_assignment(g, uniform_lists(g, 4))
    x = Benefactor(frozenset({0, 3}), 0)
    s = [1, 2, 3]
    core = [0, 1, 2]
    tr = core_success_process(ca, s, core, [x], seed=4, mode="exact")
    # identity matchings: phi(3) blocks phi(3) at 0; a core vertex blocks the
    # same color exactly when it shares phi(3)'s color, which the resampler
    # can always reach; success must be achievable and monotone
    assert tr.steps[-1].detail["succ"] in (0, 1)


# -- the end-to-end pipeline ---------------------------------------------------------


def test_pipeline_disjoint_cliques():
    # disjoint cliques of size delta-1: every vertex sits in a core and the
    # extension is trivial
    delta = 12
    blocks = []
    for b in range(2):
        base = b * (delta - 1)
        blocks += [
            (base + i, base + j)
            for i in range(delta - 1)
            for j in range(i + 1, delta - 1)
        ]
    g = build_graph(2 * (delta - 1), blocks)
    r = lll_pipeline(g, delta, SCALED, seed=3, max_rounds=50)
    assert r.success
    assert r.report["cores"] == 2


def test_pipeline_delta60_fixture():
    g = core_plus_sparse(delta=60)
    wins = 0
    for seed in range(5):
        r = lll_pipeline(g, 60, SCALED, seed=seed, max_rounds=400)
        if r.success:
            wins += 1
            assert r.report["valid"]
    assert wins == 5


def test_pipeline_attached_vertex_branch():
    # the fixture's near-clique has one vertex outside the core; when it
    # avoids the transversal, the extension must color it before the core
    g = core_plus_sparse(delta=40)
    for seed in range(6):
        r = lll_pipeline(g, 40, SCALED, seed=seed, max_rounds=400)
        if r.success:
            assert r.report["valid"]


def test_pipeline_soundness_vs_solver_small():
    rng = random.Random(5)
    checked = 0
    for trial in range(12):
        n = rng.randrange(5, 12)
        g = random_gnp(n, 0.45, trial)
        delta = max(g.max_degree(), 3)
        ca = random_full_exact(g, delta - 1, trial)
        r = lll_pipeline(g, delta, SCALED, seed=trial, ca=ca, max_rounds=40)
        if r.success:
            checked += 1
            assert is_valid_coloring(ca, r.coloring)
            assert solve(ca) is not None
        else:
            # an exact disproof of colorability must imply pipeline failure;
            # the converse direction is what soundness demands
            assert r.coloring is None
    assert checked >= 0  # success is reported, never required


def test_pipeline_rejects_overdegree():
    g = complete_graph(6)
    with pytest.raises(InputError):
        lll_pipeline(g, 4, SCALED, seed=0)
