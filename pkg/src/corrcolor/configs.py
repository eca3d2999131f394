"""Constructive colorers for the reducible configurations, plus verifiers.

Each colorer follows an explicit excess strategy: pick colors that block
nothing at a chosen target, raise the target's excess with a non-adjacent
pair, then finish greedily in an order that keeps every vertex extendable.
Hypothesis failures raise HypothesisViolation up front; a failure of an
internal step after the hypotheses held is a defect and raises
InternalColorerError.

All colorers first trim the assignment to the exact list sizes they argue
about (a coloring of the trimmed assignment is a coloring of the original).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

from .assignment import (
    CorrespondenceAssignment,
    enumerate_full_exact,
    random_exact_assignment,
    random_full_exact,
    residual,
    residual_list,
    straighten_tree,
    trim_to_sizes,
)
from .coloring import (
    check_extension_order,
    excess,
    greedy_extend,
    is_valid_coloring,
    pair_extend_for_excess,
)
from .errors import HypothesisViolation, InputError, InternalColorerError
from .graph import (
    Graph,
    bits,
    build_graph,
    clique_number,
    complete_graph,
    complete_join,
    cycle_graph,
    disjoint_union,
    empty_graph,
    forbidden_quadruple_scan,
    maximum_clique,
    path_graph,
)


class ConfigurationKind(Enum):
    KT_JOIN_K3BAR = "kt-join-k3bar"
    KT_JOIN_P4 = "kt-join-p4"
    KT_JOIN_2K2 = "kt-join-2k2"
    KT_JOIN_C4 = "kt-join-c4"
    K1_JOIN_C4 = "k1-join-c4"
    UNIVERSAL6 = "universal6"
    DENSE_COMPLEMENT = "dense-complement"
    THREE_NONEDGE_MATCHING = "three-nonedge-matching"
    NEAR_CLIQUE_JOIN = "near-clique-join"
    VAMP33 = "vamp33"


# -- formula operations ---------------------------------------------------------


def nonedge_lower_bound(n: float, omega: float) -> float:
    """Guaranteed non-edge count of an n-vertex neighborhood-like graph in
    which no universal-apex extension is list-surplus colorable."""
    return (n - omega - 1) * (n + omega - 14) / 4


def nonedge_lower_bound_max_degree(delta: float, omega: float) -> float:
    """Degree-form variant of `nonedge_lower_bound`."""
    return (delta - omega - 2) * (delta + omega - 15) / 4


# -- small helpers --------------------------------------------------------------


def _require(cond: bool, msg: str):
    if not cond:
        raise HypothesisViolation(msg)


def _step(cond: bool, msg: str):
    if not cond:
        raise InternalColorerError(msg)


def _exact_minus_one(ca: CorrespondenceAssignment) -> CorrespondenceAssignment:
    g = ca.graph
    sizes = [g.degree(v) - 1 for v in g.vertices()]
    for v, s in enumerate(sizes):
        _require(s >= 1, f"vertex {v} has degree {g.degree(v)} < 2; no usable list")
        _require(len(ca.lists[v]) >= s, f"list of {v} smaller than deg-1")
    return trim_to_sizes(ca, sizes)


def greedy_partial(
    ca: CorrespondenceAssignment, psi: Mapping[int, int], order: Sequence[int]
) -> dict[int, int]:
    """Color exactly the vertices of `order`, lowest unblocked color first."""
    phi = dict(psi)
    for v in order:
        options = residual_list(ca, phi, v)
        _step(bool(options), f"greedy step stuck at vertex {v}")
        phi[v] = options[0]
    return phi


def _finish_greedy(
    ca: CorrespondenceAssignment, psi: Mapping[int, int], order: Sequence[int]
) -> dict[int, int]:
    _step(
        check_extension_order(ca, psi, order),
        "extension order violates the greedy hypothesis",
    )
    phi = greedy_extend(ca, psi, order)
    _step(phi is not None, "greedy extension failed under a valid order")
    return phi


def _unblocking_colors(
    ca: CorrespondenceAssignment, psi: Mapping[int, int], x: int, target: int
) -> list[int]:
    """Colors in L_psi(x) that block nothing in L_psi(target)."""
    lt = set(residual_list(ca, psi, target))
    out = []
    for c in residual_list(ca, psi, x):
        b = ca.blocked(x, c, target)
        if b is None or b not in lt:
            out.append(c)
    return out


# -- join colorers ---------------------------------------------------------------


def _derive_h_roles(g: Graph, h: Sequence[int], kind: ConfigurationKind) -> list[int]:
    """Order the non-clique side structurally: (a, b, c[, d]) with deg(a)
    minimal in the induced part and b non-adjacent to d where applicable."""
    h = sorted(h)
    sub, old = g.induced(h)
    deg = {old[v]: sub.degree(v) for v in sub.vertices()}
    if kind == ConfigurationKind.KT_JOIN_K3BAR:
        _require(sub.m == 0 and sub.n == 3, "the join part must induce three pairwise non-adjacent vertices")
        return list(h)
    if kind == ConfigurationKind.KT_JOIN_2K2:
        _require(sub.n == 4 and sub.m == 2 and set(deg.values()) == {1}, "the join part must induce two disjoint edges")
        a = h[0]
        b = next(u for u in h if g.has_edge(a, u))
        c, d = sorted(set(h) - {a, b})
        return [a, b, c, d]
    if kind == ConfigurationKind.KT_JOIN_P4:
        _require(sub.n == 4 and sub.m == 3 and sorted(deg.values()) == [1, 1, 2, 2], "the join part must induce a path on four vertices")
        ends = [u for u in h if deg[u] == 1]
        a = min(ends)
        b = next(u for u in h if g.has_edge(a, u))
        c = next(u for u in h if u not in (a, b) and g.has_edge(b, u))
        d = next(u for u in h if u not in (a, b, c))
        return [a, b, c, d]
    if kind == ConfigurationKind.KT_JOIN_C4:
        _require(sub.n == 4 and sub.m == 4 and set(deg.values()) == {2}, "the join part must induce a four-cycle")
        y1 = h[0]
        nbrs = [u for u in h if g.has_edge(y1, u)]
        y2 = min(nbrs)
        y3 = next(u for u in h if u != y1 and not g.has_edge(y1, u))
        y4 = max(nbrs)
        return [y1, y2, y3, y4]
    raise InputError(f"no role derivation for {kind}")


def _check_join_layout(g: Graph, xs: Sequence[int], hs: Sequence[int]):
    _require(g.n == len(xs) + len(hs), "layout must cover all vertices")
    _require(g.is_clique(xs), "the x-part must induce a clique")
    for x in xs:
        for y in hs:
            _require(g.has_edge(x, y), f"missing join edge ({x},{y})")


def _color_kt_join_k3bar(ca: CorrespondenceAssignment, xs, hs) -> dict[int, int]:
    g = ca.graph
    t = len(xs)
    _require(t >= 6, f"t >= 6 required, got {t}")
    a, b, c = _derive_h_roles(g, hs, ConfigurationKind.KT_JOIN_K3BAR)
    x1, x2, x3 = xs[0], xs[1], xs[2]
    cand1 = _unblocking_colors(ca, {}, x1, a)
    cand2 = _unblocking_colors(ca, {}, x2, a)
    _step(len(cand1) >= 2 and len(cand2) >= 2, "fewer than two unblocking colors at x1/x2")
    alpha1 = cand1[0]
    blocked_at_x2 = ca.blocked(x1, alpha1, x2)
    alpha2 = next(cc for cc in cand2 if cc != blocked_at_x2)
    psi1 = {x1: alpha1, x2: alpha2}
    _step(excess(ca, psi1, a) >= 1, "target a did not reach excess 1")
    psi = pair_extend_for_excess(ca, psi1, x3, b, c, -1)
    order = [x for x in xs[3:]] + [x3, a]
    return _finish_greedy(ca, psi, order)


def _color_kt_join_p4_or_2k2(ca, xs, hs, kind) -> dict[int, int]:
    g = ca.graph
    t = len(xs)
    _require(t >= 5, f"t >= 5 required, got {t}")
    a, b, c, d = _derive_h_roles(g, hs, kind)
    x1, x2, x3 = xs[0], xs[1], xs[2]
    cand1 = _unblocking_colors(ca, {}, x1, a)
    cand2 = _unblocking_colors(ca, {}, x2, a)
    _step(len(cand1) >= 2 and len(cand2) >= 2, "fewer than two unblocking colors at x1/x2")
    alpha1 = cand1[0]
    blocked_at_x2 = ca.blocked(x1, alpha1, x2)
    alpha2 = next(cc for cc in cand2 if cc != blocked_at_x2)
    psi1 = {x1: alpha1, x2: alpha2}
    _step(excess(ca, psi1, a) >= 1, "target a did not reach excess 1")
    psi = pair_extend_for_excess(ca, psi1, x3, b, d, -1)
    order = [c] + list(xs[3:]) + [x3, a]
    return _finish_greedy(ca, psi, order)


def _color_k1_join_c4(ca: CorrespondenceAssignment, x: int, rim: Sequence[int]) -> dict[int, int]:
    """The wheel-like join of one apex with a four-cycle, exact 3 lists."""
    g = ca.graph
    for v in g.vertices():
        _require(len(ca.lists[v]) == 3, "exact 3-lists required")
    a, b, c, d = _derive_h_roles(g, rim, ConfigurationKind.KT_JOIN_C4)
    # straighten the rim path a-b-c-d; all rim lists land in gamma = L(a)
    gamma = ca.lists[a]
    ca, system = straighten_tree(ca, [(a, b), (b, c), (c, d)], a, gamma)
    inverse = system.inverse()
    phi = _color_k1_join_c4_straight(ca, x, (a, b, c, d))
    return inverse.apply_to_coloring(phi)


def _color_k1_join_c4_straight(
    ca: CorrespondenceAssignment, x: int, roles: tuple[int, int, int, int]
) -> dict[int, int]:
    g = ca.graph
    a, b, c, d = roles
    gamma = ca.lists[a]
    g1, g2_, g3_ = gamma
    # choose the labels so that (a: g1, d: g2) is not a conflicting pair
    if ca.blocked(a, g1, d) == g2_:
        g2, g3 = g3_, g2_
    else:
        g2, g3 = g2_, g3_
    _step(ca.blocked(a, g1, d) != g2, "label choice failed")
    # an apex color that blocks neither g1 nor g2 at a
    alpha = next(
        (cc for cc in ca.lists[x] if ca.blocked(x, cc, a) not in (g1, g2)), None
    )
    _step(alpha is not None, "no apex color avoiding two labels")
    psi = {x: alpha}
    cyc = [a, b, c, d]

    def rim_nbrs(u):
        return [w for w in cyc if g.has_edge(u, w)]

    for u in cyc:
        if len(residual_list(ca, psi, u)) == 3:
            others = sorted(set(cyc) - {u}, key=lambda w: (-_cycle_dist(cyc, u, w), w))
            return _finish_greedy(ca, psi, others + [u])
    lists = {u: residual_list(ca, psi, u) for u in cyc}
    _step(all(len(l) == 2 for l in lists.values()), "rim lists not all of size 2")
    for u in cyc:
        for w in rim_nbrs(u):
            lw = set(lists[w])
            for beta in lists[u]:
                bb = ca.blocked(u, beta, w)
                if bb is None or bb not in lw:
                    psi2 = dict(psi)
                    psi2[u] = beta
                    rest = [z for z in cyc if z != u]
                    # the remaining rim is a path; color it toward w
                    path = _rim_path_toward(g, rest, w)
                    return _finish_greedy(ca, psi2, path)
    # fully pinned case: all rim lists equal {g1, g2}, alternate around
    _step(all(set(lists[u]) == {g1, g2} for u in cyc), "pinned rim lists disagree")
    phi = dict(psi)
    phi[a] = phi[c] = g1
    phi[b] = phi[d] = g2
    return phi


def _cycle_dist(cyc, u, w):
    i, j = cyc.index(u), cyc.index(w)
    d = abs(i - j)
    return min(d, 4 - d)


def _rim_path_toward(g: Graph, rest: Sequence[int], w: int) -> list[int]:
    """Order the three remaining rim vertices as a path ending at w."""
    others = [z for z in rest if z != w]
    # rest induces a path with w at one end; start from the far end
    far = next(z for z in others if not g.has_edge(z, w))
    mid = next(z for z in others if z != far)
    return [far, mid, w]


def _color_kt_join_c4(ca: CorrespondenceAssignment, xs, hs) -> dict[int, int]:
    g = ca.graph
    t = len(xs)
    _require(t >= 5, f"t >= 5 required, got {t}")
    ys = _derive_h_roles(g, hs, ConfigurationKind.KT_JOIN_C4)
    # straighten the star centered at x1 over the clique
    gamma = ca.lists[xs[0]]
    ca, system = straighten_tree(ca, [(xs[0], x) for x in xs[1:]], xs[0], gamma)
    inverse = system.inverse()
    phi = _color_kt_join_c4_straight(ca, xs, ys)
    return inverse.apply_to_coloring(phi)


def _color_kt_join_c4_straight(ca: CorrespondenceAssignment, xs, ys) -> dict[int, int]:
    g = ca.graph
    t = len(xs)
    alpha = {}
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            cand = _unblocking_colors(ca, {}, x, y)
            _step(bool(cand), "no unblocking color from a clique vertex")
            alpha[(i, j)] = cand[0]
    # branch 1: two clique vertices whose unblocking colors are compatible
    for j in range(4):
        for i1 in range(t):
            for i2 in range(t):
                if i1 == i2:
                    continue
                a1, a2 = alpha[(i1, j)], alpha[(i2, j)]
                if ca.blocked(xs[i1], a1, xs[i2]) != a2:
                    y = ys[j]
                    psi1 = {xs[i1]: a1, xs[i2]: a2}
                    _step(excess(ca, psi1, y) >= 1, "target rim vertex missed excess 1")
                    u, u2 = ys[(j + 1) % 4], ys[(j + 3) % 4]
                    x3 = next(x for x in xs if x not in psi1)
                    psi = pair_extend_for_excess(ca, psi1, x3, u, u2, -1)
                    order = (
                        [ys[(j + 2) % 4]]
                        + [x for x in xs if x not in psi1 and x != x3]
                        + [x3, y]
                    )
                    return _finish_greedy(ca, psi, order)
    # branch 2: per rim vertex all clique colors agree; use them all up
    agreed = []
    for j in range(4):
        vals = {alpha[(i, j)] for i in range(t)}
        _step(len(vals) == 1, "straight star should force agreement")
        agreed.append(vals.pop())
    distinct = sorted(set(agreed))
    psi: dict[int, int] = {}
    for x, cval in zip(xs, distinct):
        psi[x] = cval
    for x in xs[len(distinct) : t - 1]:
        options = [cc for cc in residual_list(ca, psi, x)]
        _step(bool(options), "greedy clique phase stuck")
        psi[x] = options[0]
    xt = xs[t - 1]
    res = residual(ca, psi)
    rca = res.assignment
    new = {o: i for i, o in enumerate(res.old_of_new)}
    _step(all(len(rca.lists[new[v]]) >= 3 for v in [xt] + ys), "residual lists fell below 3")
    rca = trim_to_sizes(rca, [3] * rca.graph.n)
    sub_phi = _color_k1_join_c4(rca, new[xt], [new[y] for y in ys])
    phi = dict(psi)
    phi.update(res.map_coloring_back(sub_phi))
    return phi


# -- apex / universal-vertex colorers ----------------------------------------------


def _universal_vertices(g: Graph) -> list[int]:
    return [v for v in g.vertices() if g.degree(v) == g.n - 1]


def _color_universal6(ca: CorrespondenceAssignment, budget=None) -> dict[int, int]:
    g = ca.graph
    us = _universal_vertices(g)
    _require(len(us) >= 6, f"needs >= 6 universal vertices, found {len(us)}")
    _require(clique_number(g, budget) <= g.n - 2, "clique number must be at most n-2")
    witness = forbidden_quadruple_scan(g)
    _step(witness is not None, "no induced witness despite omega <= n-2")
    s = list(witness.vertices)
    rest = [v for v in g.vertices() if v not in us and v not in s]
    for v in rest:
        _require(
            len(ca.lists[v]) >= g.degree(v) - 1,
            "deg-minus-one list sizes required",
        )
    psi = greedy_partial(ca, {}, rest)
    res = residual(ca, psi)
    rca = res.assignment
    new = {o: i for i, o in enumerate(res.old_of_new)}
    rca = _exact_minus_one(rca)
    xs = [new[u] for u in us]
    hs = [new[w] for w in s]
    dispatch = {
        "K3bar": ConfigurationKind.KT_JOIN_K3BAR,
        "P4": ConfigurationKind.KT_JOIN_P4,
        "2K2": ConfigurationKind.KT_JOIN_2K2,
        "C4": ConfigurationKind.KT_JOIN_C4,
    }
    sub_kind = dispatch[witness.kind]
    if sub_kind == ConfigurationKind.KT_JOIN_K3BAR:
        sub_phi = _color_kt_join_k3bar(rca, xs, hs)
    elif sub_kind == ConfigurationKind.KT_JOIN_C4:
        sub_phi = _color_kt_join_c4(rca, xs, hs)
    else:
        sub_phi = _color_kt_join_p4_or_2k2(rca, xs, hs, sub_kind)
    phi = dict(psi)
    phi.update(res.map_coloring_back(sub_phi))
    return phi


def _color_dense_complement(ca: CorrespondenceAssignment, budget=None) -> dict[int, int]:
    g = ca.graph
    n = g.n
    kap = maximum_clique(g, budget)
    a = n - len(kap)
    _require(a >= 2, f"n - omega = {a}, need at least 2")
    _require(
        2 * g.min_degree() >= n + a + 4,
        "minimum degree below (n+a+4)/2",
    )
    outside = [v for v in g.vertices() if v not in set(kap)]
    u, v = outside[0], outside[1]
    r = outside[2:]
    for x in g.vertices():
        _step(len(ca.lists[x]) > len(r), "list size chain broke: |L(x)| <= |R|")
    psi = greedy_partial(ca, {}, r)
    res = residual(ca, psi)
    rca = _exact_minus_one(res.assignment)
    sub_phi = _color_universal6(rca, budget)
    phi = dict(psi)
    phi.update(res.map_coloring_back(sub_phi))
    return phi


def _max_nonedge_matching(g: Graph, cap: int = 3) -> list[tuple[int, int]]:
    """A maximum matching of non-edges, stopping early at `cap` pairs."""
    nonedges = [
        (u, v)
        for u in g.vertices()
        for v in range(u + 1, g.n)
        if not g.has_edge(u, v)
    ]
    best: list[tuple[int, int]] = []

    def rec(i: int, used: set, cur: list):
        nonlocal best
        if len(cur) > len(best):
            best = list(cur)
        if len(best) >= cap or i >= len(nonedges):
            return
        for j in range(i, len(nonedges)):
            x, y = nonedges[j]
            if x in used or y in used:
                continue
            cur.append((x, y))
            rec(j + 1, used | {x, y}, cur)
            cur.pop()
            if len(best) >= cap:
                return

    rec(0, set(), [])
    return best


def _color_three_nonedge(ca: CorrespondenceAssignment, apex: Optional[int] = None) -> dict[int, int]:
    g = ca.graph
    if apex is None:
        us = _universal_vertices(g)
        _require(bool(us), "no universal apex vertex")
        apex = us[0]
    _require(g.degree(apex) == g.n - 1, "apex must be universal")
    bverts = [v for v in g.vertices() if v != apex]
    nb = len(bverts)
    bdeg = {v: g.degree(v) - 1 for v in bverts}
    _require(2 * min(bdeg.values()) >= nb + 5, "base minimum degree below (|B|+5)/2")
    matching = _max_nonedge_matching_within(g, bverts)
    _require(len(matching) >= 3, "complement of the base has no matching of size 3")
    (x, x2), (y, y2), (z, z2) = matching[:3]
    # a common neighbor of x,x2 in the base, clear of the other four
    forb = {y, y2, z, z2}
    w = next(
        (
            t
            for t in bverts
            if t not in forb and t not in (x, x2) and g.has_edge(t, x) and g.has_edge(t, x2)
        ),
        None,
    )
    _step(w is not None, "no common neighbor for the first non-edge")
    psi1 = pair_extend_for_excess(ca, {}, w, x, x2, -1)
    psi2 = pair_extend_for_excess(ca, psi1, apex, y, y2, -1)
    psi = pair_extend_for_excess(ca, psi2, apex, z, z2, 0)
    bprime = [t for t in bverts if t not in {x, x2, y, y2, z, z2}]
    sub, old = g.induced(bprime)
    dist = _bfs_dist(sub, old.index(w))
    _step(all(d >= 0 for d in dist), "base minus the six matched vertices is disconnected")
    ordered = sorted(bprime, key=lambda t: (-dist[old.index(t)], t))
    return _finish_greedy(ca, psi, ordered + [apex])


def _max_nonedge_matching_within(g: Graph, verts: Sequence[int]) -> list[tuple[int, int]]:
    sub, old = g.induced(verts)
    pairs = _max_nonedge_matching(sub)
    return [(old[u], old[v]) for u, v in pairs]


def _bfs_dist(g: Graph, src: int) -> list[int]:
    dist = [-1] * g.n
    dist[src] = 0
    queue = [src]
    i = 0
    while i < len(queue):
        u = queue[i]
        i += 1
        for w in bits(g.adj[u]):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _color_near_clique_join(ca: CorrespondenceAssignment, budget=None) -> dict[int, int]:
    g = ca.graph
    us = _universal_vertices(g)
    _require(bool(us), "no universal apex vertex")
    apex = us[0]
    bverts = [v for v in g.vertices() if v != apex]
    nb = len(bverts)
    bdeg = {v: g.degree(v) - 1 for v in bverts}
    _require(2 * min(bdeg.values()) >= nb + 7, "base minimum degree below (|B|+7)/2")
    sub, _old = g.induced(bverts)
    _require(clique_number(sub, budget) <= nb - 2, "base clique number must be at most |B|-2")
    mu = len(_max_nonedge_matching(sub))
    if mu >= 3:
        return _color_three_nonedge(ca, apex)
    return _color_dense_complement(ca, budget)


def _color_vamp33(
    ca: CorrespondenceAssignment, u1: Optional[int] = None, u2: Optional[int] = None
) -> dict[int, int]:
    g = ca.graph
    if u1 is None or u2 is None:
        u1, u2 = _find_vamp_pair(g)
    cset = [v for v in g.vertices() if v not in (u1, u2)]
    _require(g.is_clique(cset), "removing u1,u2 must leave a clique")
    nbs1 = set(g.neighbors(u1)) & set(cset)
    nbs2 = set(g.neighbors(u2)) & set(cset)
    us1 = sorted(nbs1 - nbs2)
    us2 = sorted(nbs2 - nbs1)
    common = sorted(nbs1 & nbs2)
    _require(len(us1) >= 3 and len(us2) >= 3, "private neighbor sets must have size >= 3")
    _require(len(nbs1) >= 5, "u1 needs at least five neighbors in the clique")
    _require(bool(common), "u1 and u2 need a common neighbor in the clique")
    v = common[0]
    x1, x2, x3 = us1[0], us1[1], us1[2]
    cand1 = _unblocking_colors(ca, {}, x1, u1)
    cand2 = _unblocking_colors(ca, {}, x2, u1)
    _step(len(cand1) >= 2 and len(cand2) >= 2, "fewer than two unblocking colors at x1/x2")
    a1 = cand1[0]
    blocked2 = ca.blocked(x1, a1, x2)
    a2 = next(cc for cc in cand2 if cc != blocked2)
    psi1 = {x1: a1, x2: a2}
    _step(excess(ca, psi1, u1) >= 1, "u1 did not reach excess 1")
    psi = pair_extend_for_excess(ca, psi1, v, x3, u2, -1)
    y = next(t for t in sorted(nbs1) if t not in (v, x1, x2, x3))
    rest = [t for t in cset if t not in {x1, x2, x3, v, y}]
    return _finish_greedy(ca, psi, rest + [y, v, u1])


def _find_vamp_pair(g: Graph) -> tuple[int, int]:
    for u1 in g.vertices():
        for u2 in g.vertices():
            if u1 == u2:
                continue
            rest = [v for v in g.vertices() if v not in (u1, u2)]
            if not g.is_clique(rest):
                continue
            nbs1 = set(g.neighbors(u1)) & set(rest)
            nbs2 = set(g.neighbors(u2)) & set(rest)
            if (
                len(nbs1 - nbs2) >= 3
                and len(nbs2 - nbs1) >= 3
                and len(nbs1) >= 5
                and nbs1 & nbs2
            ):
                return u1, u2
    raise HypothesisViolation("no vertex pair matches the configuration")


# -- public entry points -----------------------------------------------------------


def construct_configuration_coloring(
    kind: ConfigurationKind,
    ca: CorrespondenceAssignment,
    layout: Optional[Mapping[str, Sequence[int]]] = None,
    budget: Optional[int] = None,
) -> dict[int, int]:
    """Run the constructive colorer for a configuration kind.

    `layout` names the role vertices where the kind needs them (join kinds
    want "x" and "h"; the apex kinds derive everything structurally).  The
    returned coloring is always validated before being handed back.
    """
    g = ca.graph
    layout = dict(layout or {})
    if kind in (
        ConfigurationKind.KT_JOIN_K3BAR,
        ConfigurationKind.KT_JOIN_P4,
        ConfigurationKind.KT_JOIN_2K2,
        ConfigurationKind.KT_JOIN_C4,
    ):
        hsize = 3 if kind == ConfigurationKind.KT_JOIN_K3BAR else 4
        xs = sorted(layout.get("x", range(g.n - hsize)))
        hs = sorted(layout.get("h", range(g.n - hsize, g.n)))
        _check_join_layout(g, xs, hs)
        cca = _exact_minus_one(ca)
        if kind == ConfigurationKind.KT_JOIN_K3BAR:
            phi = _color_kt_join_k3bar(cca, xs, hs)
        elif kind == ConfigurationKind.KT_JOIN_C4:
            phi = _color_kt_join_c4(cca, xs, hs)
        else:
            phi = _color_kt_join_p4_or_2k2(cca, xs, hs, kind)
    elif kind == ConfigurationKind.K1_JOIN_C4:
        apex = layout.get("x", [_universal_vertices(g)[0] if _universal_vertices(g) else 0])[0]
        rim = sorted(layout.get("h", [v for v in g.vertices() if v != apex]))
        _require(g.degree(apex) == 4 and g.n == 5, "expects one apex over a four-cycle")
        for v in g.vertices():
            _require(len(ca.lists[v]) >= 3, "3-lists required")
        phi = _color_k1_join_c4(trim_to_sizes(ca, [3] * g.n), apex, rim)
    elif kind == ConfigurationKind.UNIVERSAL6:
        phi = _color_universal6(_exact_minus_one(ca), budget)
    elif kind == ConfigurationKind.DENSE_COMPLEMENT:
        phi = _color_dense_complement(_exact_minus_one(ca), budget)
    elif kind == ConfigurationKind.THREE_NONEDGE_MATCHING:
        apex = layout.get("apex", [None])[0]
        phi = _color_three_nonedge(_exact_minus_one(ca), apex)
    elif kind == ConfigurationKind.NEAR_CLIQUE_JOIN:
        phi = _color_near_clique_join(_exact_minus_one(ca), budget)
    elif kind == ConfigurationKind.VAMP33:
        u1 = layout.get("u1", [None])[0]
        u2 = layout.get("u2", [None])[0]
        phi = _color_vamp33(_exact_minus_one(ca), u1, u2)
    else:
        raise InputError(f"unknown configuration kind {kind}")
    if not is_valid_coloring(ca, phi):
        raise InternalColorerError("constructed coloring failed validation")
    return phi


# -- instance builders and the verification harness ----------------------------------


def build_configuration_instance(
    kind: ConfigurationKind, t: Optional[int] = None, a: Optional[int] = None
) -> tuple[Graph, dict[str, list[int]]]:
    """A concrete graph (plus role layout) satisfying the kind's hypotheses
    at the given parameters."""
    if kind == ConfigurationKind.KT_JOIN_K3BAR:
        t = 6 if t is None else t
        if t < 6:
            raise HypothesisViolation("t >= 6 required for the independent-triple join")
        g = complete_join(complete_graph(t), empty_graph(3))
        return g, {"x": list(range(t)), "h": list(range(t, t + 3))}
    if kind in (ConfigurationKind.KT_JOIN_P4, ConfigurationKind.KT_JOIN_2K2, ConfigurationKind.KT_JOIN_C4):
        t = 5 if t is None else t
        if t < 5:
            raise HypothesisViolation("t >= 5 required")
        part = {
            ConfigurationKind.KT_JOIN_P4: path_graph(4),
            ConfigurationKind.KT_JOIN_2K2: build_graph(4, [(0, 1), (2, 3)]),
            ConfigurationKind.KT_JOIN_C4: cycle_graph(4),
        }[kind]
        g = complete_join(complete_graph(t), part)
        return g, {"x": list(range(t)), "h": list(range(t, t + 4))}
    if kind == ConfigurationKind.K1_JOIN_C4:
        g = complete_join(complete_graph(1), cycle_graph(4))
        return g, {"x": [0], "h": [1, 2, 3, 4]}
    if kind == ConfigurationKind.UNIVERSAL6:
        t = 6 if t is None else t
        g = complete_join(complete_graph(t), disjoint_union(complete_graph(2), complete_graph(2)))
        return g, {}
    if kind == ConfigurationKind.DENSE_COMPLEMENT:
        a = 2 if a is None else a
        if a < 2:
            raise HypothesisViolation("a >= 2 required")
        m = 2 * a + 6
        edges = list(complete_graph(m).edges())
        # each outside vertex misses exactly one distinct clique vertex
        for i in range(a):
            b = m + i
            for j in range(m):
                if j != i:
                    edges.append((j, b))
        g = build_graph(m + a, edges)
        return g, {}
    if kind == ConfigurationKind.THREE_NONEDGE_MATCHING:
        m = 12
        base = [
            e
            for e in complete_graph(m).edges()
            if e not in [(0, 1), (2, 3), (4, 5)]
        ]
        g = complete_join(build_graph(m, base), complete_graph(1))
        return g, {"apex": [m]}
    if kind == ConfigurationKind.NEAR_CLIQUE_JOIN:
        m = 12
        base = [e for e in complete_graph(m).edges() if e not in [(0, 1), (2, 3)]]
        g = complete_join(build_graph(m, base), complete_graph(1))
        return g, {}
    if kind == ConfigurationKind.VAMP33:
        edges = list(complete_graph(8).edges())
        edges += [(8, w) for w in [0, 1, 2, 3, 7]]
        edges += [(9, w) for w in [4, 5, 6, 7]]
        g = build_graph(10, edges)
        return g, {"u1": [8], "u2": [9]}
    raise InputError(f"unknown configuration kind {kind}")


@dataclass
class ConfigReport:
    """Outcome of a verification run over one configuration kind."""

    kind: str
    mode: str
    trials: int = 0
    successes: int = 0
    failures: list[str] = field(default_factory=list)  # serialized assignments

    @property
    def ok(self) -> bool:
        return self.trials > 0 and self.successes == self.trials

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "trials": self.trials,
            "successes": self.successes,
            "failures": self.failures,
        }


def verify_configuration(
    kind: ConfigurationKind,
    t: Optional[int] = None,
    a: Optional[int] = None,
    mode: str = "sampled",
    trials: int = 1000,
    seed: int = 0,
    budget: Optional[int] = None,
) -> ConfigReport:
    """Exercise a colorer over random (or exhaustively enumerated) exact
    assignments; the success criterion is coloring validity on every trial."""
    from .io import serialize_assignment

    g, layout = build_configuration_instance(kind, t, a)
    report = ConfigReport(kind=kind.value, mode=mode)
    if mode == "exhaustive":
        if kind != ConfigurationKind.K1_JOIN_C4:
            raise InputError("exhaustive verification is only budgeted for the apex-over-four-cycle kind")
        for ca in enumerate_full_exact(g, 3, budget=10**6):
            report.trials += 1
            try:
                construct_configuration_coloring(kind, ca, layout, budget)
                report.successes += 1
            except Exception:
                report.failures.append(serialize_assignment(ca))
        return report
    if mode != "sampled":
        raise InputError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    for _ in range(trials):
        s = rng.randrange(1 << 30)
        if kind == ConfigurationKind.K1_JOIN_C4:
            ca = random_full_exact(g, 3, s)
        else:
            sizes = [g.degree(v) - 1 for v in g.vertices()]
            ca = random_exact_assignment(g, sizes, s)
        report.trials += 1
        try:
            construct_configuration_coloring(kind, ca, layout, budget)
            report.successes += 1
        except Exception:
            report.failures.append(serialize_assignment(ca))
    return report
