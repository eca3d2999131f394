"""Independent naive reimplementations used as structural oracles in tests.

Deliberately written with different data structures (plain sets, no
bitmasks, pivotless where affordable) so agreement with the production code
is meaningful.
"""

from __future__ import annotations

from itertools import combinations

from corrcolor.graph import Graph


def naive_maximal_cliques(g: Graph) -> list[set[int]]:
    """Set-based Bron-Kerbosch (with a simple pivot for density)."""
    adj = {v: set(g.neighbors(v)) for v in g.vertices()}
    out: list[set[int]] = []

    def bk(r: set, p: set, x: set):
        if not p and not x:
            out.append(r)
            return
        pivot = max(p | x, key=lambda u: len(p & adj[u]))
        for v in list(p - adj[pivot]):
            bk(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    bk(set(), set(g.vertices()), set())
    return out


def naive_nonedge_count(g: Graph, v: int) -> int:
    nb = list(g.neighbors(v))
    return sum(1 for a, b in combinations(nb, 2) if not g.has_edge(a, b))


def naive_sparse_dense(g: Graph, delta: int, sigma: float):
    """Independent route to the decomposition's dense parts and sparse set."""
    r = 3 * delta / 4 + 1
    system = [frozenset(c) for c in naive_maximal_cliques(g) if len(c) >= r]
    # merge intersecting cliques transitively
    pools = [set(c) for c in system]
    changed = True
    while changed:
        changed = False
        for i in range(len(pools)):
            for j in range(i + 1, len(pools)):
                if pools[i] and pools[j] and pools[i] & pools[j]:
                    pools[i] |= pools[j]
                    pools[j] = set()
                    changed = True
    unions = [p for p in pools if p]
    dense = []
    for union in unions:
        if any(naive_nonedge_count(g, v) < sigma for v in union):
            dense.append(tuple(sorted(union)))
    dense.sort()
    covered = {v for d in dense for v in d}
    sparse = [v for v in g.vertices() if v not in covered]
    return dense, sparse
