"""Simple undirected graphs with bitset adjacency, plus clique machinery.

Vertices are dense integers 0..n-1; vertex sets travel as sorted tuples.
Graphs are immutable after construction and safe to share between threads;
clique searches are single-threaded per call but reentrant.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BudgetExceededError, InputError

#: Default cap on search nodes for exact clique routines.  Overridable per
#: call and via the CORRCOLOR_BUDGET environment variable.
DEFAULT_BUDGET = 20_000_000


def effective_budget(budget: Optional[int]) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("CORRCOLOR_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"CORRCOLOR_BUDGET is not an integer: {env!r}")
    return DEFAULT_BUDGET


class Graph:
    """Immutable simple graph. `adj[v]` is the neighbor bitmask of v."""

    __slots__ = ("n", "adj", "_m")

    def __init__(self, n: int, adj: Sequence[int]):
        self.n = n
        self.adj = tuple(adj)
        self._m = sum(m.bit_count() for m in self.adj) // 2

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise InputError("vertex count must be non-negative")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    # -- queries -----------------------------------------------------------

    @property
    def m(self) -> int:
        return self._m

    def vertices(self) -> range:
        return range(self.n)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(bits(self.adj[v]))

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1) << (u + 1)
            for v in bits(rest):
                yield (u, v)

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(self.degree(v) for v in range(self.n)))

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    def min_degree(self) -> int:
        return min((self.degree(v) for v in range(self.n)), default=0)

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        for i, u in enumerate(vs):
            for v in vs[i + 1 :]:
                if not self.has_edge(u, v):
                    return False
        return True

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [full & ~self.adj[v] & ~(1 << v) for v in range(self.n)])

    def induced(self, keep: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph on `keep`; returns (graph, old_of_new)."""
        old_of_new = tuple(sorted(set(keep)))
        new_of_old = {o: i for i, o in enumerate(old_of_new)}
        adj = [0] * len(old_of_new)
        for i, o in enumerate(old_of_new):
            for w in bits(self.adj[o]):
                j = new_of_old.get(w)
                if j is not None:
                    adj[i] |= 1 << j
        return Graph(len(old_of_new), adj), old_of_new

    def connected_components(self) -> list[list[int]]:
        seen = 0
        comps = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = []
            stack = [s]
            seen |= 1 << s
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in bits(self.adj[v] & ~seen):
                    seen |= 1 << w
                    stack.append(w)
            comps.append(sorted(comp))
        return comps

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


# -- constructions ----------------------------------------------------------


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Graph with exactly the given edges; duplicates collapse."""
    return Graph.from_edges(n, edges)


def empty_graph(n: int) -> Graph:
    return Graph(n, [0] * n)


def complete_graph(n: int) -> Graph:
    return build_graph(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("cycles need at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(10, outer + spokes + inner)


def strong_product(g: Graph, h: Graph) -> Graph:
    """Strong product: (a,b)~(c,d) iff each coordinate is equal or adjacent."""
    n = g.n * h.n

    def idx(a: int, b: int) -> int:
        return a * h.n + b

    edges = []
    for a in range(g.n):
        for b in range(h.n):
            for c in range(a, g.n):
                for d in range(h.n):
                    if (c, d) <= (a, b):
                        continue
                    ga = a == c or g.has_edge(a, c)
                    hb = b == d or h.has_edge(b, d)
                    if ga and hb:
                        edges.append((idx(a, b), idx(c, d)))
    return build_graph(n, edges)


def complete_join(f: Graph, g: Graph) -> Graph:
    """Disjoint union of f and g plus all cross edges; f occupies 0..f.n-1."""
    n = f.n + g.n
    edges = list(f.edges())
    edges += [(u + f.n, v + f.n) for u, v in g.edges()]
    edges += [(u, v + f.n) for u in range(f.n) for v in range(g.n)]
    return build_graph(n, edges)


def disjoint_union(f: Graph, g: Graph) -> Graph:
    edges = list(f.edges()) + [(u + f.n, v + f.n) for u, v in g.edges()]
    return build_graph(f.n + g.n, edges)


# -- clique machinery --------------------------------------------------------


class _Counter:
    __slots__ = ("left",)

    def __init__(self, budget: int):
        self.left = budget

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceededError("clique search budget exceeded")


def _greedy_color_bound(adj: Sequence[int], cand: int) -> int:
    """Number of greedy color classes covering `cand`; upper bound on the
    largest clique inside it."""
    classes = []
    for v in bits(cand):
        for cls in classes:
            if not (cls[1] >> v & 1):
                cls[0] |= 1 << v
                cls[1] |= adj[v]
                break
        else:
            classes.append([1 << v, adj[v]])
    return len(classes)


def clique_number(g: Graph, budget: Optional[int] = None) -> int:
    """Exact clique number via branch and bound with a coloring bound."""
    counter = _Counter(effective_budget(budget))
    best = 0
    adj = g.adj

    def expand(size: int, cand: int):
        nonlocal best
        counter.tick()
        if size + cand.bit_count() <= best:
            return
        if not cand:
            best = max(best, size)
            return
        if size + _greedy_color_bound(adj, cand) <= best:
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = (cand & -cand).bit_length() - 1
            cand ^= 1 << v
            expand(size + 1, cand & adj[v])

    expand(0, (1 << g.n) - 1)
    return best


def maximum_clique(g: Graph, budget: Optional[int] = None) -> tuple[int, ...]:
    """A maximum clique (the first one found by the branch and bound)."""
    counter = _Counter(effective_budget(budget))
    best: tuple[int, ...] = ()
    adj = g.adj

    def expand(r: list[int], cand: int):
        nonlocal best
        counter.tick()
        if len(r) > len(best):
            best = tuple(r)
        if not cand or len(r) + cand.bit_count() <= len(best):
            return
        if len(r) + _greedy_color_bound(adj, cand) <= len(best):
            return
        while cand:
            if len(r) + cand.bit_count() <= len(best):
                return
            v = (cand & -cand).bit_length() - 1
            cand ^= 1 << v
            r.append(v)
            expand(r, cand & adj[v])
            r.pop()

    expand([], (1 << g.n) - 1)
    return tuple(sorted(best))


def has_clique_of_size(g: Graph, s: int, budget: Optional[int] = None) -> bool:
    """Exact decision: does g contain a clique on s vertices?"""
    if s <= 0:
        return True
    if s > g.n:
        return False
    counter = _Counter(effective_budget(budget))
    adj = g.adj
    found = False

    def expand(size: int, cand: int):
        nonlocal found
        if found:
            return
        counter.tick()
        if size >= s:
            found = True
            return
        if size + cand.bit_count() < s:
            return
        if size + _greedy_color_bound(adj, cand) < s:
            return
        while cand and not found:
            v = (cand & -cand).bit_length() - 1
            cand ^= 1 << v
            if size + 1 + (cand & adj[v]).bit_count() >= s:
                expand(size + 1, cand & adj[v])

    expand(0, (1 << g.n) - 1)
    return found


def maximal_cliques(g: Graph, budget: Optional[int] = None) -> list[tuple[int, ...]]:
    """All inclusionwise-maximal cliques (Bron–Kerbosch with pivoting)."""
    counter = _Counter(effective_budget(budget))
    adj = g.adj
    out: list[tuple[int, ...]] = []

    def bk(r: int, p: int, x: int):
        counter.tick()
        if not p and not x:
            out.append(tuple(bits(r)))
            return
        pivot, best = -1, -1
        for u in bits(p | x):
            c = (p & adj[u]).bit_count()
            if c > best:
                pivot, best = u, c
        for v in bits(p & ~adj[pivot]):
            bk(r | 1 << v, p & adj[v], x & adj[v])
            p ^= 1 << v
            x |= 1 << v

    if g.n:
        bk(0, (1 << g.n) - 1, 0)
    return sorted(out)


@dataclass(frozen=True)
class CliqueSystem:
    """Inclusionwise-maximal cliques of size at least `r`, each listed once."""

    r: float
    cliques: tuple[tuple[int, ...], ...]

    def __iter__(self):
        return iter(self.cliques)

    def __len__(self):
        return len(self.cliques)


def maximal_cliques_at_least(g: Graph, r: float, budget: Optional[int] = None) -> CliqueSystem:
    cliques = tuple(c for c in maximal_cliques(g, budget) if len(c) >= r)
    return CliqueSystem(r=r, cliques=cliques)


def neighborhood_nonedge_count(g: Graph, v: int) -> int:
    """Unordered non-adjacent pairs inside N(v)."""
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} out of range")
    nb = g.adj[v]
    d = nb.bit_count()
    edges_inside = sum((g.adj[u] & nb).bit_count() for u in bits(nb)) // 2
    return d * (d - 1) // 2 - edges_inside


def nonedges_within(g: Graph, vs: Iterable[int]) -> list[tuple[int, int]]:
    """Sorted list of non-adjacent unordered pairs inside a vertex set."""
    vs = sorted(set(vs))
    return [(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :] if not g.has_edge(u, v)]


@dataclass(frozen=True)
class QuadrupleWitness:
    """An induced subgraph witnessing a small sparse configuration."""

    kind: str  # one of "K3bar", "2K2", "P4", "C4"
    vertices: tuple[int, ...]


def _classify_four(g: Graph, quad: tuple[int, ...]) -> Optional[str]:
    es = [(a, b) for a, b in combinations(quad, 2) if g.has_edge(a, b)]
    degs = {v: 0 for v in quad}
    for a, b in es:
        degs[a] += 1
        degs[b] += 1
    dl = sorted(degs.values())
    if len(es) == 2 and dl == [1, 1, 1, 1]:
        return "2K2"
    if len(es) == 3 and dl == [1, 1, 2, 2]:
        return "P4"
    if len(es) == 4 and dl == [2, 2, 2, 2]:
        return "C4"
    return None


def forbidden_quadruple_scan(g: Graph) -> Optional[QuadrupleWitness]:
    """First induced K3bar, 2K2, P4 or C4 in lexicographic subset order.

    Returns None exactly when no such induced subgraph exists; in that case
    the clique number satisfies omega >= n-1 (cograph structure argument).
    """
    for triple in combinations(range(g.n), 3):
        a, b, c = triple
        if not (g.has_edge(a, b) or g.has_edge(a, c) or g.has_edge(b, c)):
            return QuadrupleWitness("K3bar", triple)
    for quad in combinations(range(g.n), 4):
        kind = _classify_four(g, quad)
        if kind is not None:
            return QuadrupleWitness(kind, quad)
    return None


def degeneracy(g: Graph) -> tuple[int, list[int]]:
    """Degeneracy d and an elimination order in which every vertex has at
    most d neighbors later in the order."""
    alive = (1 << g.n) - 1
    order = []
    d = 0
    for _ in range(g.n):
        v = min(bits(alive), key=lambda u: (g.adj[u] & alive).bit_count())
        d = max(d, (g.adj[v] & alive).bit_count())
        order.append(v)
        alive ^= 1 << v
    return d, order
