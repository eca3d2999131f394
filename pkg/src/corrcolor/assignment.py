"""Correspondence assignments: per-vertex color lists plus per-edge matchings.

An assignment pairs a list assignment L with a partial matching Pi(e) on every
edge e=uv, declaring which (color at u, color at v) pairs conflict.  Colors
live in a small global universe 0..U-1 (U is derived as 1 + the largest color
mentioned); per-vertex lists are subsets.  Matchings are stored as two
mutually-inverse partial maps so blocked-color lookups are O(1); the two
directions staying inverse is an invariant.

Assignments are immutable values: every transform returns a new assignment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations, product
from math import factorial
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .errors import BudgetExceededError, InputError
from .graph import Graph, bits

#: Largest supported color universe.  The underlying theory never bounds list
#: sizes, so we fix a cap and reject larger inputs instead of guessing.
MAX_UNIVERSE = 64


def _ekey(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Matching:
    """Partial matching on one edge, keyed with the edge's (lo, hi) endpoints.

    fwd maps lo-side colors to hi-side colors; bwd is its inverse.
    """

    fwd: tuple[tuple[int, int], ...]  # sorted (lo_color, hi_color) pairs

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Matching":
        ps = sorted(set(pairs))
        a_seen, b_seen = set(), set()
        for a, b in ps:
            if a in a_seen or b in b_seen:
                raise InputError(f"matching condition violated at pair ({a},{b})")
            a_seen.add(a)
            b_seen.add(b)
        return cls(tuple(ps))

    def fwd_map(self) -> dict[int, int]:
        return dict(self.fwd)

    def bwd_map(self) -> dict[int, int]:
        return {b: a for a, b in self.fwd}

    def __len__(self) -> int:
        return len(self.fwd)


class CorrespondenceAssignment:
    """Immutable (L, Pi) pair over a fixed graph."""

    __slots__ = ("graph", "lists", "_match", "_fwd", "_bwd")

    def __init__(
        self,
        graph: Graph,
        lists: Sequence[Sequence[int]],
        matchings: Mapping[tuple[int, int], Matching],
    ):
        if len(lists) != graph.n:
            raise InputError("one color list per vertex required")
        self.graph = graph
        self.lists = tuple(tuple(sorted(set(l))) for l in lists)
        for v, l in enumerate(self.lists):
            if l and (l[0] < 0 or l[-1] >= MAX_UNIVERSE):
                raise InputError(
                    f"colors at vertex {v} leave the supported universe 0..{MAX_UNIVERSE - 1}"
                )
        match: dict[tuple[int, int], Matching] = {}
        for u, v in graph.edges():
            key = (u, v)
            m = matchings.get(key)
            if m is None:
                raise InputError(f"missing matching for edge {key}")
            lu, lv = set(self.lists[u]), set(self.lists[v])
            for a, b in m.fwd:
                if a not in lu or b not in lv:
                    raise InputError(f"matching on edge {key} pairs colors outside the lists")
            match[key] = m
        extra = set(matchings) - set(match)
        if extra:
            raise InputError(f"matchings given for non-edges: {sorted(extra)}")
        self._match = match
        self._fwd = {e: m.fwd_map() for e, m in match.items()}
        self._bwd = {e: m.bwd_map() for e, m in match.items()}

    # -- basic access -------------------------------------------------------

    @property
    def universe(self) -> int:
        top = -1
        for l in self.lists:
            if l:
                top = max(top, l[-1])
        return top + 1

    def list_of(self, v: int) -> tuple[int, ...]:
        return self.lists[v]

    def matching(self, u: int, v: int) -> Matching:
        return self._match[_ekey(u, v)]

    def matchings(self) -> dict[tuple[int, int], Matching]:
        return dict(self._match)

    def blocked(self, u: int, alpha: int, v: int) -> Optional[int]:
        """Color at v blocked by color alpha at u, or None."""
        key = _ekey(u, v)
        table = self._fwd[key] if u < v else self._bwd[key]
        return table.get(alpha)

    # -- flags ----------------------------------------------------------------

    def is_full(self) -> bool:
        """Every matching is perfect on both sides (forces equal list sizes)."""
        for (u, v), m in self._match.items():
            if not (len(m) == len(self.lists[u]) == len(self.lists[v])):
                return False
        return True

    def exact_k(self) -> Optional[int]:
        sizes = {len(l) for l in self.lists}
        return sizes.pop() if len(sizes) == 1 else None

    def is_deg_minus_one(self) -> bool:
        g = self.graph
        return all(len(self.lists[v]) >= g.degree(v) - 1 for v in g.vertices())

    # -- equality / hashing ---------------------------------------------------

    def _key(self):
        return (self.graph, self.lists, tuple(sorted((e, m.fwd) for e, m in self._match.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, CorrespondenceAssignment) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"CorrespondenceAssignment(n={self.graph.n}, m={self.graph.m}, k={self.exact_k()})"


@dataclass
class ValidationReport:
    """Invariant check outcome plus derived flags."""

    violations: list[str] = field(default_factory=list)
    is_full: bool = False
    exact_k: Optional[int] = None
    is_deg_minus_one: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(ca: CorrespondenceAssignment) -> ValidationReport:
    """Re-check all type invariants; the report carries violations."""
    report = ValidationReport()
    g = ca.graph
    for v, l in enumerate(ca.lists):
        if len(set(l)) != len(l):
            report.violations.append(f"duplicate colors in list of {v}")
    edge_set = set(g.edges())
    for e, m in ca.matchings().items():
        if e not in edge_set:
            report.violations.append(f"matching on non-edge {e}")
        a_side = [a for a, _ in m.fwd]
        b_side = [b for _, b in m.fwd]
        if len(set(a_side)) != len(a_side) or len(set(b_side)) != len(b_side):
            report.violations.append(f"matching condition violated on edge {e}")
        lu, lv = set(ca.lists[e[0]]), set(ca.lists[e[1]])
        for a, b in m.fwd:
            if a not in lu or b not in lv:
                report.violations.append(f"pair ({a},{b}) on edge {e} leaves the lists")
    for e in edge_set:
        if e not in ca.matchings():
            report.violations.append(f"edge {e} has no matching")
    report.is_full = ca.is_full()
    report.exact_k = ca.exact_k()
    report.is_deg_minus_one = ca.is_deg_minus_one()
    return report


# -- constructions ------------------------------------------------------------


def identity_assignment(g: Graph, lists: Sequence[Sequence[int]]) -> CorrespondenceAssignment:
    """Identity matching on every edge: conflicts are exactly equal colors.

    Colorings of the result coincide with proper list colorings of g.
    """
    lists = [tuple(sorted(set(l))) for l in lists]
    matchings = {}
    for u, v in g.edges():
        common = set(lists[u]) & set(lists[v])
        matchings[(u, v)] = Matching.from_pairs((c, c) for c in common)
    return CorrespondenceAssignment(g, lists, matchings)


def uniform_lists(g: Graph, k: int) -> list[tuple[int, ...]]:
    return [tuple(range(k))] * g.n


@dataclass(frozen=True)
class RenamingSystem:
    """Per-vertex bijections of the color universe."""

    universe: int
    sigma: tuple[tuple[int, ...], ...]  # sigma[v][c] = renamed color

    @classmethod
    def identity(cls, n: int, universe: int) -> "RenamingSystem":
        ident = tuple(range(universe))
        return cls(universe, tuple(ident for _ in range(n)))

    @classmethod
    def from_maps(cls, n: int, universe: int, maps: Mapping[int, Mapping[int, int]]) -> "RenamingSystem":
        rows = []
        for v in range(n):
            row = list(range(universe))
            for a, b in maps.get(v, {}).items():
                row[a] = b
            if sorted(row) != list(range(universe)):
                raise InputError(f"renaming at vertex {v} is not a bijection")
            rows.append(tuple(row))
        return cls(universe, tuple(rows))

    def inverse(self) -> "RenamingSystem":
        rows = []
        for row in self.sigma:
            inv = [0] * self.universe
            for a, b in enumerate(row):
                inv[b] = a
            rows.append(tuple(inv))
        return RenamingSystem(self.universe, tuple(rows))

    def apply_to_coloring(self, coloring: Mapping[int, int]) -> dict[int, int]:
        return {v: self.sigma[v][c] for v, c in coloring.items()}


def rename(ca: CorrespondenceAssignment, sigma: RenamingSystem) -> CorrespondenceAssignment:
    """Push lists and matching pairs through per-vertex bijections.

    Colorability is preserved; rename(rename(ca, s), s.inverse()) == ca.
    """
    if sigma.universe < ca.universe:
        raise InputError("renaming universe smaller than assignment universe")
    lists = [tuple(sorted(sigma.sigma[v][c] for c in ca.lists[v])) for v in range(ca.graph.n)]
    matchings = {}
    for (u, v), m in ca.matchings().items():
        su, sv = sigma.sigma[u], sigma.sigma[v]
        matchings[(u, v)] = Matching.from_pairs((su[a], sv[b]) for a, b in m.fwd)
    return CorrespondenceAssignment(ca.graph, lists, matchings)


def straighten_tree(
    ca: CorrespondenceAssignment,
    tree_edges: Iterable[tuple[int, int]],
    root: int,
    gamma: Sequence[int],
) -> tuple[CorrespondenceAssignment, RenamingSystem]:
    """Rename colors away from the root so every tree edge becomes straight.

    After the transform each tree-edge matching only pairs equal colors, every
    list on the tree is a subset of `gamma`, and the renaming is the identity
    outside V(T) minus the root.  Requires |gamma| >= max list size on the
    tree and L(root) already inside gamma.
    """
    g = ca.graph
    tree = [tuple(sorted(e)) for e in tree_edges]
    tset = set(tree)
    if len(tset) != len(tree):
        raise InputError("duplicate tree edges")
    tverts = sorted({v for e in tree for v in e}) or [root]
    if root not in tverts:
        tverts.append(root)
    # adjacency restricted to the tree, plus acyclicity/connectivity-per-part check
    tadj: dict[int, list[int]] = {v: [] for v in tverts}
    for u, v in tree:
        if not g.has_edge(u, v):
            raise InputError(f"tree edge ({u},{v}) is not an edge of the graph")
        tadj[u].append(v)
        tadj[v].append(u)
    gamma = tuple(sorted(set(gamma)))
    maxlist = max((len(ca.lists[v]) for v in tverts), default=0)
    if len(gamma) < maxlist:
        raise InputError("gamma smaller than the largest list on the tree")
    if not set(ca.lists[root]) <= set(gamma):
        raise InputError("root list must be contained in gamma")

    universe = max(ca.universe, (gamma[-1] + 1) if gamma else 0)
    sigma_rows: dict[int, list[int]] = {}

    def plan(v: int, forced: dict[int, int]):
        """Build a bijection at v sending forced pairs and L(v) into gamma."""
        row = [-1] * universe
        used = set()
        for a, b in forced.items():
            row[a] = b
            used.add(b)
        free_gamma = [c for c in gamma if c not in used]
        for c in ca.lists[v]:
            if row[c] == -1:
                row[c] = free_gamma.pop(0)
                used.add(row[c])
        rest_src = [c for c in range(universe) if row[c] == -1]
        rest_dst = [c for c in range(universe) if c not in used]
        for a, b in zip(rest_src, rest_dst):
            row[a] = b
        sigma_rows[v] = row

    # BFS from the root; each child is renamed to straighten its parent edge.
    order = [root]
    parent = {root: None}
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for w in tadj[u]:
            if w in parent:
                if w != parent[u]:
                    raise InputError("tree edges contain a cycle")
                continue
            parent[w] = u
            order.append(w)
    if len(order) != len(tverts):
        raise InputError("tree edges are not connected to the root")

    ident = list(range(universe))
    sigma_rows[root] = ident
    for v in order[1:]:
        u = parent[v]
        m = ca.matching(u, v)
        pairs = m.fwd if u < v else tuple((b, a) for a, b in m.fwd)  # u-side -> v-side
        srow_u = sigma_rows[u]
        forced = {}
        for a, b in pairs:
            # After renaming u by srow_u, the pair reads (srow_u[a], sigma_v[b]);
            # straightness forces sigma_v[b] = srow_u[a].
            forced[b] = srow_u[a]
        plan(v, forced)

    rows = []
    for v in range(g.n):
        rows.append(tuple(sigma_rows.get(v, ident)))
    system = RenamingSystem(universe, tuple(rows))
    return rename(ca, system), system


# -- residual assignments ------------------------------------------------------


def residual_list(ca: CorrespondenceAssignment, psi: Mapping[int, int], v: int) -> tuple[int, ...]:
    """L_psi(v): the list of v minus colors blocked by colored neighbors."""
    blocked = set()
    for u in bits(ca.graph.adj[v]):
        if u in psi:
            b = ca.blocked(u, psi[u], v)
            if b is not None:
                blocked.add(b)
    return tuple(c for c in ca.lists[v] if c not in blocked)


@dataclass(frozen=True)
class Residual:
    """Residual assignment on the graph minus dom(psi), with the index map."""

    assignment: CorrespondenceAssignment
    old_of_new: tuple[int, ...]

    def new_index(self, old: int) -> int:
        return self.old_of_new.index(old)

    def map_coloring_back(self, coloring: Mapping[int, int]) -> dict[int, int]:
        return {self.old_of_new[v]: c for v, c in coloring.items()}


def residual(ca: CorrespondenceAssignment, psi: Mapping[int, int]) -> Residual:
    """The residual assignment (L_psi, Pi_psi) on G - dom(psi).

    Combining holds by construction: psi plus a coloring of the residual is a
    coloring of the original exactly when the part is a residual coloring.
    """
    from .coloring import check_partial  # local import to avoid a cycle

    errors = check_partial(ca, psi)
    if errors:
        raise InputError("psi is not a valid partial coloring: " + "; ".join(errors))
    g = ca.graph
    keep = [v for v in g.vertices() if v not in psi]
    sub, old_of_new = g.induced(keep)
    new_of_old = {o: i for i, o in enumerate(old_of_new)}
    lists = [residual_list(ca, psi, o) for o in old_of_new]
    matchings = {}
    for u, v in sub.edges():
        ou, ov = old_of_new[u], old_of_new[v]
        m = ca.matching(ou, ov)
        pairs = m.fwd if ou < ov else tuple((b, a) for a, b in m.fwd)
        lu, lv = set(lists[u]), set(lists[v])
        matchings[(u, v)] = Matching.from_pairs(
            (a, b) for a, b in pairs if a in lu and b in lv
        )
    ca2 = CorrespondenceAssignment(sub, lists, matchings)
    return Residual(ca2, old_of_new)


def induced_assignment(
    ca: CorrespondenceAssignment, keep: Iterable[int]
) -> Residual:
    """Restriction of the assignment to an induced subgraph (lists kept)."""
    g = ca.graph
    sub, old_of_new = g.induced(keep)
    lists = [ca.lists[o] for o in old_of_new]
    matchings = {}
    for u, v in sub.edges():
        ou, ov = old_of_new[u], old_of_new[v]
        m = ca.matching(ou, ov)
        pairs = m.fwd if ou < ov else tuple((b, a) for a, b in m.fwd)
        matchings[(u, v)] = Matching.from_pairs(pairs)
    return Residual(CorrespondenceAssignment(sub, lists, matchings), old_of_new)


def remove_colors(
    ca: CorrespondenceAssignment, removals: Mapping[int, Iterable[int]]
) -> CorrespondenceAssignment:
    """Drop specific colors from specific lists, with incident matching pairs."""
    g = ca.graph
    lists = []
    for v in g.vertices():
        gone = set(removals.get(v, ()))
        lists.append(tuple(c for c in ca.lists[v] if c not in gone))
    matchings = {}
    for (u, v), m in ca.matchings().items():
        lu, lv = set(lists[u]), set(lists[v])
        matchings[(u, v)] = Matching.from_pairs(
            (a, b) for a, b in m.fwd if a in lu and b in lv
        )
    return CorrespondenceAssignment(g, lists, matchings)


def trim_to_sizes(
    ca: CorrespondenceAssignment, sizes: Sequence[int]
) -> CorrespondenceAssignment:
    """Drop excess colors (keeping the lowest) so |L(v)| == sizes[v].

    Any coloring of the trimmed assignment is a coloring of the original.
    """
    g = ca.graph
    lists = []
    for v in g.vertices():
        if len(ca.lists[v]) < sizes[v]:
            raise InputError(f"list at {v} smaller than requested size {sizes[v]}")
        lists.append(ca.lists[v][: sizes[v]])
    matchings = {}
    for (u, v), m in ca.matchings().items():
        lu, lv = set(lists[u]), set(lists[v])
        matchings[(u, v)] = Matching.from_pairs((a, b) for a, b in m.fwd if a in lu and b in lv)
    return CorrespondenceAssignment(g, lists, matchings)


# -- enumeration and sampling ---------------------------------------------------


def spanning_forest(g: Graph) -> list[tuple[int, int]]:
    """Deterministic BFS forest from the lowest vertex of each component."""
    forest = []
    seen = 0
    for s in range(g.n):
        if seen >> s & 1:
            continue
        seen |= 1 << s
        queue = [s]
        i = 0
        while i < len(queue):
            u = queue[i]
            i += 1
            for w in bits(g.adj[u] & ~seen):
                seen |= 1 << w
                forest.append(_ekey(u, w))
                queue.append(w)
    return forest


def count_full_exact(g: Graph, k: int, reduce_symmetry: bool = True) -> int:
    free = g.m - (len(spanning_forest(g)) if reduce_symmetry else 0)
    return factorial(k) ** free


def enumerate_full_exact(
    g: Graph,
    k: int,
    reduce_symmetry: bool = True,
    budget: Optional[int] = None,
) -> Iterator[CorrespondenceAssignment]:
    """All full exact k-assignments with lists [0..k-1], lexicographically.

    With `reduce_symmetry`, the edges of a deterministic spanning forest are
    pinned to the identity matching; every full exact assignment is a
    renaming of exactly one emitted item.  Without it, all edges range over
    all k! perfect matchings.
    """
    if k < 1:
        raise InputError("k must be positive")
    total = count_full_exact(g, k, reduce_symmetry)
    if budget is not None and total > budget:
        raise BudgetExceededError(f"{total} assignments exceed the budget {budget}")
    lists = uniform_lists(g, k)
    forest = set(spanning_forest(g)) if reduce_symmetry else set()
    free_edges = [e for e in g.edges() if e not in forest]
    ident = Matching.from_pairs((c, c) for c in range(k))
    perms = [Matching.from_pairs(enumerate(p)) for p in permutations(range(k))]
    base = {e: ident for e in forest}
    for combo in product(perms, repeat=len(free_edges)):
        matchings = dict(base)
        matchings.update(zip(free_edges, combo))
        yield CorrespondenceAssignment(g, lists, matchings)


def random_full_exact(g: Graph, k: int, seed: int) -> CorrespondenceAssignment:
    """Independent uniform perfect matching on every edge; deterministic per seed."""
    if k < 1:
        raise InputError("k must be positive")
    rng = random.Random(seed)
    lists = uniform_lists(g, k)
    matchings = {}
    for e in g.edges():
        perm = list(range(k))
        rng.shuffle(perm)
        matchings[e] = Matching.from_pairs(enumerate(perm))
    return CorrespondenceAssignment(g, lists, matchings)


def random_exact_assignment(
    g: Graph, sizes: Sequence[int], seed: int
) -> CorrespondenceAssignment:
    """Exact lists of the given sizes with uniform maximum matchings.

    Each edge independently receives a matching saturating the smaller list
    (uniform over injections), the hardest case for the colorability of a
    given list-size profile.
    """
    rng = random.Random(seed)
    lists = [tuple(range(s)) for s in sizes]
    matchings = {}
    for u, v in g.edges():
        su, sv = sizes[u], sizes[v]
        if su <= sv:
            targets = rng.sample(range(sv), su)
            pairs = [(a, targets[a]) for a in range(su)]
        else:
            sources = rng.sample(range(su), sv)
            pairs = [(sources[b], b) for b in range(sv)]
        matchings[(u, v)] = Matching.from_pairs(pairs)
    return CorrespondenceAssignment(g, lists, matchings)


def random_minus_one_assignment(g: Graph, seed: int) -> CorrespondenceAssignment:
    """Random exact assignment with |L(v)| = deg(v) - 1 (at least one)."""
    sizes = [max(g.degree(v) - 1, 1) for v in g.vertices()]
    return random_exact_assignment(g, sizes, seed)
