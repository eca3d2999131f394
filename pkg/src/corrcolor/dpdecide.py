"""Exact chromatic-number and correspondence-chromatic-number machinery.

`chi` is a DSATUR-style exact chromatic number.  `is_k_correspondence_colorable`
decides whether every full exact k-assignment of a graph is colorable, by one
of three exact routes:

  * "enumerate": symmetry-reduced enumeration of all full exact assignments,
    solving each (the small-instance oracle);
  * "search": counterexample search over assignments on an alive-set of
    colorings, with a kill-capacity bound that prunes subtrees in which no
    completion can eliminate every surviving coloring;
  * "auto": a greedy certificate for k > degeneracy (a vertex order with at
    most d later neighbors leaves an unblocked color at every step), a
    proper-coloring witness for k < chi, and "search" in between.

All three routes are exact; they differ only in cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

from .assignment import (
    CorrespondenceAssignment,
    Matching,
    count_full_exact,
    enumerate_full_exact,
    spanning_forest,
    uniform_lists,
)
from .coloring import solve
from .errors import BudgetExceededError, InputError
from .graph import Graph, clique_number, degeneracy, effective_budget


def chi(g: Graph, budget: Optional[int] = None) -> int:
    """Exact chromatic number.

    Decision per k by backtracking on saturation order, with a maximum
    clique precolored to break color symmetry.
    """
    if g.n == 0:
        return 0
    budget = effective_budget(budget)
    lo = clique_number(g, budget)
    d, _ = degeneracy(g)
    hi = d + 1
    k = lo
    while k <= hi:
        if _k_colorable(g, k, budget):
            return k
        k += 1
    return hi


def _k_colorable(g: Graph, k: int, budget: int) -> bool:
    if k >= g.n:
        return True
    # precolor a greedily-found large clique with distinct colors
    order = sorted(g.vertices(), key=lambda v: -g.degree(v))
    clique: list[int] = []
    for v in order:
        if all(g.has_edge(v, u) for u in clique):
            clique.append(v)
    if len(clique) > k:
        return False
    color = {v: i for i, v in enumerate(clique)}
    rest = [v for v in g.vertices() if v not in color]
    nodes = 0

    def rec() -> Optional[bool]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceededError("chromatic-number budget exceeded")
        best, bestfree = None, None
        for v in rest:
            if v in color:
                continue
            used = {color[u] for u in g.neighbors(v) if u in color}
            free = k - len(used)
            if free == 0:
                return False
            if bestfree is None or free < bestfree:
                best, bestfree = v, free
        if best is None:
            return True
        used = {color[u] for u in g.neighbors(best) if u in color}
        for c in range(k):
            if c in used:
                continue
            color[best] = c
            if rec():
                return True
            del color[best]
        return False

    return bool(rec())


# -- alive-set counterexample search ------------------------------------------


def _tree_alive(g: Graph, k: int, forest: list[tuple[int, int]]) -> int:
    """Bitmask over all k^n color tuples surviving identity matchings on the
    forest edges (position v has weight k**v)."""
    n = g.n
    total = k**n
    alive = (1 << total) - 1
    for u, v in forest:
        kill = 0
        for idx in range(total):
            cu = idx // (k**u) % k
            cv = idx // (k**v) % k
            if cu == cv:
                kill |= 1 << idx
        alive &= ~kill
    return alive


def _cell_masks(g: Graph, k: int, edge: tuple[int, int]) -> list[list[int]]:
    """cell[a][b] = bitmask of color tuples with (color(u), color(v)) = (a, b)."""
    n = g.n
    u, v = edge
    total = k**n
    cell = [[0] * k for _ in range(k)]
    for idx in range(total):
        cu = idx // (k**u) % k
        cv = idx // (k**v) % k
        cell[cu][cv] |= 1 << idx
    return cell


@dataclass
class SearchStats:
    nodes: int = 0
    pruned: int = 0


def _conjugacy_representatives(k: int) -> list[tuple[int, ...]]:
    """One permutation per cycle type of S_k (lexicographically first)."""
    reps: dict[tuple[int, ...], tuple[int, ...]] = {}
    for p in permutations(range(k)):
        seen = [False] * k
        lengths = []
        for s in range(k):
            if seen[s]:
                continue
            ln, cur = 0, s
            while not seen[cur]:
                seen[cur] = True
                cur = p[cur]
                ln += 1
            lengths.append(ln)
        t = tuple(sorted(lengths))
        reps.setdefault(t, p)
    return sorted(reps.values())


def find_noncolorable_full_exact(
    g: Graph, k: int, budget: Optional[int] = None
) -> Optional[CorrespondenceAssignment]:
    """A non-colorable full exact k-assignment, or None when all are colorable.

    Exhaustive over assignments up to straightening a spanning forest (and,
    at the root, up to simultaneous conjugation of all matchings, which fixes
    straight edges).  Works on an alive-set of surviving colorings: once the
    total kill capacity of the remaining edges (exact max-weight matchings,
    which only shrink as the alive set shrinks) drops below the survivor
    count, no completion can kill everything and the branch dies.  Any single
    edge whose own capacity cannot cover its mandatory share dies the same
    way.
    """
    if k < 1:
        raise InputError("k must be positive")
    if g.n == 0 or k**g.n > 1 << 26:
        raise InputError("graph too large for the alive-set search")
    budget = effective_budget(budget)
    forest = spanning_forest(g)
    fset = set(forest)
    free_edges = [e for e in g.edges() if e not in fset]
    alive0 = _tree_alive(g, k, forest)
    if alive0 == 0:
        # even the forest alone admits no coloring (k = 1 with an edge)
        return _build_assignment(g, k, forest, {})
    cells = {e: _cell_masks(g, k, e) for e in free_edges}
    all_perms = list(permutations(range(k)))
    root_perms = _conjugacy_representatives(k) if len(g.connected_components()) == 1 else all_perms

    from . import kernel

    if kernel.BACKEND == "native" and k <= 6 and len(free_edges) <= 31:
        found = _native_search(
            g, k, forest, free_edges, alive0, cells, all_perms, root_perms, budget
        )
        if found is None:
            return None
        ca = _build_assignment(g, k, forest, found)
        if solve(ca) is not None:
            raise AssertionError("search produced a colorable witness; internal defect")
        return ca

    stats = SearchStats()
    refuted: set[tuple] = set()

    def rec(alive: int, remaining: tuple, root_pool: Optional[set] = None) -> Optional[dict]:
        stats.nodes += 1
        if stats.nodes > budget:
            raise BudgetExceededError("assignment search budget exceeded")
        if alive == 0:
            return {}  # remaining edges can stay as identity matchings
        if not remaining:
            return None
        key = (remaining, alive)
        if key in refuted:
            return None
        na = alive.bit_count()
        # exact per-edge kill tables and capacities
        infos = []
        total_cap = 0
        for e in remaining:
            cell = cells[e]
            cnt = [[(alive & cell[a][b]).bit_count() for b in range(k)] for a in range(k)]
            kills = []
            cap = 0
            for p in all_perms:
                kl = 0
                for a in range(k):
                    kl += cnt[a][p[a]]
                kills.append(kl)
                if kl > cap:
                    cap = kl
            infos.append((e, kills, cap))
            total_cap += cap
        if na > total_cap:
            stats.pruned += 1
            refuted.add(key)
            return None
        # every edge must individually meet its mandatory share of the kills
        best = None
        for e, kills, cap in infos:
            need = na - (total_cap - cap)
            opts = [(kl, p) for kl, p in zip(kills, all_perms) if kl >= need]
            if not opts:
                stats.pruned += 1
                refuted.add(key)
                return None
            if best is None or len(opts) < len(best[1]):
                best = (e, opts)
        if root_pool is not None:
            # no matching fixed yet: simultaneous conjugation of all matchings
            # is a symmetry, so the first branched edge only needs one
            # representative per cycle type
            e, kills, cap = infos[0]
            need = na - (total_cap - cap)
            best = (e, [(kl, p) for kl, p in zip(kills, all_perms) if kl >= need and p in root_pool])
            if not best[1]:
                return None
        best_edge, best_opts = best
        best_opts.sort(key=lambda t: -t[0])
        rest = tuple(e for e in remaining if e != best_edge)
        cell = cells[best_edge]
        seen: set[int] = set()
        for _, p in best_opts:
            kill = 0
            for a in range(k):
                kill |= cell[a][p[a]]
            alive2 = alive & ~kill
            if alive2 in seen:
                continue
            seen.add(alive2)
            sub = rec(alive2, rest)
            if sub is not None:
                sub[best_edge] = p
                return sub
        if root_pool is None:
            refuted.add(key)
        return None

    pool = set(root_perms) if root_perms is not all_perms else None
    found = rec(alive0, tuple(free_edges), pool)
    if found is None:
        return None
    ca = _build_assignment(g, k, forest, found)
    if solve(ca) is not None:
        raise AssertionError("search produced a colorable witness; internal defect")
    return ca


def _native_search(g, k, forest, free_edges, alive0, cells, all_perms, root_perms, budget):
    """Hand the prepared search off to the compiled kernel."""
    from ._fastkern import assignment_search  # type: ignore

    total = k**g.n
    nwords = (total + 63) // 64
    mask64 = (1 << 64) - 1

    def words(x: int) -> list[int]:
        return [(x >> (64 * i)) & mask64 for i in range(nwords)]

    flat_cells: list[int] = []
    for e in free_edges:
        for a in range(k):
            for b in range(k):
                flat_cells.extend(words(cells[e][a][b]))
    flat_perms = [c for p in all_perms for c in p]
    pool = [i for i, p in enumerate(all_perms) if p in set(root_perms)]
    status, choice, _nodes = assignment_search(
        k, nwords, words(alive0), len(free_edges), flat_cells,
        len(all_perms), flat_perms, pool, budget,
    )
    if status == "budget":
        raise BudgetExceededError("assignment search budget exceeded")
    if status == "none":
        return None
    return {
        free_edges[i]: all_perms[pidx]
        for i, pidx in enumerate(choice)
        if pidx >= 0
    }


def _build_assignment(g, k, forest, free_perms) -> CorrespondenceAssignment:
    ident = Matching.from_pairs((c, c) for c in range(k))
    matchings = {e: ident for e in forest}
    for e, p in free_perms.items():
        matchings[e] = Matching.from_pairs(enumerate(p))
    for e in g.edges():
        matchings.setdefault(e, ident)
    return CorrespondenceAssignment(g, uniform_lists(g, k), matchings)


# -- decisions and the chromatic parameter --------------------------------------


@dataclass(frozen=True)
class Decision:
    """Outcome of a k-correspondence-colorability decision."""

    colorable: bool
    method: str
    witness: Optional[CorrespondenceAssignment] = None  # non-colorable assignment


def is_k_correspondence_colorable(
    g: Graph,
    k: int,
    method: str = "auto",
    budget: Optional[int] = None,
    enumeration_budget: int = 500_000,
) -> Decision:
    """Decide whether every k-correspondence assignment of g is colorable.

    It suffices to decide full exact assignments (surplus colors can be
    ignored and missing matching pairs only help).
    """
    if method == "enumerate":
        for ca in enumerate_full_exact(g, k, budget=enumeration_budget):
            if solve(ca, None, budget) is None:
                return Decision(False, "enumerate", ca)
        return Decision(True, "enumerate")
    if method == "search":
        witness = find_noncolorable_full_exact(g, k, budget)
        return Decision(witness is None, "search", witness)
    if method != "auto":
        raise InputError(f"unknown method {method!r}")

    d, _ = degeneracy(g)
    if k >= d + 1:
        # greedy along the degeneracy order: at most d blocked colors per step
        return Decision(True, "degeneracy")
    if chi(g, budget) > k:
        # the identity assignment on equal lists is a proper-coloring witness
        from .assignment import identity_assignment

        ca = identity_assignment(g, uniform_lists(g, k))
        if solve(ca, None, budget) is not None:
            raise AssertionError("identity witness unexpectedly colorable")
        return Decision(False, "identity", ca)
    if count_full_exact(g, k) <= 2000:
        return is_k_correspondence_colorable(g, k, "enumerate", budget)
    witness = find_noncolorable_full_exact(g, k, budget)
    return Decision(witness is None, "search", witness)


def chi_dp(g: Graph, method: str = "auto", budget: Optional[int] = None) -> int:
    """Correspondence chromatic number: least k with every k-assignment
    colorable.  Decisions are monotone in k, so the first True wins."""
    if g.n == 0:
        return 0
    k = 1
    while True:
        if is_k_correspondence_colorable(g, k, method, budget).colorable:
            return k
        k += 1
