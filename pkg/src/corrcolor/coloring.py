"""Partial colorings, excess bookkeeping, greedy extension, exact solving.

A (partial) coloring is a plain dict vertex -> color.  All operations here
are pure given (assignment, coloring, seed) and safe to call concurrently.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Optional, Sequence

from . import kernel
from .assignment import CorrespondenceAssignment, residual_list
from .errors import BudgetExceededError, InputError
from .graph import DEFAULT_BUDGET, bits, effective_budget


def blocked_color(ca: CorrespondenceAssignment, u: int, alpha: int, v: int) -> Optional[int]:
    """The color at v blocked when u takes alpha, or None for no conflict."""
    if not ca.graph.has_edge(u, v):
        raise InputError(f"({u},{v}) is not an edge")
    if alpha not in ca.lists[u]:
        raise InputError(f"color {alpha} not in the list of {u}")
    return ca.blocked(u, alpha, v)


def check_partial(ca: CorrespondenceAssignment, psi: Mapping[int, int]) -> list[str]:
    """Violations of the partial-coloring invariants (empty means valid)."""
    errors = []
    g = ca.graph
    for v, c in psi.items():
        if not (0 <= v < g.n):
            errors.append(f"vertex {v} out of range")
        elif c not in ca.lists[v]:
            errors.append(f"color {c} not in the list of {v}")
    for v in psi:
        if not (0 <= v < g.n):
            continue
        for u in bits(g.adj[v]):
            if u > v and u in psi:
                if ca.blocked(v, psi[v], u) == psi[u]:
                    errors.append(f"edge ({v},{u}) carries a conflicting pair")
    return errors


def is_valid_partial(ca: CorrespondenceAssignment, psi: Mapping[int, int]) -> bool:
    return not check_partial(ca, psi)


def is_valid_coloring(ca: CorrespondenceAssignment, phi: Mapping[int, int]) -> bool:
    """True iff phi is total and satisfies both coloring invariants."""
    if set(phi) != set(ca.graph.vertices()):
        return False
    return is_valid_partial(ca, phi)


def uncolored_degree(ca: CorrespondenceAssignment, psi: Mapping[int, int], v: int) -> int:
    return sum(1 for u in bits(ca.graph.adj[v]) if u not in psi)


def excess(ca: CorrespondenceAssignment, psi: Mapping[int, int], v: int) -> int:
    """|L_psi(v)| minus the number of uncolored neighbors of v."""
    if v in psi:
        raise InputError(f"vertex {v} is already colored")
    return len(residual_list(ca, psi, v)) - uncolored_degree(ca, psi, v)


def check_extension_order(
    ca: CorrespondenceAssignment, psi: Mapping[int, int], order: Sequence[int]
) -> bool:
    """Greedy-extendability test: every vertex in the order must have at
    least 1 - excess(v) neighbors later in the order."""
    later = set(order)
    for v in order:
        later.discard(v)
        need = 1 - excess(ca, psi, v)
        have = sum(1 for u in later if ca.graph.has_edge(u, v))
        if have < need:
            return False
    return True


def greedy_extend(
    ca: CorrespondenceAssignment,
    psi: Mapping[int, int],
    order: Sequence[int],
) -> Optional[dict[int, int]]:
    """Extend psi along the order, always taking the lowest unblocked color.

    Returns the total coloring, or None when some vertex has no unblocked
    color left (the caller can avoid that by arranging positive excess).
    """
    uncolored = [v for v in ca.graph.vertices() if v not in psi]
    if sorted(order) != sorted(uncolored):
        raise InputError("order must cover exactly the uncolored vertices")
    phi = dict(psi)
    for v in order:
        options = residual_list(ca, phi, v)
        if not options:
            return None
        phi[v] = options[0]
    return phi


def pair_extend_for_excess(
    ca: CorrespondenceAssignment,
    psi: Mapping[int, int],
    v: int,
    u: int,
    u2: int,
    k: int,
) -> dict[int, int]:
    """Color the non-adjacent pair u, u2 so the excess of v strictly grows.

    Classic excess argument: if |L_psi(u)| + |L_psi(u2)| exceeds the
    uncolored degree of v plus k (= current excess floor), then either some
    color at u or u2 blocks nothing in L_psi(v), or two of their colors
    block the same color; either way v loses at most one list color for two
    colored neighbors.    Returns psi extended on exactly {u, u2} with
    excess(v) >= k + 1.
    """
    g = ca.graph
    if g.has_edge(u, u2):
        raise InputError("u and u2 must be non-adjacent")
    if u in psi or u2 in psi or v in psi:
        raise InputError("u, u2 and v must be uncolored")
    if not (g.has_edge(u, v) and g.has_edge(u2, v)):
        raise InputError("u and u2 must be neighbors of v")
    exc = excess(ca, psi, v)
    if exc < k:
        raise InputError(f"excess of v is {exc}, below the floor {k}")
    lu = residual_list(ca, psi, u)
    lu2 = residual_list(ca, psi, u2)
    if not lu or not lu2:
        raise InputError("residual lists of u and u2 must be non-empty")
    if len(lu) + len(lu2) <= uncolored_degree(ca, psi, v) + k:
        raise InputError("list-size inequality violated: |L(u)|+|L(u2)| too small")

    lv = set(residual_list(ca, psi, v))

    def blocks_in_lv(w: int, c: int) -> Optional[int]:
        b = ca.blocked(w, c, v)
        return b if b is not None and b in lv else None

    choice: Optional[tuple[int, int]] = None
    if exc > k:
        choice = (lu[0], lu2[0])
    if choice is None:
        for a in lu:
            if blocks_in_lv(u, a) is None:
                choice = (a, lu2[0])
                break
    if choice is None:
        for b in lu2:
            if blocks_in_lv(u2, b) is None:
                choice = (lu[0], b)
                break
    if choice is None:
        # pigeonhole: every color blocks inside L_psi(v), so some two collide
        for a in lu:
            ba = blocks_in_lv(u, a)
            for b in lu2:
                if blocks_in_lv(u2, b) == ba:
                    choice = (a, b)
                    break
            if choice:
                break
    if choice is None:
        raise InputError("pigeonhole failed; the size inequality cannot have held")
    phi = dict(psi)
    phi[u], phi[u2] = choice
    new_exc = excess(ca, phi, v)
    if new_exc < k + 1:
        raise AssertionError("excess did not increase; internal defect")
    return phi


# -- exact solving -------------------------------------------------------------


def solve(
    ca: CorrespondenceAssignment,
    psi: Optional[Mapping[int, int]] = None,
    budget: Optional[int] = None,
) -> Optional[dict[int, int]]:
    """A valid total coloring extending psi, or None iff none exists.

    Backtracking ordered by fewest remaining colors with forward pruning.
    Budget exhaustion raises, and is distinct from "no coloring".
    """
    psi = dict(psi or {})
    errs = check_partial(ca, psi)
    if errs:
        raise InputError("; ".join(errs))
    status, rest, _ = kernel.solve_encoded(ca, psi, effective_budget(budget))
    if status == "budget":
        raise BudgetExceededError("solver budget exceeded")
    if status == "unsat":
        return None
    phi = dict(psi)
    phi.update(rest)
    return phi


def count_colorings(
    ca: CorrespondenceAssignment,
    psi: Optional[Mapping[int, int]] = None,
    budget: Optional[int] = None,
) -> int:
    """Exact number of total colorings extending psi."""
    psi = dict(psi or {})
    status, total, _ = kernel.count_encoded(ca, psi, effective_budget(budget))
    if status == "budget":
        raise BudgetExceededError("counting budget exceeded")
    return total


def brute_force_colorings(ca: CorrespondenceAssignment) -> list[dict[int, int]]:
    """All-tuples oracle: check every member of the product of the lists.

    Exponential; only for desk-scale cross-checks of the solver.
    """
    out = []
    n = ca.graph.n
    for combo in product(*(ca.lists[v] for v in range(n))):
        phi = dict(enumerate(combo))
        if is_valid_partial(ca, phi):
            out.append(phi)
    return out


def uniform_coloring(
    ca: CorrespondenceAssignment,
    seed: int,
    budget: Optional[int] = None,
) -> dict[int, int]:
    """Exactly uniform draw over all total colorings.

    Sequential sampling: vertices in index order, each color weighted by the
    exact number of completions.  Errors when no coloring exists; raises on
    budget exhaustion rather than approximating (approximate sampling lives
    in the pipeline and is labeled there).
    """
    rng = random.Random(seed)
    budget = effective_budget(budget)
    total = count_colorings(ca, None, budget)
    if total == 0:
        raise InputError("no coloring exists")
    phi: dict[int, int] = {}
    for v in ca.graph.vertices():
        options = residual_list(ca, phi, v)
        weights = []
        for c in options:
            phi[v] = c
            weights.append(count_colorings(ca, phi, budget))
        del phi[v]
        pickpoint = rng.randrange(sum(weights))
        acc = 0
        for c, w in zip(options, weights):
            acc += w
            if pickpoint < acc:
                phi[v] = c
                break
    return phi


# -- clique case analysis -------------------------------------------------------


@dataclass(frozen=True)
class CliqueCase:
    """Outcome of the colorable-clique analysis.

    kind "a": some |L(v)| >= |K| (v set).
    kind "b": a color alpha at z blocks nothing in L(v) at v.
    kind "c": colors alpha1 at z1, alpha2 at z2 are mutually compatible and
              together block at most one color in L(v) at v.
    """

    kind: str
    v: int
    z: Optional[int] = None
    alpha: Optional[int] = None
    z1: Optional[int] = None
    z2: Optional[int] = None
    alpha1: Optional[int] = None
    alpha2: Optional[int] = None


def classify_clique_case(
    ca: CorrespondenceAssignment,
    clique: Sequence[int],
    budget: Optional[int] = None,
) -> CliqueCase:
    """Case analysis for a colorable clique under a (|K|-1)-assignment.

    Scans the cases in order (a), (b), (c) and returns the first witness in
    lexicographic vertex/color order.  Errors if the restriction is not
    colorable or some list is smaller than |K|-1.
    """
    ks = sorted(set(clique))
    g = ca.graph
    if not g.is_clique(ks):
        raise InputError("the given set does not induce a clique")
    k = len(ks)
    for v in ks:
        if len(ca.lists[v]) < k - 1:
            raise InputError(f"list of {v} smaller than {k - 1}")
    sub, old_of_new = g.induced(ks)
    from .assignment import Matching

    lists = [ca.lists[o] for o in old_of_new]
    matchings = {}
    for u, v in sub.edges():
        ou, ov = old_of_new[u], old_of_new[v]
        m = ca.matching(ou, ov)
        pairs = m.fwd if ou < ov else tuple((b, a) for a, b in m.fwd)
        matchings[(u, v)] = Matching.from_pairs(pairs)
    rca = CorrespondenceAssignment(sub, lists, matchings)
    if solve(rca, None, budget) is None:
        raise InputError("the restricted clique is not colorable")

    for v in ks:
        if len(ca.lists[v]) >= k:
            return CliqueCase(kind="a", v=v)
    for z in ks:
        for v in ks:
            if v == z:
                continue
            lv = set(ca.lists[v])
            for alpha in ca.lists[z]:
                b = ca.blocked(z, alpha, v)
                if b is None or b not in lv:
                    return CliqueCase(kind="b", v=v, z=z, alpha=alpha)
    for z1 in ks:
        for z2 in ks:
            if z2 <= z1:
                continue
            for v in ks:
                if v in (z1, z2):
                    continue
                lv = set(ca.lists[v])
                for a1 in ca.lists[z1]:
                    if ca.blocked(z1, a1, z2) is None:
                        a2_banned = None
                    else:
                        a2_banned = ca.blocked(z1, a1, z2)
                    b1 = ca.blocked(z1, a1, v)
                    for a2 in ca.lists[z2]:
                        if a2 == a2_banned:
                            continue
                        b2 = ca.blocked(z2, a2, v)
                        together = {b for b in (b1, b2) if b is not None and b in lv}
                        if len(together) <= 1:
                            return CliqueCase(
                                kind="c", v=v, z1=z1, z2=z2, alpha1=a1, alpha2=a2
                            )
    raise InputError("no case applies; the hypotheses cannot have held")
