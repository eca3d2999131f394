"""Near-cliques, isolation, loose/tight splits, benefactors, decomposition.

The decomposition construction runs on arbitrary graphs; where an input
violates the guarantees that hold for the intended graph class, the
validator reports the violations instead of erroring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InputError
from .graph import (
    Graph,
    bits,
    clique_number,
    has_clique_of_size,
    mask_of,
    maximal_cliques_at_least,
    neighborhood_nonedge_count,
)


@dataclass(frozen=True)
class NearClique:
    """A vertex set whose induced subgraph misses cliqueness by at most one
    vertex, with a designated maximum-clique core.

    Construction only enforces containment; whether the set really is a
    near-clique is the validators' business, because the decomposition must
    be able to carry (and report) anomalous parts of arbitrary inputs.
    """

    vertices: tuple[int, ...]
    core: tuple[int, ...]

    def __post_init__(self):
        if not set(self.core) <= set(self.vertices):
            raise InputError("core must sit inside the near-clique")

    def is_proper(self) -> bool:
        return len(self.vertices) - len(self.core) <= 1


def near_clique_core(g: Graph, d: Iterable[int], budget: Optional[int] = None) -> Optional[NearClique]:
    """The near-clique on d with a maximum-clique core, or None.

    When the core is ambiguous (exactly one non-edge inside d), the
    lexicographically smallest core is chosen; the sibling core is equally
    valid and validators check both.
    """
    dset = tuple(sorted(set(d)))
    sub, old = g.induced(dset)
    w = clique_number(sub, budget)
    if w < len(dset) - 1:
        return None
    if w == len(dset):
        return NearClique(dset, dset)
    best: Optional[tuple[int, ...]] = None
    for drop in range(sub.n):
        cand = [v for v in range(sub.n) if v != drop]
        if sub.is_clique(cand):
            core = tuple(old[v] for v in cand)
            if best is None or core < best:
                best = core
    if best is None:
        return None
    return NearClique(dset, best)


def delta_isolated(g: Graph, d: Iterable[int], delta: int) -> tuple[bool, Optional[int]]:
    """Whether every outside vertex has at most ceil(3*delta/4) neighbors in
    d; also returns the outside vertex with the most neighbors inside."""
    dmask = mask_of(d)
    bound = math.ceil(3 * delta / 4)
    worst, worst_count = None, -1
    for v in g.vertices():
        if dmask >> v & 1:
            continue
        c = (g.adj[v] & dmask).bit_count()
        if c > worst_count:
            worst, worst_count = v, c
    return (worst_count <= bound, worst)


def tight_loose_partition(
    g: Graph, core: Iterable[int], m: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split the outside vertices by their neighbor count in the core:
    loose (at most m) versus tight (more than m)."""
    cset = sorted(set(core))
    if not g.is_clique(cset):
        raise InputError("the core must induce a clique")
    cmask = mask_of(cset)
    tight, loose = [], []
    for v in g.vertices():
        if cmask >> v & 1:
            continue
        if (g.adj[v] & cmask).bit_count() <= m:
            loose.append(v)
        else:
            tight.append(v)
    return tuple(tight), tuple(loose)


@dataclass(frozen=True)
class Benefactor:
    """An anchor vertex of the core plus its quota of loose outside
    neighbors (2 + deg(anchor) - delta of them)."""

    vertices: frozenset[int]
    anchor: int

    def outside(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices - {self.anchor}))


def benefactor_quota(g: Graph, v: int, delta: int) -> int:
    return 2 + g.degree(v) - delta


def max_disjoint_benefactors(
    g: Graph, core: Iterable[int], delta: int, m: int = 85
) -> list[Benefactor]:
    """Greedy inclusionwise-maximal family of pairwise disjoint benefactors.

    Deterministic scan: anchors ascending, loose neighbors ascending.  Only
    anchors with a positive quota (degree at least delta - 1) can form one.
    """
    cset = sorted(set(core))
    _tight, loose = tight_loose_partition(g, cset, m)
    loose_set = set(loose)
    used: set[int] = set()
    out: list[Benefactor] = []
    for v in cset:
        if v in used:
            continue
        quota = benefactor_quota(g, v, delta)
        if quota < 1:
            continue
        picks = [u for u in g.neighbors(v) if u in loose_set and u not in used][:quota]
        if len(picks) < quota:
            continue
        used.add(v)
        used.update(picks)
        out.append(Benefactor(frozenset([v] + picks), v))
    return out


def troublemakers(g: Graph, v: int, delta: int, budget: Optional[int] = None) -> tuple[int, ...]:
    """All non-neighbors v2 of v such that some clique of size delta-2 sits
    inside the common neighborhood of v and v2.

    On inputs matching the intended structure the result has at most one
    element; that is a reported property of the caller, not enforced here.
    """
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} out of range")
    out = []
    for v2 in g.vertices():
        if v2 == v or g.has_edge(v, v2):
            continue
        common = [w for w in bits(g.adj[v] & g.adj[v2])]
        if len(common) < delta - 2:
            continue
        sub, _old = g.induced(common)
        if has_clique_of_size(sub, delta - 2, budget):
            out.append(v2)
    return tuple(out)


@dataclass
class CliqueAuditReport:
    """Pairwise-intersection and overlap-count audit of the large-clique system."""

    r: float
    delta: int
    cliques: list[tuple[int, ...]] = field(default_factory=list)
    small_intersections: list[tuple[int, int, int]] = field(default_factory=list)
    busy_cliques: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.small_intersections and not self.busy_cliques


def clique_system_audit(
    g: Graph, r: float, delta: int, budget: Optional[int] = None
) -> CliqueAuditReport:
    """For every intersecting clique pair, compare the intersection size
    against delta/2 + 1; flag any clique intersecting two or more others."""
    system = maximal_cliques_at_least(g, r, budget)
    report = CliqueAuditReport(r=r, delta=delta, cliques=list(system.cliques))
    masks = [mask_of(c) for c in system.cliques]
    partners = [0] * len(masks)
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            inter = (masks[i] & masks[j]).bit_count()
            if inter > 0:
                partners[i] += 1
                partners[j] += 1
                if inter < delta / 2 + 1:
                    report.small_intersections.append((i, j, inter))
    report.busy_cliques = [i for i, p in enumerate(partners) if p >= 2]
    return report


# -- sparse-dense decomposition ---------------------------------------------------


def sigma_sparse(g: Graph, v: int, sigma: float) -> bool:
    """At least sigma non-edges among the neighbors (boundary counts as sparse)."""
    return neighborhood_nonedge_count(g, v) >= sigma


@dataclass
class DecompositionReport:
    """Validation outcome: every violated guarantee is listed, none raise."""

    condition_a: list[str] = field(default_factory=list)
    condition_b: list[str] = field(default_factory=list)
    isolation: list[str] = field(default_factory=list)
    near_clique: list[str] = field(default_factory=list)
    disjointness: list[str] = field(default_factory=list)
    component_anomalies: list[str] = field(default_factory=list)
    nonneighbor_floor: list[str] = field(default_factory=list)
    tightness: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.condition_a
            or self.condition_b
            or self.isolation
            or self.near_clique
            or self.disjointness
        )

    def all_violations(self) -> list[str]:
        return (
            self.condition_a
            + self.condition_b
            + self.isolation
            + self.near_clique
            + self.disjointness
            + self.component_anomalies
            + self.nonneighbor_floor
            + self.tightness
        )


@dataclass
class Decomposition:
    delta: int
    sigma: float
    rho: float
    near_cliques: list[NearClique]
    sparse: tuple[int, ...]
    report: DecompositionReport


def sparse_dense_decomposition(
    g: Graph,
    delta: int,
    sigma: float,
    rho: float,
    loose_m: int = 85,
    tight_m: int = 7,
    budget: Optional[int] = None,
) -> Decomposition:
    """Build the decomposition: components of the intersection graph of the
    maximal cliques of size >= 3*delta/4 + 1 are unioned, and a union is kept
    exactly when it contains a sigma-dense vertex.  Everything else is the
    sparse remainder.  The validator then checks all guarantees and reports
    violations (arbitrary inputs may violate them)."""
    r = 3 * delta / 4 + 1
    system = maximal_cliques_at_least(g, r, budget)
    cliques = list(system.cliques)
    masks = [mask_of(c) for c in cliques]
    # connected components of the clique-intersection graph
    comp_of = list(range(len(cliques)))

    def find(i):
        while comp_of[i] != i:
            comp_of[i] = comp_of[comp_of[i]]
            i = comp_of[i]
        return i

    for i in range(len(cliques)):
        for j in range(i + 1, len(cliques)):
            if masks[i] & masks[j]:
                comp_of[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(cliques)):
        groups.setdefault(find(i), []).append(i)

    report = DecompositionReport()
    kept: list[tuple[int, ...]] = []
    for root, members in sorted(groups.items()):
        union = sorted({v for i in members for v in cliques[i]})
        if len(members) >= 3:
            report.component_anomalies.append(
                f"component with {len(members)} pairwise-intersecting cliques unioned into {union[:6]}..."
            )
        if any(not sigma_sparse(g, v, sigma) for v in union):
            kept.append(tuple(union))

    near_cliques: list[NearClique] = []
    for union in kept:
        nc = near_clique_core(g, union, budget)
        if nc is None:
            sub, _ = g.induced(union)
            w = clique_number(sub, budget)
            report.near_clique.append(
                f"kept set of size {len(union)} has clique number {w} < {len(union) - 1}"
            )
            nc = NearClique(union, _largest_clique_in(g, union, budget))
        near_cliques.append(nc)

    in_dense: set[int] = set()
    for nc in near_cliques:
        overlap = in_dense & set(nc.vertices)
        if overlap:
            report.disjointness.append(f"near-cliques overlap on {sorted(overlap)[:6]}")
        in_dense.update(nc.vertices)
    sparse = tuple(v for v in g.vertices() if v not in in_dense)

    validate_decomposition(g, delta, sigma, rho, near_cliques, sparse, report, tight_m)
    return Decomposition(delta, sigma, rho, near_cliques, sparse, report)


def _largest_clique_in(g: Graph, vs: Sequence[int], budget) -> tuple[int, ...]:
    from .graph import maximum_clique

    sub, old = g.induced(vs)
    return tuple(sorted(old[v] for v in maximum_clique(sub, budget)))


def validate_decomposition(
    g: Graph,
    delta: int,
    sigma: float,
    rho: float,
    near_cliques: Sequence[NearClique],
    sparse: Sequence[int],
    report: DecompositionReport,
    tight_m: int = 7,
) -> DecompositionReport:
    for nc in near_cliques:
        d = nc.vertices
        sub, _ = g.induced(d)
        if not (len(d) > delta - rho):
            report.condition_a.append(f"dense part of size {len(d)} not above delta-rho")
        if sub.min_degree() < 3 * delta / 4:
            report.condition_a.append(
                f"dense part of size {len(d)} has internal minimum degree {sub.min_degree()}"
            )
        iso_ok, worst = delta_isolated(g, d, delta)
        if not iso_ok:
            report.isolation.append(
                f"outside vertex {worst} has too many neighbors in a dense part"
            )
        core_sub, _ = g.induced(nc.core)
        if not g.is_clique(nc.core):
            report.near_clique.append(f"core {nc.core[:6]}... is not a clique")
        if len(nc.vertices) - len(nc.core) > 1:
            report.near_clique.append("core misses more than one vertex")
        if iso_ok:
            _check_nonneighbor_floor(g, nc, delta, report)
        _check_tightness(g, nc, delta, tight_m, report)
    for v in sparse:
        if not sigma_sparse(g, v, sigma):
            report.condition_b.append(
                f"sparse vertex {v} has only {neighborhood_nonedge_count(g, v)} neighborhood non-edges"
            )
    return report


def _check_nonneighbor_floor(g: Graph, nc: NearClique, delta: int, report: DecompositionReport):
    """Isolation forces a floor of (delta-3)/4 - p non-neighbors in the core
    for every outside vertex, and at least one non-neighbor for the vertex
    of the dense part outside the core."""
    cmask = mask_of(nc.core)
    p = delta - len(nc.core)
    floor = (delta - 3) / 4 - p
    for v in g.vertices():
        if v in nc.vertices:
            continue
        nonnbrs = len(nc.core) - (g.adj[v] & cmask).bit_count()
        if nonnbrs < floor:
            report.nonneighbor_floor.append(
                f"outside vertex {v} has {nonnbrs} core non-neighbors, below the floor"
            )
    extra = set(nc.vertices) - set(nc.core)
    for v in extra:
        if len(nc.core) - (g.adj[v] & cmask).bit_count() < 1:
            report.nonneighbor_floor.append(
                f"dense-part vertex {v} outside the core has no core non-neighbor"
            )


def _check_tightness(g: Graph, nc: NearClique, delta: int, tight_m: int, report: DecompositionReport):
    """Report-only predicates: each core vertex should have at most one
    tight neighbor, and with a core of size delta-1 every outside vertex
    should have at most 85 core neighbors."""
    tight, _loose = tight_loose_partition(g, nc.core, tight_m)
    tight_set = set(tight)
    for v in nc.core:
        tn = [u for u in g.neighbors(v) if u in tight_set]
        if len(tn) > 1:
            report.tightness.append(f"core vertex {v} has {len(tn)} tight neighbors")
    if len(nc.core) == delta - 1:
        cmask = mask_of(nc.core)
        for v in g.vertices():
            if v in nc.core:
                continue
            c = (g.adj[v] & cmask).bit_count()
            if c > 85:
                report.tightness.append(
                    f"vertex {v} has {c} > 85 neighbors in a core of size delta-1"
                )
