"""Settings, transversals, resampling processes, and the end-to-end colorer.

The probabilistic machinery in executable form: a setting packages the
sparse-dense decomposition with cores and disjoint benefactor families; a
transversal is a vertex subset meeting four quota conditions; uniform
colorings of the transversal get improved by selector-invariant resampling
until no bad event (a zero-excess sparse vertex, or a core with fewer than
two successful benefactors) survives, and the coloring then extends greedily
to the whole graph.

Exact uniform sampling is only possible at toy scale; larger runs use a
clearly labeled approximation (randomized greedy plus single-vertex
resampling sweeps).  Every emitted coloring is validated regardless.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .assignment import (
    CorrespondenceAssignment,
    induced_assignment,
    random_full_exact,
    remove_colors,
    residual_list,
    straighten_tree,
)
from .coloring import (
    excess,
    is_valid_coloring,
    is_valid_partial,
    uniform_coloring,
)
from .errors import BudgetExceededError, HypothesisViolation, InputError
from .graph import Graph, bits, clique_number, mask_of, nonedges_within
from .params import PAPER, PipelineParams
from .structure import (
    Benefactor,
    Decomposition,
    max_disjoint_benefactors,
    sparse_dense_decomposition,
)

# -- setting --------------------------------------------------------------------


@dataclass
class Setting:
    graph: Graph
    delta: int
    params: PipelineParams
    decomposition: Decomposition
    cores: list[tuple[int, ...]]
    families: list[list[Benefactor]]
    shortfalls: list[str] = field(default_factory=list)

    @property
    def sparse(self) -> tuple[int, ...]:
        return self.decomposition.sparse


def build_setting(
    g: Graph,
    delta: int,
    params: PipelineParams = PAPER,
    budget: Optional[int] = None,
) -> Setting:
    """Compose the decomposition with per-core benefactor families, truncated
    to the configured size; cores whose supply falls short are reported, not
    fatal."""
    decomposition = sparse_dense_decomposition(
        g, delta, params.sigma(delta), params.rho(delta),
        params.loose_m, params.tight_m, budget,
    )
    want = params.benefactor_count(delta)
    cores, families, shortfalls = [], [], []
    for nc in decomposition.near_cliques:
        core = nc.core
        fam = max_disjoint_benefactors(g, core, delta, params.loose_m)
        if len(fam) < want:
            shortfalls.append(
                f"core of size {len(core)} supplies {len(fam)} benefactors, wanted {want}"
            )
        cores.append(core)
        families.append(fam[:want])
    return Setting(g, delta, params, decomposition, cores, families, shortfalls)


# -- transversal ----------------------------------------------------------------


def bisects(s: Iterable[int], x: Benefactor) -> bool:
    """S slices the benefactor exactly along the core: outside in, anchor out."""
    sset = set(s)
    return x.anchor not in sset and all(u in sset for u in x.outside())


@dataclass
class Transversal:
    vertices: frozenset[int]
    checklist: dict[str, bool]
    details: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checklist.values())


def transversal_check(setting: Setting, s: Iterable[int]) -> Transversal:
    """Evaluate the four quota conditions exactly."""
    g, delta, params = setting.graph, setting.delta, setting.params
    sset = frozenset(s)
    smask = mask_of(sset)
    checklist: dict[str, bool] = {}
    details: dict[str, object] = {}

    worst_v, worst = None, -1
    for v in g.vertices():
        c = (g.adj[v] & smask).bit_count()
        if c > worst:
            worst_v, worst = v, c
    checklist["i"] = worst <= params.nbr_cap(delta)
    details["max_neighbors_in_s"] = (worst_v, worst)

    floor = params.nonedge_floor(delta)
    bad_sparse = []
    for v in setting.sparse:
        inside = g.adj[v] & smask
        vs = list(bits(inside))
        cnt = len(vs) * (len(vs) - 1) // 2 - sum(
            (g.adj[u] & inside).bit_count() for u in vs
        ) // 2
        if cnt < floor:
            bad_sparse.append((v, cnt))
    checklist["ii"] = not bad_sparse
    details["sparse_shortfalls"] = bad_sparse[:10]

    core_floor = params.core_floor(delta)
    bad_cores = []
    for i, core in enumerate(setting.cores):
        have = len(sset & set(core))
        if have < core_floor:
            bad_cores.append((i, have))
    checklist["iii"] = not bad_cores
    details["core_shortfalls"] = bad_cores

    bisect_floor = setting.params.bisect_floor(delta)
    bad_bisect = []
    for i, fam in enumerate(setting.families):
        have = sum(1 for x in fam if bisects(sset, x))
        # a reported benefactor shortfall caps what any subset can bisect
        if have < min(bisect_floor, len(fam)):
            bad_bisect.append((i, have))
    checklist["iv"] = not bad_bisect
    details["bisect_shortfalls"] = bad_bisect
    return Transversal(sset, checklist, details)


def sample_transversal(
    setting: Setting,
    p: Optional[float] = None,
    seed: int = 0,
    policy: str = "mt_resample",
    max_rounds: int = 50,
    max_tries: int = 50,
) -> tuple[Optional[Transversal], int]:
    """Independent Bernoulli(p) inclusion, then either wholesale redraws or
    targeted redraws of the violated condition's dependency set.  Returns
    (transversal-or-None, rounds used); deterministic per seed."""
    g, params = setting.graph, setting.params
    if p is None:
        p = float(params.select_prob)
    rng = random.Random(seed)

    def draw_all() -> set[int]:
        return {v for v in g.vertices() if rng.random() < p}

    if policy == "reject":
        for t in range(max_tries):
            tv = transversal_check(setting, draw_all())
            if tv.ok:
                return tv, t + 1
        return None, max_tries
    if policy != "mt_resample":
        raise InputError(f"unknown policy {policy!r}")

    s = draw_all()
    for rounds in range(max_rounds):
        region = _first_violated_region(setting, s)
        if region is None:
            return transversal_check(setting, s), rounds
        for v in sorted(region):
            if rng.random() < p:
                s.add(v)
            else:
                s.discard(v)
    return None, max_rounds


def _first_violated_region(setting: Setting, s: set[int]) -> Optional[set[int]]:
    """Dependency set of the first violated transversal condition, in the
    fixed event order (degree caps, sparse non-edges, cores, bisections)."""
    g, delta, params = setting.graph, setting.delta, setting.params
    smask = mask_of(s)
    cap = params.nbr_cap(delta)
    for v in g.vertices():
        if (g.adj[v] & smask).bit_count() > cap:
            return set(g.neighbors(v))
    floor = params.nonedge_floor(delta)
    for v in setting.sparse:
        inside = g.adj[v] & smask
        vs = list(bits(inside))
        cnt = len(vs) * (len(vs) - 1) // 2 - sum(
            (g.adj[u] & inside).bit_count() for u in vs
        ) // 2
        if cnt < floor:
            return set(g.neighbors(v))
    core_floor = params.core_floor(delta)
    for core in setting.cores:
        if len(s & set(core)) < core_floor:
            return set(core)
    bisect_floor = params.bisect_floor(delta)
    for fam in setting.families:
        have = sum(1 for x in fam if bisects(s, x))
        if have < min(bisect_floor, len(fam)):
            return {v for x in fam for v in x.vertices}
    return None


# -- saving, richness, witnesses ---------------------------------------------------


def together_block_at_most_one(
    ca: CorrespondenceAssignment, phi: Mapping[int, int], x: int, y: int, v: int
) -> bool:
    """Do the colors of x and y jointly block at most one color at v?"""
    bx = ca.blocked(x, phi[x], v)
    by = ca.blocked(y, phi[y], v)
    return bx is None or by is None or bx == by


@dataclass
class SavingState:
    monochromatic: list[tuple[int, int]]
    needed: int
    saves: bool
    disjoint_count: int


def saving_state(
    ca: CorrespondenceAssignment,
    psi: Mapping[int, int],
    v: int,
    m_pairs: Sequence[tuple[int, int]],
    delta: int,
) -> SavingState:
    """Count the non-edges of M whose endpoint colors jointly block at most
    one color at v; v is saved when at least 2 + deg(v) - delta of them do.

    The excess cross-check uses the disjoint (matching) count: a family of
    pairwise-disjoint saving non-edges provably forces positive excess,
    whereas overlapping ones in general do not.
    """
    g = ca.graph
    nbhd = set(g.neighbors(v))
    for x, y in m_pairs:
        if g.has_edge(x, y):
            raise InputError(f"({x},{y}) is an edge, not a non-edge")
        if x not in nbhd or y not in nbhd:
            raise InputError(f"({x},{y}) leaves the neighborhood of {v}")
        if x not in psi or y not in psi:
            raise InputError(f"({x},{y}) has an uncolored endpoint")
    mono = [
        (x, y) for x, y in m_pairs if together_block_at_most_one(ca, psi, x, y, v)
    ]
    needed = max(0, 2 + g.degree(v) - delta)
    disjoint = _max_disjoint_pairs(mono)
    state = SavingState(mono, needed, len(mono) >= needed, disjoint)
    if state.saves and disjoint >= needed and len(ca.lists[v]) == delta - 1 and v not in psi:
        if excess(ca, psi, v) <= 0:
            raise AssertionError("disjoint saving family without positive excess")
    return state


def _max_disjoint_pairs(pairs: Sequence[tuple[int, int]]) -> int:
    best = 0

    def rec(i: int, used: set, cur: int):
        nonlocal best
        best = max(best, cur)
        for j in range(i, len(pairs)):
            x, y = pairs[j]
            if x in used or y in used:
                continue
            rec(j + 1, used | {x, y}, cur + 1)

    rec(0, set(), 0)
    return best


def rich_check(
    g: Graph, m_pairs: Sequence[tuple[int, int]], v: int, delta: int, beta: float
) -> bool:
    """For every subset of fewer than 2 + deg(v) - delta non-edges, at least
    beta members of M avoid all their endpoints."""
    needed = 2 + g.degree(v) - delta
    for size in range(0, max(needed, 0)):
        for sub in combinations(m_pairs, size):
            touched = {u for e in sub for u in e}
            free = sum(1 for x, y in m_pairs if x not in touched and y not in touched)
            if free < beta:
                return False
    return True


@dataclass
class WitnessState:
    successful: bool
    witness: tuple[int, ...]
    zone: frozenset[int]
    forbidden: dict[int, frozenset[int]]
    saving_pairs: list[tuple[int, int]]
    helpers: tuple[int, ...]


def witness_state(
    ca: CorrespondenceAssignment,
    phi: Mapping[int, int],
    s: Iterable[int],
    core: Sequence[int],
    x: Benefactor,
) -> WitnessState:
    """Saving pairs, success, the lexicographically minimal witness, its
    protection zone, and the witness-forbidden colors for one benefactor."""
    sset = set(s)
    if not bisects(sset, x):
        raise InputError("the benefactor is not bisected by the colored set")
    v = x.anchor
    cs = sorted(set(core) & sset)
    outside = x.outside()
    pairs = [
        (a, o)
        for a in cs
        for o in outside
        if together_block_at_most_one(ca, phi, a, o, v)
    ]
    helpers = tuple(sorted({a for a, _ in pairs}))
    quota = len(x.vertices) - 1
    successful = len(pairs) >= quota
    if successful:
        witness = _minimal_saving_set(pairs, helpers, quota)
        mx = max(witness)
        zone = frozenset(b for b in cs if b not in witness and b < mx)
    else:
        witness = helpers
        zone = frozenset(b for b in cs if b not in witness)
    forbidden: dict[int, frozenset[int]] = {}
    for b in zone:
        cols = set()
        for o in outside:
            bo = ca.blocked(o, phi[o], v)
            if bo is None:
                continue
            alpha = ca.blocked(v, bo, b)
            if alpha is not None:
                cols.add(alpha)
        forbidden[b] = frozenset(cols)
    return WitnessState(successful, witness, zone, forbidden, pairs, helpers)


def _minimal_saving_set(pairs, helpers, quota) -> tuple[int, ...]:
    """Smallest subset (in sorted-tuple order) whose members carry at least
    `quota` distinct saving pairs."""
    by_helper = {}
    for a, o in pairs:
        by_helper.setdefault(a, set()).add((a, o))
    subsets = []
    for size in range(1, len(helpers) + 1):
        for combo in combinations(helpers, size):
            subsets.append(tuple(combo))
    subsets.sort()
    for combo in subsets:
        total = sum(len(by_helper.get(a, ())) for a in combo)
        if total >= quota:
            return combo
    raise AssertionError("successful benefactor without a saving set")


def succ_count(
    ca: CorrespondenceAssignment,
    phi: Mapping[int, int],
    s: Iterable[int],
    core: Sequence[int],
    family: Sequence[Benefactor],
) -> int:
    sset = set(s)
    n = 0
    for x in family:
        if bisects(sset, x) and witness_state(ca, phi, sset, core, x).successful:
            n += 1
    return n


# -- selectors and resampling --------------------------------------------------------


def selector_and_pruned_assignment(
    ca: CorrespondenceAssignment,
    s: Iterable[int],
    core: Sequence[int],
    processed: Sequence[Benefactor],
    nxt: Benefactor,
    phi: Mapping[int, int],
) -> tuple[frozenset[int], CorrespondenceAssignment]:
    """The resampling region for the next benefactor, and the assignment with
    witness-forbidden colors removed inside that region."""
    sset = set(s)
    for x in list(processed) + [nxt]:
        if not bisects(sset, x):
            raise InputError("all processed sets and the next one must be bisected")
    states = [witness_state(ca, phi, sset, core, x) for x in processed]
    protected = set()
    for st in states:
        protected.update(st.witness)
    cs = set(core) & sset
    region = frozenset(set(nxt.outside()) | (cs - protected))
    removals: dict[int, set[int]] = {}
    for st in states:
        for b in st.zone:
            if b in region and st.forbidden[b]:
                removals.setdefault(b, set()).update(st.forbidden[b])
    return region, (remove_colors(ca, removals) if removals else ca)


def enumerate_region_colorings(
    ca: CorrespondenceAssignment,
    phi: Mapping[int, int],
    region: Iterable[int],
    budget: int = 200_000,
) -> list[dict[int, int]]:
    """All colorings agreeing with phi outside the region (exact, budgeted)."""
    region = sorted(set(region))
    space = 1
    for v in region:
        space *= max(len(ca.lists[v]), 1)
        if space > budget:
            raise BudgetExceededError("region enumeration budget exceeded")
    base = {v: c for v, c in phi.items() if v not in set(region)}
    out = []
    for combo in product(*(ca.lists[v] for v in region)):
        cand = dict(base)
        cand.update(zip(region, combo))
        if is_valid_partial(ca, cand):
            out.append(cand)
    return out


def f_invariant_resample(
    ca: CorrespondenceAssignment,
    phi: Mapping[int, int],
    selector: Callable[[Mapping[int, int]], frozenset],
    seed: int,
    budget: int = 200_000,
) -> dict[int, int]:
    """Uniform draw among the selector-invariant modifications of phi.

    A modification may only change vertices inside selector(phi) and must
    leave the selector's output unchanged; phi itself always qualifies, so
    the draw is never empty.  Exact enumeration; the pipeline's large-scale
    approximation lives elsewhere and is labeled.
    """
    region = frozenset(selector(phi))
    candidates = [
        psi
        for psi in enumerate_region_colorings(ca, phi, region, budget)
        if frozenset(selector(psi)) == region
    ]
    rng = random.Random(seed)
    return candidates[rng.randrange(len(candidates))]


def approx_region_resample(
    ca: CorrespondenceAssignment,
    phi: Mapping[int, int],
    region: Iterable[int],
    rng: random.Random,
    sweeps: int = 3,
    tries: int = 20,
) -> Optional[dict[int, int]]:
    """Labeled approximation: randomized greedy recoloring of the region plus
    single-vertex resampling sweeps.  Returns a valid coloring agreeing with
    phi off the region, or None when the greedy pass cannot finish."""
    region = sorted(set(region))
    for _ in range(tries):
        cand = {v: c for v, c in phi.items() if v not in set(region)}
        order = list(region)
        rng.shuffle(order)
        ok = True
        for v in order:
            options = residual_list(ca, cand, v)
            if not options:
                ok = False
                break
            cand[v] = rng.choice(options)
        if not ok:
            continue
        for _ in range(sweeps):
            sweep = list(region)
            rng.shuffle(sweep)
            for v in sweep:
                cur = cand.pop(v)
                options = residual_list(ca, cand, v)
                cand[v] = rng.choice(options) if options else cur
        return cand
    return None


# -- the two resampling processes ------------------------------------------------------


@dataclass
class ProcessStep:
    index: int
    skipped: bool
    detail: dict


@dataclass
class ProcessTrace:
    steps: list[ProcessStep]
    final: dict[int, int]
    sampler: str
    extra: dict = field(default_factory=dict)


def vertex_saving_process(
    ca: CorrespondenceAssignment,
    s: Iterable[int],
    v: int,
    m_pairs: Sequence[tuple[int, int]],
    seed: int,
    delta: int,
    gamma: Optional[float] = None,
    beta: Optional[float] = None,
    delta_overlap: Optional[float] = None,
    initial: Optional[Mapping[int, int]] = None,
    budget: int = 200_000,
) -> ProcessTrace:
    """Resample each non-edge of M in turn, skipping any that touches an
    already-monochromatic one; the monochromatic set can only grow.

    Hypotheses (degree cap within the colored set, richness of M, list-size
    window) are checked up front and raise; they are never silently ignored.
    """
    g = ca.graph
    sset = sorted(set(s))
    if v in sset:
        raise InputError("the target vertex must lie outside the colored set")
    smask = mask_of(sset)
    gamma = gamma if gamma is not None else delta / 5
    beta_val = beta if beta is not None else 1.0
    overlap = delta_overlap if delta_overlap is not None else delta / 5
    problems = []
    if any((g.adj[u] & smask).bit_count() > gamma for u in g.vertices()):
        problems.append("some vertex has more than gamma neighbors in the colored set")
    if not rich_check(g, m_pairs, v, delta, beta_val):
        problems.append("the non-edge set is not rich enough")
    nbhd_in_s = [u for u in g.neighbors(v) if u in set(sset)]
    low = (delta + 4 * gamma + overlap - 4) / 2
    for u in nbhd_in_s:
        if len(ca.lists[u]) > delta:
            problems.append(f"list of {u} larger than delta")
        if len(ca.lists[u]) < low:
            problems.append(f"list of {u} below the saving threshold")
    for x, y in m_pairs:
        if g.has_edge(x, y) or x not in set(nbhd_in_s) or y not in set(nbhd_in_s):
            problems.append(f"({x},{y}) is not a non-edge inside the colored neighborhood")
    if problems:
        raise HypothesisViolation("; ".join(sorted(set(problems))))

    # straighten the star at v so monochromatic means literally equal colors;
    # the shared superset has size delta, matching the list-size window
    star = [(v, u) for u in nbhd_in_s]
    need = max([len(ca.lists[u]) for u in nbhd_in_s] + [len(ca.lists[v]), delta])
    gamma_set = list(ca.lists[v])
    c = 0
    while len(gamma_set) < need:
        if c not in gamma_set:
            gamma_set.append(c)
        c += 1
    sca, system = straighten_tree(ca, star, v, sorted(gamma_set))
    inverse = system.inverse()

    rng = random.Random(seed)
    if initial is not None:
        psi = system.apply_to_coloring(dict(initial))
    else:
        res = induced_assignment(sca, sset)
        inner = uniform_coloring(res.assignment, rng.randrange(1 << 30), budget)
        psi = res.map_coloring_back(inner)
    if not is_valid_partial(sca, psi) or set(psi) != set(sset):
        raise InputError("the initial coloring must color exactly the chosen set")

    steps: list[ProcessStep] = []
    processed: list[tuple[int, int]] = []

    def refresh_mono():
        return {e for e in processed if psi[e[0]] == psi[e[1]]}

    for i, (x, y) in enumerate(m_pairs):
        mono_before = refresh_mono()
        touched = {u for e in mono_before for u in e}
        if x in touched or y in touched:
            processed.append((x, y))
            steps.append(ProcessStep(i, True, {"mono": len(mono_before)}))
            continue
        # colors that would turn an earlier processed non-edge at x or y
        # monochromatic are removed to keep the selector invariant
        ban_x = {psi[z] for (p, q) in processed for z in ((q,) if p == x else (p,) if q == x else ())}
        ban_y = {psi[z] for (p, q) in processed for z in ((q,) if p == y else (p,) if q == y else ())}
        hold = dict(psi)
        del hold[x]
        del hold[y]
        lx = [cc for cc in residual_list(sca, hold, x) if cc not in ban_x]
        ly = [cc for cc in residual_list(sca, hold, y) if cc not in ban_y]
        if not lx or not ly:
            raise HypothesisViolation("a resampling list emptied; the window was too tight")
        psi[x] = rng.choice(lx)
        psi[y] = rng.choice(ly)
        processed.append((x, y))
        mono_after = refresh_mono()
        if not mono_before <= mono_after:
            raise AssertionError("the monochromatic set shrank")
        common = len(set(lx) & set(ly))
        steps.append(
            ProcessStep(
                i,
                False,
                {
                    "mono": len(mono_after),
                    "p_step": common / (len(lx) * len(ly)),
                    "list_sizes": (len(lx), len(ly)),
                },
            )
        )

    final = inverse.apply_to_coloring(psi)
    if not is_valid_partial(ca, final):
        raise AssertionError("process produced an invalid coloring")
    state = saving_state(ca, final, v, m_pairs, delta)
    return ProcessTrace(steps, final, "exact-pairwise", {"saving": state})


def _other_end(edge, vtx):
    p, q = edge
    if p == vtx:
        return (q,)
    if q == vtx:
        return (p,)
    return ()


def core_success_process(
    ca: CorrespondenceAssignment,
    s: Iterable[int],
    core: Sequence[int],
    family: Sequence[Benefactor],
    seed: int,
    mode: str = "auto",
    initial: Optional[Mapping[int, int]] = None,
    budget: int = 200_000,
) -> ProcessTrace:
    """Sequentially resample each bisected benefactor's region under the
    pruned assignment; the success count never decreases and the witnesses of
    processed benefactors never change."""
    g = ca.graph
    sset = sorted(set(s))
    for x in family:
        if not bisects(sset, x):
            raise InputError("every family member must be bisected")
    rng = random.Random(seed)
    sampler = "exact"
    if initial is not None:
        psi = dict(initial)
        if not is_valid_partial(ca, psi) or set(psi) != set(sset):
            raise InputError("the initial coloring must color exactly the chosen set")
    else:
        res = induced_assignment(ca, sset)
        try:
            if mode == "approx":
                raise BudgetExceededError
            inner = uniform_coloring(res.assignment, rng.randrange(1 << 30), budget)
            psi = res.map_coloring_back(inner)
        except BudgetExceededError:
            if mode == "exact":
                raise
            sampler = "approx-greedy-sweeps"
            psi = approx_region_resample(ca, {}, sset, rng)
            if psi is None:
                raise InputError("no initial coloring found")

    steps: list[ProcessStep] = []
    prev_succ = succ_count(ca, psi, sset, core, [])
    for i, x in enumerate(family):
        processed = list(family[:i])
        region, pruned = selector_and_pruned_assignment(ca, sset, core, processed, x, psi)
        floor_violations = [
            u
            for u in region
            if len(pruned.lists[u]) < len(ca.lists[u]) - 2 * max(len(processed), 0)
        ]
        before_succ = succ_count(ca, psi, sset, core, family[: i])
        before_witness = [
            witness_state(ca, psi, sset, core, y).witness for y in processed
        ]
        use_exact = sampler == "exact" or mode == "exact"
        psi2 = None
        if use_exact:
            try:
                cands = [
                    cand
                    for cand in enumerate_region_colorings(pruned, psi, region, budget)
                ]
                psi2 = cands[rng.randrange(len(cands))]
            except BudgetExceededError:
                if mode == "exact":
                    raise
                psi2 = None
        if psi2 is None:
            sampler = "approx-greedy-sweeps"
            psi2 = approx_region_resample(pruned, psi, region, rng)
            if psi2 is None:
                psi2 = psi  # keeping the old coloring is always invariant
        psi = psi2
        after_succ = succ_count(ca, psi, sset, core, family[: i + 1])
        after_witness = [
            witness_state(ca, psi, sset, core, y).witness for y in processed
        ]
        if after_succ < before_succ:
            raise AssertionError("success count decreased")
        if after_witness != before_witness:
            raise AssertionError("a processed witness changed under resampling")
        steps.append(
            ProcessStep(
                i,
                False,
                {
                    "succ": after_succ,
                    "region": len(region),
                    "pruned_floor_violations": floor_violations,
                },
            )
        )
        prev_succ = after_succ
    if not is_valid_partial(ca, psi):
        raise AssertionError("process produced an invalid coloring")
    return ProcessTrace(steps, psi, sampler, {"succ": prev_succ})


# -- the end-to-end colorer -----------------------------------------------------------


@dataclass
class PipelineResult:
    coloring: Optional[dict[int, int]]
    report: dict

    @property
    def success(self) -> bool:
        return self.coloring is not None


def lll_pipeline(
    g: Graph,
    delta: int,
    params: PipelineParams = PAPER,
    seed: int = 0,
    ca: Optional[CorrespondenceAssignment] = None,
    max_rounds: int = 1000,
    transversal_rounds: int = 50,
    resample_steps_factor: int = 20,
    budget: Optional[int] = None,
) -> PipelineResult:
    """Full run: setting, transversal, colored transversal, bad-event
    resampling loop, then the greedy extension in the proof order.

    The existential local-lemma argument is algorithmized the standard way:
    whenever a bad event holds, its dependency region is resampled, scanning
    events in a fixed order, up to `max_rounds` times.  Failure is a reported
    outcome, never an exception.  Colorings of the transversal use the
    labeled approximate sampler (randomized greedy plus `resample_steps_factor`
    * |S| single-vertex resampling steps); exact uniformity at this scale is
    out of reach and never silently faked.
    """
    report: dict = {"delta": delta, "seed": seed, "events_fired": 0, "rounds": 0}
    rng = random.Random(seed)
    if g.max_degree() > delta:
        raise InputError("the graph exceeds the stated maximum degree")
    if ca is None:
        ca = random_full_exact(g, delta - 1, rng.randrange(1 << 30))
    if ca.graph != g:
        raise InputError("assignment built for a different graph")
    omega = clique_number(g, budget)
    report["omega_ok"] = omega <= delta - 1
    if not report["omega_ok"]:
        report["omega"] = omega

    setting = build_setting(g, delta, params, budget)
    report["cores"] = len(setting.cores)
    report["sparse"] = len(setting.sparse)
    report["benefactor_shortfalls"] = setting.shortfalls

    tv, rounds = sample_transversal(
        setting, None, rng.randrange(1 << 30), "mt_resample", transversal_rounds
    )
    report["transversal_rounds"] = rounds
    if tv is None:
        report["failure"] = "no transversal found"
        return PipelineResult(None, report)
    sset = sorted(tv.vertices)
    report["transversal_size"] = len(sset)

    # initial coloring of the chosen subgraph: greedy + resampling sweeps
    psi = approx_region_resample(ca, {}, sset, rng, sweeps=0)
    if psi is None:
        report["failure"] = "no greedy coloring of the transversal"
        return PipelineResult(None, report)
    for _ in range(resample_steps_factor):
        sweep = list(sset)
        rng.shuffle(sweep)
        for v in sweep:
            cur = psi.pop(v)
            options = residual_list(ca, psi, v)
            psi[v] = rng.choice(options) if options else cur
    report["sampler"] = "approx-greedy-sweeps"

    # bad events: zero-excess exposed sparse vertices, undersaved cores
    sparse_events = [
        v
        for v in setting.sparse
        if v not in tv.vertices and g.degree(v) >= delta - 1
    ]
    events: list[tuple[str, int]] = [("vertex", v) for v in sparse_events]
    # a core whose uncolored part already holds two low-degree vertices can
    # always finish greedily; its bad event is vacuous and skipped
    vacuous_cores = 0
    for i, core in enumerate(setting.cores):
        slack = sum(
            1 for w in core if w not in tv.vertices and g.degree(w) <= delta - 2
        )
        if slack >= 2:
            vacuous_cores += 1
        else:
            events.append(("core", i))
    report["vacuous_cores"] = vacuous_cores
    regions: dict[tuple[str, int], list[int]] = {}
    for kind, idx in events:
        if kind == "vertex":
            regions[(kind, idx)] = [u for u in g.neighbors(idx) if u in tv.vertices]
        else:
            blob = set(setting.cores[idx]) | {
                u for x in setting.families[idx] for u in x.vertices
            }
            regions[(kind, idx)] = [u for u in sorted(blob) if u in tv.vertices]
    report["event_registry"] = {
        "vertex_events": len(sparse_events),
        "core_events": len(setting.cores),
        "max_vertex_region": max(
            [len(regions[e]) for e in events if e[0] == "vertex"], default=0
        ),
        "max_core_region": max(
            [len(regions[e]) for e in events if e[0] == "core"], default=0
        ),
    }

    def violated(ev: tuple[str, int]) -> bool:
        kind, idx = ev
        if kind == "vertex":
            return excess(ca, psi, idx) <= 0
        core, fam = setting.cores[idx], setting.families[idx]
        return succ_count(ca, psi, tv.vertices, core, fam) <= 1

    clean = False
    for rnd in range(max_rounds):
        report["rounds"] = rnd
        bad = next((ev for ev in events if violated(ev)), None)
        if bad is None:
            clean = True
            break
        report["events_fired"] += 1
        fixed = approx_region_resample(ca, psi, regions[bad], rng)
        if fixed is not None:
            psi = fixed
    if not clean:
        bad_list = [ev for ev in events if violated(ev)]
        report["failure"] = f"bad events persisted after {max_rounds} rounds"
        report["persistent_events"] = bad_list[:10]
        return PipelineResult(None, report)

    # extension in the proof order: sparse singletons, then each dense part
    phi = dict(psi)
    for v in setting.sparse:
        if v in phi:
            continue
        options = residual_list(ca, phi, v)
        if not options:
            report["failure"] = f"sparse vertex {v} had no color at extension time"
            return PipelineResult(None, report)
        phi[v] = options[0]
    for i, nc in enumerate(setting.decomposition.near_cliques):
        core = set(setting.cores[i])
        extra = [u for u in nc.vertices if u not in core and u not in phi]
        for u in extra:
            uncolored_core_nbrs = [
                w for w in g.neighbors(u) if w in core and w not in phi
            ]
            if len(uncolored_core_nbrs) < 2:
                report["failure"] = f"dense-part vertex {u} lacked two uncolored core neighbors"
                return PipelineResult(None, report)
            options = residual_list(ca, phi, u)
            if not options:
                report["failure"] = f"dense-part vertex {u} had no color"
                return PipelineResult(None, report)
            phi[u] = options[0]
        todo = [w for w in sorted(core) if w not in phi]
        if not todo:
            continue
        scored = sorted(todo, key=lambda w: (excess(ca, phi, w), w))
        tail = scored[-2:] if len(scored) >= 2 else scored
        if excess(ca, phi, tail[-1]) < 1 or (
            len(tail) == 2 and excess(ca, phi, tail[0]) < 0
        ):
            report["failure"] = f"core {i} lacked the two positive-excess tail vertices"
            return PipelineResult(None, report)
        order = [w for w in todo if w not in tail] + tail
        for w in order:
            options = residual_list(ca, phi, w)
            if not options:
                report["failure"] = f"core vertex {w} had no color at extension time"
                return PipelineResult(None, report)
            phi[w] = options[0]
    if not is_valid_coloring(ca, phi):
        report["failure"] = "final coloring failed validation"
        return PipelineResult(None, report)
    report["valid"] = True
    return PipelineResult(phi, report)
