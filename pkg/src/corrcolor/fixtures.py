"""Catalogued deterministic fixtures used by tests, the CLI, and examples."""

from __future__ import annotations

import math
import random
from typing import Optional

from .assignment import CorrespondenceAssignment, random_full_exact
from .configs import ConfigurationKind, build_configuration_instance
from .errors import InputError
from .graph import (
    Graph,
    build_graph,
    complete_graph,
    complete_join,
    cycle_graph,
    petersen_graph,
    strong_product,
)


def two_overlapping_cliques(size: int = 39, shared: int = 25) -> Graph:
    """Two maximal cliques of the given size sharing `shared` vertices."""
    if shared >= size:
        raise InputError("the overlap must be a proper subset")
    priv = size - shared
    n = shared + 2 * priv
    first = list(range(shared + priv))
    second = list(range(shared)) + list(range(shared + priv, n))
    edges = []
    for block in (first, second):
        for i, u in enumerate(block):
            for v in block[i + 1 :]:
                edges.append((u, v))
    return build_graph(n, edges)


def core_plus_sparse(delta: int = 60, n_anchors: Optional[int] = None) -> Graph:
    """A near-clique (clique of size delta-1 plus one attached vertex)
    bridged into a bipartite sparse blob.

    The attached vertex lifts most clique degrees to delta-1 while leaving
    their neighborhoods dense; the first `n_anchors` clique vertices instead
    reach delta-1 through one bridge edge each into the blob, so they can
    head benefactors whose outside part is the bridge end.  At most one
    clique vertex keeps slack degree, which keeps the core saving machinery
    from being vacuous.  Blob vertices see an independent blob side, hence
    plenty of neighborhood non-edges.
    """
    core = delta - 1
    b = delta // 2
    if n_anchors is None:
        n_anchors = math.ceil(delta / 5)
    q = core - n_anchors - 1  # clique vertices attached to the extra vertex
    if n_anchors > min(core, b) or q < math.ceil(3 * delta / 4):
        raise InputError("anchor count incompatible with this delta")
    edges = [(i, j) for i in range(core) for j in range(i + 1, core)]
    a_start, b_start = core, core + b
    edges += [(a_start + i, b_start + j) for i in range(b) for j in range(b)]
    edges += [(i, a_start + i) for i in range(n_anchors)]
    u = core + 2 * b
    edges += [(w, u) for w in range(n_anchors, n_anchors + q)]
    return build_graph(u + 1, edges)


def random_gnp(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return build_graph(n, edges)


def generate_fixture(
    name: str, params: Optional[dict] = None, seed: int = 0
) -> tuple[Graph, Optional[CorrespondenceAssignment]]:
    """Catalogued fixtures; deterministic per (name, params, seed).

    When params carry "k", a random full exact k-assignment (seeded) rides
    along with the graph.
    """
    params = dict(params or {})
    k = params.pop("k", None)
    if name == "c5_boxtimes_k3":
        g = strong_product(cycle_graph(5), complete_graph(3))
    elif name == "petersen":
        g = petersen_graph()
    elif name == "k1_join_c4":
        g = complete_join(complete_graph(1), cycle_graph(4))
    elif name == "k5_minus_edge":
        g = build_graph(5, [e for e in complete_graph(5).edges() if e != (0, 1)])
    elif name == "kt_join":
        kindmap = {
            "k3bar": ConfigurationKind.KT_JOIN_K3BAR,
            "p4": ConfigurationKind.KT_JOIN_P4,
            "2k2": ConfigurationKind.KT_JOIN_2K2,
            "c4": ConfigurationKind.KT_JOIN_C4,
        }
        kind = kindmap[params.pop("kind", "k3bar")]
        g, _layout = build_configuration_instance(kind, t=params.pop("t", None))
    elif name == "two_overlapping_k39":
        g = two_overlapping_cliques(
            params.pop("size", 39), params.pop("shared", 25)
        )
    elif name == "core_plus_sparse":
        g = core_plus_sparse(
            params.pop("delta", 60), params.pop("n_anchors", None)
        )
    elif name == "random_gnp":
        g = random_gnp(params.pop("n", 10), params.pop("p", 0.5), seed)
    elif name in (
        "dense_complement",
        "three_nonedge_matching",
        "near_clique_join",
        "universal6",
        "vamp33",
    ):
        kind = ConfigurationKind(name.replace("_", "-"))
        g, _layout = build_configuration_instance(
            kind, t=params.pop("t", None), a=params.pop("a", None)
        )
    else:
        raise InputError(f"unknown fixture {name!r}")
    if params:
        raise InputError(f"unused fixture parameters: {sorted(params)}")
    ca = random_full_exact(g, k, seed) if k else None
    return g, ca


FIXTURE_NAMES = [
    "c5_boxtimes_k3",
    "petersen",
    "k1_join_c4",
    "k5_minus_edge",
    "kt_join",
    "two_overlapping_k39",
    "core_plus_sparse",
    "random_gnp",
    "dense_complement",
    "three_nonedge_matching",
    "near_clique_join",
    "universal6",
    "vamp33",
]
