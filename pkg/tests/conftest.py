"""Shared helpers: exhaustive small-graph generation and isomorphism tools."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

import numpy as np
import pytest

from corrcolor.graph import Graph, build_graph


def edge_slots(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def graph_from_mask(n: int, mask: int) -> Graph:
    slots = edge_slots(n)
    return build_graph(n, [slots[i] for i in range(len(slots)) if mask >> i & 1])


def all_graphs(n: int):
    """Every labeled graph on n vertices."""
    for mask in range(1 << len(edge_slots(n))):
        yield graph_from_mask(n, mask)


@lru_cache(maxsize=None)
def canonical_mask_classes(n: int) -> dict[int, int]:
    """Map every labeled-graph edge mask to a canonical representative mask.

    Vectorized min-over-permutations; exact isomorphism classification.
    """
    slots = edge_slots(n)
    nslots = len(slots)
    slot_index = {e: i for i, e in enumerate(slots)}
    perm_maps = []
    for p in permutations(range(n)):
        perm_maps.append(
            [slot_index[tuple(sorted((p[u], p[v])))] for (u, v) in slots]
        )
    masks = np.arange(1 << nslots, dtype=np.int64)
    bits = np.empty((len(masks), nslots), dtype=bool)
    for i in range(nslots):
        bits[:, i] = (masks >> i) & 1
    best = np.full(len(masks), np.iinfo(np.int64).max, dtype=np.int64)
    for pm in perm_maps:
        remapped = np.zeros(len(masks), dtype=np.int64)
        for dst, src in enumerate(pm):
            remapped |= bits[:, src].astype(np.int64) << dst
        np.minimum(best, remapped, out=best)
    return {int(m): int(b) for m, b in zip(masks, best)}


def representative_masks(n: int) -> list[int]:
    classes = canonical_mask_classes(n)
    return sorted(set(classes.values()))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    """Exhaustive permutation check (fine for n <= 8)."""
    if g.n != h.n or g.degree_sequence() != h.degree_sequence():
        return False
    hedges = set(h.edges())
    for p in permutations(range(g.n)):
        if all(tuple(sorted((p[u], p[v]))) in hedges for u, v in g.edges()):
            return True
    return False


@pytest.fixture(scope="session")
def small_core_fixture():
    """K5 core with two anchored benefactor bridges; used by the witness,
    selector, and process tests."""
    from corrcolor.graph import complete_graph
    from corrcolor.structure import Benefactor

    edges = list(complete_graph(5).edges()) + [(0, 5), (1, 6)]
    g = build_graph(7, edges)
    x1 = Benefactor(frozenset({0, 5}), 0)
    x2 = Benefactor(frozenset({1, 6}), 1)
    return g, [0, 1, 2, 3, 4], [2, 3, 4, 5, 6], [x1, x2]
