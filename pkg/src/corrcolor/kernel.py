"""Kernel selection and the compact instance encoding.

At import time we pick the compiled backtracking kernel if the extension was
built, otherwise the pure-Python twin.  ``CORRCOLOR_FORCE_PY=1`` forces the
fallback (used by the benchmark to compare both).
"""

from __future__ import annotations

import os
from typing import Mapping, Optional

from .assignment import CorrespondenceAssignment
from .errors import InputError

BACKEND = "python"
from . import _pykern as _impl  # noqa: E402

if os.environ.get("CORRCOLOR_FORCE_PY") != "1":
    try:
        from . import _fastkern as _impl  # type: ignore  # noqa: F811

        BACKEND = "native"
    except ImportError:
        pass

_MAX_DEG = 255  # compiled kernel keeps per-frame undo buffers of this size


def encode(
    ca: CorrespondenceAssignment, psi: Optional[Mapping[int, int]] = None
) -> tuple[int, int, list[int], list[int], list[int], list[int]]:
    """Flat encoding of the residual instance under a partial coloring.

    Colored vertices are dropped; their blocking effect is folded into the
    avail masks of their uncolored neighbors.
    """
    g = ca.graph
    psi = psi or {}
    universe = max(ca.universe, 1)
    keep = [v for v in g.vertices() if v not in psi]
    idx = {v: i for i, v in enumerate(keep)}
    n = len(keep)
    avail = []
    for v in keep:
        mask = 0
        for c in ca.lists[v]:
            mask |= 1 << c
        for u in g.neighbors(v):
            if u in psi:
                b = ca.blocked(u, psi[u], v)
                if b is not None:
                    mask &= ~(1 << b)
        avail.append(mask)
    nbr_ptr = [0]
    nbr: list[int] = []
    fwd: list[int] = []
    for v in keep:
        neigh = [u for u in g.neighbors(v) if u in idx]
        if len(neigh) > _MAX_DEG:
            raise InputError("degree too large for the solver kernel")
        own = set(ca.lists[v])
        for u in neigh:
            nbr.append(idx[u])
            for c in range(universe):
                b = ca.blocked(v, c, u) if c in own else None
                fwd.append(-1 if b is None else b)
        nbr_ptr.append(len(nbr))
    return n, universe, avail, nbr_ptr, nbr, fwd


def solve_encoded(ca, psi, budget):
    n, universe, avail, nbr_ptr, nbr, fwd = encode(ca, psi)
    status, colors, nodes = _impl.solve_kernel(n, universe, avail, nbr_ptr, nbr, fwd, budget)
    if status != "sat":
        return status, None, nodes
    keep = [v for v in ca.graph.vertices() if v not in (psi or {})]
    return status, {v: c for v, c in zip(keep, colors)}, nodes


def count_encoded(ca, psi, budget):
    n, universe, avail, nbr_ptr, nbr, fwd = encode(ca, psi)
    return _impl.count_kernel(n, universe, avail, nbr_ptr, nbr, fwd, budget)
