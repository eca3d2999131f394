"""Pure-Python solver kernel.

Same contract as the compiled kernel in ``_fastkern``: backtracking search
for an (L, Pi)-coloring on a compact flat encoding:

  n               vertex count
  universe        number of colors (<= 64); lists are bitmasks
  avail[v]        bitmask of allowed colors at v
  nbr_ptr/nbr     CSR adjacency (nbr[nbr_ptr[v]:nbr_ptr[v+1]] = neighbors)
  fwd[s*U + c]    for CSR slot s on vertex v (edge v->nbr[s]): the color
                  blocked at the neighbor when v takes c, or -1

solve returns (status, coloring-or-None, nodes); count returns
(status, count, nodes); status is "sat", "unsat" or "budget".
"""

from __future__ import annotations

import sys
from typing import Optional, Sequence


def _pick(n: int, color: list[int], avail: list[int]) -> int:
    best, bestc = -1, 1 << 62
    for v in range(n):
        if color[v] < 0:
            c = avail[v].bit_count()
            if c < bestc:
                best, bestc = v, c
                if c <= 1:
                    break
    return best


def solve_kernel(
    n: int,
    universe: int,
    avail: Sequence[int],
    nbr_ptr: Sequence[int],
    nbr: Sequence[int],
    fwd: Sequence[int],
    budget: int,
) -> tuple[str, Optional[list[int]], int]:
    color = [-1] * n
    avail = list(avail)
    nodes = 0
    if n + 64 > sys.getrecursionlimit():
        sys.setrecursionlimit(n + 1024)

    def rec() -> str:
        nonlocal nodes
        v = _pick(n, color, avail)
        if v < 0:
            return "sat"
        cand = avail[v]
        while cand:
            bit = cand & -cand
            cand ^= bit
            c = bit.bit_length() - 1
            nodes += 1
            if nodes > budget:
                return "budget"
            undo: list[tuple[int, int]] = []
            ok = True
            for s in range(nbr_ptr[v], nbr_ptr[v + 1]):
                u = nbr[s]
                if color[u] >= 0:
                    continue
                b = fwd[s * universe + c]
                if b >= 0 and (avail[u] >> b & 1):
                    undo.append((u, avail[u]))
                    avail[u] &= ~(1 << b)
                    if avail[u] == 0:
                        ok = False
                        break
            if ok:
                color[v] = c
                status = rec()
                if status != "unsat":
                    return status
                color[v] = -1
            for u, old in undo:
                avail[u] = old
        return "unsat"

    status = rec()
    return status, (list(color) if status == "sat" else None), nodes


def count_kernel(
    n: int,
    universe: int,
    avail: Sequence[int],
    nbr_ptr: Sequence[int],
    nbr: Sequence[int],
    fwd: Sequence[int],
    budget: int,
) -> tuple[str, int, int]:
    if n == 0:
        return "sat", 1, 0
    color = [-1] * n
    avail = list(avail)
    nodes = 0
    total = 0
    if n + 64 > sys.getrecursionlimit():
        sys.setrecursionlimit(n + 1024)

    def rec(depth: int) -> bool:
        nonlocal nodes, total
        if depth == n:
            total += 1
            return True
        v = _pick(n, color, avail)
        cand = avail[v]
        while cand:
            bit = cand & -cand
            cand ^= bit
            c = bit.bit_length() - 1
            nodes += 1
            if nodes > budget:
                return False
            undo = []
            ok = True
            for s in range(nbr_ptr[v], nbr_ptr[v + 1]):
                u = nbr[s]
                if color[u] >= 0:
                    continue
                b = fwd[s * universe + c]
                if b >= 0 and (avail[u] >> b & 1):
                    undo.append((u, avail[u]))
                    avail[u] &= ~(1 << b)
                    if avail[u] == 0:
                        ok = False
                        break
            if ok:
                color[v] = c
                if not rec(depth + 1):
                    return False
                color[v] = -1
            for u, old in undo:
                avail[u] = old
        return True

    finished = rec(0)
    return ("sat", total, nodes) if finished else ("budget", total, nodes)
