"""Text formats: graphs (DIMACS-like), assignments, colorings.

Files use 1-based vertex numbers (the usual edge-list convention); in-memory
structures are 0-based, with conversion at this boundary only.  Serializers
are canonical (sorted vertices, sorted colors), parsers reject trailing
garbage, and parse/serialize round-trips are bit-exact.
"""

from __future__ import annotations

import warnings
from typing import Mapping

from .assignment import CorrespondenceAssignment, Matching, validate
from .errors import InputError
from .graph import Graph, build_graph


def parse_graph(text: str) -> Graph:
    n = m = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise InputError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "edge":
                raise InputError(f"line {lineno}: malformed problem line")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer sizes")
        elif parts[0] == "e":
            if n is None:
                raise InputError(f"line {lineno}: edge before the problem line")
            if len(parts) != 3:
                raise InputError(f"line {lineno}: malformed edge line")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer endpoints")
            if not (1 <= u <= n and 1 <= v <= n):
                raise InputError(f"line {lineno}: endpoint outside 1..{n}")
            if u == v:
                raise InputError(f"line {lineno}: self-loop")
            key = (min(u, v), max(u, v))
            if key in seen:
                warnings.warn(f"line {lineno}: duplicate edge {key} collapsed")
            seen.add(key)
            edges.append((u - 1, v - 1))
        else:
            raise InputError(f"line {lineno}: unrecognized line {line!r}")
    if n is None:
        raise InputError("missing problem line")
    g = build_graph(n, edges)
    if m is not None and g.m != m:
        warnings.warn(f"problem line declares {m} edges, file carries {g.m}")
    return g


def serialize_graph(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    for u, v in sorted(g.edges()):
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


def parse_assignment(text: str, g: Graph) -> CorrespondenceAssignment:
    lists: dict[int, list[int]] = {}
    matchings: dict[tuple[int, int], Matching] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "list":
            if len(parts) < 2 or not parts[1].endswith(":"):
                raise InputError(f"line {lineno}: malformed list line")
            try:
                v = int(parts[1][:-1])
                colors = [int(c) for c in parts[2:]]
            except ValueError:
                raise InputError(f"line {lineno}: non-integer entries")
            if not (1 <= v <= g.n):
                raise InputError(f"line {lineno}: vertex {v} out of range")
            if v - 1 in lists:
                raise InputError(f"line {lineno}: duplicate list for vertex {v}")
            if len(set(colors)) != len(colors):
                raise InputError(f"line {lineno}: duplicate colors")
            lists[v - 1] = colors
        elif parts[0] == "match":
            if len(parts) < 3 or not parts[2].endswith(":"):
                raise InputError(f"line {lineno}: malformed match line")
            try:
                u, v = int(parts[1]), int(parts[2][:-1])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer endpoints")
            if not (1 <= u <= g.n and 1 <= v <= g.n) or not g.has_edge(u - 1, v - 1):
                raise InputError(f"line {lineno}: ({u},{v}) is not an edge")
            pairs = []
            for tok in parts[3:]:
                bits_ = tok.split("-")
                if len(bits_) != 2:
                    raise InputError(f"line {lineno}: malformed pair {tok!r}")
                try:
                    pairs.append((int(bits_[0]), int(bits_[1])))
                except ValueError:
                    raise InputError(f"line {lineno}: non-integer pair {tok!r}")
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in matchings:
                raise InputError(f"line {lineno}: duplicate matching for edge")
            if u - 1 > v - 1:
                pairs = [(b, a) for a, b in pairs]
            try:
                matchings[key] = Matching.from_pairs(pairs)
            except InputError as ex:
                raise InputError(f"line {lineno}: {ex}")
        else:
            raise InputError(f"line {lineno}: unrecognized line {line!r}")
    full_lists = [lists.get(v, []) for v in range(g.n)]
    try:
        ca = CorrespondenceAssignment(g, full_lists, matchings)
    except InputError as ex:
        raise InputError(str(ex))
    report = validate(ca)
    if not report.ok:
        raise InputError("; ".join(report.violations))
    return ca


def serialize_assignment(ca: CorrespondenceAssignment) -> str:
    lines = []
    for v in range(ca.graph.n):
        cols = " ".join(str(c) for c in ca.lists[v])
        lines.append(f"list {v + 1}: {cols}".rstrip())
    for (u, v), m in sorted(ca.matchings().items()):
        pairs = " ".join(f"{a}-{b}" for a, b in m.fwd)
        lines.append(f"match {u + 1} {v + 1}: {pairs}".rstrip())
    return "\n".join(lines) + "\n"


def parse_coloring(text: str, g: Graph) -> dict[int, int]:
    phi: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "color" or len(parts) != 3:
            raise InputError(f"line {lineno}: unrecognized line {line!r}")
        try:
            v, c = int(parts[1]), int(parts[2])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer entries")
        if not (1 <= v <= g.n):
            raise InputError(f"line {lineno}: vertex {v} out of range")
        if v - 1 in phi:
            raise InputError(f"line {lineno}: vertex {v} colored twice")
        phi[v - 1] = c
    return phi


def serialize_coloring(phi: Mapping[int, int]) -> str:
    return "".join(f"color {v + 1} {phi[v]}\n" for v in sorted(phi))
