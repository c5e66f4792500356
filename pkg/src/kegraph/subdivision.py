"""Even subdivisions of K4 and T: structural recognition, canonical perfect matchings, niceness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graph import Graph
from .matching import Matching, has_perfect_matching

__all__ = [
    "EvenSubdivision",
    "recognize_even_k4_subdivision",
    "recognize_even_t_subdivision",
    "recognize_even_subdivision",
    "k4_subdivision_perfect_matching",
    "t_subdivision_unique_pm",
    "subdivision_perfect_matching",
    "is_nice",
    "subdivide_edges_even",
    "witness_from_json",
]

K4_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
# corner pairings {P_ab, P_cd} that can be matched end to end
K4_PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


@dataclass(frozen=True)
class EvenSubdivision:
    """Witness structure.

    K4: ``corners`` are v1 < v2 < v3 < v4 and ``paths`` the six branch paths
    in the order P12, P13, P14, P23, P24, P34, each running from the lower
    corner.  T: ``corners`` are the tips (v, w) with v < w, ``cycles`` the two
    odd cycles as closed vertex sequences starting at their tip, and
    ``paths`` the single v..w path.
    """

    kind: str
    corners: tuple[int, ...]
    paths: tuple[tuple[int, ...], ...]
    cycles: tuple[tuple[int, ...], ...] = ()

    @property
    def vertices(self) -> tuple[int, ...]:
        vs = set()
        for p in self.paths:
            vs.update(p)
        for c in self.cycles:
            vs.update(c)
        return tuple(sorted(vs))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        es = set()
        for p in self.paths:
            es.update((min(a, b), max(a, b)) for a, b in zip(p, p[1:]))
        for c in self.cycles:
            cyc = list(c) + [c[0]]
            es.update((min(a, b), max(a, b)) for a, b in zip(cyc, cyc[1:]))
        return tuple(sorted(es))

    def relabel(self, mapping: Sequence[int]) -> "EvenSubdivision":
        """Rename vertex x to mapping[x]; re-canonicalised through the recognizer."""
        h = Graph(max(mapping) + 1, [(mapping[a], mapping[b]) for a, b in self.edges])
        w = recognize_even_subdivision(h, self.kind)
        assert w is not None
        return w

    def to_json(self) -> dict:
        out = {"kind": self.kind, "vertices": list(self.vertices)}
        if self.kind == "K4":
            out["corners"] = list(self.corners)
            out["paths"] = [list(p) for p in self.paths]
        else:
            out["tips"] = list(self.corners)
            out["cycles"] = [list(c) for c in self.cycles]
            out["path"] = list(self.paths[0])
        return out


def witness_from_json(d: Mapping) -> EvenSubdivision:
    if d["kind"] == "K4":
        return EvenSubdivision("K4", tuple(d["corners"]), tuple(tuple(p) for p in d["paths"]))
    return EvenSubdivision("T", tuple(d["tips"]), (tuple(d["path"]),), tuple(tuple(c) for c in d["cycles"]))


def _support(h: Graph) -> list[int]:
    return [v for v in range(h.n) if h.degree(v) > 0]


def _connected_on(h: Graph, verts: list[int]) -> bool:
    if not verts:
        return False
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for u in h.neighbors(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(verts)


def _walk(h: Graph, start: int, first: int, branch: set[int]) -> list[int]:
    """Follow a degree-2 chain from ``start`` through ``first`` to the next branch vertex."""
    seq = [start, first]
    prev, cur = start, first
    while cur not in branch:
        a, b = h.neighbors(cur)
        nxt = b if a == prev else a
        seq.append(nxt)
        prev, cur = cur, nxt
        if len(seq) > h.n + 1:
            raise AssertionError("chain walk did not terminate")
    return seq


def _degree_profile(h: Graph, verts: list[int], nbranch: int) -> list[int] | None:
    branch = []
    for v in verts:
        d = h.degree(v)
        if d == 3:
            branch.append(v)
        elif d != 2:
            return None
    return branch if len(branch) == nbranch else None


def recognize_even_k4_subdivision(h: Graph, allow_isolated: bool = True) -> EvenSubdivision | None:
    """Witness iff the non-isolated part of ``h`` is an even subdivision of K4.

    Isolated vertices are ignored when ``allow_isolated`` (so an edge-subset
    subgraph of a larger host can be passed directly); spanning callers check
    ``vertices`` against the host.
    """
    verts = _support(h)
    if not allow_isolated and len(verts) != h.n:
        return None
    corners = _degree_profile(h, verts, 4)
    if corners is None or not _connected_on(h, verts):
        return None
    cset = set(corners)
    found = {}
    for c in corners:
        for u in h.neighbors(c):
            p = _walk(h, c, u, cset)
            a, b = p[0], p[-1]
            if a == b:
                return None
            key = (min(a, b), max(a, b))
            if a > b:
                p = p[::-1]
            if key in found and found[key] != tuple(p):
                return None  # parallel branch paths: not K4
            found[key] = tuple(p)
    cs = sorted(corners)
    try:
        paths = tuple(found[(cs[i], cs[j])] for i, j in K4_PAIRS)
    except KeyError:
        return None
    if len(found) != 6:
        return None
    if any((len(p) - 1) % 2 == 0 for p in paths):
        return None
    return EvenSubdivision("K4", tuple(cs), paths)


def _orient_cycle(seq: list[int]) -> tuple[int, ...]:
    cyc = seq[:-1]
    if len(cyc) > 2 and cyc[-1] < cyc[1]:
        cyc = [cyc[0]] + cyc[1:][::-1]
    return tuple(cyc)


def recognize_even_t_subdivision(h: Graph, allow_isolated: bool = True) -> EvenSubdivision | None:
    """Witness iff the non-isolated part of ``h`` is two odd cycles joined by an odd path."""
    verts = _support(h)
    if not allow_isolated and len(verts) != h.n:
        return None
    tips = _degree_profile(h, verts, 2)
    if tips is None or not _connected_on(h, verts):
        return None
    v, w = sorted(tips)
    tset = {v, w}
    cycles = []
    path = None
    for t, other in ((v, w), (w, v)):
        loops = []
        for u in h.neighbors(t):
            p = _walk(h, t, u, tset)
            if p[-1] == t:
                loops.append(p)
            elif t == v:
                path = tuple(p)
        if len(loops) != 2:
            return None
        cyc = _orient_cycle(loops[0])
        if len(cyc) % 2 == 0:
            return None
        cycles.append(cyc)
    if path is None or (len(path) - 1) % 2 == 0:
        return None
    return EvenSubdivision("T", (v, w), (path,), tuple(cycles))


def recognize_even_subdivision(h: Graph, kind: str | None = None) -> EvenSubdivision | None:
    if kind in (None, "K4"):
        w = recognize_even_k4_subdivision(h)
        if w is not None:
            return w
    if kind in (None, "T"):
        return recognize_even_t_subdivision(h)
    return None


def _alternate(seq: Sequence[int], start: int) -> list[tuple[int, int]]:
    return [(seq[i], seq[i + 1]) for i in range(start, len(seq) - 1, 2)]


def k4_subdivision_perfect_matching(s: EvenSubdivision, pairing: int = 0) -> Matching:
    """Match two opposite branch paths end to end and the interiors of the other four.

    ``pairing`` selects {P12, P34} (0), {P13, P24} (1) or {P14, P23} (2).
    """
    if s.kind != "K4":
        raise ValueError("K4 witness required")
    full = set(K4_PAIRINGS[pairing])
    edges = []
    for key, p in zip(K4_PAIRS, s.paths):
        edges += _alternate(p, 0 if key in full else 1)
    return Matching(edges)


def t_subdivision_unique_pm(s: EvenSubdivision) -> Matching:
    """Path edges covering both tips, then each cycle minus its tip matched along the cycle."""
    if s.kind != "T":
        raise ValueError("T witness required")
    edges = _alternate(s.paths[0], 0)
    for c in s.cycles:
        edges += _alternate(list(c[1:]), 0)
    return Matching(edges)


def subdivision_perfect_matching(s: EvenSubdivision) -> Matching:
    return k4_subdivision_perfect_matching(s) if s.kind == "K4" else t_subdivision_unique_pm(s)


def is_nice(g: Graph, h_vertices: Iterable[int]) -> bool:
    """G - V(H) has a perfect matching (the null graph counts)."""
    return has_perfect_matching(g.delete_vertices(h_vertices))


def subdivide_edges_even(g: Graph, plan: Mapping[tuple[int, int], int]) -> Graph:
    """Replace each planned edge uv by a path with ``plan[uv]`` new interior vertices.

    New vertices are appended after n, edge by edge in canonical edge order,
    each path's interior listed from its lower endpoint.
    """
    canon = {}
    for e, k in plan.items():
        u, v = e
        key = (min(u, v), max(u, v))
        if key in canon:
            raise ValueError(f"edge {key} planned twice")
        if not g.has_edge(u, v):
            raise ValueError(f"edge {u}-{v} not in graph")
        if k < 0 or k % 2:
            raise ValueError(f"subdivision count for {key} must be even and >= 0, got {k}")
        canon[key] = k
    edges = []
    nxt = g.n
    for u, v in g.edges:
        k = canon.get((u, v), 0)
        seq = [u] + list(range(nxt, nxt + k)) + [v]
        nxt += k
        edges += list(zip(seq, seq[1:]))
    return Graph(nxt, edges)
