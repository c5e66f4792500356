"""Constructors for the graph families used throughout the package.

Numbering conventions (stable, relied on by tests):

* blossom pair: first cycle 0..c1-1 with tip c1-1, then the path interior,
  then the second cycle starting at its tip.  (3, 3, 1) is exactly T.
* even K4-subdivision: corners 0..3, then path interiors in the order
  12, 13, 14, 23, 24, 34, each listed from the lower corner.
* weak wheel: hub 0, cycle 1..c, then spoke interiors (from the cycle side).
* weak banana: v = 0, w = 1, then path interiors in argument order.
* bracelet: u = 0, v = 1, w = 2, then banana interiors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph, bipartition

__all__ = [
    "FamilySpec",
    "build",
    "gen_blossom_pair",
    "gen_even_k4_subdivision",
    "gen_weak_wheel",
    "gen_weak_banana",
    "gen_bracelet",
    "gen_bipartite_extension",
    "gen_random_matchable",
    "gen_named",
    "NAMED",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "complete_bipartite",
    "petersen",
    "icosahedron",
    "c60",
    "c60_pentagons",
    "t_graph",
    "t_sub",
    "k4notminimal",
    "k4notegervary",
    "k4_problem",
    "k4_k33",
]


class _Builder:
    def __init__(self, n0: int):
        self.n = n0
        self.edges: list[tuple[int, int]] = []

    def path(self, a: int, b: int, length: int) -> list[int]:
        """Path a..b with ``length`` edges; fresh interior vertices appended."""
        if length < 1:
            raise ValueError("path length must be >= 1")
        seq = [a] + list(range(self.n, self.n + length - 1)) + [b]
        self.n += length - 1
        self.edges += list(zip(seq, seq[1:]))
        return seq

    def graph(self) -> Graph:
        return Graph(self.n, self.edges)


def _odd(x: int, name: str, lo: int = 1):
    if x < lo or x % 2 == 0:
        raise ValueError(f"{name} must be odd and >= {lo}, got {x}")


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs >= 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def gen_blossom_pair(c1: int, c2: int, p: int) -> Graph:
    _odd(c1, "c1", 3)
    _odd(c2, "c2", 3)
    _odd(p, "p")
    b = _Builder(c1)
    b.edges += [(i, (i + 1) % c1) for i in range(c1)]
    tip1 = c1 - 1
    tip2 = c1 + p - 1
    b.path(tip1, tip2, p)
    assert b.n == tip2
    b.n += c2
    b.edges += [(tip2 + i, tip2 + (i + 1) % c2) for i in range(c2)]
    return b.graph()


K4_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def gen_even_k4_subdivision(l12: int, l13: int, l14: int, l23: int, l24: int, l34: int) -> Graph:
    lens = (l12, l13, l14, l23, l24, l34)
    for (i, j), x in zip(K4_PAIRS, lens):
        _odd(x, f"l{i + 1}{j + 1}")
    b = _Builder(4)
    for (i, j), x in zip(K4_PAIRS, lens):
        b.path(i, j, x)
    return b.graph()


def gen_weak_wheel(cycle_len: int, spoke_lens: Sequence[int]) -> Graph:
    if cycle_len < 3:
        raise ValueError("weak wheel cycle needs >= 3 nodes")
    if len(spoke_lens) != cycle_len:
        raise ValueError("one spoke length per cycle node required")
    b = _Builder(1 + cycle_len)
    b.edges += [(1 + i, 1 + (i + 1) % cycle_len) for i in range(cycle_len)]
    for i, s in enumerate(spoke_lens):
        b.path(1 + i, 0, s)
    return b.graph()


def _banana_into(b: _Builder, v: int, w: int, path_lens: Sequence[int]):
    if len(path_lens) < 3:
        raise ValueError("a weak banana needs three or more vw-paths")
    if sum(1 for x in path_lens if x == 1) > 1:
        raise ValueError("at most one vw-path of length 1 (simple graph)")
    for x in path_lens:
        b.path(v, w, x)


def gen_weak_banana(path_lens: Sequence[int]) -> Graph:
    b = _Builder(2)
    _banana_into(b, 0, 1, path_lens)
    return b.graph()


def gen_bracelet(spec1: Sequence[int], spec2: Sequence[int], spec3: Sequence[int]) -> Graph:
    b = _Builder(3)
    _banana_into(b, 0, 1, spec1)
    _banana_into(b, 1, 2, spec2)
    _banana_into(b, 2, 0, spec3)
    return b.graph()


def gen_bipartite_extension(g: Graph, e: Sequence[int], h: Graph, attach: Sequence[int]) -> Graph:
    """G:H -- edge vw of G replaced by H with v = a and w = b.

    G keeps its indices; the other vertices of H follow in increasing order.
    """
    v, w = e
    a, b = attach
    if not g.has_edge(v, w):
        raise ValueError(f"edge {v}-{w} not in G")
    if not h.is_connected():
        raise ValueError("H must be connected")
    parts = bipartition(h)
    if parts is None:
        raise ValueError("H must be bipartite")
    side = {x: 0 for x in parts[0]}
    side.update({x: 1 for x in parts[1]})
    if a == b or side[a] == side[b]:
        raise ValueError("attachment vertices must lie in opposite parts of H")
    pos = {a: v, b: w}
    nxt = g.n
    for x in range(h.n):
        if x not in pos:
            pos[x] = nxt
            nxt += 1
    edges = [ed for ed in g.edges if set(ed) != {v, w}]
    edges += [(pos[x], pos[y]) for x, y in h.edges]
    return Graph(nxt, edges)


def gen_random_matchable(n: int, edge_prob: float, seed: int) -> Graph:
    """G(n, p) plus a planted random perfect matching; deterministic per seed."""
    if n % 2:
        raise ValueError("n must be even")
    if not 0 <= edge_prob <= 1:
        raise ValueError("edge_prob must lie in [0, 1]")
    rng = random.Random(seed)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                edges.add((i, j))
    perm = list(range(n))
    rng.shuffle(perm)
    for k in range(0, n, 2):
        u, v = perm[k], perm[k + 1]
        edges.add((min(u, v), max(u, v)))
    return Graph(n, sorted(edges))


# named graphs ------------------------------------------------------------------


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def icosahedron() -> Graph:
    """Top 0, upper ring 1..5, lower ring 6..10, bottom 11."""
    edges = []
    for i in range(5):
        up, up_next = 1 + i, 1 + (i + 1) % 5
        lo, lo_next = 6 + i, 6 + (i + 1) % 5
        edges += [(0, up), (up, up_next), (lo, lo_next), (11, lo), (up, lo), (up_next, lo)]
    return Graph(12, edges)


def _c60_darts():
    ico = icosahedron()
    darts = sorted((v, u) for v in range(12) for u in ico.neighbors(v))
    return ico, darts, {d: i for i, d in enumerate(darts)}


def c60() -> Graph:
    """Truncated icosahedron: one vertex per dart (v, u) of the icosahedron.

    (v, u) ~ (u, v) for every icosahedron edge, and (v, u) ~ (v, u') whenever
    v, u, u' bound a triangular face (all triangles of the icosahedron are faces).
    """
    ico, darts, idx = _c60_darts()
    edges = set()
    for v, u in darts:
        edges.add(tuple(sorted((idx[(v, u)], idx[(u, v)]))))
        for u2 in ico.neighbors(v):
            if u2 != u and ico.has_edge(u, u2):
                edges.add(tuple(sorted((idx[(v, u)], idx[(v, u2)]))))
    return Graph(60, sorted(edges))


def c60_pentagons() -> list[list[int]]:
    """The 12 pentagonal faces of ``c60()``, one per icosahedron vertex."""
    ico, darts, idx = _c60_darts()
    return [sorted(idx[(v, u)] for u in ico.neighbors(v)) for v in range(12)]


def t_graph() -> Graph:
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def t_sub() -> Graph:
    """Deming-BP graph with a center edge 6-7 that lies in no perfect matching.

    Reconstruction: triangles {0,1,2} and {3,4,5} joined by the path 0-6-7-3
    (an even T-subdivision); 6-7 is forced out of every perfect matching.
    """
    return Graph(8, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 6), (6, 7), (7, 3)])


def k4notminimal() -> Graph:
    """K4 on {0,1,2,3} plus 4-5, 1-5, 3-4."""
    return Graph(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (1, 5), (3, 4)])


def k4notegervary() -> Graph:
    """Even K4-subdivision on corners {0,1,2,3} plus the extra edges 5-6 and 0-6.

    Reconstruction: branch paths 1-4-5-2 and 1-6-7-3 (``gen_even_k4_subdivision(1,1,1,3,3,1)``),
    chosen among 8-vertex candidates that are Deming-K4, not themselves even
    subdivisions, and non-KE after deleting either extra edge.
    """
    base = gen_even_k4_subdivision(1, 1, 1, 3, 3, 1)
    return base.add_edges([(5, 6), (0, 6)])


def k4_problem() -> Graph:
    """Spanning even K4-subdivision plus a (spanning, hence nice) even T-subdivision.

    Reconstruction: K4 with the edge 2-3 replaced by 2-4-5-3, plus the chord 3-4;
    the triangles 0-1-2 and 3-4-5 joined by 2-4 form T.
    """
    return gen_even_k4_subdivision(1, 1, 1, 1, 1, 3).add_edges([(3, 4)])


def k4_k33() -> Graph:
    """Bipartite extension K4 : K3,3 on the K4 edge 0-1."""
    return gen_bipartite_extension(complete_graph(4), (0, 1), complete_bipartite(3, 3), (0, 3))


NAMED = {
    "T": t_graph,
    "t_sub": t_sub,
    "k4": lambda: complete_graph(4),
    "k4notminimal": k4notminimal,
    "k4notegervary": k4notegervary,
    "k4_problem": k4_problem,
    "k4_k33": k4_k33,
    "petersen": petersen,
    "c60": c60,
}


def gen_named(name: str) -> Graph:
    try:
        return NAMED[name]()
    except KeyError:
        raise ValueError(f"unknown graph name {name!r}; known: {', '.join(sorted(NAMED))}") from None


# family specs ------------------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple = ()
    seed: int | None = None
    extra: dict = field(default_factory=dict)


def build(spec: FamilySpec) -> Graph:
    f, p = spec.family, spec.params
    if f == "blossom_pair":
        return gen_blossom_pair(*p)
    if f == "k4_subdivision":
        return gen_even_k4_subdivision(*p)
    if f == "weak_wheel":
        return gen_weak_wheel(p[0], p[1])
    if f == "weak_banana":
        return gen_weak_banana(p)
    if f == "bracelet":
        return gen_bracelet(*p)
    if f == "named":
        return gen_named(p[0])
    if f == "random_matchable":
        return gen_random_matchable(p[0], p[1], spec.seed if spec.seed is not None else 0)
    if f == "bipartite_extension":
        return gen_bipartite_extension(*p)
    raise ValueError(f"unknown family {f!r}")
