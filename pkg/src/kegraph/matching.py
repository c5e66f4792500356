"""Maximum matching (Edmonds' blossom algorithm) and alternating-path searches."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph, bits

__all__ = [
    "Matching",
    "maximum_matching",
    "matching_number",
    "has_perfect_matching",
    "perfect_matching",
    "edge_in_some_perfect_matching",
    "enumerate_perfect_matchings",
    "count_perfect_matchings",
    "alternating_path_between",
    "closed_alternating_walk_exists",
    "augmenting_path",
]


@dataclass(frozen=True)
class Matching:
    """Set of pairwise disjoint edges, stored canonically as sorted (min, max) pairs."""

    edges: tuple[tuple[int, int], ...]

    def __init__(self, edges: Iterable[Sequence[int]] = ()):
        canon = sorted({(min(u, v), max(u, v)) for u, v in edges})
        seen = set()
        for u, v in canon:
            if u == v:
                raise ValueError(f"loop {u}-{v} in matching")
            if u in seen or v in seen:
                raise ValueError(f"edges of a matching must be disjoint (vertex {u if u in seen else v})")
            seen.add(u)
            seen.add(v)
        object.__setattr__(self, "edges", tuple(canon))

    @classmethod
    def from_mate(cls, mate: Sequence[int]) -> "Matching":
        return cls((v, mate[v]) for v in range(len(mate)) if mate[v] > v)

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, e):
        u, v = e
        return (min(u, v), max(u, v)) in set(self.edges)

    @property
    def saturated(self) -> tuple[int, ...]:
        return tuple(sorted(v for e in self.edges for v in e))

    def mate(self, n: int) -> list[int]:
        """Array form: ``mate[v]`` is v's partner or -1."""
        out = [-1] * n
        for u, v in self.edges:
            out[u] = v
            out[v] = u
        return out

    def is_perfect(self, n: int) -> bool:
        return 2 * len(self.edges) == n

    def is_valid_for(self, g: Graph) -> bool:
        return all(g.has_edge(u, v) for u, v in self.edges)

    def to_json(self) -> list[list[int]]:
        return [list(e) for e in self.edges]


# blossom core ----------------------------------------------------------------


def _find_augmenting(n, nbrs, match, root):
    """BFS from exposed ``root``; returns the augmenting path as a vertex list or None.

    Classic O(n^3) formulation: blossoms are contracted implicitly through ``base``.
    """
    used = [False] * n
    p = [-1] * n
    base = list(range(n))
    used[root] = True
    q = deque([root])

    def lca(a, b):
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = p[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = p[match[b]]

    def mark_path(v, b, child, blossom):
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    while q:
        v = q.popleft()
        for to in nbrs[v]:
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and p[match[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            q.append(i)
            elif p[to] == -1:
                p[to] = v
                if match[to] == -1:
                    path = [to]
                    u = to
                    while u != root:
                        pv = p[u]
                        path.append(pv)
                        if pv == root:
                            break
                        u = match[pv]
                        path.append(u)
                    path.reverse()
                    return path
                used[match[to]] = True
                q.append(match[to])
    return None


def _augment(match, path):
    for i in range(0, len(path) - 1, 2):
        a, b = path[i], path[i + 1]
        match[a] = b
        match[b] = a


def _max_mate(g: Graph, initial: Matching | None = None) -> list[int]:
    n = g.n
    nbrs = [g.neighbors(v) for v in range(n)]
    if initial is not None:
        if not initial.is_valid_for(g):
            raise ValueError("initial matching uses non-edges")
        match = initial.mate(n)
    else:
        match = [-1] * n
        # greedy warm start, low degree first
        for v in sorted(range(n), key=lambda x: (len(nbrs[x]), x)):
            if match[v] == -1:
                for u in nbrs[v]:
                    if match[u] == -1:
                        match[v], match[u] = u, v
                        break
    for r in range(n):
        if match[r] == -1:
            path = _find_augmenting(n, nbrs, match, r)
            if path is not None:
                _augment(match, path)
    return match


def maximum_matching(g: Graph, initial: Matching | None = None) -> Matching:
    """Maximum matching; ``initial`` (any matching of ``g``) is used as a warm start."""
    return Matching.from_mate(_max_mate(g, initial))


def augmenting_path(g: Graph, m: Matching) -> list[int] | None:
    """Some M-augmenting path of ``g``, or None when M is maximum."""
    n = g.n
    nbrs = [g.neighbors(v) for v in range(n)]
    match = m.mate(n)
    for r in range(n):
        if match[r] == -1:
            path = _find_augmenting(n, nbrs, match, r)
            if path is not None:
                return path
    return None


def matching_number(g: Graph) -> int:
    return len(maximum_matching(g))


def perfect_matching(g: Graph, initial: Matching | None = None) -> Matching | None:
    if g.n % 2:
        return None
    m = maximum_matching(g, initial)
    return m if m.is_perfect(g.n) else None


def has_perfect_matching(g: Graph) -> bool:
    return perfect_matching(g) is not None


def edge_in_some_perfect_matching(g: Graph, e: Sequence[int]) -> bool:
    u, v = e
    if not g.has_edge(u, v):
        raise ValueError(f"edge {u}-{v} not in graph")
    return has_perfect_matching(g.delete_vertices((u, v)))


def _matchable_mask(g: Graph, mask: int, cache: dict) -> bool:
    hit = cache.get(mask)
    if hit is None:
        hit = has_perfect_matching(g.induced_subgraph(bits(mask)))
        cache[mask] = hit
    return hit


def enumerate_perfect_matchings(g: Graph, cap: int | None = None) -> list[Matching]:
    """Perfect matchings in lexicographic order of their sorted edge lists, at most ``cap``.

    Branches on the lowest uncovered vertex; dead branches are cut with a
    matchability test so the cost is polynomial per matching produced.
    """
    if cap is not None and cap < 1:
        raise ValueError("cap must be >= 1")
    out: list[Matching] = []
    if g.n % 2:
        return out
    cache: dict[int, bool] = {}
    adj = g.adj
    chosen: list[tuple[int, int]] = []

    def rec(rest: int) -> bool:
        if cap is not None and len(out) >= cap:
            return False
        if not rest:
            out.append(Matching(chosen))
            return True
        v = (rest & -rest).bit_length() - 1
        cand = adj[v] & rest
        for u in bits(cand):
            nxt = rest & ~(1 << v) & ~(1 << u)
            if nxt and not _matchable_mask(g, nxt, cache):
                continue
            chosen.append((v, u))
            rec(nxt)
            chosen.pop()
            if cap is not None and len(out) >= cap:
                return False
        return True

    if g.n == 0 or _matchable_mask(g, g.vertex_mask, cache):
        rec(g.vertex_mask)
    return out


def count_perfect_matchings(g: Graph, cap: int | None = None) -> int:
    return len(enumerate_perfect_matchings(g, cap))


# alternating structures ------------------------------------------------------


def _covered_interior(m: Matching, interior: Iterable[int]) -> tuple[set[int], dict[int, int]]:
    mate = {}
    for a, b in m.edges:
        mate[a] = b
        mate[b] = a
    inter = set(interior)
    for a, b in m.edges:
        if a not in inter or b not in inter:
            raise ValueError(f"matching edge {a}-{b} leaves the interior")
    return {x for x in inter if x in mate}, mate


def alternating_path_between(
    g: Graph, m: Matching, u: int, v: int, interior: Iterable[int]
) -> list[int] | None:
    """Simple path u..v, first and last edges outside M, strictly alternating, interior from ``interior``.

    Interior vertices of such a path are all M-covered, so inside the graph
    induced on the covered interior plus {u, v} the path is exactly an
    M-augmenting path (u and v being the only exposed vertices).  One blossom
    search from u therefore decides existence and yields a simple path.
    """
    if u == v:
        raise ValueError("endpoints must differ")
    inter, _ = _covered_interior(m, interior)
    if u in inter or v in inter or u in set(interior) or v in set(interior):
        raise ValueError("endpoints must lie outside the interior")
    keep = sorted(inter | {u, v})
    h = g.induced_subgraph(keep)
    pos = {x: i for i, x in enumerate(keep)}
    local = Matching((pos[a], pos[b]) for a, b in m.edges if a in pos and b in pos)
    nbrs = [h.neighbors(x) for x in range(h.n)]
    path = _find_augmenting(h.n, nbrs, local.mate(h.n), pos[u])
    if path is None:
        return None
    return [keep[x] for x in path]


def closed_alternating_walk_exists(g: Graph, m: Matching, v: int, interior: Iterable[int]) -> bool:
    """Closed walk at v: non-M edge out, then M, non-M, ..., M, non-M edge back to v.

    Reachability over "entered by a non-M edge" interior vertices; walks may
    repeat vertices, so plain BFS is exact.
    """
    inter, mate = _covered_interior(m, interior)
    if v in set(interior):
        raise ValueError("v must lie outside the interior")
    seen = set()
    q = deque()
    for x in g.neighbors(v):
        if x in inter and x not in seen:
            seen.add(x)
            q.append(x)
    while q:
        x = q.popleft()
        y = mate[x]
        for z in g.neighbors(y):
            if z == x:
                continue
            if z == v:
                return True
            if z in inter and z not in seen:
                seen.add(z)
                q.append(z)
    return False
