"""Exact independence computations.

The core is a memoised branch-and-reduce search on vertex bitmasks:
degree-0/1 and simplicial-degree-2 vertices are taken greedily, components are
solved separately, 2-regular components are cycles, and otherwise the search
branches on a maximum-degree vertex.  The search counts nodes and raises
``OracleBudgetExceeded`` instead of ever returning a guess.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .graph import Graph, bits, mask_of
from .matching import Matching, maximum_matching

__all__ = [
    "OracleBudgetExceeded",
    "IndependenceOracle",
    "default_node_budget",
    "independence_number",
    "alpha",
    "is_independent",
    "is_ke_oracle",
    "is_alpha_critical",
    "critical_difference",
    "CriticalDecomposition",
    "maximum_critical_independent_set",
    "is_2_bicritical",
    "GraphInvariants",
    "graph_invariants",
    "DemingExtension",
    "deming_extension",
    "find_twins",
    "add_twin",
    "remove_twin",
    "gallai_class_number",
]


class OracleBudgetExceeded(RuntimeError):
    """The exact search hit its node budget; no answer is given."""


def default_node_budget() -> int:
    return int(os.environ.get("KEGRAPH_ORACLE_NODES", 10**8))


def _popcount(x: int) -> int:
    return x.bit_count()


class IndependenceOracle:
    """Exact alpha on induced subgraphs of one host graph, with a shared memo."""

    def __init__(self, g: Graph, budget: int | None = None):
        self.g = g
        self.adj = g.adj
        self.budget = default_node_budget() if budget is None else budget
        self.nodes = 0
        self.memo: dict[int, int] = {}

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise OracleBudgetExceeded(f"independence oracle exceeded {self.budget} nodes")

    def alpha(self, mask: int | None = None) -> int:
        if mask is None:
            mask = self.g.vertex_mask
        return self._alpha(mask)

    def _component(self, mask: int) -> int:
        adj = self.adj
        low = mask & -mask
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= adj[b.bit_length() - 1]
                f ^= b
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        return comp

    def _alpha(self, mask: int) -> int:
        adj = self.adj
        acc = 0
        # reductions
        changed = True
        while changed and mask:
            changed = False
            m = mask
            while m:
                b = m & -m
                m ^= b
                v = b.bit_length() - 1
                if not mask >> v & 1:
                    continue
                nb = adj[v] & mask
                d = _popcount(nb)
                if d <= 1 or (d == 2 and adj[(nb & -nb).bit_length() - 1] >> ((nb & (nb - 1)).bit_length() - 1) & 1):
                    acc += 1
                    mask &= ~(nb | b)
                    changed = True
        if not mask:
            return acc
        hit = self.memo.get(mask)
        if hit is not None:
            return acc + hit
        self._tick()
        comp = self._component(mask)
        if comp != mask:
            res = 0
            rest = mask
            while rest:
                c = self._component(rest)
                res += self._alpha(c)
                rest &= ~c
        else:
            best_v, best_d = -1, -1
            m = mask
            while m:
                b = m & -m
                m ^= b
                v = b.bit_length() - 1
                d = _popcount(adj[v] & mask)
                if d > best_d:
                    best_v, best_d = v, d
            if best_d == 2:
                # connected, 2-regular after reductions: a cycle
                res = _popcount(mask) // 2
            else:
                v = best_v
                with_v = 1 + self._alpha(mask & ~(adj[v] | (1 << v)))
                without_v = self._alpha(mask & ~(1 << v))
                res = max(with_v, without_v)
        self.memo[mask] = res
        return acc + res

    def max_independent_set(self, mask: int | None = None) -> list[int]:
        """Lexicographically smallest maximum independent set inside ``mask``."""
        if mask is None:
            mask = self.g.vertex_mask
        target = self._alpha(mask)
        out = []
        rest = mask
        for v in bits(mask):
            if target == 0:
                break
            if not rest >> v & 1:
                continue
            sub = rest & ~(self.adj[v] | (1 << v))
            if 1 + self._alpha(sub) == target:
                out.append(v)
                target -= 1
                rest = sub
            else:
                rest &= ~(1 << v)
        return out


def is_independent(g: Graph, vs) -> bool:
    m = mask_of(vs)
    return all(not (g.adj[v] & m) for v in bits(m))


def independence_number(g: Graph, budget: int | None = None) -> tuple[int, list[int]]:
    """(alpha, lexicographically smallest maximum independent set)."""
    orc = IndependenceOracle(g, budget)
    w = orc.max_independent_set()
    return len(w), w


def alpha(g: Graph, budget: int | None = None) -> int:
    return IndependenceOracle(g, budget).alpha()


def is_ke_oracle(g: Graph, budget: int | None = None) -> bool:
    return alpha(g, budget) + len(maximum_matching(g)) == g.n


def is_alpha_critical(g: Graph, budget: int | None = None) -> bool:
    """Every edge deletion raises alpha (necessarily by exactly one).

    Edge xy is critical iff some independent set of G - N[x] - N[y] has
    alpha - 1 vertices, which avoids building G - xy.
    """
    orc = IndependenceOracle(g, budget)
    a = orc.alpha()
    full = g.vertex_mask
    for x, y in g.edges:
        rest = full & ~(g.adj[x] | g.adj[y] | (1 << x) | (1 << y))
        if orc.alpha(rest) < a - 1:
            return False
    return True


# critical independent sets ---------------------------------------------------


def _bipartite_matching_size(left: list[int], adj: tuple[int, ...], right_mask: int) -> int:
    """Maximum matching of the bipartite graph L x V with l ~ r iff lr is an edge (r in right_mask)."""
    owner: dict[int, int] = {}

    def try_assign(u, seen):
        for r in bits(adj[u] & right_mask):
            if r in seen:
                continue
            seen.add(r)
            if r not in owner or try_assign(owner[r], seen):
                owner[r] = u
                return True
        return False

    size = 0
    for u in left:
        if try_assign(u, set()):
            size += 1
    return size


def _deficiency(g: Graph, mask: int, left_mask: int | None = None) -> int:
    """max over S within left_mask of |S| - |N(S) & mask| (S = empty allowed).

    Hall deficiency of the bipartite double cover restricted to ``mask``.  With
    left_mask == mask it equals the critical difference of G[mask].
    """
    if left_mask is None:
        left_mask = mask
    left = bits(left_mask)
    return len(left) - _bipartite_matching_size(left, g.adj, mask)


def critical_difference(g: Graph) -> int:
    """max |I| - |N(I)| over independent sets I (>= 0 because of the empty set)."""
    return _deficiency(g, g.vertex_mask)


@dataclass(frozen=True)
class CriticalDecomposition:
    Jc: tuple[int, ...]
    X: tuple[int, ...]
    Xc: tuple[int, ...]
    critical_difference: int

    def to_json(self) -> dict:
        return {
            "Jc": list(self.Jc),
            "X": list(self.X),
            "Xc": list(self.Xc),
            "critical_difference": self.critical_difference,
        }


def _neighborhood(g: Graph, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= g.adj[v]
    return out


def maximum_critical_independent_set(
    g: Graph, budget: int | None = None, exhaustive_limit: int = 25
) -> CriticalDecomposition:
    """Maximum-cardinality critical independent set, lexicographically smallest among ties.

    Include/exclude search in ascending vertex order.  A branch survives only
    if its best reachable difference can still equal the critical difference
    d; that bound is a Hall deficiency (polynomial).  Graphs above
    ``exhaustive_limit`` vertices are handled only when no vertex lies in a
    nonempty critical set (then Jc is empty), otherwise the budget error is
    raised.
    """
    n = g.n
    adj = g.adj
    full = g.vertex_mask
    d = critical_difference(g)
    budget = default_node_budget() if budget is None else budget

    def best_with(inc: int, exc: int) -> int:
        # upper bound on |I| - |N(I)| for independent I with inc <= I, I & exc = 0
        nb = _neighborhood(g, inc)
        rest = full & ~(nb | inc)
        return _popcount(inc) - _popcount(nb) + _deficiency(g, rest, rest & ~exc)

    if n > exhaustive_limit:
        if d == 0 and all(best_with(1 << v, 0) < 0 for v in range(n)):
            return CriticalDecomposition((), (), tuple(range(n)), 0)
        raise OracleBudgetExceeded(
            f"maximum critical independent set: n={n} above exhaustive limit {exhaustive_limit}"
        )

    best: list = [None, -1]  # (set mask, size)
    nodes = [0]

    def rec(v: int, inc: int, exc: int, cand: int):
        nodes[0] += 1
        if nodes[0] > budget:
            raise OracleBudgetExceeded(f"critical set search exceeded {budget} nodes")
        size = _popcount(inc)
        if size + _popcount(cand) <= best[1] and best[0] is not None:
            # cannot beat the current size; lexicographic ties keep the earlier find
            return
        if best_with(inc, exc) < d:
            return
        if not cand:
            nb = _neighborhood(g, inc)
            if size - _popcount(nb) == d and size > best[1]:
                best[0], best[1] = inc, size
            return
        u = (cand & -cand).bit_length() - 1
        b = 1 << u
        rec(u + 1, inc | b, exc, cand & ~(adj[u] | b))
        rec(u + 1, inc, exc | b, cand & ~b)

    rec(0, 0, 0, full)
    jc = best[0] or 0
    x = jc | _neighborhood(g, jc)
    return CriticalDecomposition(tuple(bits(jc)), tuple(bits(x)), tuple(bits(full & ~x)), d)


def is_2_bicritical(g: Graph) -> bool:
    """|N(I)| > |I| for every nonempty independent I.

    Vertex v lies in a nonempty independent set with difference >= 0 iff
    1 - deg(v) + d(G - N[v]) >= 0, so this is polynomial.
    """
    full = g.vertex_mask
    for v in range(g.n):
        rest = full & ~(g.adj[v] | (1 << v))
        if 1 - g.degree(v) + _deficiency(g, rest) >= 0:
            return False
    return True


# invariants ------------------------------------------------------------------


@dataclass(frozen=True)
class GraphInvariants:
    n: int
    alpha: int
    nu: int
    delta: int
    is_ke: bool

    def to_json(self) -> dict:
        return {"n": self.n, "alpha": self.alpha, "nu": self.nu, "delta": self.delta, "is_ke": self.is_ke}


def graph_invariants(g: Graph, budget: int | None = None) -> GraphInvariants:
    a = alpha(g, budget)
    nu = len(maximum_matching(g))
    return GraphInvariants(g.n, a, nu, g.n - 2 * a, a + nu == g.n)


def gallai_class_number(g: Graph, budget: int | None = None) -> int:
    return g.n - 2 * alpha(g, budget)


# twins and extensions --------------------------------------------------------


def find_twins(g: Graph) -> list[tuple[int, int]]:
    """Adjacent pairs (u, v), u < v, with N[u] == N[v]."""
    out = []
    for u, v in g.edges:
        if g.adj[u] | (1 << u) == g.adj[v] | (1 << v):
            out.append((u, v))
    return out


def add_twin(g: Graph, v: int) -> Graph:
    """Append a new vertex with closed neighbourhood equal to N[v]."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    t = g.n
    adj = list(g.adj) + [g.adj[v] | (1 << v)]
    for w in bits(adj[t]):
        adj[w] |= 1 << t
    return Graph.from_masks(g.n + 1, adj)


def remove_twin(g: Graph, v: int) -> Graph:
    if not any(v in p for p in find_twins(g)):
        raise ValueError(f"vertex {v} has no twin")
    return g.delete_vertices([v])


@dataclass(frozen=True)
class DemingExtension:
    extended: Graph
    standard_matching: Matching
    added_twins: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.extended.n,
            "edges": [list(e) for e in self.extended.edges],
            "standard_matching": self.standard_matching.to_json(),
            "added_twins": {str(k): v for k, v in sorted(self.added_twins.items())},
        }


def deming_extension(g: Graph, m: Matching | None = None) -> DemingExtension:
    """Add a twin for every vertex left exposed by a maximum matching."""
    if m is None:
        m = maximum_matching(g)
    mate = m.mate(g.n)
    exposed = [v for v in range(g.n) if mate[v] == -1]
    h = g
    twins = {}
    for v in exposed:
        twins[v] = h.n
        h = add_twin(h, v)
    ext_m = Matching(list(m.edges) + [(v, t) for v, t in twins.items()])
    return DemingExtension(h, ext_m, twins)
