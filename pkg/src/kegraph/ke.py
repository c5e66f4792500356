"""Certified KE recognition for matchable graphs.

With a perfect matching M fixed, G is KE iff one endpoint of every M-edge can
be chosen so that no other edge has both endpoints chosen.  That is 2-SAT with
the vertices themselves as literals (the negation of v is its mate): a
non-matching edge uv gives the implications u -> mate(v) and v -> mate(u).

Unsatisfiable instances are turned into obstructions by shrinking: keep only
the clauses of a shortest contradiction proof, then delete edges one at a time
while the graph stays matchable and non-KE.  An edge-minimal matchable non-KE
graph is a nice even K4/T-subdivision plus a matching of the rest (every
non-KE matchable graph contains one, and any extra edge could be dropped), so
the survivor is read off structurally.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .graph import Graph, bits
from .matching import Matching, perfect_matching
from .subdivision import (
    EvenSubdivision,
    recognize_even_k4_subdivision,
    recognize_even_subdivision,
    recognize_even_t_subdivision,
    witness_from_json,
)

__all__ = [
    "KECertificate",
    "ke_certificate",
    "validate_certificate",
    "is_ke",
    "two_sat_assignment",
    "certificate_from_json",
    "FALLBACK_LOG",
]

log = logging.getLogger(__name__)

# (graph6, reason) for every exhaustive fallback taken; expected to stay empty
FALLBACK_LOG: list[tuple[str, str]] = []


@dataclass(frozen=True)
class KECertificate:
    verdict: str  # "KE" | "NOT_KE"
    independent_set: tuple[int, ...] = ()
    obstruction: EvenSubdivision | None = None
    remainder_matching: Matching | None = None

    @property
    def is_ke(self) -> bool:
        return self.verdict == "KE"

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.is_ke:
            out["independent_set"] = list(self.independent_set)
        else:
            out["obstruction"] = self.obstruction.to_json()
            out["remainder_matching"] = self.remainder_matching.to_json()
        return out


def certificate_from_json(d: dict) -> KECertificate:
    if d["verdict"] == "KE":
        return KECertificate("KE", tuple(d["independent_set"]))
    return KECertificate(
        "NOT_KE",
        obstruction=witness_from_json(d["obstruction"]),
        remainder_matching=Matching(d["remainder_matching"]),
    )


def _check_perfect(g: Graph, m: Matching):
    if not m.is_valid_for(g):
        raise ValueError("matching uses non-edges")
    if not m.is_perfect(g.n):
        raise ValueError("matching is not perfect")


def _implication_arcs(g: Graph, mate: Sequence[int]) -> list[list[int]]:
    arcs = [[] for _ in range(g.n)]
    for u, v in g.edges:
        if mate[u] == v:
            continue
        arcs[u].append(mate[v])
        arcs[v].append(mate[u])
    for a in arcs:
        a.sort()
    return arcs


def _tarjan(arcs: list[list[int]]) -> list[int]:
    """Component ids in reverse topological order (sinks get the smallest ids)."""
    n = len(arcs)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for s in range(n):
        if index[s] != -1:
            continue
        work = [(s, 0)]
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        on_stack[s] = True
        while work:
            v, i = work[-1]
            if i < len(arcs[v]):
                work[-1] = (v, i + 1)
                w = arcs[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    p = work[-1][0]
                    low[p] = min(low[p], low[v])
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
    return comp


def two_sat_assignment(g: Graph, m: Matching) -> tuple[list[int] | None, list[int]]:
    """(chosen vertices or None when unsatisfiable, component ids)."""
    mate = m.mate(g.n)
    comp = _tarjan(_implication_arcs(g, mate))
    chosen = []
    for v in range(g.n):
        if comp[v] == comp[mate[v]]:
            return None, comp
        if comp[v] < comp[mate[v]]:
            chosen.append(v)
    return chosen, comp


def _unsat(g: Graph, mate: Sequence[int]) -> bool:
    comp = _tarjan(_implication_arcs(g, mate))
    return any(comp[v] == comp[mate[v]] for v in range(g.n))


def _bfs_arcs(arcs, mate, src, dst) -> list[tuple[int, int]]:
    """Shortest implication path src -> dst, returned as the G-edges (clauses) it uses."""
    prev = {src: None}
    q = deque([src])
    while q:
        x = q.popleft()
        if x == dst:
            break
        for y in arcs[x]:
            if y not in prev:
                prev[y] = x
                q.append(y)
    if dst not in prev:
        raise AssertionError("contradiction path missing")
    out = []
    y = dst
    while prev[y] is not None:
        x = prev[y]
        # arc x -> y comes from the edge x - mate[y]
        z = mate[y]
        out.append((min(x, z), max(x, z)))
        y = x
    return out


def _is_matchable_non_ke(h: Graph, hint: Matching) -> Matching | None:
    """A perfect matching of h if h is matchable and not KE, else None."""
    pm = perfect_matching(h, hint)
    if pm is None:
        return None
    return pm if _unsat(h, pm.mate(h.n)) else None


def _extract_obstruction(g: Graph, m: Matching, comp: list[int]) -> tuple[EvenSubdivision, Matching]:
    n = g.n
    mate = m.mate(n)
    arcs = _implication_arcs(g, mate)
    u = next(v for v in range(n) if comp[v] == comp[mate[v]])
    proof = set(_bfs_arcs(arcs, mate, u, mate[u])) | set(_bfs_arcs(arcs, mate, mate[u], u))
    f = g.edge_subgraph(sorted(proof | set(m.edges)))

    # clause minimisation against the fixed matching (cheap)
    for e in sorted(proof):
        trial = f.delete_edge(e)
        if _unsat(trial, mate):
            f = trial
    # full edge minimisation, re-matching as needed
    pm = m
    for e in f.edges:
        if not f.has_edge(*e):
            continue
        trial = f.delete_edge(e)
        hint = Matching(x for x in pm.edges if x != e)
        nxt = _is_matchable_non_ke(trial, hint)
        if nxt is not None:
            f, pm = trial, nxt
    # drop matching components (isolated K2s); what remains is the subdivision
    rest = [(a, b) for a, b in pm.edges if f.degree(a) == 1 and f.degree(b) == 1]
    core = f.delete_edges(rest)
    w = recognize_even_subdivision(core)
    if w is None:
        raise AssertionError("edge-minimal non-KE graph is not an even subdivision plus a matching")
    return w, Matching(rest)


def _fallback_obstruction(g: Graph) -> tuple[EvenSubdivision, Matching]:
    """Exhaustive search: smallest vertex set U with G - U matchable and G[U] spanned by an even subdivision."""
    from .deming import spanning_even_subdivision  # local import: deming depends on this module

    n = g.n
    for size in range(4, n + 1, 2):
        for umask in _masks_of_size(n, size):
            us = bits(umask)
            rest_pm = perfect_matching(g.delete_vertices(us))
            if rest_pm is None:
                continue
            sub = g.induced_subgraph(us)
            w = spanning_even_subdivision(sub)
            if w is not None:
                back = w.relabel(us)
                rest = [v for v in range(n) if not umask >> v & 1]
                return back, Matching((rest[a], rest[b]) for a, b in rest_pm.edges)
    raise AssertionError("no nice even subdivision found in a non-KE graph")


def _masks_of_size(n: int, k: int):
    from itertools import combinations

    for c in combinations(range(n), k):
        yield sum(1 << v for v in c)


def ke_certificate(g: Graph, m: Matching) -> KECertificate:
    """Maximum independent set (KE) or nice even K4/T-subdivision (NOT_KE).

    ``m`` must be a perfect matching of ``g``; the result is a deterministic
    function of (g, m).
    """
    _check_perfect(g, m)
    chosen, comp = two_sat_assignment(g, m)
    if chosen is not None:
        return KECertificate("KE", tuple(chosen))
    try:
        w, rest = _extract_obstruction(g, m, comp)
    except AssertionError as exc:
        FALLBACK_LOG.append((g.to_graph6(), str(exc)))
        log.warning("obstruction extraction fell back to exhaustive search: %s", exc)
        w, rest = _fallback_obstruction(g)
    return KECertificate("NOT_KE", obstruction=w, remainder_matching=rest)


def is_ke(g: Graph) -> bool:
    """alpha + nu == n, decided through the 2-SAT certificate when g is matchable.

    Unmatchable graphs are handled by the exact oracle.
    """
    pm = perfect_matching(g)
    if pm is None:
        from .independence import is_ke_oracle

        return is_ke_oracle(g)
    chosen, _ = two_sat_assignment(g, pm)
    return chosen is not None


def validate_certificate(g: Graph, m: Matching, cert: KECertificate) -> tuple[bool, str]:
    """Re-check a certificate from first principles; returns (ok, reason)."""
    if not m.is_valid_for(g) or not m.is_perfect(g.n):
        return False, "matching not perfect"
    if cert.verdict == "KE":
        s = cert.independent_set
        if len(set(s)) != len(s) or any(not 0 <= v < g.n for v in s):
            return False, "bad vertex list"
        mask = 0
        for v in s:
            mask |= 1 << v
        for v in s:
            if g.adj[v] & mask:
                return False, "not independent"
        if len(s) != len(m) or 2 * len(s) != g.n:
            return False, "wrong size"
        return True, "ok"
    if cert.verdict != "NOT_KE":
        return False, "unknown verdict"
    w = cert.obstruction
    if w is None:
        return False, "missing obstruction"
    es = w.edges
    if any(not g.has_edge(a, b) for a, b in es):
        return False, "obstruction uses non-edges"
    # structural checks from the declared paths and cycles
    for p in w.paths:
        if len(set(p)) != len(p):
            return False, "path repeats a vertex"
        if (len(p) - 1) % 2 == 0:
            return False, "parity"
    for c in w.cycles:
        if len(set(c)) != len(c) or len(c) < 3:
            return False, "bad cycle"
        if len(c) % 2 == 0:
            return False, "parity"
    h = g.edge_subgraph(es)
    rec = recognize_even_k4_subdivision(h) if w.kind == "K4" else recognize_even_t_subdivision(h)
    if rec is None:
        return False, "not an even subdivision"
    if rec.vertices != w.vertices:
        return False, "vertex set mismatch"
    rm = cert.remainder_matching
    if rm is None:
        return False, "missing remainder matching"
    hv = set(w.vertices)
    covered = set(rm.saturated)
    if covered & hv or len(covered) + len(hv) != g.n or not rm.is_valid_for(g):
        return False, "not nice"
    return True, "ok"
