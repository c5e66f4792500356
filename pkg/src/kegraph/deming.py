"""Deming graphs and Deming decompositions.

The decomposition peels Deming subgraphs off a matchable graph:

1. certify the current graph; if KE it is the remainder R and we stop;
2. otherwise take the obstruction H and shrink: while some allowed edge xy of
   the induced graph on V(H) has a non-KE H - {x, y}, replace H by the
   obstruction found there (each round drops matched vertices only);
3. the final D is a Deming graph; remove V(D) from the *current graph* and
   repeat.

Step 3 recurses on G_cur - V(D) rather than on G[V(H) - V(D)]: every vertex
dropped during shrinking is covered by a matching edge inside V(H) - V(D), and
G_cur - V(H) is matchable because H was nice, so G_cur - V(D) stays matchable.
This is asserted at every step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph
from .independence import OracleBudgetExceeded, alpha as alpha_of
from .ke import is_ke, ke_certificate
from .matching import Matching, maximum_matching, perfect_matching
from .subdivision import (
    EvenSubdivision,
    K4_PAIRINGS,
    k4_subdivision_perfect_matching,
    recognize_even_k4_subdivision,
    recognize_even_subdivision,
    recognize_even_t_subdivision,
    t_subdivision_unique_pm,
    witness_from_json,
)

__all__ = [
    "DemingPart",
    "DemingDecomposition",
    "SearchBudgetExceeded",
    "spanning_even_subdivision",
    "allowed_edges",
    "is_deming_k4",
    "is_deming_bp",
    "is_deming",
    "shrink_to_deming",
    "deming_decomposition",
    "induced_perfect_matching",
    "nu_minus_k_witness",
    "is_even_k4_subdivision_by_deletion",
    "check_decomposition",
    "decomposition_from_json",
]

SPANNING_SEARCH_NODES = 2_000_000


class SearchBudgetExceeded(RuntimeError):
    pass


# spanning subdivision search ---------------------------------------------------


def spanning_even_subdivision(
    d: Graph, kind: str | None = None, budget: int = SPANNING_SEARCH_NODES
) -> EvenSubdivision | None:
    """Spanning even K4- or T-subdivision of ``d`` (K4 tried first when kind is None).

    Backtracking over edges in canonical order under the degree constraints
    of the target (all degrees 2, except 4 or 2 branch vertices of degree 3);
    every complete candidate goes through the structural recognizer.
    """
    kinds = ["K4", "T"] if kind is None else [kind]
    for k in kinds:
        w = _spanning_search(d, 4 if k == "K4" else 2, k, budget)
        if w is not None:
            return w
    return None


def _spanning_search(d: Graph, nbranch: int, kind: str, budget: int) -> EvenSubdivision | None:
    n = d.n
    if n < (4 if kind == "K4" else 6) or any(d.degree(v) < 2 for v in range(n)):
        return None
    if sum(1 for v in range(n) if d.degree(v) >= 3) < nbranch:
        return None
    edges = d.edges
    m = len(edges)
    target = n + nbranch // 2
    # last edge index touching each vertex, to know when a degree is final
    last = [-1] * n
    for i, (a, b) in enumerate(edges):
        last[a] = i
        last[b] = i
    remaining = [d.degree(v) for v in range(n)]
    deg = [0] * n
    chosen: list[tuple[int, int]] = []
    state = {"branch": 0, "nodes": 0}
    recog = recognize_even_k4_subdivision if kind == "K4" else recognize_even_t_subdivision

    def feasible(v: int) -> bool:
        # can v still end at degree 2 (or 3 when a branch slot is free)?
        return deg[v] + remaining[v] >= 2

    def rec(i: int):
        state["nodes"] += 1
        if state["nodes"] > budget:
            raise SearchBudgetExceeded(f"spanning subdivision search exceeded {budget} nodes")
        if len(chosen) == target:
            if all(deg[v] >= 2 for v in range(n)):
                w = recog(d.edge_subgraph(chosen))
                if w is not None and len(w.vertices) == n:
                    return w
            return None
        if i == m or len(chosen) + (m - i) < target:
            return None
        a, b = edges[i]
        remaining[a] -= 1
        remaining[b] -= 1
        res = None
        # include
        if deg[a] < 3 and deg[b] < 3:
            newb = (deg[a] == 2) + (deg[b] == 2)
            if state["branch"] + newb <= nbranch:
                deg[a] += 1
                deg[b] += 1
                state["branch"] += newb
                chosen.append((a, b))
                if (last[a] > i or deg[a] >= 2) and (last[b] > i or deg[b] >= 2):
                    res = rec(i + 1)
                chosen.pop()
                state["branch"] -= newb
                deg[a] -= 1
                deg[b] -= 1
        # exclude
        if res is None and feasible(a) and feasible(b):
            res = rec(i + 1)
        remaining[a] += 1
        remaining[b] += 1
        return res

    return rec(0)


def allowed_edges(g: Graph) -> list[tuple[int, int]]:
    """Edges lying in some perfect matching, canonical order."""
    return [e for e in g.edges if perfect_matching(g.delete_vertices(e)) is not None]


def _deming_check(d: Graph, kind: str, hint: EvenSubdivision | None = None) -> EvenSubdivision | None:
    if perfect_matching(d) is None:
        return None
    w = None
    if hint is not None and hint.kind == kind and len(hint.vertices) == d.n:
        w = hint
    if w is None:
        w = spanning_even_subdivision(d, kind)
    if w is None:
        return None
    for e in allowed_edges(d):
        if not is_ke(d.delete_vertices(e)):
            return None
    return w


def is_deming_k4(d: Graph, hint: EvenSubdivision | None = None) -> EvenSubdivision | None:
    """Spanning even K4-subdivision witness when D is Deming-K4, else None."""
    return _deming_check(d, "K4", hint)


def is_deming_bp(d: Graph, hint: EvenSubdivision | None = None) -> EvenSubdivision | None:
    """Spanning even T-subdivision witness when D is Deming-BP, else None."""
    return _deming_check(d, "T", hint)


def is_deming(d: Graph) -> EvenSubdivision | None:
    return is_deming_bp(d) or is_deming_k4(d)


# shrinking --------------------------------------------------------------------


def _lift(w: EvenSubdivision, keep: Sequence[int]) -> EvenSubdivision:
    """Rename a witness on G[keep] back to the host indices."""
    if w.kind == "K4":
        return EvenSubdivision(
            "K4", tuple(keep[c] for c in w.corners), tuple(tuple(keep[x] for x in p) for p in w.paths)
        )
    return EvenSubdivision(
        "T",
        tuple(keep[c] for c in w.corners),
        tuple(tuple(keep[x] for x in p) for p in w.paths),
        tuple(tuple(keep[x] for x in c) for c in w.cycles),
    )


def _subdivision_pm(w: EvenSubdivision) -> Matching:
    return k4_subdivision_perfect_matching(w) if w.kind == "K4" else t_subdivision_unique_pm(w)


def shrink_to_deming(
    g_cur: Graph, h: EvenSubdivision, log: list | None = None
) -> tuple[list[int], EvenSubdivision, list[tuple[int, int]]]:
    """Shrink a nice obstruction of ``g_cur`` to a Deming subgraph.

    Returns (vertices of D, spanning witness on D in g_cur indices, removed
    matched pairs).  Each round takes the first allowed edge xy (canonical
    order) of the current induced graph whose deletion leaves a non-KE graph
    and continues with the obstruction found there.
    """
    verts = list(h.vertices)
    wit = h
    removed: list[tuple[int, int]] = []
    rounds = 0
    while True:
        cur = g_cur.induced_subgraph(verts)
        pm = _local_pm(wit, verts)
        step = None
        for x, y in cur.edges:
            rest = cur.delete_vertices((x, y))
            rest_pm = perfect_matching(rest, _restrict(pm, (x, y), cur.n))
            if rest_pm is None:
                continue
            cert = ke_certificate(rest, rest_pm)
            if not cert.is_ke:
                step = (x, y, rest, cert)
                break
        if step is None:
            break
        x, y, rest, cert = step
        rounds += 1
        if rounds > g_cur.n // 2:
            raise AssertionError("shrinking did not terminate within n/2 rounds")
        keep_rest = [verts[i] for i in range(cur.n) if i not in (x, y)]
        new_w = _lift(cert.obstruction, keep_rest)
        pairs = [(verts[x], verts[y])] + [(keep_rest[a], keep_rest[b]) for a, b in cert.remainder_matching.edges]
        removed += [(min(a, b), max(a, b)) for a, b in pairs]
        if log is not None:
            log.append(
                {
                    "step": "shrink",
                    "edge": sorted((verts[x], verts[y])),
                    "removed": sorted(sorted(p) for p in pairs),
                    "obstruction": new_w.kind,
                    "n": len(new_w.vertices),
                }
            )
        verts = list(new_w.vertices)
        wit = new_w
        if not set(wit.vertices) <= set(verts):
            raise AssertionError("shrunk obstruction escaped its host")
    return verts, wit, removed


def _local_pm(w: EvenSubdivision, verts: Sequence[int]) -> Matching:
    pos = {v: i for i, v in enumerate(verts)}
    return Matching((pos[a], pos[b]) for a, b in _subdivision_pm(w).edges)


def _restrict(m: Matching, drop: Sequence[int], n: int) -> Matching:
    """Matching on the graph with ``drop`` deleted (indices shifted down)."""
    drop_set = set(drop)
    shift = [0] * n
    k = 0
    for v in range(n):
        shift[v] = v - k
        if v in drop_set:
            k += 1
    return Matching((shift[a], shift[b]) for a, b in m.edges if a not in drop_set and b not in drop_set)


# decomposition ----------------------------------------------------------------


@dataclass(frozen=True)
class DemingPart:
    kind: str  # "BP" | "K4"
    vertices: tuple[int, ...]
    witness: EvenSubdivision

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "witness": self.witness.to_json()}


@dataclass(frozen=True)
class DemingDecomposition:
    n: int
    bp: tuple[DemingPart, ...]
    k4: tuple[DemingPart, ...]
    remainder: tuple[int, ...]
    induced_matching: Matching
    provenance: tuple = field(default=(), compare=True)

    @property
    def r(self) -> int:
        return len(self.bp)

    @property
    def ell(self) -> int:
        return len(self.k4)

    @property
    def parts(self) -> tuple[DemingPart, ...]:
        return self.bp + self.k4

    def to_json(self) -> dict:
        return {
            "bp": [p.to_json() for p in self.bp],
            "k4": [p.to_json() for p in self.k4],
            "remainder": list(self.remainder),
            "induced_matching": self.induced_matching.to_json(),
            "provenance": list(self.provenance),
        }


def decomposition_from_json(n: int, d: dict) -> DemingDecomposition:
    def part(kind, p):
        return DemingPart(kind, tuple(p["vertices"]), witness_from_json(p["witness"]))

    return DemingDecomposition(
        n,
        tuple(part("BP", p) for p in d["bp"]),
        tuple(part("K4", p) for p in d["k4"]),
        tuple(d["remainder"]),
        Matching(d["induced_matching"]),
        tuple(d.get("provenance", ())),
    )


def _k4_part_pm(w: EvenSubdivision, m: Matching) -> Matching:
    """Corner pairing whose matching shares the most edges with ``m`` (ties: lowest pairing)."""
    ms = set(m.edges)
    best = None
    for k in range(len(K4_PAIRINGS)):
        cand = k4_subdivision_perfect_matching(w, k)
        score = sum(1 for e in cand.edges if e in ms)
        if best is None or score > best[0]:
            best = (score, cand)
    return best[1]


def deming_decomposition(g: Graph, m: Matching, classify_bp_first: bool = True) -> DemingDecomposition:
    """Extended Deming algorithm.

    Parts whose shrink witness is a K4-subdivision are re-examined for a
    spanning even T-subdivision and classified Deming-BP when one exists (a
    graph can span both kinds; BP is the more informative label).
    """
    if not m.is_valid_for(g) or not m.is_perfect(g.n):
        raise ValueError("M must be a perfect matching of G")
    cur_verts = list(range(g.n))
    bp: list[DemingPart] = []
    k4: list[DemingPart] = []
    prov: list = []
    cur_m = m
    while True:
        cur = g.induced_subgraph(cur_verts)
        pos = {v: i for i, v in enumerate(cur_verts)}
        hint = Matching((pos[a], pos[b]) for a, b in cur_m.edges if a in pos and b in pos)
        pm = perfect_matching(cur, hint)
        if pm is None:
            raise AssertionError("current graph lost its perfect matching")
        cert = ke_certificate(cur, pm)
        prov.append({"step": "certify", "n": cur.n, "verdict": cert.verdict})
        if cert.is_ke:
            break
        shrink_log: list = []
        dverts, wit, removed = shrink_to_deming(cur, cert.obstruction, shrink_log)
        prov += shrink_log
        wit_g = _lift(wit, cur_verts)
        dv = tuple(sorted(cur_verts[i] for i in dverts))
        kind = "BP" if wit_g.kind == "T" else "K4"
        if kind == "K4" and classify_bp_first:
            sub = g.induced_subgraph(dv)
            try:
                tw = spanning_even_subdivision(sub, "T")
            except SearchBudgetExceeded:
                tw = None
                prov.append({"step": "bp_search", "result": "budget"})
            if tw is not None:
                kind = "BP"
                wit_g = _lift(tw, list(dv))
        part = DemingPart(kind, dv, wit_g)
        (bp if kind == "BP" else k4).append(part)
        prov.append({"step": "part", "kind": kind, "vertices": list(dv)})
        dset = set(dv)
        cur_m = _next_hint(pm, dset, removed, cur_verts)
        cur_verts = [v for v in cur_verts if v not in dset]
    remainder = tuple(cur_verts)
    dec = DemingDecomposition(g.n, tuple(bp), tuple(k4), remainder, Matching(), tuple(prov))
    ipm = induced_perfect_matching(dec, g, m)
    return DemingDecomposition(g.n, dec.bp, dec.k4, remainder, ipm, tuple(prov))


def _next_hint(pm: Matching, dset: set, removed, verts) -> Matching:
    # warm start for the next round: shrink pairs plus current PM edges avoiding D
    out = []
    used = set()
    for a, b in removed:
        ga, gb = verts[a], verts[b]
        out.append((ga, gb))
        used |= {ga, gb}
    for a, b in pm.edges:
        ga, gb = verts[a], verts[b]
        if ga in dset or gb in dset or ga in used or gb in used:
            continue
        out.append((ga, gb))
        used |= {ga, gb}
    return Matching(out)


def induced_perfect_matching(dec: DemingDecomposition, g: Graph, m: Matching | None = None) -> Matching:
    """Union of per-part matchings: subdivision PMs on Deming parts, a PM of G[R] on R.

    K4 parts use the corner pairing closest to ``m``; R is matched starting
    from ``m`` restricted to R, so a consistent input is kept where possible.
    """
    m = m or Matching()
    edges: list[tuple[int, int]] = []
    for p in dec.bp:
        edges += t_subdivision_unique_pm(p.witness).edges
    for p in dec.k4:
        edges += _k4_part_pm(p.witness, m).edges
    rv = list(dec.remainder)
    if rv:
        sub = g.induced_subgraph(rv)
        pos = {v: i for i, v in enumerate(rv)}
        hint = Matching((pos[a], pos[b]) for a, b in m.edges if a in pos and b in pos)
        rpm = perfect_matching(sub, hint)
        if rpm is None:
            raise AssertionError("remainder is not matchable")
        edges += [(rv[a], rv[b]) for a, b in rpm.edges]
    out = Matching(edges)
    if not out.is_perfect(g.n) or not out.is_valid_for(g):
        raise AssertionError("induced matching is not perfect")
    return out


# alpha = nu - k ------------------------------------------------------------------


def nu_minus_k_witness(g: Graph, m: Matching, dec: DemingDecomposition) -> list[tuple[int, int]] | None:
    """One M_i-edge per Deming part whose joint deletion leaves a KE graph, or None.

    Exhaustive over M_1 x ... x M_k in lexicographic order.
    """
    parts = dec.parts
    if not parts:
        raise ValueError("decomposition has no Deming parts")
    pools = []
    for p in parts:
        vs = set(p.vertices)
        pools.append([e for e in m.edges if e[0] in vs and e[1] in vs])
    for choice in itertools.product(*pools):
        drop = [v for e in choice for v in e]
        if is_ke(g.delete_vertices(drop)):
            return list(choice)
    return None


def is_even_k4_subdivision_by_deletion(k: Graph) -> bool:
    """Every single-edge deletion of K is KE."""
    return all(is_ke(k.delete_edge(e)) for e in k.edges)


# checks -------------------------------------------------------------------------


def check_decomposition(
    g: Graph,
    dec: DemingDecomposition,
    definition_limit: int = 16,
    budget: int | None = None,
) -> dict:
    """Re-verify a decomposition; returns named booleans (None when skipped).

    ``partition``, ``parts_deming`` (definition re-check on parts up to
    ``definition_limit`` vertices), ``remainder_ke``, ``matching_perfect`` and
    the five alpha/nu identities ``dd1``..``dd5``.
    """
    out: dict = {}
    allv = [v for p in dec.parts for v in p.vertices] + list(dec.remainder)
    out["partition"] = sorted(allv) == list(range(g.n))
    im = dec.induced_matching
    per_part = True
    for vs in [p.vertices for p in dec.parts] + [dec.remainder]:
        s = set(vs)
        inside = [e for e in im.edges if e[0] in s]
        if any(e[1] not in s for e in inside) or 2 * len(inside) != len(s):
            per_part = False
    out["matching_perfect"] = im.is_perfect(g.n) and im.is_valid_for(g) and per_part
    ok_def = True
    skipped = False
    for p in dec.parts:
        sub = g.induced_subgraph(p.vertices)
        wit = _local_witness(p.witness, p.vertices)
        if wit is None or len(wit.vertices) != sub.n:
            ok_def = False
            continue
        if sub.n > definition_limit:
            skipped = True
            continue
        chk = is_deming_bp(sub, wit) if p.kind == "BP" else is_deming_k4(sub, wit)
        ok_def = ok_def and chk is not None
    out["parts_deming"] = ok_def
    out["parts_definition_skipped"] = skipped
    rsub = g.induced_subgraph(dec.remainder)
    out["remainder_ke"] = is_ke(rsub)
    try:
        nus = []
        dd1 = dd2 = True
        for p in dec.parts:
            sub = g.induced_subgraph(p.vertices)
            a = alpha_of(sub, budget)
            nu = len(maximum_matching(sub))
            nus.append(nu)
            if a != nu - 1:
                if p.kind == "BP":
                    dd1 = False
                else:
                    dd2 = False
        ra = alpha_of(rsub, budget)
        rnu = len(maximum_matching(rsub))
        nu_g = len(maximum_matching(g))
        a_g = alpha_of(g, budget)
        out["dd1"] = dd1
        out["dd2"] = dd2
        out["dd3"] = ra == rnu
        out["dd4"] = nu_g == sum(nus) + rnu
        out["dd5"] = a_g <= nu_g - (dec.r + dec.ell)
    except OracleBudgetExceeded:
        for k in ("dd1", "dd2", "dd3", "dd4", "dd5"):
            out.setdefault(k, None)
    return out


def _local_witness(w: EvenSubdivision, verts: Sequence[int]) -> EvenSubdivision | None:
    pos = {v: i for i, v in enumerate(verts)}
    if any(v not in pos for v in w.vertices):
        return None
    h = Graph(len(verts), [(pos[a], pos[b]) for a, b in w.edges])
    return recognize_even_subdivision(h, w.kind)
