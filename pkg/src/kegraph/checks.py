"""Per-graph verification routines shared by the test suite and the corpus sweeps.

Each check returns a list of failure strings; an empty list means every
claim held.  Checks that do not apply to a graph (for example a KE check on
an unmatchable graph) return an empty list.
"""

from __future__ import annotations

import json
import os
import time
from typing import Callable, Iterable

from .deming import check_decomposition, deming_decomposition
from .egervary import EGERVARY, egervary_by_definition, egervary_by_t_search, is_egervary
from .graph import Graph, bits, parse_graph6
from .independence import (
    alpha,
    is_alpha_critical,
    is_2_bicritical,
    is_ke_oracle,
    maximum_critical_independent_set,
)
from .ke import ke_certificate, validate_certificate
from .matching import perfect_matching
from .subdivision import recognize_even_k4_subdivision


def check_ke(g: Graph) -> list[str]:
    m = perfect_matching(g)
    if m is None:
        return []
    cert = ke_certificate(g, m)
    ok, why = validate_certificate(g, m, cert)
    out = []
    if not ok:
        out.append(f"invalid certificate: {why}")
    oracle = alpha(g) + len(m) == g.n
    if cert.is_ke != oracle:
        out.append(f"verdict {cert.verdict} but oracle says KE={oracle}")
    return out


def check_deming(g: Graph, definition_limit: int = 16) -> list[str]:
    m = perfect_matching(g)
    if m is None:
        return []
    dec = deming_decomposition(g, m)
    res = check_decomposition(g, dec, definition_limit)
    out = [f"{k} failed" for k, v in res.items() if v is False and k != "parts_definition_skipped"]
    out += [f"{k} undecided" for k, v in res.items() if v is None]
    if (dec.r + dec.ell == 0) != is_ke_oracle(g):
        out.append("KE iff r = ell = 0 violated")
    return out


def check_egervary(g: Graph) -> list[str]:
    """Definition check, cycle-pair search and nice-T search agree; KE implies Egervary."""
    m = perfect_matching(g)
    if m is None:
        return []
    v = is_egervary(g, budget=10**12, m1=m, use_certificate=False)
    b = v.status == EGERVARY
    a = egervary_by_definition(g)
    c = egervary_by_t_search(g)
    out = []
    if not (a == b == c):
        out.append(f"definition={a} pairs={b} t_search={c}")
    if not b and v.t_subdivision is not None:
        from .subdivision import is_nice, recognize_even_t_subdivision

        w = v.t_subdivision
        if recognize_even_t_subdivision(g.edge_subgraph(w.edges)) is None or not is_nice(g, w.vertices):
            out.append("witness T-subdivision fails validation")
    if is_egervary(g, m1=m).status != v.status:
        out.append("certificate shortcut disagrees with pair search")
    if a is False and is_ke_oracle(g):
        out.append("KE graph found non-Egervary")
    return out


def check_andrasfai(g: Graph) -> tuple[str | None, list[str]]:
    """(class, failures): class is 'delta0' / 'delta2' for connected alpha-critical graphs of
    Gallai class 0 / 2, else None."""
    if not g.is_connected() or g.n == 0:
        return None, []
    d = g.n - 2 * alpha(g)
    if d not in (0, 2) or not is_alpha_critical(g):
        return None, []
    if d == 0:
        ok = g.n == 2 and g.m == 1
        return "delta0", [] if ok else ["delta 0 alpha-critical graph is not K2"]
    w = recognize_even_k4_subdivision(g, allow_isolated=False)
    return "delta2", [] if w is not None else ["delta 2 alpha-critical graph is not an even K4-subdivision"]


def check_larson(g: Graph) -> list[str]:
    """The four critical-decomposition properties for the maximum critical independent set."""
    cd = maximum_critical_independent_set(g)
    x, xc, jc = list(cd.X), list(cd.Xc), list(cd.Jc)
    out = []
    if sorted(x + xc) != list(range(g.n)):
        out.append("X, Xc do not partition V")
    jmask = sum(1 << v for v in jc)
    nb = 0
    for v in jc:
        nb |= g.adj[v]
    if nb & jmask:
        out.append("Jc not independent")
    if sorted(bits(jmask | nb)) != x:
        out.append("X != Jc + N(Jc)")
    gx, gxc = g.induced_subgraph(x), g.induced_subgraph(xc)
    if alpha(g) != alpha(gx) + alpha(gxc):
        out.append("alpha not additive over X, Xc")
    if not is_ke_oracle(gx):
        out.append("G[X] not KE")
    if not is_2_bicritical(gxc):
        out.append("G[Xc] not 2-bicritical")
    if perfect_matching(g) is not None and len(jc) != len(x) - len(jc):
        out.append("matchable graph with |Jc| != |N(Jc)|")
    return out


CHECKS: dict[str, Callable] = {
    "ke": check_ke,
    "deming": check_deming,
    "egervary": check_egervary,
    "larson": check_larson,
}


# sweeps -------------------------------------------------------------------------------


def sweep(
    lines: Iterable[str],
    checks: list[str],
    state_path: str | None = None,
    stride: int = 1,
    offset: int = 0,
    checkpoint: int = 2000,
    time_limit: float | None = None,
) -> dict:
    """Run named checks over graph6 lines, resumable through ``state_path``.

    Processes lines with index = offset (mod stride).  The state records the
    cursor (lines consumed), per-check counts and failures.
    """
    state = {"cursor": 0, "processed": 0, "counts": {c: 0 for c in checks}, "failures": [],
             "andrasfai": {"delta0": 0, "delta2": 0}, "stride": stride, "offset": offset,
             "checks": checks, "matchable": 0, "complete": False}
    if state_path and os.path.exists(state_path):
        with open(state_path) as fh:
            state = json.load(fh)
        if state["checks"] != checks or state["stride"] != stride or state["offset"] != offset:
            raise ValueError("state file was written for different sweep parameters")
    t0 = time.monotonic()
    cursor = state["cursor"]

    def save():
        if state_path:
            tmp = state_path + ".tmp"
            with open(tmp, "w") as fh:
                json.dump(state, fh)
            os.replace(tmp, state_path)

    stopped = False
    for i, line in enumerate(lines):
        if i < cursor:
            continue
        state["cursor"] = i + 1
        line = line.strip()
        if not line or i % stride != offset:
            continue
        g = parse_graph6(line)
        state["matchable"] += perfect_matching(g) is not None
        for c in checks:
            if c == "andrasfai":
                cls, fails = check_andrasfai(g)
                if cls:
                    state["andrasfai"][cls] += 1
            else:
                fails = CHECKS[c](g)
            state["counts"][c] += 1
            for f in fails:
                state["failures"].append({"graph6": line, "check": c, "detail": f})
        state["processed"] += 1
        if state["processed"] % checkpoint == 0:
            save()
            if time_limit is not None and time.monotonic() - t0 > time_limit:
                stopped = True
                break
    if not stopped:
        state["complete"] = True
    save()
    return state
