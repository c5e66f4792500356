"""Command-line entry point: ``kegraph <command> [options]``.

Graphs are read from ``--in`` (or stdin) as graph6 lines or one edge list.
Results are JSON, one object per input graph, or indented text with
``--pretty``.  Exit status: 0 success, 2 when some result is undecided
within budget, 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .deming import check_decomposition, deming_decomposition
from .egervary import UNDECIDED, is_egervary
from .generators import (
    gen_blossom_pair,
    gen_bracelet,
    gen_even_k4_subdivision,
    gen_named,
    gen_random_matchable,
    gen_weak_banana,
    gen_weak_wheel,
)
from .graph import GraphFormatError, emit_dot, emit_edge_list, parse_graphs
from .harness import UNMATCHABLE, Budgets, Graph6Corpus, analyze, run_conjecture_suite
from .independence import (
    OracleBudgetExceeded,
    deming_extension,
    independence_number,
    is_2_bicritical,
    maximum_critical_independent_set,
)
from .ke import ke_certificate, validate_certificate
from .matching import perfect_matching

GEN_FAMILIES = ("blossom-pair", "k4-subdivision", "weak-wheel", "weak-banana", "bracelet", "random", "named")


class Undecided(Exception):
    pass


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x]


def _read_graphs(path: str | None):
    text = sys.stdin.read() if path in (None, "-") else open(path).read()
    return parse_graphs(text)


def _budgets(a) -> Budgets:
    b = Budgets.from_env()
    return Budgets(
        a.oracle_nodes if a.oracle_nodes is not None else b.oracle_nodes,
        a.cycle_pairs if a.cycle_pairs is not None else b.cycle_pairs,
        a.wall_clock if a.wall_clock is not None else b.wall_clock,
    )


def _host(g):
    pm = perfect_matching(g)
    if pm is not None:
        return g, pm, "graph"
    ext = deming_extension(g)
    return ext.extended, ext.standard_matching, "extension"


# per-graph commands --------------------------------------------------------------


def cmd_analyze(g, a, budgets):
    rec = analyze(g, budgets, timings=a.timings).to_json()
    return rec, bool(rec["undecided"])


def cmd_ke(g, a, budgets):
    host, m, on = _host(g)
    cert = ke_certificate(host, m)
    ok, why = validate_certificate(host, m, cert)
    out = {"on": on, **cert.to_json(), "valid": ok}
    if not ok:
        out["reason"] = why
    return out, False


def cmd_decompose(g, a, budgets):
    host, m, on = _host(g)
    dec = deming_decomposition(host, m)
    out = {"on": on, "r": dec.r, "ell": dec.ell, **dec.to_json()}
    if a.check:
        out["checks"] = check_decomposition(host, dec, budget=budgets.oracle_nodes)
    return out, False


def cmd_egervary(g, a, budgets):
    if perfect_matching(g) is None:
        return {"status": UNMATCHABLE}, False
    v = is_egervary(g, budgets.cycle_pairs, time.monotonic() + budgets.wall_clock)
    return v.to_json(), v.status == UNDECIDED


def cmd_alpha(g, a, budgets):
    try:
        al, wit = independence_number(g, budgets.oracle_nodes)
    except OracleBudgetExceeded as exc:
        return {"status": UNDECIDED, "reason": str(exc)}, True
    return {"alpha": al, "independent_set": wit}, False


def cmd_critical(g, a, budgets):
    try:
        cd = maximum_critical_independent_set(g, budgets.oracle_nodes)
    except OracleBudgetExceeded as exc:
        return {"status": UNDECIDED, "reason": str(exc)}, True
    return {**cd.to_json(), "two_bicritical": is_2_bicritical(g)}, False


def cmd_extend(g, a, budgets):
    return deming_extension(g).to_json(), False


PER_GRAPH = {
    "analyze": cmd_analyze,
    "ke": cmd_ke,
    "decompose": cmd_decompose,
    "egervary": cmd_egervary,
    "alpha": cmd_alpha,
    "critical": cmd_critical,
    "extend": cmd_extend,
}


# gen and conjectures ---------------------------------------------------------------------


def _generate(a):
    fam, p = a.family, a.params
    if fam == "blossom-pair":
        return gen_blossom_pair(*map(int, p))
    if fam == "k4-subdivision":
        return gen_even_k4_subdivision(*map(int, p))
    if fam == "weak-wheel":
        return gen_weak_wheel(int(p[0]), [int(x) for x in p[1:]])
    if fam == "weak-banana":
        return gen_weak_banana([int(x) for x in p])
    if fam == "bracelet":
        if len(p) != 3:
            raise ValueError("bracelet takes three comma-separated path-length lists")
        return gen_bracelet(*(_ints(x) for x in p))
    if fam == "random":
        return gen_random_matchable(int(p[0]), float(p[1]), int(p[2]))
    return gen_named(p[0])


def _emit_graph(g, fmt: str) -> str:
    if fmt == "edges":
        return emit_edge_list(g)
    if fmt == "dot":
        return emit_dot(g)
    return g.to_graph6() + "\n"


def _pretty(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return "\n".join(lines)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat(x) for x in v)


def _scalar(v) -> str:
    return json.dumps(v) if isinstance(v, (list, dict)) else str(v)


def _print(obj, pretty: bool):
    if pretty:
        print(_pretty(obj))
        print()
    else:
        print(json.dumps(obj, sort_keys=False))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kegraph", description="KE, Deming decomposition and Egervary tools")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--in", dest="inp", default=None, help="input file (graph6 lines or edge list); stdin if omitted")
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        p.add_argument("--oracle-nodes", type=int, default=None)
        p.add_argument("--cycle-pairs", type=int, default=None)
        p.add_argument("--wall-clock", type=float, default=None, help="seconds per graph")

    for name in PER_GRAPH:
        p = sub.add_parser(name)
        common(p)
        if name == "analyze":
            p.add_argument("--timings", action="store_true")
        if name == "decompose":
            p.add_argument("--check", action="store_true", help="re-verify the decomposition")

    p = sub.add_parser("gen")
    p.add_argument("family", choices=GEN_FAMILIES)
    p.add_argument("params", nargs="*")
    p.add_argument("--format", choices=("graph6", "edges", "dot"), default="graph6")

    p = sub.add_parser("conjectures")
    common(p)
    p.add_argument("--corpus", required=True, help="graph6 file (optionally .gz)")
    p.add_argument("--state", default=None, help="resumable state file")
    p.add_argument("--stop-after", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    return ap


def cli_main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        if a.command == "gen":
            sys.stdout.write(_emit_graph(_generate(a), a.format))
            return 0
        budgets = _budgets(a)
        if a.command == "conjectures":
            st = run_conjecture_suite(Graph6Corpus(a.corpus), budgets, a.state, stop_after=a.stop_after, workers=a.workers)
            summary = {
                "complete": st.complete,
                "cursor": st.cursor,
                "unmatchable": st.unmatchable,
                "counts": st.counts,
                "candidates": [{"graph6": c["graph6"], "conjecture": c["conjecture"], "audit_consistent": c["audit"]["consistent"]} for c in st.candidates],
            }
            _print(summary, a.pretty)
            undecided = any(st.counts[c]["undecided"] for c in st.counts)
            return 2 if undecided else 0
        fn = PER_GRAPH[a.command]
        any_undecided = False
        for g in _read_graphs(a.inp):
            out, und = fn(g, a, budgets)
            any_undecided |= und
            _print(out, a.pretty)
        return 2 if any_undecided else 0
    except (GraphFormatError, ValueError, OSError) as exc:
        print(f"kegraph: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
