"""Per-graph analysis records and the resumable conjecture runner.

Records are deterministic functions of (graph, budgets): timings are left
out unless asked for, so a record can be regenerated bit for bit.  Searches
that run out of budget are flagged instead of guessed.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Iterator

from .deming import check_decomposition, deming_decomposition
from .egervary import EGERVARY, NOT_EGERVARY, UNDECIDED, is_egervary, necessary_conditions
from .graph import Graph, parse_graph6
from .generators import gen_random_matchable
from .independence import (
    OracleBudgetExceeded,
    alpha,
    deming_extension,
    graph_invariants,
    independence_number,
    maximum_critical_independent_set,
)
from .ke import ke_certificate, validate_certificate
from .matching import maximum_matching, perfect_matching
from .subdivision import witness_from_json

ANALYSIS_SCHEMA = "kegraph.analysis/1"
STATE_SCHEMA = "kegraph.conjectures/1"
UNMATCHABLE = "UNMATCHABLE"


@dataclass(frozen=True)
class Budgets:
    oracle_nodes: int = 10**8
    cycle_pairs: int = 10**7
    wall_clock: float = 60.0

    @classmethod
    def from_env(cls) -> "Budgets":
        d = cls()
        return cls(
            int(os.environ.get("KEGRAPH_ORACLE_NODES", d.oracle_nodes)),
            int(os.environ.get("KEGRAPH_CYCLE_PAIRS", d.cycle_pairs)),
            float(os.environ.get("KEGRAPH_WALL_CLOCK", d.wall_clock)),
        )


def canonical_graph6(g: Graph) -> str:
    """graph6 of the nauty canonical relabelling (isomorphic graphs share it)."""
    if g.n == 0:
        return g.to_graph6()
    import pynauty

    pg = pynauty.Graph(g.n, adjacency_dict={v: list(g.neighbors(v)) for v in range(g.n)})
    lab = pynauty.canon_label(pg)
    perm = [0] * g.n
    for i, v in enumerate(lab):
        perm[v] = i
    return g.relabel(perm).to_graph6()


# analysis ------------------------------------------------------------------------


@dataclass
class AnalysisRecord:
    graph_id: str
    graph6: str
    n: int
    m: int
    matchable: bool
    invariants: dict | None = None
    ke: dict | None = None
    deming: dict | None = None
    egervary: dict | None = None
    larson: dict | None = None
    extension: dict | None = None
    undecided: list = field(default_factory=list)
    timings: dict | None = None

    def to_json(self) -> dict:
        out = {"schema": ANALYSIS_SCHEMA}
        out.update(asdict(self))
        if self.timings is None:
            del out["timings"]
        return out


def _deming_summary(g: Graph, m, budgets: Budgets, undecided: list) -> dict:
    dec = deming_decomposition(g, m)
    out = {
        "r": dec.r,
        "ell": dec.ell,
        "part_kinds": [p.kind for p in dec.parts],
        "part_sizes": [len(p.vertices) for p in dec.parts],
        "remainder_size": len(dec.remainder),
        "decomposition": dec.to_json(),
    }
    try:
        out["part_alphas"] = [alpha(g.induced_subgraph(p.vertices), budgets.oracle_nodes) for p in dec.parts]
        out["remainder_alpha"] = alpha(g.induced_subgraph(dec.remainder), budgets.oracle_nodes)
    except OracleBudgetExceeded:
        undecided.append("deming.alphas")
    return out


def analyze(g: Graph, budgets: Budgets | None = None, timings: bool = False) -> AnalysisRecord:
    """Invariants, KE certificate, Deming decomposition, Egervary verdict and
    critical-set data for one graph.

    Unmatchable graphs are analysed through their Deming extension; the
    extension's decomposition is pulled back by dropping the added twins.
    """
    budgets = budgets or Budgets.from_env()
    t0 = time.monotonic()
    deadline = t0 + budgets.wall_clock
    clock: dict = {}
    undecided: list = []
    pm = perfect_matching(g)
    rec = AnalysisRecord(canonical_graph6(g), g.to_graph6(), g.n, g.m, pm is not None)

    try:
        rec.invariants = graph_invariants(g, budgets.oracle_nodes).to_json()
    except OracleBudgetExceeded:
        undecided.append("invariants")
        nu = len(maximum_matching(g))
        rec.invariants = {"n": g.n, "alpha": None, "nu": nu, "delta": None, "is_ke": None}
    clock["invariants"] = time.monotonic() - t0

    if pm is not None:
        host, hm = g, pm
    else:
        ext = deming_extension(g)
        host, hm = ext.extended, ext.standard_matching
        rec.extension = {
            "n": host.n,
            "added_twins": {str(k): v for k, v in sorted(ext.added_twins.items())},
        }
        try:
            a_ext = alpha(host, budgets.oracle_nodes)
            rec.extension["alpha"] = a_ext
            if rec.invariants["alpha"] is not None:
                rec.extension["alpha_preserved"] = a_ext == rec.invariants["alpha"]
        except OracleBudgetExceeded:
            undecided.append("extension.alpha")

    t = time.monotonic()
    cert = ke_certificate(host, hm)
    ok, why = validate_certificate(host, hm, cert)
    rec.ke = {"on": "graph" if pm is not None else "extension", "valid": ok, "reason": why}
    rec.ke.update(cert.to_json())
    clock["ke"] = time.monotonic() - t

    t = time.monotonic()
    rec.deming = _deming_summary(host, hm, budgets, undecided)
    if pm is None:
        keep = set(range(g.n))
        d = rec.deming["decomposition"]
        rec.deming["pulled_back"] = {
            "bp": [[v for v in p["vertices"] if v in keep] for p in d["bp"]],
            "k4": [[v for v in p["vertices"] if v in keep] for p in d["k4"]],
            "remainder": [v for v in d["remainder"] if v in keep],
        }
    clock["deming"] = time.monotonic() - t

    t = time.monotonic()
    if pm is None:
        rec.egervary = {"status": UNMATCHABLE}
    else:
        bp = rec.deming["decomposition"]["bp"]
        nice_t = witness_from_json(bp[0]["witness"]) if bp else None
        v = is_egervary(g, budgets.cycle_pairs, deadline, pm, nice_t)
        rec.egervary = v.to_json()
        if v.status == UNDECIDED:
            undecided.append("egervary")
    clock["egervary"] = time.monotonic() - t

    t = time.monotonic()
    try:
        rec.larson = maximum_critical_independent_set(g, budgets.oracle_nodes).to_json()
    except OracleBudgetExceeded:
        undecided.append("larson")
    clock["larson"] = time.monotonic() - t

    rec.undecided = undecided
    if timings:
        clock["total"] = time.monotonic() - t0
        rec.timings = {k: round(v, 6) for k, v in clock.items()}
    return rec


# corpora -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph6Corpus:
    path: str

    def descriptor(self) -> dict:
        h = hashlib.sha256()
        with open(self.path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                h.update(chunk)
        return {"kind": "graph6", "path": os.path.basename(self.path), "sha256": h.hexdigest()}

    def __iter__(self) -> Iterator[Graph]:
        opener = gzip.open if self.path.endswith(".gz") else open
        with opener(self.path, "rt") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    yield parse_graph6(line)


@dataclass(frozen=True)
class RandomCorpus:
    n_min: int
    n_max: int
    edge_prob: float
    seed_start: int
    count: int

    def descriptor(self) -> dict:
        d = {"kind": "random", **asdict(self)}
        d["sha256"] = hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()
        return d

    def __iter__(self) -> Iterator[Graph]:
        sizes = [n for n in range(self.n_min, self.n_max + 1) if n % 2 == 0]
        for i in range(self.count):
            seed = self.seed_start + i
            yield gen_random_matchable(sizes[seed % len(sizes)], self.edge_prob, seed)


@dataclass(frozen=True)
class ListCorpus:
    graphs: tuple

    def descriptor(self) -> dict:
        text = "\n".join(g.to_graph6() for g in self.graphs)
        return {"kind": "list", "sha256": hashlib.sha256(text.encode()).hexdigest()}

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.graphs)


# conjecture suite ------------------------------------------------------------------------

CONJECTURES = ("conj1", "conj2", "q5")
OUTCOMES = ("confirmed", "refuted", "undecided", "not_applicable")


def _zero_counts() -> dict:
    return {c: {o: 0 for o in OUTCOMES} for c in CONJECTURES}


@dataclass
class ConjectureRunState:
    corpus: dict
    cursor: int = 0
    counts: dict = field(default_factory=_zero_counts)
    unmatchable: int = 0
    candidates: list = field(default_factory=list)
    complete: bool = False

    def to_json(self) -> dict:
        return {"schema": STATE_SCHEMA, **asdict(self)}

    @classmethod
    def from_json(cls, d: dict) -> "ConjectureRunState":
        if d.get("schema") != STATE_SCHEMA:
            raise ValueError(f"unknown state schema {d.get('schema')!r}")
        d = {k: v for k, v in d.items() if k != "schema"}
        return cls(**d)

    def tallies(self) -> dict:
        return {"cursor": self.cursor, "counts": self.counts, "unmatchable": self.unmatchable,
                "candidates": [c["graph6"] + ":" + c["conjecture"] for c in self.candidates]}


def evaluate_conjectures(g: Graph, budgets: Budgets) -> dict:
    """Outcome per conjecture for one matchable graph, plus the evidence used."""
    deadline = time.monotonic() + budgets.wall_clock
    m = perfect_matching(g)
    if m is None:
        raise ValueError("matchable graph required")
    dec = deming_decomposition(g, m)
    ev = is_egervary(g, budgets.cycle_pairs, deadline, m, dec.bp[0].witness if dec.bp else None)
    nc = necessary_conditions(g, m, dec, budgets.cycle_pairs)
    out = {"egervary": ev.status, "conditions": list(nc.items), "r": dec.r, "ell": dec.ell}

    held = nc.all_hold
    if ev.status == UNDECIDED or held is None:
        out["conj1"] = "undecided"
    else:
        out["conj1"] = "confirmed" if (ev.status == EGERVARY) == held else "refuted"

    additive = None
    try:
        a = alpha(g, budgets.oracle_nodes)
        parts = sum(alpha(g.induced_subgraph(p.vertices), budgets.oracle_nodes) for p in dec.k4)
        rest = alpha(g.induced_subgraph(dec.remainder), budgets.oracle_nodes)
        additive = a == parts + rest
        out["alpha"] = a
        out["alpha_sum"] = parts + rest
    except OracleBudgetExceeded:
        pass

    if ev.status == UNDECIDED:
        out["conj2"] = "undecided"
    elif ev.status == NOT_EGERVARY:
        out["conj2"] = "not_applicable"
    elif dec.r:
        out["conj2"] = "refuted"  # an Egervary graph with a BP part contradicts condition 1
    else:
        out["conj2"] = "undecided" if additive is None else ("confirmed" if additive else "refuted")

    if dec.r:
        out["q5"] = "not_applicable"
    else:
        out["q5"] = "undecided" if additive is None else ("confirmed" if additive else "refuted")
    out["decomposition"] = dec.to_json()
    out["matching"] = m.to_json()
    return out


def audit_candidate(g: Graph, evidence: dict, budgets: Budgets) -> dict:
    """Independent re-check of the facts behind a flagged outcome.

    Verifies the decomposition, the alpha values (with a witness set) and,
    for small graphs, the Egervary verdict against the exhaustive definition
    check.  ``consistent`` means every certificate re-validated, so the flag
    reflects the mathematics rather than a bug.
    """
    from .deming import decomposition_from_json
    from .egervary import egervary_by_definition

    dec = decomposition_from_json(g.n, evidence["decomposition"])
    chk = check_decomposition(g, dec, budget=budgets.oracle_nodes)
    a, wit = independence_number(g, budgets.oracle_nodes)
    out = {"decomposition_checks": chk, "alpha": a, "alpha_witness": wit}
    ok = all(v is not False for k, v in chk.items() if k != "parts_definition_skipped")
    ok = ok and a == evidence.get("alpha", a)
    if g.n <= 12 and evidence["egervary"] != UNDECIDED:
        eg = egervary_by_definition(g)
        out["egervary_by_definition"] = eg
        ok = ok and eg == (evidence["egervary"] == EGERVARY)
    out["consistent"] = ok
    return out


def _evaluate_item(args):
    g6, budgets = args
    g = parse_graph6(g6)
    if perfect_matching(g) is None:
        return g6, None
    return g6, evaluate_conjectures(g, budgets)


def _write_state(path: str, state: ConjectureRunState):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(state.to_json(), fh, sort_keys=True)
    os.replace(tmp, path)


def run_conjecture_suite(
    corpus,
    budgets: Budgets | None = None,
    out_path: str | None = None,
    checkpoint: int = 1000,
    stop_after: int | None = None,
    workers: int = 1,
) -> ConjectureRunState:
    """Evaluate the conjectures on every graph of ``corpus``; resumable via ``out_path``.

    Unmatchable graphs are counted and skipped.  Any refutation is stored as a
    candidate with its evidence and an independent audit; nothing is
    auto-classified.  ``stop_after`` processes at most that many further
    graphs (used to exercise resume).  A state file from a different corpus
    is refused.
    """
    budgets = budgets or Budgets.from_env()
    desc = corpus.descriptor()
    state = ConjectureRunState(desc)
    if out_path and os.path.exists(out_path):
        with open(out_path) as fh:
            state = ConjectureRunState.from_json(json.load(fh))
        if state.corpus.get("sha256") != desc["sha256"]:
            raise ValueError("state file belongs to a different corpus; refusing to resume")
        if state.complete:
            return state

    def items():
        for i, g in enumerate(corpus):
            if i >= state.cursor:
                yield g.to_graph6(), budgets

    stream = items()
    pool = None
    if workers > 1:
        import multiprocessing

        pool = multiprocessing.Pool(workers)
        results = pool.imap(_evaluate_item, stream, chunksize=64)
    else:
        results = map(_evaluate_item, stream)
    done = 0
    exhausted = True
    try:
        for g6, ev in results:
            if ev is None:
                state.unmatchable += 1
            else:
                for c in CONJECTURES:
                    state.counts[c][ev[c]] += 1
                    if ev[c] == "refuted":
                        g = parse_graph6(g6)
                        state.candidates.append({
                            "graph6": g6,
                            "conjecture": c,
                            "evidence": ev,
                            "audit": audit_candidate(g, ev, budgets),
                        })
            state.cursor += 1
            done += 1
            if out_path and done % checkpoint == 0:
                _write_state(out_path, state)
            if stop_after is not None and done >= stop_after:
                exhausted = False
                break
    finally:
        if pool is not None:
            pool.terminate()
    if exhausted:
        state.complete = True
    if out_path:
        _write_state(out_path, state)
    return state
