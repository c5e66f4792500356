import gzip
import itertools
import os
import random
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from kegraph.graph import Graph, parse_graph6

DATA = Path(__file__).parent / "data"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FULL = os.environ.get("KEGRAPH_FULL") == "1"


@lru_cache(maxsize=None)
def corpus(name):
    with gzip.open(DATA / name, "rt") as fh:
        return tuple(line.strip() for line in fh if line.strip())


def graphs_up_to(n_max, connected=False, even=False):
    for s in corpus("graphs_le9.g6.gz"):
        g = parse_graph6(s)
        if g.n > n_max or (even and g.n % 2) or (connected and not g.is_connected()):
            continue
        yield g


def random_graph(n, p, seed):
    rng = random.Random(seed)
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


# brute-force oracles ---------------------------------------------------------------


def brute_alpha(g):
    best = 0
    for mask in range(1 << g.n):
        if mask.bit_count() <= best:
            continue
        if all(not (g.adj[v] & mask) for v in range(g.n) if mask >> v & 1):
            best = mask.bit_count()
    return best


def brute_independent_sets(g):
    for mask in range(1 << g.n):
        if all(not (g.adj[v] & mask) for v in range(g.n) if mask >> v & 1):
            yield mask


def brute_nu(g):
    edges = g.edges
    best = 0

    def rec(i, used, size):
        nonlocal best
        best = max(best, size)
        if size + (len(edges) - i) <= best:
            return
        for j in range(i, len(edges)):
            a, b = edges[j]
            if not (used >> a & 1 or used >> b & 1):
                rec(j + 1, used | 1 << a | 1 << b, size + 1)

    rec(0, 0, 0)
    return best


def brute_perfect_matchings(g):
    out = []

    def rec(rest, acc):
        if not rest:
            out.append(tuple(sorted(acc)))
            return
        v = (rest & -rest).bit_length() - 1
        for u in range(g.n):
            if rest >> u & 1 and g.adj[v] >> u & 1 and u != v:
                rec(rest & ~(1 << v) & ~(1 << u), acc + [(min(u, v), max(u, v))])

    if g.n % 2 == 0:
        rec(g.vertex_mask, [])
    return sorted(out)


def brute_simple_alternating_paths(g, mset, u, v, interior):
    """Exhaustive: simple u..v paths, first/last edges non-M, strict alternation, interior from set."""
    mate = {}
    for a, b in mset:
        mate[a], mate[b] = b, a
    interior = set(interior)
    found = []

    def rec(path, need_m):
        x = path[-1]
        for y in g.neighbors(x):
            if y in path:
                continue
            in_m = mate.get(x) == y
            if in_m != need_m:
                continue
            if y == v:
                if not need_m and len(path) >= 1:
                    found.append(path + [y])
                continue
            if y in interior:
                rec(path + [y], not need_m)

    rec([u], False)
    return found


def brute_critical(g):
    """(d, lexicographically smallest maximum-cardinality critical independent set)."""
    best_d, best = None, None
    for mask in brute_independent_sets(g):
        nb = 0
        for v in range(g.n):
            if mask >> v & 1:
                nb |= g.adj[v]
        d = mask.bit_count() - nb.bit_count()
        cand = [v for v in range(g.n) if mask >> v & 1]
        key = (d, len(cand))
        if best_d is None or key > best_d or (key == best_d and cand < best):
            best_d, best = key, cand
    return best_d[0], best


@st.composite
def graphs(draw, min_n=0, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


@st.composite
def matchable_graphs(draw, min_half=1, max_half=5):
    k = draw(st.integers(min_half, max_half))
    n = 2 * k
    perm = draw(st.permutations(list(range(n))))
    pairs = list(itertools.combinations(range(n), 2))
    extra = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n))
    es = set(extra) | {(min(perm[i], perm[i + 1]), max(perm[i], perm[i + 1])) for i in range(0, n, 2)}
    return Graph(n, sorted(es))


@pytest.fixture(scope="session")
def small_graphs():
    return [parse_graph6(s) for s in corpus("graphs_le9.g6.gz") if int(ord(s[0]) - 63) <= 7]


# families expected to be Egervary --------------------------------------------------


def _weak_wheels(max_n):
    from kegraph.generators import gen_weak_wheel

    for c in range(3, 10):
        for spokes in itertools.product((1, 2, 3), repeat=c):
            if 1 + c + sum(s - 1 for s in spokes) > max_n:
                continue
            if c > 5 and len(set(spokes)) > 1 and spokes != tuple(sorted(spokes)):
                continue
            yield gen_weak_wheel(c, list(spokes))


def _bananas(max_n):
    from kegraph.generators import gen_weak_banana

    for k in (3, 4, 5):
        for lens in itertools.combinations_with_replacement(range(1, 8), k):
            if lens.count(1) > 1 or 2 + sum(x - 1 for x in lens) > max_n:
                continue
            yield gen_weak_banana(list(lens))


def _bracelets(max_n):
    from kegraph.generators import gen_bracelet

    specs = [[1, 2, 2], [2, 2, 2], [1, 2, 3], [2, 3, 3], [1, 3, 3], [2, 2, 3]]
    for s1, s2, s3 in itertools.combinations_with_replacement(specs, 3):
        g = gen_bracelet(s1, s2, s3)
        if g.n <= max_n:
            yield g


def _bip_extensions(max_n):
    from kegraph.generators import (
        complete_bipartite, complete_graph, cycle_graph, gen_bipartite_extension, gen_weak_banana,
        gen_weak_wheel, path_graph,
    )

    hs = [(path_graph(4), (0, 3)), (cycle_graph(6), (0, 3)), (complete_bipartite(2, 2), (0, 2)),
          (complete_bipartite(3, 3), (0, 3)), (complete_bipartite(2, 3), (0, 2))]
    bases = [complete_graph(4), gen_weak_wheel(5, [1, 1, 1, 1, 1]), gen_weak_banana([1, 2, 3])]
    for g in bases:
        for e in g.edges:
            for h, att in hs:
                x = gen_bipartite_extension(g, e, h, att)
                if x.n <= max_n:
                    yield x


FAMILIES = {"wheel": _weak_wheels, "banana": _bananas, "bracelet": _bracelets, "bipartite_extension": _bip_extensions}


def family_members(kind, max_n=20):
    return FAMILIES[kind](max_n)


# acceptance report -------------------------------------------------------------------

ACCEPTANCE: dict = {}


def record_acceptance(k, status, detail):
    ACCEPTANCE[k] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {status:<7} {detail}")
