import itertools
import random

import pytest
from hypothesis import given

from kegraph.generators import (
    c60,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    gen_blossom_pair,
    gen_even_k4_subdivision,
    path_graph,
    petersen,
    t_graph,
)
from kegraph.graph import Graph
from kegraph.independence import (
    OracleBudgetExceeded,
    add_twin,
    alpha,
    critical_difference,
    deming_extension,
    find_twins,
    gallai_class_number,
    graph_invariants,
    independence_number,
    is_2_bicritical,
    is_alpha_critical,
    is_independent,
    is_ke_oracle,
    maximum_critical_independent_set,
    remove_twin,
)
from kegraph.matching import matching_number, perfect_matching

from conftest import brute_alpha, brute_critical, brute_independent_sets, graphs, graphs_up_to, random_graph


def test_alpha_t():
    assert alpha(t_graph()) == 2


@pytest.mark.parametrize("n", range(1, 8))
def test_alpha_complete(n):
    assert alpha(complete_graph(n)) == 1


def test_alpha_c60():
    a, wit = independence_number(c60())
    assert a == 24
    assert is_independent(c60(), wit) and len(wit) == 24


def test_alpha_matches_brute_force_n_le_8():
    for g in graphs_up_to(8):
        a, wit = independence_number(g)
        assert a == brute_alpha(g)
        assert is_independent(g, wit) and len(wit) == a


@given(graphs(max_n=14))
def test_alpha_witness_valid(g):
    a, wit = independence_number(g)
    assert len(wit) == a and is_independent(g, wit)
    assert a == brute_alpha(g)


def test_alpha_budget_refuses():
    g = random_graph(40, 0.2, 1)
    with pytest.raises(OracleBudgetExceeded):
        alpha(g, budget=5)


def test_ke_oracle_examples():
    assert not is_ke_oracle(t_graph())
    assert not is_ke_oracle(complete_graph(4))
    assert is_ke_oracle(Graph(0, []))


def test_bipartite_graphs_are_ke():
    for seed in range(300):
        rng = random.Random(seed)
        a, b = rng.randint(1, 6), rng.randint(1, 6)
        g = Graph(a + b, [(i, a + j) for i in range(a) for j in range(b) if rng.random() < 0.4])
        assert is_ke_oracle(g)


def test_alpha_critical_examples():
    assert is_alpha_critical(cycle_graph(5))
    assert not is_alpha_critical(cycle_graph(4))
    assert is_alpha_critical(Graph(1, []))
    for n in range(1, 8):
        assert is_alpha_critical(complete_graph(n))


@pytest.mark.parametrize("c1,c2,p", [(3, 3, 1), (3, 5, 1), (5, 5, 1), (3, 3, 3), (5, 7, 3)])
def test_blossom_pair_not_alpha_critical(c1, c2, p):
    assert not is_alpha_critical(gen_blossom_pair(c1, c2, p))


def _brute_alpha_critical(g):
    a = brute_alpha(g)
    return all(brute_alpha(g.delete_edge(e)) == a + 1 for e in g.edges)


def test_alpha_critical_matches_brute_force_n_le_7():
    for g in graphs_up_to(7):
        assert is_alpha_critical(g) == _brute_alpha_critical(g)


def test_critical_k2():
    cd = maximum_critical_independent_set(complete_graph(2))
    assert cd.Jc == (0,) and cd.critical_difference == 0
    assert cd.X == (0, 1) and cd.Xc == ()


def test_critical_star():
    cd = maximum_critical_independent_set(complete_bipartite(1, 3))
    assert cd.Jc == (1, 2, 3) and cd.critical_difference == 2
    assert cd.X == (0, 1, 2, 3) and cd.Xc == ()


@pytest.mark.parametrize("g", [complete_graph(4), t_graph(), petersen(), cycle_graph(5)])
def test_critical_of_2_bicritical_is_empty(g):
    assert is_2_bicritical(g)
    cd = maximum_critical_independent_set(g)
    assert cd.Jc == () and cd.X == () and cd.Xc == tuple(range(g.n))


def test_critical_matches_brute_force_n_le_7():
    for g in graphs_up_to(7):
        d, best = brute_critical(g)
        cd = maximum_critical_independent_set(g)
        assert cd.critical_difference == d == critical_difference(g)
        assert list(cd.Jc) == best


@given(graphs(max_n=12))
def test_critical_matches_brute_force_random(g):
    d, best = brute_critical(g)
    cd = maximum_critical_independent_set(g)
    assert (cd.critical_difference, list(cd.Jc)) == (d, best)


def _brute_2_bicritical(g):
    for mask in brute_independent_sets(g):
        if not mask:
            continue
        nb = 0
        for v in range(g.n):
            if mask >> v & 1:
                nb |= g.adj[v]
        if nb.bit_count() <= mask.bit_count():
            return False
    return True


def test_2_bicritical_examples():
    assert is_2_bicritical(complete_graph(4))
    assert is_2_bicritical(t_graph())
    assert not is_2_bicritical(Graph(3, [(0, 1)]))


def test_2_bicritical_matches_brute_force_n_le_7():
    for g in graphs_up_to(7):
        assert is_2_bicritical(g) == _brute_2_bicritical(g)


def test_invariants_relations():
    for g in graphs_up_to(7):
        inv = graph_invariants(g)
        assert inv.delta == inv.n - 2 * inv.alpha
        assert inv.is_ke == (inv.alpha + inv.nu == inv.n)
        if 2 * inv.nu == inv.n:
            assert inv.delta == 2 * (inv.nu - inv.alpha) and inv.delta % 2 == 0 and inv.delta >= 0


def test_gallai_examples():
    assert gallai_class_number(complete_graph(2)) == 0
    assert gallai_class_number(t_graph()) == 2
    for lens in [(1, 1, 1, 1, 1, 1), (1, 1, 1, 1, 1, 3), (3, 3, 1, 1, 5, 1)]:
        assert gallai_class_number(gen_even_k4_subdivision(*lens)) == 2


def test_twins_complete_and_cycle():
    assert len(find_twins(complete_graph(5))) == 10
    assert find_twins(cycle_graph(5)) == []


def test_remove_twin_without_partner():
    with pytest.raises(ValueError):
        remove_twin(cycle_graph(5), 0)


def test_twin_add_remove_preserves_alpha_and_criticality():
    for seed in range(500):
        rng = random.Random(seed)
        n = rng.randint(1, 11)
        g = random_graph(n, rng.uniform(0.2, 0.7), seed)
        v = rng.randrange(n)
        h = add_twin(g, v)
        assert (v, n) in find_twins(h)
        assert alpha(h) == alpha(g)
        assert is_alpha_critical(h) == is_alpha_critical(g)
        back = remove_twin(h, n)
        assert back == g


def test_twins_preserve_criticality_on_critical_graphs():
    crit = [g for g in graphs_up_to(7, connected=True) if is_alpha_critical(g)]
    assert len(crit) > 5
    for g in crit:
        for v in range(g.n):
            assert is_alpha_critical(add_twin(g, v))


def test_extension_of_matchable_is_identity():
    g = t_graph()
    ext = deming_extension(g)
    assert ext.extended == g and ext.added_twins == {}
    assert len(ext.standard_matching) == 3


def test_extension_k1():
    ext = deming_extension(Graph(1, []))
    assert ext.extended == complete_graph(2)
    assert ext.standard_matching.edges == ((0, 1),)


def test_extension_p3():
    ext = deming_extension(path_graph(3))
    h = ext.extended
    assert h.n == 4 and matching_number(h) == 2 and alpha(h) == 2


def test_extension_preserves_alpha_ke_criticality_n_le_7():
    for g in graphs_up_to(7):
        ext = deming_extension(g)
        h, m = ext.extended, ext.standard_matching
        assert m.is_perfect(h.n) and m.is_valid_for(h)
        for v, t in ext.added_twins.items():
            assert (v, t) in m and (v, t) in find_twins(h)
        assert alpha(h) == alpha(g)
        assert is_ke_oracle(h) == is_ke_oracle(g)
        assert is_alpha_critical(h) == is_alpha_critical(g)


# structural facts about alpha-critical graphs ------------------------------------


def _crit_no_isolated(n_max):
    for g in graphs_up_to(n_max):
        if g.n and all(g.degree(v) for v in range(g.n)) and is_alpha_critical(g):
            yield g


def test_critical_graphs_alpha_at_most_half():
    for g in _crit_no_isolated(8):
        assert 2 * alpha(g) <= g.n


def test_critical_graphs_neighbourhoods_not_smaller():
    for g in _crit_no_isolated(7):
        for mask in brute_independent_sets(g):
            nb = 0
            for v in range(g.n):
                if mask >> v & 1:
                    nb |= g.adj[v]
            assert nb.bit_count() >= mask.bit_count()


def test_connected_critical_graphs_are_k1_k2_or_2_bicritical():
    for g in graphs_up_to(8, connected=True):
        if g.n > 2 and is_alpha_critical(g):
            assert is_2_bicritical(g)


def test_connected_critical_graphs_not_alpha_additive():
    for g in graphs_up_to(8, connected=True):
        if g.n < 2 or not is_alpha_critical(g):
            continue
        a = alpha(g)
        for r in range(1, g.n // 2 + 1):
            for part in itertools.combinations(range(g.n), r):
                rest = [v for v in range(g.n) if v not in part]
                assert alpha(g.induced_subgraph(part)) + alpha(g.induced_subgraph(rest)) != a


def test_max_degree_bound_for_critical_graphs():
    # every alpha-critical graph without isolated vertices has max degree <= n - 2 alpha + 1
    for g in _crit_no_isolated(9):
        assert max(g.degree(v) for v in range(g.n)) <= g.n - 2 * alpha(g) + 1


def test_larson_maximum_critical_set_matched_on_matchable():
    for g in graphs_up_to(8, even=True):
        if perfect_matching(g) is None:
            continue
        cd = maximum_critical_independent_set(g)
        assert len(cd.Jc) == len(cd.X) - len(cd.Jc)
