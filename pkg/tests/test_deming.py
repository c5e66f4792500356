import random

import pytest

from kegraph.deming import (
    check_decomposition,
    decomposition_from_json,
    deming_decomposition,
    induced_perfect_matching,
    is_deming_bp,
    is_deming_k4,
    is_even_k4_subdivision_by_deletion,
    nu_minus_k_witness,
    shrink_to_deming,
)
from kegraph.generators import (
    c60,
    c60_pentagons,
    complete_graph,
    cycle_graph,
    gen_blossom_pair,
    gen_even_k4_subdivision,
    gen_random_matchable,
    k4notegervary,
    k4notminimal,
    petersen,
    t_graph,
)
from kegraph.graph import Graph, parse_graph6
from kegraph.independence import alpha, is_alpha_critical
from kegraph.ke import is_ke, ke_certificate
from kegraph.matching import Matching, matching_number, perfect_matching
from kegraph.subdivision import recognize_even_k4_subdivision, recognize_even_t_subdivision

from conftest import graphs_up_to


def _dec(g, m=None):
    return deming_decomposition(g, m or perfect_matching(g))


def test_is_deming_k4_examples():
    assert is_deming_k4(complete_graph(4)) is not None
    assert is_deming_k4(k4notegervary()) is not None
    assert is_deming_k4(t_graph()) is None


def test_k4notegervary_is_not_itself_a_subdivision():
    g = k4notegervary()
    assert recognize_even_k4_subdivision(g) is None
    assert not is_ke(g.delete_edge((5, 6))) and not is_ke(g.delete_edge((0, 6)))
    assert not is_even_k4_subdivision_by_deletion(g)


def test_is_deming_bp_examples():
    assert is_deming_bp(petersen()) is not None
    assert is_deming_bp(cycle_graph(6)) is None
    for c1, c2, p in [(3, 3, 1), (3, 5, 1), (5, 5, 3), (3, 7, 5)]:
        assert is_deming_bp(gen_blossom_pair(c1, c2, p)) is not None


def test_shrink_fixed_point_on_t():
    g = t_graph()
    h = recognize_even_t_subdivision(g)
    verts, wit, removed = shrink_to_deming(g, h)
    assert verts == list(range(6)) and removed == []


def test_shrink_drops_one_pair():
    # T with the joining edge 2-3 and a second joining path 2-6-7-3
    g = Graph(8, list(t_graph().edges) + [(2, 6), (6, 7), (7, 3)])
    h = recognize_even_t_subdivision(g.edge_subgraph([e for e in g.edges if e != (2, 3)]))
    assert len(h.vertices) == 8
    log = []
    verts, wit, removed = shrink_to_deming(g, h, log)
    assert verts == list(range(6)) and removed == [(6, 7)]
    assert log[0]["edge"] == [6, 7]


def test_shrink_output_is_deming_random():
    checked = 0
    for seed in range(200):
        rng = random.Random(seed)
        g = gen_random_matchable(2 * rng.randint(3, 8), rng.uniform(0.15, 0.4), seed)
        cert = ke_certificate(g, perfect_matching(g))
        if cert.is_ke:
            continue
        verts, wit, removed = shrink_to_deming(g, cert.obstruction)
        sub = g.induced_subgraph(verts)
        assert is_deming_bp(sub) is not None or is_deming_k4(sub) is not None
        assert len(removed) == (len(cert.obstruction.vertices) - len(verts)) // 2
        checked += 1
    assert checked > 50


def test_ke_graph_single_remainder():
    g = cycle_graph(8)
    dec = _dec(g)
    assert dec.r == dec.ell == 0 and dec.remainder == tuple(range(8))


def test_k4notminimal_decomposition():
    g = k4notminimal()
    dec = deming_decomposition(g, Matching([(1, 5), (3, 4), (0, 2)]))
    assert dec.r == 0 and dec.ell == 1
    assert dec.k4[0].vertices == (0, 1, 2, 3)
    assert dec.remainder == (4, 5)
    assert dec.induced_matching.edges == ((0, 2), (1, 3), (4, 5))
    assert induced_perfect_matching(dec, g, Matching([(1, 5), (3, 4), (0, 2)])) == dec.induced_matching


def test_c60_decomposition():
    g = c60()
    dec = _dec(g)
    assert dec.r == 6 and dec.ell == 0 and dec.remainder == ()
    pent = [set(p) for p in c60_pentagons()]
    for part in dec.bp:
        vs = set(part.vertices)
        inside = [p for p in pent if p <= vs]
        assert len(vs) == 10 and len(inside) == 2
        sub = g.induced_subgraph(part.vertices)
        assert sub.m == 11
        assert alpha(sub) == 4
    assert len(dec.induced_matching) == 30 and dec.induced_matching.is_perfect(60)
    assert sum(alpha(g.induced_subgraph(p.vertices)) for p in dec.bp) == alpha(g) == 24


def test_petersen_single_bp_part():
    dec = _dec(petersen())
    assert dec.r == 1 and dec.ell == 0 and dec.remainder == ()


def test_check_decomposition_examples():
    for g in (t_graph(), petersen(), k4notminimal(), k4notegervary(), cycle_graph(6)):
        res = check_decomposition(g, _dec(g))
        assert all(v is True for k, v in res.items() if k != "parts_definition_skipped")


def test_decomposition_json_round_trip():
    g = k4notminimal()
    dec = _dec(g)
    assert decomposition_from_json(g.n, dec.to_json()) == dec


def test_deterministic():
    g = gen_random_matchable(16, 0.3, 5)
    m = perfect_matching(g)
    a, b = deming_decomposition(g, m), deming_decomposition(g, m)
    assert a == b and a.provenance == b.provenance


def test_rejects_non_perfect_matching():
    with pytest.raises(ValueError):
        deming_decomposition(cycle_graph(4), Matching([(0, 1)]))


def test_nu_minus_k_single_part():
    # T with a pendant matched pair hanging off vertex 0
    g = Graph(8, list(t_graph().edges) + [(0, 6), (6, 7)])
    dec = _dec(g)
    assert dec.r + dec.ell == 1
    w = nu_minus_k_witness(g, dec.induced_matching, dec)
    assert w is not None
    assert alpha(g) == matching_number(g) - 1


def test_nu_minus_k_c60():
    g = c60()
    dec = _dec(g)
    w = nu_minus_k_witness(g, dec.induced_matching, dec)
    assert w is not None and len(w) == 6
    assert alpha(g) == 30 - 6


def test_nu_minus_k_absent_for_k8():
    g = parse_graph6("G~~~~{")
    assert g == complete_graph(8)
    dec = _dec(g)
    assert dec.ell == 2 and dec.r == 0
    assert nu_minus_k_witness(g, dec.induced_matching, dec) is None
    assert alpha(g) == 1 < 4 - 2


def test_nu_minus_k_iff_alpha_small_corpus():
    for g in graphs_up_to(7, connected=True, even=True):
        m = perfect_matching(g)
        if m is None:
            continue
        dec = deming_decomposition(g, m)
        k = dec.r + dec.ell
        if k == 0:
            continue
        w = nu_minus_k_witness(g, dec.induced_matching, dec)
        assert (w is not None) == (alpha(g) == g.n // 2 - k)


def test_nu_minus_k_needs_parts():
    g = cycle_graph(4)
    with pytest.raises(ValueError):
        nu_minus_k_witness(g, perfect_matching(g), _dec(g))


@pytest.mark.parametrize("lens", [(1, 1, 1, 3, 1, 3), (1, 1, 1, 1, 1, 1), (3, 3, 3, 1, 1, 1)])
def test_even_k4_by_deletion_true(lens):
    assert is_even_k4_subdivision_by_deletion(gen_even_k4_subdivision(*lens))


def test_even_k4_by_deletion_agrees_with_recognizer():
    for g in graphs_up_to(8, connected=True, even=True):
        if g.m < 6 or perfect_matching(g) is None or is_deming_k4(g) is None:
            continue
        assert is_even_k4_subdivision_by_deletion(g) == (recognize_even_k4_subdivision(g, allow_isolated=False) is not None)


def test_part_invariants_small_corpus():
    for g in graphs_up_to(8, connected=True, even=True):
        m = perfect_matching(g)
        if m is None:
            continue
        dec = deming_decomposition(g, m)
        assert (dec.r + dec.ell == 0) == is_ke(g)
        for p in dec.parts:
            sub = g.induced_subgraph(p.vertices)
            assert alpha(sub) == sub.n // 2 - 1
            crit = is_alpha_critical(sub)
            if p.kind == "BP":
                assert not crit
            else:
                assert crit == (recognize_even_k4_subdivision(sub, allow_isolated=False) is not None)
