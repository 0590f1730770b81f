import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import EXAMPLES, example_poset
from taumute import models, taut
from taumute.exactla import int_det_abs
from taumute.repcat import apr_tilt, cokernel, decompose, is_isomorphic, projective, registry, simple
from taumute.taut import StPair, parse_pair


def pair(alg, text: str) -> StPair:
    return parse_pair(alg, text)


def slot(alg, text: str):
    return taut.parse_slot(alg, text)


# classification and Fac ------------------------------------------------------------------

def test_classification_examples(kqba):
    assert taut.classify(taut.regular_pair(kqba)) == "support-tau-tilting"
    assert taut.classify(pair(kqba, "P1+S1+P3")) == "support-tau-tilting"
    assert taut.classify(taut.zero_pair(kqba)) == "support-tau-tilting"
    assert taut.classify(pair(kqba, "P1+S1")) == "almost-complete"
    assert taut.classify(pair(kqba, "S1")) == "tau-rigid"
    assert taut.classify(pair(kqba, "S1+S2")) == "not-tau-rigid"
    assert taut.classify(pair(kqba, "P1;1")) == "not-tau-rigid"


def test_tau_rigid_modules(kqba):
    assert taut.is_tau_rigid(simple(kqba, 1))
    assert not taut.is_tau_rigid(pair(kqba, "S1+S2").rep())


def test_in_fac_examples(a3, kqba):
    p1 = projective(a3, 1)
    assert taut.in_fac(p1, p1)
    assert taut.in_fac(simple(a3, 1), p1)
    u = pair(kqba, "P1+P3").rep()
    assert not taut.in_fac(projective(kqba, 2), u)


def test_trace_of_p1_in_p2(a3):
    t, inc = taut.trace(projective(a3, 2), projective(a3, 1))
    assert t.dims == (0, 1, 1) and inc.is_injective()


# approximations ------------------------------------------------------------------------

def test_left_approximation_of_p2_by_the_complement(kqba):
    ids = pair(kqba, "Lambda").module
    p1, p2, p3 = ids
    ap = taut.minimal_left_approximation(kqba, p2, [p1, p3])
    assert ap.components == (p1,) and ap.is_approximation and ap.is_minimal
    assert is_isomorphic(cokernel(ap.map)[0], simple(kqba, 1))


def test_left_approximation_inside_add_u_splits(kqba):
    p1, _, p3 = pair(kqba, "Lambda").module
    ap = taut.minimal_left_approximation(kqba, p1, [p1, p3])
    assert ap.components == (p1,) and ap.map.is_isomorphism()
    assert cokernel(ap.map)[0].dim == 0


def test_left_approximation_with_no_maps_is_surjective(kqba):
    p1, p2, p3 = pair(kqba, "Lambda").module
    ap = taut.minimal_left_approximation(kqba, p1, [p2, p3])
    assert ap.components == () and ap.surjective and ap.is_minimal


# worked mutations ------------------------------------------------------------------------

def test_mutate_at_p1_drops_to_support(kqba):
    res = taut.mutate(taut.regular_pair(kqba), slot(kqba, "P1"))
    assert res.pair.key == pair(kqba, "P2+P3;1").key
    assert res.case == "A" and res.report.surjective and res.report.verified


def test_mutate_at_p2(kqba):
    res = taut.mutate(taut.regular_pair(kqba), slot(kqba, "P2"))
    assert res.pair.key == pair(kqba, "P1+S1+P3").key
    r = res.report
    assert r.verified and r.r == 1 and r.y == taut.parse_summand(kqba, "S1")


def test_mutate_at_p3(kqba):
    res = taut.mutate(taut.regular_pair(kqba), slot(kqba, "P3"))
    assert res.pair.key == pair(kqba, "P1+P2+S2").key


def test_mutate_support_vertex_goes_through_the_dagger(kqba):
    p = pair(kqba, "P1+S1;3")
    res = taut.mutate(p, ("P", 3))
    assert res.case == "B"
    assert res.pair.key == pair(kqba, "P1+S1+P3").key
    op = kqba.opposite()
    inner_from, inner_to = res.via
    assert inner_from.key == pair(op, "S2+P3;1").key
    assert inner_to.algebra is op and inner_to.key == pair(op, "S2;1,3").key


def test_mutation_errors(kqba):
    with pytest.raises(taut.MutationError):
        taut.mutate(taut.regular_pair(kqba), ("P", 1))
    with pytest.raises(taut.MutationError):
        taut.mutate(pair(kqba, "P1+S1"), slot(kqba, "P1"))


def test_exchange_sequence_on_a3(a3):
    r = taut.exchange_sequence(taut.regular_pair(a3), slot(a3, "P3"))
    assert r.u_prime == (taut.parse_summand(a3, "P2"),)
    assert r.y == taut.parse_summand(a3, "S2") and r.r == 1 and r.verified


def test_exchange_sequence_refuses_case_b(kqba):
    with pytest.raises(taut.MutationError):
        taut.exchange_sequence(pair(kqba, "P1+S1;3"), ("P", 3))


# dagger --------------------------------------------------------------------------------

def test_dagger_examples(kqba):
    op = kqba.opposite()
    d = taut.dagger(taut.regular_pair(kqba))
    assert d.algebra is op and d.key == taut.zero_pair(op).key
    assert taut.dagger(pair(kqba, "P1+S1;3")).key == pair(op, "S2+P3;1").key


# order ----------------------------------------------------------------------------------

def test_extremes_bound_every_node(kqba_poset):
    a = kqba_poset.algebra
    top, bottom = taut.regular_pair(a), taut.zero_pair(a)
    for p in kqba_poset.nodes:
        assert taut.leq(bottom, p) and taut.leq(p, top)


def test_strictly_below_regular(kqba):
    p = pair(kqba, "P1+S1+P3")
    top = taut.regular_pair(kqba)
    assert taut.leq(p, top) and not taut.leq(top, p)


def test_incomparable_witness(kqba):
    x, y = pair(kqba, "P2+S2;1"), pair(kqba, "P1+S1;3")
    assert not taut.leq(x, y) and not taut.leq(y, x)


def test_truncated_poset_refuses_order_queries(kqba):
    small = taut.enumerate_poset(kqba, cap=4)
    assert not small.complete and len(small) == 4
    with pytest.raises(taut.TruncatedPoset):
        small.leq_matrix()
    with pytest.raises(taut.TruncatedPoset):
        taut.check_two_complements(small)


def test_cap_from_environment(monkeypatch, kqba):
    monkeypatch.setenv("TAUMUTE_CAP", "3")
    assert taut.default_cap() == 3
    assert len(taut.enumerate_poset(kqba)) == 3
    monkeypatch.setenv("TAUMUTE_CAP", "junk")
    with pytest.raises(ValueError, match="TAUMUTE_CAP"):
        taut.default_cap()
    monkeypatch.delenv("TAUMUTE_CAP")
    assert taut.default_cap() == taut.DEFAULT_CAP


# enumeration ---------------------------------------------------------------------------

@pytest.mark.parametrize("name,count", [("a3-mod-ba", 12), ("cyclic:3,2", 14), ("preproj:A2", 6),
                                        ("preproj:A3", 24), ("a3", 14), ("cyclic:3,3", 20)])
def test_node_counts(name, count):
    assert len(example_poset(name)) == count


def test_local_algebra_has_two_pairs():
    alg = models.cyclic_nakayama(1, 2)
    poset = taut.enumerate_poset(alg)
    assert len(poset) == 2 and len(poset.edges) == 1
    assert taut.check_hasse_equals_exchange(poset).passed


def test_kqba_hasse_diagram(kqba_poset):
    assert len(kqba_poset.edges) == 18
    assert set((i, j) for i, j, _, _ in kqba_poset.edges) == taut.hasse_edges(kqba_poset)


@pytest.mark.parametrize("name", EXAMPLES)
def test_order_suite(name):
    poset = example_poset(name)
    for check in (taut.check_two_complements, taut.check_regular_and_involutive, taut.check_partial_order,
                  taut.check_hasse_equals_exchange, taut.check_edge_comparability, taut.check_dagger,
                  taut.check_sincere_and_faithful, taut.check_g_determinants, taut.check_g_injectivity):
        rep = check(poset)
        assert rep.passed, (rep.name, rep.violations[:5])


def _node_slots(name):
    poset = example_poset(name)
    return [(i, s) for i, p in enumerate(poset.nodes) for s in p.slots()]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(("a3-mod-ba", "cyclic:3,2", "preproj:A2", "a3")).flatmap(
    lambda name: st.tuples(st.just(name), st.sampled_from(_node_slots(name)))))
def test_mutation_is_an_involution(case):
    name, (i, s) = case
    poset = example_poset(name)
    p = poset.nodes[i]
    res = taut.mutate(p, s)
    back = taut.mutate(res.pair, res.new_slot)
    assert back.pair.key == p.key and back.new_slot == s
    assert res.pair.key in poset.index


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(("a3-mod-ba", "cyclic:3,2", "preproj:A2", "a3")).flatmap(
    lambda name: st.tuples(st.just(name), st.integers(0, len(example_poset(name)) - 1))))
def test_dagger_is_an_involution(case):
    name, i = case
    p = example_poset(name).nodes[i]
    d = taut.dagger(p)
    assert taut.classify(d) == "support-tau-tilting"
    assert taut.dagger(d).key == p.key


# g-vectors --------------------------------------------------------------------------------

def test_g_vector_examples(kqba):
    for v in kqba.quiver.vertices:
        assert taut.g_vector(projective(kqba, v)) == tuple(1 if w == v else 0 for w in (1, 2, 3))
    assert taut.g_vector(simple(kqba, 1)) == (1, -1, 0)


@pytest.mark.parametrize("name", EXAMPLES)
def test_every_g_matrix_is_unimodular(name):
    for p in example_poset(name).nodes:
        assert int_det_abs(taut.g_matrix(p)) == 1


def test_g_vector_sets_are_distinct(kqba_poset):
    rep = taut.check_g_injectivity(kqba_poset)
    assert rep.passed and len({frozenset(taut.g_vectors(p)) for p in kqba_poset.nodes}) == 12


@pytest.mark.parametrize("name", ["a3-mod-ba", "preproj:A2", "a3"])
def test_summand_disjointness(name):
    rep = taut.check_summand_disjoint(example_poset(name))
    assert rep.passed, rep.violations[:5]


# tilting ------------------------------------------------------------------------------

def test_a3_has_five_tilting_modules(a3_poset):
    assert len(taut.tilting_subset(a3_poset)) == 5
    for i in taut.tilting_subset(a3_poset):
        assert taut.is_tilting(a3_poset.nodes[i].rep())


def test_kqba_has_eight_support_tilting_pairs(kqba_poset):
    assert len(taut.support_tilting_pairs(kqba_poset)) == 8


def test_support_tilting_pair_with_one_complement(kqba_poset):
    a = kqba_poset.algebra
    u = pair(a, "P1+P3")
    done = taut.completions_within(kqba_poset, taut.support_tilting_pairs(kqba_poset), u.module, exact=True)
    assert len(done) == 1
    assert len(taut.completions_within(kqba_poset, range(len(kqba_poset)), u.module, exact=True)) == 2


def test_path_algebra_support_tilting_two_complements(a3_poset):
    assert taut.check_support_tilting_complements(a3_poset).passed


def test_tilting_complement_counts(a3_poset):
    a = a3_poset.algebra
    rep = taut.check_tilting_complements(a3_poset)
    assert rep.passed
    tilt = [a3_poset.nodes[i] for i in taut.tilting_subset(a3_poset)]
    p1, p2, p3 = taut.regular_pair(a).module
    assert sum(1 for t in tilt if {p2, p3} <= set(t.module)) == 1
    with_p1_p2 = [t for t in tilt if {p1, p2} <= set(t.module)]
    assert len(with_p1_p2) == 2
    s2 = taut.parse_summand(a, "S2")
    assert {x for t in with_p1_p2 for x in t.module} == {p1, p2, p3, s2}


def test_apr_tilt_is_a_node(a3_poset):
    a = a3_poset.algebra
    t = taut.pair_from_modules(a, [apr_tilt(a, 3)])
    assert t.key in a3_poset.index


# torsion pairs and completions ---------------------------------------------------------

def test_apr_torsion_free_class_is_s3(a3_poset):
    a = a3_poset.algebra
    probes = taut.probe_ids(a3_poset)
    t = taut.pair_from_modules(a, [apr_tilt(a, 3)])
    rep = taut.check_torsion_pair(t, probes)
    assert rep.passed
    assert rep.details["torsion_free"] == [taut.parse_summand(a, "S3")]
    assert len(rep.details["torsion"]) == len(probes) - 1


def test_trivial_torsion_pairs(kqba_poset):
    a = kqba_poset.algebra
    probes = taut.probe_ids(kqba_poset)
    top = taut.check_torsion_pair(taut.regular_pair(a), probes)
    assert top.passed and top.details["torsion_free"] == [] and len(top.details["torsion"]) == len(probes)
    bottom = taut.check_torsion_pair(taut.zero_pair(a), probes)
    assert bottom.passed and bottom.details["torsion"] == [] and len(bottom.details["torsion_free"]) == len(probes)


def test_bongartz_examples(kqba_poset):
    a = kqba_poset.algebra
    s1 = taut.parse_summand(a, "S1")
    assert taut.bongartz_completion(kqba_poset, [s1]).key == pair(a, "P1+S1+P3").key
    lam = taut.regular_pair(a)
    assert taut.bongartz_completion(kqba_poset, lam.module).key == lam.key
    assert taut.bongartz_completion(kqba_poset, []).key == lam.key


@pytest.mark.parametrize("name", ["a3-mod-ba", "cyclic:3,2", "preproj:A2", "a3"])
def test_three_conditions_and_quotients(name):
    poset = example_poset(name)
    probes = taut.probe_ids(poset)
    for rep in (taut.check_three_conditions(poset, probes), taut.check_idempotent_quotient(poset, probes),
                taut.check_bongartz(poset)):
        assert rep.passed, (rep.name, rep.violations[:5])


# names and parsing --------------------------------------------------------------------

def test_summand_names_round_trip(kqba_poset):
    a = kqba_poset.algebra
    for p in kqba_poset.nodes:
        for i in p.module:
            name = taut.summand_name(a, i)
            if name[0] in "PSI" and name[1:].isdigit():
                assert taut.parse_summand(a, name) == i
            assert taut.parse_summand(a, f"#{i}") == i


def test_parse_errors(kqba):
    with pytest.raises(ValueError):
        taut.parse_summand(kqba, "Q1")
    with pytest.raises(ValueError):
        parse_pair(kqba, "P1;9")


def test_labels(kqba):
    assert pair(kqba, "P2+P3;1").label() == "(P2 + P3; P1)"
    assert pair(kqba, "0").label() == "(0)"
