from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legsheaf import corpus, gf
from legsheaf.diagram import front, parse_braid, rainbow_closure
from legsheaf.rulings import enumerate_rulings
from legsheaf.sheafmoduli import (
    ModelError,
    SearchCapExceeded,
    build_quiver_model,
    check_object,
    enumerate_cylindrical,
    enumerate_front,
    enumerate_objects,
    microlocal_rank,
    open_bott_samelson,
    ruling_stratum_formula,
    stabilized_is_empty,
    stratified_counts,
)
from oracles import brute_force_orbifold, count_valid_assignments
from strategies import positive_braids, rainbow_fronts


@pytest.mark.parametrize("name, p", [
    ("unknot", 2), ("unknot", 3), ("unknot", 5),
    ("hopf_rainbow", 2), ("hopf_rainbow", 3), ("hopf_horizontal", 2),
    ("trefoil", 2), ("trefoil", 3),
])
def test_orbifold_count_matches_brute_force(name, p):
    d = corpus.load(name)
    assert enumerate_front(d, p).orbifold == brute_force_orbifold(build_quiver_model(d), p)


def test_rank_two_unknot_matches_brute_force():
    d = corpus.load("unknot")
    m = build_quiver_model(d, r=2)
    assert enumerate_objects(m, 2).orbifold == brute_force_orbifold(m, 2)


def test_trefoil_counts():
    e = enumerate_front(corpus.load("trefoil"), 2)
    assert (e.count, e.orbifold, e.aut_histogram()) == (5, 5, {1: 5})
    assert enumerate_front(corpus.load("trefoil"), 3).orbifold == 5


def test_m8_21_counts():
    e = enumerate_front(corpus.load("m8_21"), 2)
    assert e.count == 10
    assert e.aut_histogram() == {1: 6, 2: 4}
    assert e.orbifold == 8


def test_chekanov_2_counts():
    assert enumerate_front(corpus.load("chekanov_2"), 2).orbifold == 3
    assert enumerate_front(corpus.load("chekanov_2"), 3).orbifold == Fraction(7, 2)


def test_enumerated_objects_are_valid_and_distinct():
    e = enumerate_front(corpus.load("hopf_horizontal"), 3)
    assert all(check_object(e.model, o.arcs, 3) == [] for o in e.objects)
    assert len({o.key() for o in e.objects}) == e.count


def test_microlocal_rank_is_one_everywhere():
    e = enumerate_front(corpus.load("trefoil"), 3)
    for o in e.objects:
        assert set(microlocal_rank(e.model, o).values()) == {1}


def test_non_binary_front_is_rejected():
    with pytest.raises(ModelError):
        build_quiver_model(corpus.load("chekanov_1"))


def test_search_cap():
    m = build_quiver_model(corpus.load("trefoil"))
    with pytest.raises(SearchCapExceeded):
        enumerate_objects(m, 3, cap=2)


@pytest.mark.parametrize("p", [2, 3])
def test_stabilized_fronts_carry_no_objects(p):
    for name in ("stabilized_unknot", "stabilized_trefoil"):
        assert stabilized_is_empty(corpus.load(name), p, ranks=(1, 2))


def test_unknot_on_its_own_is_not_empty():
    assert not stabilized_is_empty(corpus.load("unknot"))


@given(rainbow_fronts(max_strands=3, max_len=4), st.sampled_from([2, 3]))
@settings(max_examples=25, deadline=None)
def test_strata_match_ruling_formula(bd, p):
    b, d = bd
    e = enumerate_front(d, p)
    table = stratified_counts(e)
    rulings = {r.switches: r for r in enumerate_rulings(d)}
    assert set(table) == set(rulings)
    for sw, (_, orb) in table.items():
        assert orb == ruling_stratum_formula(rulings[sw], b.writhe, p)
    assert sum(orb for _, orb in table.values()) == e.orbifold


@given(rainbow_fronts(max_strands=2, max_len=3))
@settings(max_examples=10, deadline=None)
def test_valid_assignment_count_matches_oracle(bd):
    _, d = bd
    m = build_quiver_model(d)
    size = 1
    for r in d.regions:
        size *= gf.gl_order(m.dims[r.id], 2)
    assert Fraction(count_valid_assignments(m, 2), size) == enumerate_objects(m, 2).orbifold


@given(positive_braids(max_strands=3, max_len=3), st.sampled_from([2, 3]))
@settings(max_examples=15, deadline=None)
def test_open_bott_samelson_has_q_to_the_w_points(b, p):
    assert len(open_bott_samelson(b, p)) == p ** len(b.letters)


@pytest.mark.parametrize("word, n, p", [("1 1", 2, 2), ("1 1", 2, 3), ("1 1 1", 2, 2), ("1 2", 3, 2)])
def test_cylindrical_orbifold_count(word, n, p):
    b = parse_braid(word, n)
    c = enumerate_cylindrical(b, p)
    assert c.orbifold == p ** len(b.letters)
    assert sum(c.aut_histogram.values()) == c.classes


def test_cylindrical_needs_rank_one_and_positive_braid():
    with pytest.raises(ModelError):
        enumerate_cylindrical(parse_braid("1", 2), 2, r=2)
    with pytest.raises(ModelError):
        enumerate_cylindrical(parse_braid("-1", 2), 2)


def test_rainbow_trefoil_matches_corpus_front():
    a = enumerate_front(front(rainbow_closure(parse_braid("1 1 1", 2))), 2)
    b = enumerate_front(corpus.load("trefoil"), 2)
    assert a.count == b.count
