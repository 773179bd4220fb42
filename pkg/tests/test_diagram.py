from __future__ import annotations

import pytest
from hypothesis import given, settings

from legsheaf import corpus
from legsheaf.diagram import (
    CYLINDER,
    FrontError,
    apply_reidemeister,
    applicable_moves,
    binary_potential,
    classical_invariants,
    cylindrical_closure,
    front,
    maslov_potentials,
    parse_braid,
    parse_front,
    rainbow_closure,
    serialize_front,
)
from strategies import positive_braids, rainbow_fronts


def test_trefoil_front():
    d = corpus.load("trefoil")
    assert d.word.to_text() == "u1 u2 x3 x3 x3 d2 d1"
    assert len(d.components) == 1
    assert len(d.crossings) == 3
    inv = classical_invariants(d)
    assert (inv.tb, inv.rot, inv.writhe) == (1, (0,), 3)
    assert binary_potential(d) is not None


def test_hopf_links_have_two_components():
    for name in ("hopf_horizontal", "hopf_rainbow"):
        d = corpus.load(name)
        assert len(d.components) == 2


@pytest.mark.parametrize("text", ["u1 u2 d1 d2", "u2 d1", "x1", "u1 d1 d1", "u1 q1 d1", "u0 d1", "cyl; x1"])
def test_malformed_words_are_rejected(text):
    with pytest.raises(FrontError):
        parse_front(text)


def test_cylinder_word():
    w = parse_front("cyl 2; u2 x1 x3 d2")
    assert w.ambient == CYLINDER
    assert w.counts() == [2, 4, 4, 4, 2]
    assert serialize_front(w) == "cyl 2; u2 x1 x3 d2"


def test_cylindrical_closure_of_braid():
    w = cylindrical_closure(parse_braid("1 1", 2))
    assert w.to_text() == "cyl 2; x1 x1"


def test_rainbow_closure_needs_positive_braid():
    with pytest.raises(FrontError):
        rainbow_closure(parse_braid("1 -1", 2))


def test_stabilized_fronts_have_no_integer_potential():
    for name in ("stabilized_unknot", "stabilized_trefoil"):
        d = corpus.load(name)
        assert maslov_potentials(d, 0) == []
        assert maslov_potentials(d, 2)
        assert classical_invariants(d).rot != (0,)


def test_chekanov_pair_invariants_agree():
    a, b = corpus.load("chekanov_1"), corpus.load("chekanov_2")
    ia, ib = classical_invariants(a), classical_invariants(b)
    assert (ia.tb, ia.rot) == (ib.tb, ib.rot) == (1, (0,))
    assert binary_potential(a) is None
    assert binary_potential(b) is not None


@given(positive_braids())
def test_word_round_trip(b):
    w = rainbow_closure(b)
    assert parse_front(serialize_front(w)) == w


@given(rainbow_fronts())
def test_rainbow_closure_invariants(bd):
    b, d = bd
    inv = classical_invariants(d)
    assert inv.writhe == b.writhe
    assert inv.tb == b.writhe - b.strands
    assert all(r == 0 for r in inv.rot)
    assert len(d.components) == b.components()
    assert binary_potential(d) is not None


@given(rainbow_fronts(max_strands=2, max_len=3))
@settings(max_examples=25)
def test_moves_preserve_classical_invariants(bd):
    _, d = bd
    inv = classical_invariants(d)
    for move, site in applicable_moves(d.word)[:12]:
        d2 = apply_reidemeister(d, move, site)
        inv2 = classical_invariants(d2)
        assert inv2.tb == inv.tb
        assert sorted(inv2.rot) == sorted(inv.rot)


def test_moves_are_reversible():
    d = corpus.load("trefoil")
    for move, site in applicable_moves(d.word):
        if not site.forward:
            continue
        d2 = apply_reidemeister(d, move, site)
        back = [(m, s) for m, s in applicable_moves(d2.word) if m == move and not s.forward
                and apply_reidemeister(d2, m, s).word == d.word]
        assert back, (move, site)


def test_inapplicable_move_is_rejected():
    d = front("u1 d1")
    with pytest.raises(FrontError):
        apply_reidemeister(d, "R3", applicable_moves(d.word)[0][1])


def test_front_json_shape():
    js = corpus.load("hopf_rainbow").to_json()
    assert js["word"] == "u1 u2 x3 x3 d2 d1"
    assert {"arcs", "regions", "cells", "poset", "strands"} <= set(js)
