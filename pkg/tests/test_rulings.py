from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

from legsheaf import corpus
from legsheaf.diagram import FrontError, applicable_moves, apply_reidemeister
from legsheaf.rulings import enumerate_rulings, ruling_polynomial
from strategies import rainbow_fronts


def rp(name):
    return ruling_polynomial(enumerate_rulings(corpus.load(name))).as_dict()


@pytest.mark.parametrize("name, expected", [
    ("unknot", {-1: 1}),
    ("hopf_rainbow", {-2: 1, 0: 1}),
    ("hopf_horizontal", {-2: 1, 0: 1}),
    ("trefoil", {-1: 2, 1: 1}),
    ("torus_3_4", {-1: 5, 1: 10, 3: 6, 5: 1}),
    ("m8_21", {-1: 3, 1: 2}),
    ("chekanov_1", {-1: 1}),
    ("chekanov_2", {-1: 1, 1: 1}),
])
def test_ruling_polynomials(name, expected):
    assert rp(name) == expected


def test_stabilized_fronts_have_no_graded_rulings():
    assert rp("stabilized_unknot") == {}
    assert rp("stabilized_trefoil") == {}


def test_ungraded_rulings_contain_graded():
    d = corpus.load("trefoil")
    graded = {r.switches for r in enumerate_rulings(d)}
    ungraded = {r.switches for r in enumerate_rulings(d, require_graded=False)}
    assert graded <= ungraded


def test_cylinder_front_has_no_rulings():
    with pytest.raises(FrontError):
        enumerate_rulings(corpus.load("hopf_wrap"))


@given(rainbow_fronts())
def test_rulings_of_rainbow_closures(bd):
    b, d = bd
    rulings = enumerate_rulings(d)
    assert rulings
    for r in rulings:
        assert r.n == b.strands
        assert r.graded and r.normal
        # switches at crossings of even Maslov degree, all crossings here have degree 0
        assert (b.writhe - r.s) % 2 == 0
    # the all-switch ruling is always normal and graded
    assert tuple(range(len(d.crossings))) in {r.switches for r in rulings}


@given(rainbow_fronts(max_strands=2, max_len=3))
@settings(max_examples=20)
def test_ruling_polynomial_is_move_invariant_for_knots(bd):
    # on links the canonical potential fixes each component's minimum, and a
    # move can change the relative shift between components
    b, d = bd
    if b.components() != 1:
        return
    base = ruling_polynomial(enumerate_rulings(d)).as_dict()
    moves = applicable_moves(d.word)
    random.Random(len(moves)).shuffle(moves)
    for move, site in moves[:6]:
        d2 = apply_reidemeister(d, move, site)
        assert ruling_polynomial(enumerate_rulings(d2)).as_dict() == base
