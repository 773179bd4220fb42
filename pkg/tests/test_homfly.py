from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from legsheaf import corpus
from legsheaf.diagram import BraidWord, parse_braid
from legsheaf.homfly import (
    INTRO,
    THEOREM,
    UNKNOT,
    homfly,
    homfly_skein,
    lowest_a_coefficient,
    rutherford_sum,
)
from legsheaf.rulings import enumerate_rulings
from oracles import front_homfly
from strategies import braids, rainbow_fronts


def test_unknot_value():
    P = homfly(parse_braid("", 1))
    assert P.evaluate(Fraction(2), Fraction(3)) == Fraction(2 - Fraction(1, 2), 3 - Fraction(1, 3))
    assert homfly(parse_braid("1", 2)) == P
    assert homfly(parse_braid("-1", 2)) == P


def test_unknot_constant_matches_braid():
    assert homfly_skein(parse_braid("", 1)).to_json() == homfly(parse_braid("", 1)).to_json()
    assert UNKNOT is not None


@given(braids(max_strands=3, max_len=5))
@settings(max_examples=40)
def test_hecke_route_matches_skein_route(b):
    assert homfly(b) == homfly_skein(b)


@given(braids(max_strands=3, max_len=4))
@settings(max_examples=30)
def test_markov_moves(b):
    P = homfly(b)
    n = b.strands
    rot = BraidWord(n, b.letters[1:] + b.letters[:1])
    assert homfly(rot) == P
    for sign in (1, -1):
        assert homfly(BraidWord(n + 1, b.letters + (sign * n,))) == P


@pytest.mark.parametrize("name", ["unknot", "hopf_horizontal", "hopf_rainbow", "trefoil", "m8_21",
                                  "chekanov_1", "chekanov_2", "stabilized_trefoil"])
def test_front_diagram_oracle_matches(name):
    # the stabilized trefoil is still a trefoil
    d = corpus.load(name)
    expect = {"unknot": "", "hopf_horizontal": "1 1", "hopf_rainbow": "1 1", "trefoil": "1 1 1",
              "stabilized_trefoil": "1 1 1"}
    P = front_homfly(d)
    if name in expect:
        assert P == homfly(parse_braid(expect[name], 2 if expect[name] else 1))
    elif name.startswith("chekanov"):
        assert P == front_homfly(corpus.load("chekanov_1"))


def test_m8_21_is_not_the_trefoil():
    assert front_homfly(corpus.load("m8_21")) != homfly(parse_braid("1 1 1", 2))


@given(rainbow_fronts(max_strands=3, max_len=5))
@settings(max_examples=30)
def test_lowest_a_coefficient_counts_rulings(bd):
    b, d = bd
    P = homfly(b)
    assert front_homfly(d) == P
    lhs = lowest_a_coefficient(P, b.strands, b.writhe, INTRO)
    assert lhs == rutherford_sum(enumerate_rulings(d), b.writhe, b.strands)


def test_theorem_sign_differs_when_parity_is_odd():
    b = parse_braid("1 1", 2)  # w - n = 0, signs agree
    P = homfly(b)
    assert lowest_a_coefficient(P, 2, 2, INTRO) == lowest_a_coefficient(P, 2, 2, THEOREM)
    b = parse_braid("1 1 1", 2)  # w - n = 1
    P = homfly(b)
    assert lowest_a_coefficient(P, 2, 3, INTRO) != lowest_a_coefficient(P, 2, 3, THEOREM)
