from __future__ import annotations

import pytest
from hypothesis import given, settings

from legsheaf.diagram import parse_braid
from legsheaf.homfly import homfly
from legsheaf.soergel import (
    ROOTS,
    STRANDS,
    BraidTooLarge,
    RouquierComplex,
    TriplySeries,
    acts_symmetrically,
    bracket_series,
    bs_bimodule,
    coordinates,
    free_strand_series,
    hochschild_table,
    homfly_as_series,
    invariant_forms,
    khr_series,
    rouquier_complex,
    specialize_t,
    tensor,
)
from oracles import bs_hochschild_closed_form
from strategies import braids


@pytest.mark.parametrize("copies", [1, 2, 3])
def test_hochschild_of_bott_samelson_matches_closed_form(copies):
    c = coordinates(2, STRANDS)
    M = bs_bimodule(c, 1)
    for _ in range(copies - 1):
        M = tensor(M, bs_bimodule(c, 1))
    table = hochschild_table(RouquierComplex(c, {0: M}, {}), 3, hmin=0)
    for k in range(3):
        for h in range(k, 4 + k):
            assert table.get((0, k, h), 0) == bs_hochschild_closed_form(copies, h)[k], (k, h)


@pytest.mark.parametrize("kind", [ROOTS, STRANDS])
def test_invariants_act_symmetrically_on_bs(kind):
    c = coordinates(3, kind)
    for i in (1, 2):
        assert acts_symmetrically(bs_bimodule(c, i), invariant_forms(c, i))


@given(braids(max_strands=3, max_len=3))
@settings(max_examples=20, deadline=None)
def test_rouquier_complexes_are_complexes(b):
    assert rouquier_complex(b).check() == []


@pytest.mark.parametrize("word, n", [("", 1), ("", 2), ("1", 2), ("-1", 2), ("1 1", 2)])
def test_root_and_strand_coordinates_agree(word, n):
    b = parse_braid(word, n)
    assert bracket_series(b, 3, ROOTS) == bracket_series(b, 3, STRANDS)


def test_brackets_of_small_braids():
    one = free_strand_series(4)
    assert bracket_series(parse_braid("", 1), 4) == one
    assert bracket_series(parse_braid("1", 2), 4) == one
    assert bracket_series(parse_braid("", 2), 4) == one.times(one).truncated(4)
    assert bracket_series(parse_braid("-1", 2), 4) == free_strand_series(5).shifted(2, -2, 4)


def test_crossing_and_inverse_cancel():
    assert bracket_series(parse_braid("1 -1", 2), 4) == bracket_series(parse_braid("", 2), 4)
    assert khr_series(parse_braid("1 -1 2", 3), 3) == khr_series(parse_braid("2", 3), 3)


@given(braids(max_strands=3, max_len=3))
@settings(max_examples=12, deadline=None)
def test_euler_specialization_is_homfly(b):
    assert specialize_t(khr_series(b, 3)) == homfly_as_series(homfly(b), 3)


def test_markov_moves():
    assert khr_series(parse_braid("1 2", 3), 4) == khr_series(parse_braid("2 1", 3), 4)
    assert khr_series(parse_braid("1", 2), 4) == khr_series(parse_braid("", 1), 4)
    assert khr_series(parse_braid("-1", 2), 4) == khr_series(parse_braid("", 1), 4)


def test_trefoil_differs_from_unknot():
    S = khr_series(parse_braid("1 1 1", 2), 4)
    assert S != khr_series(parse_braid("", 1), 4)
    # bracket a-degrees 0, 2, 4 shifted by w - n = 1, as in the HOMFLY polynomial
    assert {a for (a, _, _) in S.as_dict()} == {1, 3, 5}


def test_series_json_round_trip():
    S = khr_series(parse_braid("1 1 1", 2), 3)
    assert TriplySeries.make(S.as_dict(), 3) == S
    assert all(len(row) == 4 for row in S.to_json()["series"])


def test_size_bounds():
    with pytest.raises(BraidTooLarge):
        khr_series(parse_braid("1 1 1 1 1 1 1 1 1", 2))
    with pytest.raises(BraidTooLarge):
        khr_series(parse_braid("1 2 3 4", 5))
