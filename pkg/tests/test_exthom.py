from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings

from legsheaf import corpus
from legsheaf import exthom as E
from legsheaf.sheafmoduli import enumerate_front
from strategies import rainbow_fronts


@pytest.fixture(scope="module")
def trefoil():
    return enumerate_front(corpus.load("trefoil"), 2)


def test_horizontal_hopf_pixelates_to_eight_dimensions():
    e = enumerate_front(corpus.load("hopf_horizontal"), 2)
    for o in e.objects:
        m = E.pixelate(e.model, o)
        assert m.total_dim == 8
        assert m.census() == {1: 6, 2: 1}
        assert m.commutes()


def test_trefoil_ext_table(trefoil):
    t = E.ext_table(trefoil.model, trefoil.objects)
    assert t.agree
    for (a, b), v in t.koszul.items():
        assert v == ((1, 2, 0) if a == b else (0, 1, 0))


def test_euler_characteristic_from_graded_dimensions(trefoil):
    mods = [E.pixelate(trefoil.model, o) for o in trefoil.objects]
    for M in mods:
        for N in mods:
            h0, h1, h2 = E.koszul_ext(M, N)
            assert E.koszul_euler(M, N) == h0 - h1 + h2


@given(rainbow_fronts(max_strands=3, max_len=4))
@settings(max_examples=12, deadline=None)
def test_routes_agree_on_rainbow_closures(bd):
    _, d = bd
    e = enumerate_front(d, 2)
    t = E.ext_table(e.model, e.objects, pairs="diagonal")
    assert t.agree
    assert sorted(t.koszul) == [(i, i) for i in range(e.count)]
    assert all(h[0] >= 1 for h in t.koszul.values())


@pytest.mark.parametrize("name, extra", [("trefoil", {1: 2}), ("trefoil", {2: 1}), ("hopf_horizontal", {1: 4})])
def test_ext_does_not_depend_on_layout(name, extra):
    d = corpus.load(name)
    e = enumerate_front(d, 2)
    o = e.objects[0]
    census = Counter(E.pixel_layout(d).census(o.dims)) + Counter(extra)
    layout = E.search_layout(d, o.dims, dict(census))
    assert layout is not None
    assert E.pixelate(e.model, o, layout).census() == dict(sorted(census.items()))
    assert E.ext_table(e.model, e.objects, layout=layout).koszul == E.ext_table(e.model, e.objects).koszul


def test_parallel_table_matches_serial():
    e = enumerate_front(corpus.load("hopf_rainbow"), 3)
    serial = E.ext_table(e.model, e.objects, jobs=1)
    parallel = E.ext_table(e.model, e.objects, jobs=2)
    assert serial.to_json() == parallel.to_json()


def test_diagonal_pairs(trefoil):
    t = E.ext_table(trefoil.model, trefoil.objects, pairs="diagonal")
    assert sorted(t.koszul) == [(i, i) for i in range(5)]


def test_poincare_polynomial():
    assert E.poincare((1, 2, 0)) == {1: 1, 0: 2}
    assert E.poincare((0, 2, 1)) == {0: 2, -1: 1}


def test_resolution_cap(trefoil):
    F = E.poset_module(trefoil.model, trefoil.objects[0])
    with pytest.raises(E.ResolutionCapExceeded):
        E.projective_resolution(F, cap=0)


def test_modules_over_different_fields_are_rejected(trefoil):
    e3 = enumerate_front(corpus.load("trefoil"), 3)
    F = E.poset_module(trefoil.model, trefoil.objects[0])
    G = E.poset_module(e3.model, e3.objects[0])
    with pytest.raises(E.ExtError):
        E.poset_ext(F, G)


def test_m8_21_block_pattern():
    from legsheaf.acceptance import m8_21_block_errors, m8_21_groups

    e = enumerate_front(corpus.load("m8_21"), 2)
    t = E.ext_table(e.model, e.objects)
    assert t.agree
    assert m8_21_block_errors(t, m8_21_groups(t, [o.aut for o in e.objects])) == []
