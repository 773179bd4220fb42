"""The acceptance suite: one check per numbered criterion.

Each check returns (passed, detail). ``run`` times them and catches
failures so a broken check reports instead of aborting the suite. The
``verify`` subcommand and tests/test_acceptance.py both drive this module.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import corpus
from . import exthom as E
from .diagram import (
    FrontDiagram,
    applicable_moves,
    apply_reidemeister,
    binary_potential,
    front,
    parse_braid,
    rainbow_closure,
)
from .homfly import homfly, lowest_a_coefficient, rutherford_sum
from .rulings import enumerate_rulings, ruling_polynomial
from .sheafmoduli import enumerate_front, ruling_stratum_formula, stratified_counts
from .soergel import TriplySeries, bracket_series, free_strand_series, homfly_as_series, khr_series, specialize_t

RAINBOW_CORPUS = {
    "unknot": ("", 1),
    "hopf": ("1 1", 2),
    "trefoil": ("1 1 1", 2),
    "torus_2_5": ("1 1 1 1 1", 2),
    "torus_3_4": ("1 2 1 2 1 2 1 2", 3),
}
TORUS_3_4_CENSUS = {1: 24, 2: 16, 3: 10}
MOVES_PER_DIAGRAM = 10
KHR_QMAX = 6


@dataclass(frozen=True)
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} {status}  {self.title} ({self.seconds:.1f}s): {self.detail}"


def _rainbow(word: str, strands: int) -> FrontDiagram:
    return front(rainbow_closure(parse_braid(word, strands)))


# ---------------------------------------------------------------------------
# Object counts


def trefoil_count() -> tuple[bool, str]:
    d = corpus.load("trefoil")
    e2, e3 = enumerate_front(d, 2), enumerate_front(d, 3)
    q = 3
    ok = (e2.count == 5 and e2.aut_histogram() == {1: 5} and e2.orbifold == 5
          and e3.orbifold == Fraction(q * q + 1, q - 1))
    return ok, f"F_2: {e2.count} classes, aut {e2.aut_histogram()}, orbifold {e2.orbifold}; F_3 orbifold {e3.orbifold}"


def torus_3_4_count() -> tuple[bool, str]:
    e = enumerate_front(corpus.load("torus_3_4"), 2)
    return e.count == 93, f"{e.count} classes"


def m8_21_count() -> tuple[bool, str]:
    e = enumerate_front(corpus.load("m8_21"), 2)
    ok = e.count == 10 and e.aut_histogram() == {1: 6, 2: 4} and e.orbifold == 8
    return ok, f"{e.count} classes, aut {e.aut_histogram()}, weighted {e.orbifold}"


# ---------------------------------------------------------------------------
# Ext tables


def m8_21_groups(table: E.ExtTable, auts: list[int]) -> list[list[int]]:
    """Objects in three groups: trivial Aut with Hom into every nontrivial-Aut object,
    the other trivial-Aut objects, then the nontrivial-Aut objects."""
    g3 = [i for i, a in enumerate(auts) if a > 1]
    triv = [i for i, a in enumerate(auts) if a == 1]
    g1 = [i for i in triv if all(table.koszul[i, j][0] > 0 for j in g3)]
    g2 = [i for i in triv if i not in g1]
    return [g1, g2, g3]


def m8_21_block_errors(table: E.ExtTable, groups: list[list[int]]) -> list[str]:
    X = ((1, 2, 0), (0, 1, 0))
    Y = ((1, 2, 0), (1, 2, 0))
    Z = ((0, 2, 1), (0, 2, 1))
    W = ((2, 4, 1), (1, 3, 1))
    pattern = [[X, Y, Y], [Z, X, Z], [Z, Y, W]]
    errs = []
    if [len(g) for g in groups] != [3, 3, 4]:
        errs.append(f"group sizes {[len(g) for g in groups]}")
        return errs
    for bi, rows in enumerate(groups):
        for bj, cols in enumerate(groups):
            diag, off = pattern[bi][bj]
            for a in rows:
                for b in cols:
                    want = diag if a == b else off
                    if table.koszul[a, b] != want:
                        errs.append(f"({a},{b}) = {table.koszul[a, b]}, expected {want}")
    return errs


def ext_tables() -> tuple[bool, str]:
    notes = []
    ok = True
    e = enumerate_front(corpus.load("trefoil"), 2)
    t = E.ext_table(e.model, e.objects)
    tre = all(v == ((1, 2, 0) if a == b else (0, 1, 0)) for (a, b), v in t.koszul.items())
    ok &= tre and t.agree and len(t.koszul) == 25
    notes.append(f"trefoil 25 pairs {'ok' if tre and t.agree else 'wrong'}")

    e = enumerate_front(corpus.load("torus_3_4"), 2)
    t = E.ext_table(e.model, e.objects, pairs="diagonal")
    ends = Counter(t.koszul.values())
    ok &= ends == Counter({(1, 6, 0): 93}) and t.agree
    notes.append(f"(3,4) End {dict(ends)} agree={t.agree}")

    e = enumerate_front(corpus.load("m8_21"), 2)
    t = E.ext_table(e.model, e.objects)
    groups = m8_21_groups(t, [o.aut for o in e.objects])
    errs = m8_21_block_errors(t, groups)
    ok &= not errs and t.agree
    notes.append(f"m8_21 blocks {'ok' if not errs else errs[:3]} agree={t.agree}")
    return ok, "; ".join(notes)


def pixelation_census() -> tuple[bool, str]:
    d = corpus.load("torus_3_4")
    e = enumerate_front(d, 2)
    o = e.objects[0]
    compact = E.pixel_layout(d).census(o.dims)
    layout = E.search_layout(d, o.dims, TORUS_3_4_CENSUS)
    if layout is None:
        return False, f"no layout with census {TORUS_3_4_CENSUS}; compact census {compact}"
    m = E.pixelate(e.model, o, layout)
    end = E.koszul_ext(m, m)
    ok = m.census() == TORUS_3_4_CENSUS and m.total_dim == 86 and m.commutes()
    return ok, f"census {m.census()}, total dimension {m.total_dim}, End {end}; compact layout census {compact}"


# ---------------------------------------------------------------------------
# Rainbow closures


def homfly_identity() -> tuple[bool, str]:
    bad = []
    for name, (word, n) in RAINBOW_CORPUS.items():
        b = parse_braid(word, n)
        d = _rainbow(word, n)
        lo = lowest_a_coefficient(homfly(b), b.strands, b.writhe)
        ru = rutherford_sum(enumerate_rulings(d), b.writhe, b.strands)
        if lo != ru:
            bad.append(f"{name}: {lo} != {ru}")
            continue
        for q in (2, 3):
            count = enumerate_front(d, q).orbifold
            if count != lo.evaluate(q):
                bad.append(f"{name} q={q}: count {count} != {lo.evaluate(q)}")
    return not bad, "; ".join(bad) or f"{len(RAINBOW_CORPUS)} links agree at q = 2, 3"


def ruling_strata() -> tuple[bool, str]:
    bad = []
    checked = 0
    for name, (word, n) in RAINBOW_CORPUS.items():
        b = parse_braid(word, n)
        d = _rainbow(word, n)
        rulings = enumerate_rulings(d)
        for q in (2, 3):
            table = stratified_counts(enumerate_front(d, q), rulings)
            for r in rulings:
                got = table[r.switches][1]
                want = ruling_stratum_formula(r, b.writhe, q)
                checked += 1
                if got != want:
                    bad.append(f"{name} q={q} switches {r.switches}: {got} != {want}")
    return not bad, "; ".join(bad[:3]) or f"{checked} strata match"


def stabilization_vanishing() -> tuple[bool, str]:
    counts = {name: [enumerate_front(corpus.load(name), p).count for p in (2, 3)]
              for name in ("stabilized_unknot", "stabilized_trefoil")}
    return all(c == [0, 0] for c in counts.values()), f"object counts over F_2, F_3: {counts}"


# ---------------------------------------------------------------------------
# Reidemeister invariance


def random_binary_move(d: FrontDiagram, rng: random.Random, growth: int = 3) -> FrontDiagram:
    """Apply a random applicable move whose result keeps a binary Maslov potential."""
    moves = applicable_moves(d.word)
    rng.shuffle(moves)
    for move, site in moves:
        d2 = apply_reidemeister(d, move, site)
        if len(d2.events) <= len(d.events) + growth and binary_potential(d2) is not None:
            return d2
    raise RuntimeError("no binary-preserving move applies")


def _summary(d: FrontDiagram):
    e = enumerate_front(d, 2)
    return e.count, e.orbifold, ruling_polynomial(enumerate_rulings(d)).as_dict()


def _ends(d: FrontDiagram):
    e = enumerate_front(d, 2)
    t = E.ext_table(e.model, e.objects, pairs="diagonal")
    if not t.agree:
        raise AssertionError("Ext routes disagree")
    return Counter(t.koszul.values())


def reidemeister_invariance(names=("unknot", "hopf_horizontal", "hopf_rainbow", "trefoil", "m8_21",
                                   "chekanov_2", "torus_3_4"), seed: int = 7) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for name in names:
        d = corpus.load(name)
        base, ends = _summary(d), _ends(d)
        for k in range(MOVES_PER_DIAGRAM):
            d = random_binary_move(d, rng)
            if _summary(d) != base:
                bad.append(f"{name}: counts changed after move {k + 1}")
                break
        else:
            if _ends(d) != ends:
                bad.append(f"{name}: End multiset changed")
    return not bad, "; ".join(bad) or f"{len(names)} fronts x {MOVES_PER_DIAGRAM} moves"


# ---------------------------------------------------------------------------
# Triply graded series


def _bracket_targets() -> dict[str, TriplySeries]:
    one = free_strand_series(KHR_QMAX)
    two = one.times(one).truncated(KHR_QMAX)
    # shifting by q^-1 pulls the q^(qmax+1) term into range
    neg = free_strand_series(KHR_QMAX + 1).shifted(2, -2, KHR_QMAX)
    return {"unknot 1 strand": one, "s1": one, "identity 2 strands": two, "s1^-1": neg}


def golden_series() -> tuple[bool, str]:
    braids = {"unknot 1 strand": ("", 1), "s1": ("1", 2), "identity 2 strands": ("", 2), "s1^-1": ("-1", 2)}
    bad = []
    for name, target in _bracket_targets().items():
        word, n = braids[name]
        if bracket_series(parse_braid(word, n), KHR_QMAX) != target:
            bad.append(name)
    return not bad, f"mismatch: {bad}" if bad else "4 brackets match to q^6"


def specialization() -> tuple[bool, str]:
    bad = []
    for word, n in (("1", 2), ("-1", 2), ("1 1 1", 2), ("1 2 1", 3)):
        b = parse_braid(word, n)
        if specialize_t(khr_series(b, KHR_QMAX)) != homfly_as_series(homfly(b), KHR_QMAX):
            bad.append(word)
    return not bad, f"mismatch: {bad}" if bad else "s1, s1^-1, s1^3, s1 s2 s1 match"


def markov_invariance() -> tuple[bool, str]:
    conj = khr_series(parse_braid("1 2", 3), KHR_QMAX) == khr_series(parse_braid("2 1", 3), KHR_QMAX)
    stab = khr_series(parse_braid("1 1 1", 2), KHR_QMAX) == khr_series(parse_braid("1 1 1 2", 3), KHR_QMAX)
    return conj and stab, f"conjugation {'equal' if conj else 'differs'}, stabilization {'equal' if stab else 'differs'}"


CRITERIA: dict[int, tuple[str, Callable[[], tuple[bool, str]]]] = {
    1: ("trefoil object count", trefoil_count),
    2: ("(3,4) torus knot object count", torus_3_4_count),
    3: ("m8_21 object count", m8_21_count),
    4: ("Ext tables by both routes", ext_tables),
    5: ("pixelation census", pixelation_census),
    6: ("HOMFLY lowest-a identity", homfly_identity),
    7: ("ruling stratification", ruling_strata),
    8: ("stabilization vanishing", stabilization_vanishing),
    9: ("Reidemeister invariance", reidemeister_invariance),
    10: ("triply graded golden series", golden_series),
    11: ("t = -1 specialization", specialization),
    12: ("Markov invariance", markov_invariance),
}


def run_one(number: int) -> Result:
    title, check = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        ok, detail = check()
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Result(number, title, ok, detail, time.perf_counter() - t0)


def run(numbers=None):
    for k in numbers or sorted(CRITERIA):
        yield run_one(k)
