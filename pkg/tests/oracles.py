"""Slow independent reference computations used only by the tests."""

from __future__ import annotations

import itertools
from math import comb
from fractions import Fraction

import numpy as np

from legsheaf import gf
from legsheaf.diagram import Crossing
from legsheaf.sheafmoduli import QuiverModel


def _all_matrices(rows: int, cols: int, p: int):
    for entries in itertools.product(range(p), repeat=rows * cols):
        yield np.array(entries, dtype=np.int64).reshape(rows, cols)


def count_valid_assignments(m: QuiverModel, p: int) -> int:
    """Number of arc-matrix tuples satisfying every constraint, by plain search.

    New arcs at each event are drawn from all matrices of the right shape;
    no gauge is fixed.
    """
    if m.obstruction is not None:
        return 0
    d = m.diagram

    def ok_arc(a: int, f: np.ndarray) -> bool:
        rk = gf.rank(f, p)
        lo, hi = m.dims[d.arcs[a].below], m.dims[d.arcs[a].above]
        if m.arc_mu[a] == 0:
            return rk == lo and hi - lo == m.rank
        return rk == hi and lo - hi == m.rank

    def shape(a: int) -> tuple[int, int]:
        return m.dims[d.arcs[a].above], m.dims[d.arcs[a].below]

    def rec(k: int, arcs: dict) -> int:
        if k == len(d.events):
            return 1
        ev = d.event_objects[k]
        total = 0
        if isinstance(ev, Crossing):
            sig, tau = arcs[ev.lower_left], arcs[ev.upper_left]
            dS, dN = m.dims[ev.south], m.dims[ev.north]
            for al in _all_matrices(*shape(ev.lower_right), p):
                if not ok_arc(ev.lower_right, al):
                    continue
                for be in _all_matrices(*shape(ev.upper_right), p):
                    if not ok_arc(ev.upper_right, be):
                        continue
                    if not np.array_equal(gf.mul(be, al, p), gf.mul(tau, sig, p)):
                        continue
                    if gf.rank(np.concatenate([al, sig], axis=0), p) != dS:
                        continue
                    if gf.rank(np.concatenate([be, (-tau) % p], axis=1), p) != dN:
                        continue
                    total += rec(k + 1, {**arcs, ev.lower_right: al, ev.upper_right: be})
        elif ev.side == "left":
            for lam in _all_matrices(*shape(ev.lower), p):
                if not ok_arc(ev.lower, lam):
                    continue
                for ups in _all_matrices(*shape(ev.upper), p):
                    if ok_arc(ev.upper, ups) and np.array_equal(gf.mul(ups, lam, p), gf.eye(m.dims[ev.outside])):
                        total += rec(k + 1, {**arcs, ev.lower: lam, ev.upper: ups})
        elif np.array_equal(gf.mul(arcs[ev.upper], arcs[ev.lower], p), gf.eye(m.dims[ev.outside])):
            total = rec(k + 1, arcs)
        return total

    return rec(0, {})


def brute_force_orbifold(m: QuiverModel, p: int) -> Fraction:
    """|valid tuples| / |gauge group|."""
    size = 1
    for r in m.diagram.regions:
        size *= gf.gl_order(m.dims[r.id], p)
    return Fraction(count_valid_assignments(m, p), size)


def _pd_from_front(d) -> tuple[list[tuple[int, int, int, int, int]], int]:
    """Oriented crossing list of a plane front read as a knot diagram.

    The strand of negative slope at a front crossing passes in front.
    Each crossing is (in_over, out_over, in_under, out_under, sign); edges
    are arcs glued through cusps.  Also returns the number of components
    that meet no crossing.
    """
    from legsheaf.diagram import crossing_sign, default_orientation

    orient = default_orientation(d)
    parent = list(range(len(d.arcs)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in d.cusps:
        parent[find(c.upper)] = find(c.lower)
    out = []
    for x in d.crossings:
        ul, lr, ll, ur = (find(a) for a in (x.upper_left, x.lower_right, x.lower_left, x.upper_right))
        over = (ul, lr) if orient[x.upper_left] > 0 else (lr, ul)
        under = (ll, ur) if orient[x.lower_left] > 0 else (ur, ll)
        out.append((*over, *under, crossing_sign(d, x, orient)))
    used = {e for c in out for e in c[:4]}
    free = len({find(a) for a in range(len(d.arcs))} - used)
    return out, free


def front_homfly(d):
    """HOMFLY polynomial of a plane front viewed as a link diagram.

    Independent of the braid routes in the package: switches crossings
    until the diagram is descending, with the same skein normalisation.
    """
    from legsheaf.homfly import UNKNOT, Z, AZ, LaurentAQ

    pd, free = _pd_from_front(d)

    def framed(cr: tuple, loops: int) -> AZ:
        succ = {}
        for j, (io, oo, iu, ou, _) in enumerate(cr):
            succ[io] = (j, True, oo)
            succ[iu] = (j, False, ou)
        seen_edges: set[int] = set()
        seen_cross: set[int] = set()
        comps = 0
        for start in sorted(succ):
            if start in seen_edges:
                continue
            comps += 1
            e = start
            while e not in seen_edges:
                seen_edges.add(e)
                j, over, nxt = succ[e]
                if j not in seen_cross:
                    seen_cross.add(j)
                    if not over:
                        io, oo, iu, ou, s = cr[j]
                        flipped = cr[:j] + ((iu, ou, io, oo, -s),) + cr[j + 1:]
                        rest = cr[:j] + cr[j + 1:]
                        smoothed, new_loops = _smooth(rest, [(io, ou), (iu, oo)], {io, oo, iu, ou})
                        return framed(flipped, loops) - Z * framed(smoothed, loops + new_loops) * s
                e = nxt
        w = sum(c[4] for c in cr)
        out = AZ.mono(-w, 0)
        for _ in range(comps + loops):
            out = out * UNKNOT
        return out

    w = sum(c[4] for c in pd)
    return LaurentAQ.from_az(framed(tuple(pd), free) * AZ.mono(w, 0))


def _smooth(cr: tuple, joins: list[tuple[int, int]], touched: set[int]) -> tuple[tuple, int]:
    ren = {}

    def find(e):
        while ren.get(e, e) != e:
            e = ren[e]
        return e

    for a, b in joins:
        ra, rb = find(a), find(b)
        if ra != rb:
            ren[rb] = ra
    new = tuple(tuple(find(e) for e in c[:4]) + (c[4],) for c in cr)
    used = {e for c in new for e in c[:4]}
    loops = len({find(e) for e in touched} - used)
    return new, loops


def bs_hochschild_closed_form(copies: int, h: int) -> dict[int, int]:
    """dim HH_k(B^{(x) copies})_h on two strands, in strand coordinates.

    B = R (x)_{R^s} R with generator in degree 0, R = Q[x, y], halved degrees.
    HH(B) is free over R with generators HH_0: {0}, HH_1: {1, 2}, HH_2: {3}.
    B (x) B = B + B(1), so B^{(x) m} = sum_j C(m-1, j) B(j), generators raised by j.
    """
    gens = {0: [0], 1: [1, 2], 2: [3]}

    def r_dim(d: int) -> int:
        return d + 1 if d >= 0 else 0

    out = {}
    for k, gs in gens.items():
        out[k] = sum(comb(copies - 1, j) * r_dim(h - j - g) for j in range(copies) for g in gs)
    return out
