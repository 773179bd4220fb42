"""Moduli of microlocal-rank-r sheaf objects on binary-Maslov fronts over F_p.

An object assigns a vector space of forced dimension to every region and an
upward map to every arc (from the region below to the region above). An arc
of Maslov value 0 carries an injection with cokernel of dimension r, an arc
of value 1 a surjection with kernel of dimension r. At a cusp the composite
outside -> inside -> outside is the identity; at a crossing the square
commutes and 0 -> F(S) -> F(E) + F(W) -> F(N) -> 0 is exact.

Isomorphism classes are orbits of the product of GL(F(R)) over regions.
They are enumerated left to right: a partial object is kept up to the
action of the group, together with its stabilizer restricted to the regions
still open; each event extends every orbit representative by orbit
representatives of the stabilizer acting on the admissible new maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import gf
from .diagram import (
    CROSSING,
    CYLINDER,
    LEFT_CUSP,
    BraidWord,
    Crossing,
    Cusp,
    FrontDiagram,
    FrontError,
    MaslovPotential,
    maslov_potentials,
)
from .gf import FqField
from .rulings import Ruling, _assemble, enumerate_rulings

DEFAULT_STATE_CAP = 2_000_000


class ModelError(ValueError):
    pass


class SearchCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class QuiverModel:
    diagram: FrontDiagram
    potential: MaslovPotential
    rank: int
    dims: tuple[int, ...]  # per region
    arc_mu: tuple[int, ...]  # per arc
    crossings: tuple[tuple[int, int, int, int], ...]  # (S, E, W, N)
    cusp_pairs: tuple[tuple[int, int], ...]  # (outside, inside)
    obstruction: str | None = None

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "potential": self.potential.to_json(),
            "dims": list(self.dims),
            "obstruction": self.obstruction,
        }


def default_potential(d: FrontDiagram) -> MaslovPotential | None:
    """The integer potential if it is binary, else a binary 2-periodic one.

    The 2-periodic fallback only matters for fronts with odd rotation
    number, where every object vanishes; it lets the enumeration witness
    that directly.
    """
    pots = maslov_potentials(d, 0)
    if pots:
        return pots[0] if set(pots[0].values) <= {0, 1} else None
    for pot in maslov_potentials(d, 2):
        return pot
    return None


def build_quiver_model(d: FrontDiagram, mu: MaslovPotential | None = None, r: int = 1) -> QuiverModel:
    if d.ambient == CYLINDER:
        raise ModelError("cylinder fronts are handled by enumerate_cylindrical")
    if r < 1:
        raise ModelError("rank must be positive")
    if mu is None:
        mu = default_potential(d)
        if mu is None:
            raise ModelError("no binary Maslov potential; only degree-0 binary objects are modelled")
    if mu.modulus not in (0, 2) or not set(mu.values) <= {0, 1}:
        raise ModelError("the Maslov potential must take values in {0, 1}")
    if len(mu.values) != len(d.strands):
        raise ModelError("potential does not match the front's strands")
    arc_mu = tuple(mu.values[a.strand] for a in d.arcs)
    dims: list[int | None] = [None] * len(d.regions)
    obstruction = None
    for k, gaps in enumerate(d.slice_regions):
        arcs = d.slice_arcs[k]
        for g, reg in enumerate(gaps):
            val = r * sum(1 if arc_mu[a] == 0 else -1 for a in arcs[g:])
            if dims[reg] is None:
                dims[reg] = val
            elif dims[reg] != val and obstruction is None:
                obstruction = f"region {reg} gets inconsistent dimensions"
    dims_t = tuple(int(x or 0) for x in dims)
    if obstruction is None:
        if any(x < 0 for x in dims_t):
            obstruction = "a region would need negative dimension"
        elif any(dims_t[reg.id] != 0 for reg in d.regions if not reg.bounded):
            obstruction = "the unbounded region would be nonzero"
    crossings = tuple((x.south, x.east, x.west, x.north) for x in d.crossings)
    cusp_pairs = tuple((c.outside, c.inside) for c in d.cusps)
    return QuiverModel(d, mu, r, dims_t, arc_mu, crossings, cusp_pairs, obstruction)


@dataclass
class SheafObject:
    p: int
    dims: tuple[int, ...]
    arcs: dict[int, np.ndarray]
    aut: int
    ruling: tuple[int, ...] | None = None  # switch set, filled in on rainbow closures
    _key: tuple | None = field(default=None, repr=False)

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(gf.key(self.arcs[a]) for a in sorted(self.arcs))
        return self._key

    def to_json(self) -> dict:
        out = {
            "dims": list(self.dims),
            "arcs": {str(a): self.arcs[a].tolist() for a in sorted(self.arcs)},
            "aut": self.aut,
        }
        if self.ruling is not None:
            out["ruling"] = list(self.ruling)
        return out


@dataclass(frozen=True)
class Enumeration:
    model: QuiverModel
    field: FqField
    objects: tuple[SheafObject, ...]

    @property
    def count(self) -> int:
        return len(self.objects)

    @property
    def orbifold(self) -> Fraction:
        return sum((Fraction(1, o.aut) for o in self.objects), Fraction(0))

    def aut_histogram(self) -> dict[int, int]:
        h: dict[int, int] = {}
        for o in self.objects:
            h[o.aut] = h.get(o.aut, 0) + 1
        return dict(sorted(h.items()))


# ---------------------------------------------------------------------------
# Validity


def check_object(m: QuiverModel, arcs: dict[int, np.ndarray], p: int) -> list[str]:
    """Every violated constraint, as readable strings (empty when valid)."""
    d = m.diagram
    bad = []
    for a in d.arcs:
        f = arcs[a.id]
        lo, hi = m.dims[a.below], m.dims[a.above]
        if f.shape != (hi, lo):
            bad.append(f"arc {a.id}: shape {f.shape} != {(hi, lo)}")
            continue
        rk = gf.rank(f, p)
        if m.arc_mu[a.id] == 0 and not (rk == lo and hi - lo == m.rank):
            bad.append(f"arc {a.id}: not injective with cokernel {m.rank}")
        if m.arc_mu[a.id] == 1 and not (rk == hi and lo - hi == m.rank):
            bad.append(f"arc {a.id}: not surjective with kernel {m.rank}")
    for c in d.cusps:
        comp = gf.mul(arcs[c.upper], arcs[c.lower], p)
        if not np.array_equal(comp, gf.eye(m.dims[c.outside])):
            bad.append(f"cusp at event {c.event}: round trip is not the identity")
    for x in d.crossings:
        sig, tau, alp, bet = arcs[x.lower_left], arcs[x.upper_left], arcs[x.lower_right], arcs[x.upper_right]
        if not np.array_equal(gf.mul(tau, sig, p), gf.mul(bet, alp, p)):
            bad.append(f"crossing at event {x.event}: square does not commute")
            continue
        inj = np.concatenate([alp, sig], axis=0)
        surj = np.concatenate([bet, (-tau) % p], axis=1)
        dS, dN = m.dims[x.south], m.dims[x.north]
        mid = m.dims[x.east] + m.dims[x.west]
        if gf.rank(inj, p) != dS or gf.rank(surj, p) != dN or dS + dN != mid:
            bad.append(f"crossing at event {x.event}: sequence is not exact")
    return bad


# ---------------------------------------------------------------------------
# Stage-wise orbit enumeration


@dataclass
class _State:
    arcs: dict[int, np.ndarray]
    regions: tuple[int, ...]
    group: list[tuple[np.ndarray, ...]]
    kfac: int


def _gkey(h: tuple[np.ndarray, ...]) -> tuple:
    return tuple(gf.key(x) for x in h)


def _project(st: _State, keep: set[int]) -> _State:
    idx = [j for j, reg in enumerate(st.regions) if reg in keep]
    if len(idx) == len(st.regions):
        return st
    seen: dict[tuple, tuple] = {}
    for h in st.group:
        hp = tuple(h[j] for j in idx)
        seen.setdefault(_gkey(hp), hp)
    group = list(seen.values())
    kfac = st.kfac * len(st.group) // len(group)
    return _State(st.arcs, tuple(st.regions[j] for j in idx), group, kfac)


def _complement_basis(sub: np.ndarray, n: int, p: int) -> np.ndarray:
    """Unit vectors spanning a complement of the column space of ``sub``."""
    if sub.shape[1] == 0:
        return gf.eye(n)
    _, piv = gf.rref(sub.T, p)
    cols = [j for j in range(n) if j not in piv]
    out = gf.zeros(n, len(cols))
    for k, j in enumerate(cols):
        out[j, k] = 1
    return out


class _Enumerator:
    def __init__(self, m: QuiverModel, F: FqField, cap: int):
        self.m = m
        self.d = m.diagram
        self.p = F.p
        self.cap = cap
        self._gl_r = gf.gl_elements(m.rank, F.p)
        self._sweep_pieces()

    def _sweep_pieces(self) -> None:
        """Split regions into pieces connected within the part of the front swept so far.

        Two pieces of one region first meet at a right cusp; ``merges[k]``
        records (kept piece, absorbed piece, arcs into it, arcs out of it).
        """
        d = self.d
        outer = d.slice_regions[0][0]
        self.piece_dim = {0: self.m.dims[outer]}
        self.pieces = [[0]]
        self.merges: dict[int, tuple[int, int, list[int], list[int]]] = {}
        above: dict[int, int] = {}
        below: dict[int, int] = {}
        nxt_id = 1
        for k, (kind, i) in enumerate(d.events):
            cur = self.pieces[k]
            ev = d.event_objects[k]
            if kind == LEFT_CUSP:
                P = nxt_id
                nxt_id += 1
                self.piece_dim[P] = self.m.dims[ev.inside]
                new = cur[:i] + [P, cur[i - 1]] + cur[i:]
                above[ev.upper], below[ev.upper] = cur[i - 1], P
                above[ev.lower], below[ev.lower] = P, cur[i - 1]
            elif kind == CROSSING:
                P = nxt_id
                nxt_id += 1
                self.piece_dim[P] = self.m.dims[ev.east]
                new = cur[:]
                new[i] = P
                above[ev.upper_right], below[ev.upper_right] = cur[i - 1], P
                above[ev.lower_right], below[ev.lower_right] = P, cur[i + 1]
            else:
                top, bot = cur[i - 1], cur[i + 1]
                new = cur[:i] + cur[i + 2:]
                if top != bot:
                    into = [a for a, v in above.items() if v == bot]
                    outof = [a for a, v in below.items() if v == bot]
                    self.merges[k] = (top, bot, into, outof)
                    for a in into:
                        above[a] = top
                    for a in outof:
                        below[a] = top
                    new = [top if v == bot else v for v in new]
            self.pieces.append(new)

    def run(self) -> list[_State]:
        d = self.d
        states = [_State({}, (0,), [(gf.zeros(0, 0),)], 1)]
        for k in range(len(d.events)):
            ev = d.event_objects[k]
            keep = set(self.pieces[k + 1])
            nxt: list[_State] = []
            for st in states:
                if isinstance(ev, Crossing):
                    new = self._crossing(st, ev, k)
                elif ev.side == "left":
                    new = self._left_cusp(st, ev, k)
                else:
                    new = self._right_cusp(st, ev, k)
                nxt.extend(_project(s, keep) for s in new)
                if len(nxt) > self.cap:
                    raise SearchCapExceeded(f"more than {self.cap} partial objects after event {k}")
            states = nxt
        return states

    # -- cusps --------------------------------------------------------
    def _left_cusp(self, st: _State, c: Cusp, k: int) -> list[_State]:
        m = self.m
        if not (m.arc_mu[c.lower] == 0 and m.arc_mu[c.upper] == 1):
            return []
        dO, dI = m.dims[c.outside], m.dims[c.inside]
        if dI != dO + m.rank:
            return []
        lam = np.concatenate([gf.eye(dO), gf.zeros(m.rank, dO)], axis=0)
        ups = np.concatenate([gf.eye(dO), gf.zeros(dO, m.rank)], axis=1)
        arcs = dict(st.arcs)
        arcs[c.lower] = lam
        arcs[c.upper] = ups
        cur = self.pieces[k]
        jo = st.regions.index(cur[c.level - 1])
        group = []
        for h in st.group:
            for g in self._gl_r:
                blk = gf.zeros(dI, dI)
                blk[:dO, :dO] = h[jo]
                blk[dO:, dO:] = g
                group.append(h + (blk,))
        return [_State(arcs, st.regions + (self.pieces[k + 1][c.level],), group, st.kfac)]

    def _right_cusp(self, st: _State, c: Cusp, k: int) -> list[_State]:
        p = self.p
        comp = gf.mul(st.arcs[c.upper], st.arcs[c.lower], p)
        dO = self.m.dims[c.outside]
        if k not in self.merges:
            if not np.array_equal(comp, gf.eye(dO)):
                return []
            return [st]
        # two pieces of the outside region meet here; the cusp condition
        # forces the identification, so transport the absorbed piece along it
        if gf.rank(comp, p) != dO:
            return []
        top, bot, into, outof = self.merges[k]
        cinv = gf.inverse(comp, p)
        arcs = dict(st.arcs)
        for a in into:
            arcs[a] = gf.mul(comp, arcs[a], p)
        for a in outof:
            arcs[a] = gf.mul(arcs[a], cinv, p)
        jt, jb = st.regions.index(top), st.regions.index(bot)
        group = [h for h in st.group if np.array_equal(gf.mul(comp, h[jb], p), gf.mul(h[jt], comp, p))]
        idx = [j for j in range(len(st.regions)) if j != jb]
        group = [tuple(h[j] for j in idx) for h in group]
        return [_State(arcs, tuple(st.regions[j] for j in idx), group, st.kfac)]

    # -- crossings ----------------------------------------------------
    def _crossing(self, st: _State, x: Crossing, k: int) -> list[_State]:
        m, p = self.m, self.p
        cur = self.pieces[k]
        S, E, W, N = x.south, x.east, x.west, x.north
        dS, dE, dW, dN = (m.dims[R] for R in (S, E, W, N))
        if dE + dW != dS + dN:
            return []
        sig, tau = st.arcs[x.lower_left], st.arcs[x.upper_left]
        ts = gf.mul(tau, sig, p)
        ms, mt = m.arc_mu[x.lower_left], m.arc_mu[x.upper_left]
        jS, jN = st.regions.index(cur[x.level + 1]), st.regions.index(cur[x.level - 1])
        r = m.rank

        if (ms, mt) == (0, 0):
            # E is a subspace E' of N with im(ts) in E', E' + im(tau) = N
            Sp = gf.colspace_basis(ts, p)
            comp = _complement_basis(Sp, dN, p)
            cands = []
            seen = set()
            for sub in gf.subspaces(comp.shape[1], dE - dS, p):
                Ep = np.concatenate([Sp, gf.mul(comp, sub, p)], axis=1)
                if gf.rank(np.concatenate([Ep, tau], axis=1), p) != dN:
                    continue
                beta = gf.colspace_basis(Ep, p)
                kk = gf.key(beta)
                if kk in seen:
                    continue
                seen.add(kk)
                cands.append(beta)

            def act(h, beta):
                return gf.key(gf.colspace_basis(gf.mul(h[jN], beta, p), p))

            def normal(beta):
                _, piv = gf.rref(beta.T, p)
                return ts[piv, :].copy(), beta

            keyed = [(gf.key(b), b) for b in cands]
        elif (ms, mt) == (1, 1):
            # E is S/K with K in ker(ts), dim r, K meeting ker(sig) trivially
            kts = gf.nullspace(ts, p)
            ksig = gf.nullspace(sig, p)
            keyed = []
            for sub in gf.subspaces(kts.shape[1], dS - dE, p):
                K = gf.colspace_basis(gf.mul(kts, sub, p), p)
                if gf.rank(np.concatenate([K, ksig], axis=1), p) != K.shape[1] + ksig.shape[1]:
                    continue
                keyed.append((gf.key(K), K))

            def act(h, K):
                return gf.key(gf.colspace_basis(gf.mul(h[jS], K, p), p))

            def normal(K):
                ann = gf.nullspace(K.T, p).T if K.shape[1] else gf.eye(dS)
                alpha, piv = gf.rref(ann, p)
                alpha = alpha[: len(piv)]
                sel = gf.zeros(dS, len(piv))
                for j, pc in enumerate(piv):
                    sel[pc, j] = 1
                return alpha, gf.mul(ts, sel, p)
        elif (ms, mt) == (0, 1):
            # E is the image of ts; possible only when ker(tau) lies in im(sig)
            if gf.rank(ts, p) != dE:
                return []
            alpha, piv = gf.rref(ts, p)
            alpha = alpha[: len(piv)]
            sel = gf.zeros(dS, len(piv))
            for j, pc in enumerate(piv):
                sel[pc, j] = 1
            beta = gf.mul(ts, sel, p)
            keyed = [((), None)]
            act = None
            normal = lambda _c, a=alpha, b=beta: (a, b)  # noqa: E731
        else:
            # E = S + k^r; alpha the inclusion, beta = [ts | complement of im(tau)]
            alpha = np.concatenate([gf.eye(dS), gf.zeros(r, dS)], axis=0)
            beta = np.concatenate([ts, _complement_basis(gf.colspace_basis(tau, p), dN, p)], axis=1)
            keyed = [((), None)]
            act = None
            normal = lambda _c, a=alpha, b=beta: (a, b)  # noqa: E731

        out = []
        done: set = set()
        for kc, c in keyed:
            if kc in done:
                continue
            if act is None:
                stab = st.group
                done.add(kc)
            else:
                stab = []
                for h in st.group:
                    kh = act(h, c)
                    done.add(kh)
                    if kh == kc:
                        stab.append(h)
            alpha, beta = normal(c)
            group = self._lift(stab, alpha, beta, jS, jN, dE)
            arcs = dict(st.arcs)
            arcs[x.lower_right] = alpha
            arcs[x.upper_right] = beta
            out.append(_State(arcs, st.regions + (self.pieces[k + 1][x.level],), group, st.kfac))
        return out

    def _lift(self, stab, alpha, beta, jS, jN, dE):
        """All (h, g) with h in stab and g in GL(E) fixing (alpha, beta)."""
        p = self.p
        if dE == 0:
            return [h + (gf.zeros(0, 0),) for h in stab]
        M = np.concatenate([np.kron(gf.eye(dE), alpha.T), np.kron(beta, gf.eye(dE))], axis=0) % p
        kern = gf.nullspace(M, p)
        combos = [np.array(c, dtype=np.int64) for c in itertools.product(range(p), repeat=kern.shape[1])]
        out = []
        for h in stab:
            rhs = np.concatenate([gf.mul(alpha, h[jS], p).ravel(), gf.mul(h[jN], beta, p).ravel()])
            sol = gf.solve_affine(M, rhs, p)
            if sol is None:
                continue
            part, _ = sol
            for cmb in combos:
                v = (part + (kern @ cmb if kern.shape[1] else 0)) % p
                g = v.reshape(dE, dE)
                if gf.rank(g, p) == dE:
                    out.append(h + (g,))
        return out


def enumerate_objects(m: QuiverModel, F: FqField | int, cap: int = DEFAULT_STATE_CAP) -> Enumeration:
    """One representative per isomorphism class, with automorphism group orders."""
    F = F if isinstance(F, FqField) else FqField(F)
    if m.obstruction is not None:
        return Enumeration(m, F, ())
    states = _Enumerator(m, F, cap).run()
    objs = tuple(SheafObject(F.p, m.dims, s.arcs, s.kfac * len(s.group)) for s in states)
    return Enumeration(m, F, objs)


def enumerate_front(d: FrontDiagram, p: int = 2, r: int = 1, mu: MaslovPotential | None = None) -> Enumeration:
    return enumerate_objects(build_quiver_model(d, mu, r), FqField(p))


# ---------------------------------------------------------------------------
# Microlocal rank and rulings


def microlocal_rank(m: QuiverModel, o: SheafObject) -> dict[int, int]:
    """Signed Euler characteristic of the cone of each arc map.

    For a valid object this is the rank of the map's cokernel (value 0) or
    kernel (value 1), and it is constant along strands.
    """
    out = {}
    for a in m.diagram.arcs:
        diff = o.dims[a.above] - o.dims[a.below]
        out[a.id] = diff if m.arc_mu[a.id] == 0 else -diff
    return out


def _rainbow_strands(d: FrontDiagram) -> int:
    """Number of strands n if the front is a rainbow closure of a positive braid."""
    ev = d.events
    n = 0
    while n < len(ev) and ev[n] == (LEFT_CUSP, n + 1):
        n += 1
    tail = ev[len(ev) - n:] if n else ()
    ok = n > 0 and list(tail) == [("d", i) for i in range(n, 0, -1)]
    mid = ev[n: len(ev) - n]
    ok = ok and all(kind == CROSSING and n < i < 2 * n for kind, i in mid)
    if not ok:
        raise FrontError("not a rainbow closure of a positive braid")
    return n


def normal_ruling_of(m: QuiverModel, o: SheafObject) -> Ruling:
    """Ruling of the normal ruling filtration of a rank-1 object on a rainbow closure.

    The central region carries the standard flag T_i = kernel of the
    composite to the region i steps above. Each braid region's upward image
    meets that flag; an arc belongs to the eye where the image of the region
    above it gains a dimension over the image of the region below it.
    """
    d = m.diagram
    n = _rainbow_strands(d)
    if m.rank != 1:
        raise ModelError("normal rulings are read off rank-1 objects")
    p = o.p
    # T_i: kernel of central -> gap n - i along the (unchanging) upper arcs
    comp = gf.eye(n)
    flags = [gf.zeros(n, 0)]
    for i in range(1, n + 1):
        comp = gf.mul(o.arcs[d.slice_arcs[n][n - i]], comp, p)
        flags.append(gf.nullspace(comp, p) if comp.shape[0] else gf.eye(n))

    def upward(k: int, g: int) -> np.ndarray:
        """Image in the central region of the region at gap g of slice k."""
        f = gf.eye(o.dims[d.slice_regions[k][g]])
        for pos in range(g, n, -1):
            f = gf.mul(o.arcs[d.slice_arcs[k][pos - 1]], f, p)
        return f

    def profile(sub: np.ndarray) -> list[int]:
        return [gf.rank(np.concatenate([sub, t], axis=1), p) for t in flags]

    def eye_of(k: int, pos: int) -> int:
        # arc at position pos (1-based) of slice k, pos > n; eye labels count from the innermost
        above, below = upward(k, pos - 1), upward(k, pos)
        pa, pb = profile(above), profile(below)
        # dim(image cap T_i) = dim image + i - rank([image | T_i])
        ja = [above.shape[1] + i - pa[i] for i in range(n + 1)]
        jb = [below.shape[1] + i - pb[i] for i in range(n + 1)]
        for i in range(1, n + 1):
            if ja[i] - jb[i] == 1 and ja[i - 1] - jb[i - 1] == 0:
                return i
        raise AssertionError("arc without an eye")

    switches = []
    for j, x in enumerate(d.crossings):
        k, i = x.event, x.level
        if eye_of(k + 1, i) == eye_of(k, i):
            switches.append(j)
    return _assemble(d, tuple(switches), True, True)


def stratified_counts(e: Enumeration, rulings: list[Ruling] | None = None) -> dict[tuple[int, ...], tuple[int, Fraction]]:
    """Per-ruling (class count, orbifold count), keyed by switch set."""
    m = e.model
    if rulings is None:
        rulings = enumerate_rulings(m.diagram, potential=m.potential)
    table: dict[tuple[int, ...], list] = {r.switches: [0, Fraction(0)] for r in rulings}
    for o in e.objects:
        sw = normal_ruling_of(m, o).switches
        o.ruling = sw
        if sw not in table:
            raise AssertionError(f"object maps to {sw}, which is not a graded normal ruling")
        table[sw][0] += 1
        table[sw][1] += Fraction(1, o.aut)
    return {k: (v[0], v[1]) for k, v in table.items()}


def ruling_stratum_formula(r: Ruling, w: int, q: int) -> Fraction:
    """(q-1)^{s-n} q^{(w-s)/2}."""
    return Fraction(q - 1) ** (r.s - r.n) * Fraction(q) ** ((w - r.s) // 2)


def stabilized_is_empty(d: FrontDiagram, p: int = 2, ranks: tuple[int, ...] = (1,)) -> bool:
    """True when enumeration finds no objects at any of the given ranks."""
    for r in ranks:
        try:
            m = build_quiver_model(d, None, r)
        except ModelError:
            continue
        if enumerate_objects(m, FqField(p)).count:
            return False
    return True


# ---------------------------------------------------------------------------
# Cylindrical closures: flag sequences glued by a group element


@dataclass(frozen=True)
class CylindricalCount:
    classes: int
    orbifold: Fraction
    aut_histogram: dict[int, int]

    def to_json(self) -> dict:
        return {"classes": self.classes, "orbifold": str(self.orbifold),
                "aut_histogram": {str(k): v for k, v in self.aut_histogram.items()}}


def _flag_key(flag: tuple[np.ndarray, ...], p: int) -> tuple:
    return tuple(gf.colspace_key(f, p) for f in flag)


def _flag_steps(flag: tuple[np.ndarray, ...], i: int, n: int, p: int) -> list[tuple[np.ndarray, ...]]:
    """Flags differing from ``flag`` exactly in the i-dimensional subspace (1-based)."""
    lo, hi = flag[i - 1], flag[i + 1]
    quot = _complement_basis(lo, n, p)
    out = []
    here = gf.colspace_key(flag[i], p)
    for v in itertools.product(range(p), repeat=quot.shape[1]):
        vec = gf.mul(quot, np.array(v, dtype=np.int64).reshape(-1, 1), p)
        if not vec.any():
            continue
        cand = gf.colspace_basis(np.concatenate([lo, vec], axis=1), p)
        if gf.rank(np.concatenate([hi, cand], axis=1), p) != hi.shape[1]:
            continue
        key = gf.colspace_key(cand, p)
        if key == here or any(gf.colspace_key(c[i], p) == key for c in out):
            continue
        out.append(flag[:i] + (cand,) + flag[i + 1:])
    return out


def _standard_flag(n: int) -> tuple[np.ndarray, ...]:
    return tuple(gf.eye(n)[:, :i].copy() for i in range(n + 1))


def _apply_flag(g: np.ndarray, flag, p: int):
    return tuple(gf.colspace_basis(gf.mul(g, f, p), p) for f in flag)


def open_bott_samelson(b: BraidWord, F: FqField | int, glued: bool = False) -> list[tuple]:
    """Flag sequences F^1 = standard, F^2..F^{w+1}, consecutive pairs in position s_{i_j}."""
    p = F.p if isinstance(F, FqField) else F
    n = b.strands
    seqs = [(_standard_flag(n),)]
    for letter in b.letters:
        nxt = []
        for s in seqs:
            for f in _flag_steps(s[-1], letter, n, p):
                nxt.append(s + (f,))
        seqs = nxt
    return seqs


def enumerate_cylindrical(b: BraidWord, F: FqField | int, r: int = 1, cap: int = 200_000) -> CylindricalCount:
    """Isomorphism classes of (F^1..F^{w+1}, g with g F^{w+1} = F^1) modulo GL_n.

    F^1 is fixed to the standard flag, leaving the Borel subgroup B acting by
    (F, g) -> (bF, b g b^{-1}).
    """
    if r != 1:
        raise ModelError("cylindrical enumeration is implemented for rank 1")
    if not b.positive:
        raise ModelError("cylindrical closure needs a positive braid")
    p = F.p if isinstance(F, FqField) else F
    n = b.strands
    glist = gf.gl_elements(n, p)
    std = _standard_flag(n)
    skey = _flag_key(std, p)
    borel = [g for g in glist if _flag_key(_apply_flag(g, std, p), p) == skey]
    seqs = open_bott_samelson(b, p)
    points = []
    for s in seqs:
        last = s[-1]
        for g in glist:
            if _flag_key(_apply_flag(g, last, p), p) == skey:
                points.append((s, g))
    if len(points) * len(borel) > cap * 100:
        raise SearchCapExceeded("cylindrical search too large")

    def key(pt):
        s, g = pt
        return (tuple(_flag_key(f, p) for f in s), gf.key(g))

    index = {key(pt): pt for pt in points}
    seen: set = set()
    hist: dict[int, int] = {}
    orbifold = Fraction(0)
    classes = 0
    for k0 in index:
        if k0 in seen:
            continue
        s, g = index[k0]
        orbit = set()
        stab = 0
        for bb in borel:
            binv = gf.inverse(bb, p)
            k1 = (tuple(_flag_key(_apply_flag(bb, f, p), p) for f in s),
                  gf.key(gf.mul(gf.mul(bb, g, p), binv, p)))
            orbit.add(k1)
            if k1 == k0:
                stab += 1
        seen |= orbit
        classes += 1
        hist[stab] = hist.get(stab, 0) + 1
        orbifold += Fraction(1, stab)
    return CylindricalCount(classes, orbifold, dict(sorted(hist.items())))
