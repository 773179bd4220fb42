"""Ext groups between sheaf objects, computed two independent ways.

Route one pixelates an object: the front is laid out on the lattice rotated
by 45 degrees (every strand segment has slope +1 or -1), each diamond of
the lattice carries the stalk of the region containing it, and the two
diagonal generization directions become commuting operators X and Y of a
bigraded k[x, y]-module.  Ext is then read off the three-term Koszul Hom
complex.

Route two views the object as a representation of the face poset of the
regular cell refinement and computes Ext from a minimal projective
resolution over the incidence algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf
from .diagram import CROSSING, CYLINDER, RIGHT_CUSP, FrontDiagram, FrontError
from .sheafmoduli import QuiverModel, SheafObject

RESOLUTION_CAP = 16


class ResolutionCapExceeded(RuntimeError):
    pass


class ExtError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Lattice layout of a plane front


@dataclass(frozen=True)
class Column:
    x: int
    slice: int  # slice whose strands are listed in ``heights``
    heights: tuple[int, ...]  # top to bottom; a crossing or right cusp pair shares a height
    events: tuple[int, ...] = ()  # events placed on this column
    points: tuple[int, ...] = ()  # height of each event point


@dataclass
class PixelLayout:
    """Piecewise-linear front with slope +-1 segments between lattice points.

    Events go in word order, and consecutive events on separated strands
    share a column.  Between events the strands are packed at the minimum
    spacing of 2; idle columns appear only while strands converge or make
    room for a cusp.
    """

    diagram: FrontDiagram
    columns: list[Column]
    segments: dict[tuple[int, int, int], int]  # (x, z, step) -> arc

    def region_at(self, x: int, z: int) -> int | None:
        """Region containing the lattice diamond centred at (x, z)."""
        if not 0 <= x < len(self.columns):
            return None
        col = self.columns[x]
        g = sum(1 for h in col.heights if h > z)
        return self.diagram.slice_regions[col.slice][g]

    def census(self, dims) -> dict[int, int]:
        """Number of diamonds of each nonzero stalk dimension."""
        out: dict[int, int] = {}
        for col in self.columns:
            regs = self.diagram.slice_regions[col.slice]
            for g in range(1, len(col.heights)):
                n = (col.heights[g - 1] - col.heights[g]) // 2
                r = dims[regs[g]]
                if r and n:
                    out[r] = out.get(r, 0) + n
        return dict(sorted(out.items()))


def _plan_step(s: list[int], fixed: dict[int, int], exact: dict[int, int]) -> list[int] | None:
    """Choose a move of +-1 for every strand.

    ``s`` are the current gaps, ``fixed`` pins moves of some strands and
    ``exact`` pins the new value of some gaps; every other new gap must be
    at least 2.  Among valid choices the total spacing is minimised, ties
    broken towards moving up.  Returns None when no choice works.
    """
    c = len(s) + 1
    INF = float("inf")
    # best[p][m]: minimal cost for strands p.. given strand p moves m
    best = [dict() for _ in range(c)]
    choice = [dict() for _ in range(c)]
    for p in range(c - 1, -1, -1):
        for m in (1, -1):
            if p in fixed and fixed[p] != m:
                best[p][m] = INF
                continue
            if p == c - 1:
                best[p][m] = 0
                continue
            cand = INF
            pick = None
            for m2 in (1, -1):
                new = s[p] + m - m2
                if p in exact:
                    if new != exact[p]:
                        continue
                elif new < 2:
                    continue
                cost = new + best[p + 1][m2]
                if cost < cand:
                    cand, pick = cost, m2
            best[p][m] = cand
            choice[p][m] = pick
    start = min((1, -1), key=lambda m: (best[0][m], -m))
    if best[0][start] == INF:
        return None
    moves = [start]
    for p in range(c - 1):
        moves.append(choice[p][moves[-1]])
    return moves


def _gaps(H: list[int]) -> list[int]:
    return [H[p] - H[p + 1] for p in range(len(H) - 1)]


@dataclass
class _Group:
    events: list[int]
    fixed: dict[int, int]
    exact: dict[int, int]
    work: list  # ('o', p) for an old strand, ('n', m) for a new cusp strand leaving with move m
    used: set[int]
    cusps: list[tuple[int, int | None, int | None]]  # (event, strand above, strand below)
    pairs: list[tuple[int, int, str]]  # (event, upper strand, kind)


def _extend(grp: _Group, e: int, kind: str, i: int, H: list[int], pending: dict[int, int]) -> _Group | None:
    """Add event e to the column, or None when it interacts with the group."""
    w = grp.work
    fixed, exact, used = dict(grp.fixed), dict(grp.exact), set(grp.used)
    if kind in (CROSSING, RIGHT_CUSP):
        a, b = w[i - 1], w[i]
        if a[0] != "o" or b[0] != "o" or a[1] in used or b[1] in used:
            return None
        p = a[1]
        if b[1] != p + 1 or H[p] - H[p + 1] != 2:
            return None
        for q, m in ((p, -1), (p + 1, 1)):
            if pending.get(q, m) != m:
                return None
            fixed[q] = m
        exact[p] = 0
        used |= {p, p + 1}
        work = w[: i - 1] + w[i + 1:] if kind == RIGHT_CUSP else list(w)
        return _Group(grp.events + [e], fixed, exact, work, used, grp.cusps, grp.pairs + [(e, p, kind)])
    up = w[i - 2] if i >= 2 else None
    lo = w[i - 1] if i - 1 < len(w) else None
    for nb in (up, lo):
        if nb is not None and (nb[0] != "o" or nb[1] in used):
            return None
    if up is not None and lo is not None:
        if H[up[1]] - H[lo[1]] > 6:
            return None
        exact[up[1]] = 4
    ua = up[1] if up is not None else None
    la = lo[1] if lo is not None else None
    used |= {q for q in (ua, la) if q is not None}
    work = w[: i - 1] + [("n", 1, e), ("n", -1, e)] + w[i - 1:]
    return _Group(grp.events + [e], fixed, exact, work, used, grp.cusps + [(e, ua, la)], grp.pairs)


def _cusp_point(H2: list[int], up: int | None, lo: int | None) -> int:
    if up is not None:
        return H2[up] - 2
    if lo is not None:
        return H2[lo] + 2
    return 0


def _settle(grp: _Group, H: list[int], moves: list[int]):
    """Heights at the column, event points, next heights and forced next moves."""
    H2 = [h + m for h, m in zip(H, moves)]
    pts = {e: _cusp_point(H2, u, l) for e, u, l in grp.cusps}
    pts.update({e: H2[p] for e, p, _ in grp.pairs})
    crossing_top = {p for _, p, k in grp.pairs if k == CROSSING}
    nH, pend = [], {}
    for k, item in enumerate(grp.work):
        if item[0] == "n":
            nH.append(pts[item[2]])
            pend[k] = item[1]
        else:
            q = item[1]
            nH.append(H2[q])
            if q in crossing_top:
                pend[k] = 1
            elif q - 1 in crossing_top:
                pend[k] = -1
    return H2, [pts[e] for e in grp.events], nH, pend


def _merged_fixed(grp: _Group, pending: dict[int, int]) -> dict[int, int] | None:
    """Forced moves of the group together with those left over from the previous column."""
    fixed = dict(pending)
    for q, m in grp.fixed.items():
        if fixed.setdefault(q, m) != m:
            return None
    return fixed


def _next_feasible(d: FrontDiagram, e: int, H: list[int], pending: dict[int, int]) -> bool:
    """Some column can follow: an idle one or one placing the next events."""
    if len(H) < 2 or _plan_step(_gaps(H), pending, {}) is not None:
        return True
    for grp in _group_options(d, e, H, pending):
        fixed = _merged_fixed(grp, pending)
        if fixed is not None and _plan_step(_gaps(H), fixed, grp.exact) is not None:
            return True
    return False


def _moves_for(d: FrontDiagram, e: int, grp: _Group, H: list[int], pending: dict[int, int]) -> list[int] | None:
    """Moves realising the group (placed from event e) and leaving the next step feasible."""
    if not H:
        return []
    fixed = _merged_fixed(grp, pending)
    if fixed is None:
        return None
    moves = _plan_step(_gaps(H), fixed, grp.exact)
    if moves is None:
        return None
    _, _, nH, pend = _settle(grp, H, moves)
    if _next_feasible(d, e + len(grp.events), nH, pend):
        return moves
    return None


def _group_options(d: FrontDiagram, e: int, H: list[int], pending: dict[int, int]):
    """Every group of consecutive events starting at e that fits on one column."""
    grp = _Group([], {}, {}, [("o", p) for p in range(len(H))], set(), [], [])
    f = e
    while f < len(d.events):
        grp = _extend(grp, f, *d.events[f], H, pending)
        if grp is None:
            return
        yield grp
        f += 1


def pixel_layout(d: FrontDiagram, max_idle: int = 64) -> PixelLayout:
    """Compact layout: each column takes the longest group of events that fits."""
    if d.ambient == CYLINDER:
        raise FrontError("pixelation is only defined for plane fronts")
    plan: list[tuple[int, list[int]]] = []
    H: list[int] = []
    pending: dict[int, int] = {}
    e = 0
    idle = 0
    while e < len(d.events):
        best = None
        for grp in _group_options(d, e, H, pending):
            moves = _moves_for(d, e, grp, H, pending)
            if moves is None:
                break
            best = (grp, moves)
        if best is None:
            moves = _plan_step(_gaps(H), pending, {}) if H else None
            if moves is None or idle == max_idle:
                raise FrontError("layout failed: no compatible strand moves")
            plan.append((0, moves))
            H = [h + m for h, m in zip(H, moves)]
            pending = {}
            idle += 1
            continue
        grp, moves = best
        plan.append((len(grp.events), moves))
        _, _, H, pending = _settle(grp, H, moves)
        e += len(grp.events)
        idle = 0
    return realize_layout(d, plan)


def realize_layout(d: FrontDiagram, plan: list[tuple[int, list[int]]]) -> PixelLayout:
    """Build a layout from per-column decisions (number of events placed, strand moves).

    The moves take the strands from the previous column to this one.  The
    plan is checked: strands only meet at crossing and cusp points.
    """
    if d.ambient == CYLINDER:
        raise FrontError("pixelation is only defined for plane fronts")
    columns: list[Column] = []
    segments: dict[tuple[int, int, int], int] = {}
    H: list[int] = []
    pending: dict[int, int] = {}
    e = 0
    for x, (g, moves) in enumerate(plan):
        if len(moves) != len(H):
            raise FrontError(f"column {x}: expected {len(H)} moves")
        if any(m not in (1, -1) or pending.get(p, m) != m for p, m in enumerate(moves)):
            raise FrontError(f"column {x}: moves violate the forced directions")
        _record(segments, x - 1, H, moves, d.slice_arcs[e])
        if g == 0:
            H = [h + m for h, m in zip(H, moves)]
            if any(s < 2 for s in _gaps(H)):
                raise FrontError(f"column {x}: strands collide")
            pending = {}
            columns.append(Column(x, e, tuple(H)))
            continue
        grp = None
        for cand in _group_options(d, e, H, pending):
            if len(cand.events) == g:
                grp = cand
                break
        if grp is None:
            raise FrontError(f"column {x}: events {e}..{e + g - 1} do not fit on one column")
        H2 = [h + m for h, m in zip(H, moves)]
        for p, s in enumerate(_gaps(H2)):
            if p in grp.exact and s != grp.exact[p] or p not in grp.exact and s < 2:
                raise FrontError(f"column {x}: strands not in position for the events")
        H2, pts, H, pending = _settle(grp, H, moves)
        columns.append(Column(x, e, tuple(H2), tuple(grp.events), tuple(pts)))
        e += g
    if H or e != len(d.events):
        raise FrontError("layout plan does not finish the front")
    return PixelLayout(d, columns, segments)


def _column_census(d: FrontDiagram, dims, k: int, H2: list[int], width: int) -> tuple[int, ...]:
    c = [0] * width
    regs = d.slice_regions[k]
    for g in range(1, len(H2)):
        r = dims[regs[g]]
        if r:
            c[r - 1] += (H2[g - 1] - H2[g]) // 2
    return tuple(c)


def search_layout(d: FrontDiagram, dims, census: dict[int, int], max_gap: int = 6, max_idle: int = 3) -> PixelLayout | None:
    """A layout whose diamonds of each stalk dimension number exactly ``census``.

    Dynamic programming over columns.  A state is the shape of the current
    column (heights up to translation), the forced next moves and the next
    event; for each state we keep one plan per partial census, pruned at
    the target.  Strand gaps stay at most ``max_gap`` and at most
    ``max_idle`` idle columns run consecutively.  The first plan found in a
    fixed enumeration order is returned, so the result is deterministic.
    """
    width = max(max(census, default=0), max(dims, default=0))
    target = tuple(census.get(r, 0) for r in range(1, width + 1))

    def fits(c):
        return all(a <= b for a, b in zip(c, target))

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def key(H, pend):
        base = H[0] if H else 0
        return tuple(h - base for h in H), tuple(sorted(pend.items()))

    def all_moves(H, fixed, exact):
        for ms in itertools.product((1, -1), repeat=len(H)):
            if any(ms[p] != m for p, m in fixed.items()):
                continue
            H2 = [h + m for h, m in zip(H, ms)]
            ok = True
            for p, s in enumerate(_gaps(H2)):
                if (s != exact[p]) if p in exact else not 2 <= s <= max_gap:
                    ok = False
                    break
            if ok:
                yield list(ms), H2

    E = len(d.events)
    zero = (0,) * width
    layers: list[dict] = [dict() for _ in range(E + 1)]
    layers[0][((), ())] = {zero: ()}
    for e in range(E):
        frontier = layers[e]
        for idle in range(max_idle + 1):
            nxt: dict = {}
            for (shape, pend), plans in sorted(frontier.items()):
                H, pend = list(shape), dict(pend)
                for grp in _group_options(d, e, H, pend):
                    fixed = _merged_fixed(grp, pend)
                    if fixed is None:
                        continue
                    for ms, H2 in all_moves(H, fixed, grp.exact) if H else [([], [])]:
                        _, _, nH, npend = _settle(grp, H, ms)
                        if not _next_feasible(d, e + len(grp.events), nH, npend):
                            continue
                        c = _column_census(d, dims, e, H2, width)
                        slot = layers[e + len(grp.events)].setdefault(key(nH, npend), {})
                        for c0, path in sorted(plans.items()):
                            c2 = add(c0, c)
                            if fits(c2) and c2 not in slot:
                                slot[c2] = path + ((len(grp.events), ms),)
                if idle == max_idle or not H:
                    continue
                for ms, H2 in all_moves(H, pend, {}):
                    c = _column_census(d, dims, e, H2, width)
                    slot = nxt.setdefault(key(H2, {}), {})
                    for c0, path in sorted(plans.items()):
                        c2 = add(c0, c)
                        if fits(c2) and c2 not in slot:
                            slot[c2] = path + ((0, ms),)
            frontier = nxt
            if not frontier:
                break
    for (shape, _), plans in sorted(layers[E].items()):
        if target in plans:
            return realize_layout(d, [(g, list(ms)) for g, ms in plans[target]])
    return None


def _record(segments, x, H, moves, arcs) -> None:
    for p, (h, m) in enumerate(zip(H, moves)):
        segments[x, h, m] = arcs[p]


# ---------------------------------------------------------------------------
# Bigraded modules


@dataclass
class BigradedModule:
    """Finite bigraded vector space with commuting operators of degree (1,0) and (0,1)."""

    p: int
    dims: dict[tuple[int, int], int]
    X: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)  # (i,j) -> map to (i+1,j)
    Y: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)  # (i,j) -> map to (i,j+1)

    def dim(self, s: tuple[int, int]) -> int:
        return self.dims.get(s, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def census(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for v in self.dims.values():
            out[v] = out.get(v, 0) + 1
        return dict(sorted(out.items()))

    def xmap(self, s: tuple[int, int]) -> np.ndarray:
        t = (s[0] + 1, s[1])
        return self.X.get(s, gf.zeros(self.dim(t), self.dim(s)))

    def ymap(self, s: tuple[int, int]) -> np.ndarray:
        t = (s[0], s[1] + 1)
        return self.Y.get(s, gf.zeros(self.dim(t), self.dim(s)))

    def commutes(self) -> bool:
        for s in self.dims:
            i, j = s
            a = gf.mul(self.ymap((i + 1, j)), self.xmap(s), self.p)
            b = gf.mul(self.xmap((i, j + 1)), self.ymap(s), self.p)
            if not np.array_equal(a, b):
                return False
        return True


def pixelate(m: QuiverModel, o: SheafObject, layout: PixelLayout | None = None) -> BigradedModule:
    """Push an object forward to a bigraded k[x, y]-module.

    The diamond centred at (x, z) has bidegree ((x + z + 1) / 2, (z - x + 1) / 2),
    so X moves up-right and Y moves up-left.  Squares are closed along
    their two upper edges, so a diamond just below a strand carries the
    stalk of the region below it and the operator across that strand is the
    arc map.
    """
    d = m.diagram
    if layout is None:
        layout = pixel_layout(d)
    p = o.p
    dims: dict[tuple[int, int], int] = {}
    region: dict[tuple[int, int], int] = {}
    centre: dict[tuple[int, int], tuple[int, int]] = {}
    for col in layout.columns:
        hs = list(col.heights) + list(col.points)
        if not hs:
            continue
        for z in range(min(hs) - 1, max(hs) + 2):
            if (col.x + z) % 2 == 0:
                continue
            r = layout.region_at(col.x, z)
            if r is None or o.dims[r] == 0:
                continue
            s = ((col.x + z + 1) // 2, (z - col.x + 1) // 2)
            dims[s] = o.dims[r]
            region[s] = r
            centre[s] = (col.x, z)
    M = BigradedModule(p, dims)
    for s, (x, z) in centre.items():
        for target, seg, store in (
            ((s[0] + 1, s[1]), (x, z + 1, -1), M.X),
            ((s[0], s[1] + 1), (x - 1, z, 1), M.Y),
        ):
            if target not in dims:
                continue
            arc = layout.segments.get(seg)
            if arc is not None:
                if d.arcs[arc].below != region[s] or d.arcs[arc].above != region[target]:
                    raise ExtError("pixelation crossed an arc against its orientation")
                store[s] = o.arcs[arc] % p
            else:
                if region[s] != region[target]:
                    raise ExtError("adjacent diamonds in different regions without a strand between")
                store[s] = gf.eye(dims[s])
    return M


def _hom_index(M: BigradedModule, N: BigradedModule, a: int, b: int):
    """Coordinates of Hom^{(a,b)}(M, N): block offsets keyed by source square."""
    offs: dict[tuple[int, int], int] = {}
    n = 0
    for s in sorted(M.dims):
        t = (s[0] + a, s[1] + b)
        if N.dim(t):
            offs[s] = n
            n += M.dims[s] * N.dims[t]
    return offs, n


def _place(D: np.ndarray, row_off: int, col_off: int, block: np.ndarray, sign: int, p: int) -> None:
    r, c = block.shape
    D[row_off: row_off + r, col_off: col_off + c] = (D[row_off: row_off + r, col_off: col_off + c] + sign * block) % p


def _left(A: np.ndarray, cols: int) -> np.ndarray:
    # vec(A phi) for row-major vec, phi with ``cols`` columns
    return np.kron(A, gf.eye(cols))


def _right(B: np.ndarray, rows: int) -> np.ndarray:
    # vec(phi B) for row-major vec, phi with ``rows`` rows
    return np.kron(gf.eye(rows), B.T)


def koszul_complex(M: BigradedModule, N: BigradedModule) -> tuple[np.ndarray, np.ndarray, tuple[int, int, int, int]]:
    """Differentials of Hom^{00} -> Hom^{01} + Hom^{10} -> Hom^{11} and the term sizes."""
    if M.p != N.p:
        raise ExtError("modules over different fields")
    p = M.p
    o00, n00 = _hom_index(M, N, 0, 0)
    o01, n01 = _hom_index(M, N, 0, 1)
    o10, n10 = _hom_index(M, N, 1, 0)
    o11, n11 = _hom_index(M, N, 1, 1)
    D0 = gf.zeros(n01 + n10, n00)
    # (alpha, beta) = (Y phi - phi Y, X phi - phi X)
    for s, off in o01.items():
        t = (s[0], s[1] + 1)
        ms, nt = M.dims[s], N.dims[t]
        if s in o00:
            _place(D0, off, o00[s], _left(N.ymap(s), ms), 1, p)
        if t in o00:
            _place(D0, off, o00[t], _right(M.ymap(s), nt), -1, p)
    for s, off in o10.items():
        t = (s[0] + 1, s[1])
        ms, nt = M.dims[s], N.dims[t]
        if s in o00:
            _place(D0, n01 + off, o00[s], _left(N.xmap(s), ms), 1, p)
        if t in o00:
            _place(D0, n01 + off, o00[t], _right(M.xmap(s), nt), -1, p)
    D1 = gf.zeros(n11, n01 + n10)
    # X alpha - alpha X - Y beta + beta Y
    for s, off in o11.items():
        i, j = s
        ms, nt = M.dims[s], N.dims[(i + 1, j + 1)]
        if s in o01:
            _place(D1, off, o01[s], _left(N.xmap((i, j + 1)), ms), 1, p)
        if (i + 1, j) in o01:
            _place(D1, off, o01[(i + 1, j)], _right(M.xmap(s), nt), -1, p)
        if s in o10:
            _place(D1, off, n01 + o10[s], _left(N.ymap((i + 1, j)), ms), -1, p)
        if (i, j + 1) in o10:
            _place(D1, off, n01 + o10[(i, j + 1)], _right(M.ymap(s), nt), 1, p)
    return D0, D1, (n00, n01, n10, n11)


def koszul_ext(M: BigradedModule, N: BigradedModule) -> tuple[int, int, int]:
    """Dimensions of Ext^0, Ext^1, Ext^2 between bigraded modules, degree (0,0) part."""
    D0, D1, (n00, n01, n10, n11) = koszul_complex(M, N)
    r0 = gf.rank(D0, M.p) if D0.size else 0
    r1 = gf.rank(D1, M.p) if D1.size else 0
    return (n00 - r0, n01 + n10 - r0 - r1, n11 - r1)


def koszul_euler(M: BigradedModule, N: BigradedModule) -> int:
    """h0 - h1 + h2 from graded dimensions alone."""
    sizes = [_hom_index(M, N, a, b)[1] for a, b in ((0, 0), (0, 1), (1, 0), (1, 1))]
    return sizes[0] - sizes[1] - sizes[2] + sizes[3]


# ---------------------------------------------------------------------------
# Representations of the cell poset


@dataclass
class PosetModule:
    """A functor from a finite poset to vector spaces over F_p.

    Elements are 0..n-1 listed so that every cover goes from a smaller to a
    larger index.  ``covers`` maps (a, b) with a < b covering to the matrix
    of F(a) -> F(b).
    """

    p: int
    dims: tuple[int, ...]
    covers: dict[tuple[int, int], np.ndarray]
    poset_key: tuple = ()
    _maps: dict | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.dims)

    def below(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.dims]
        for a, b in self.covers:
            out[b].append(a)
        return out

    def maps(self) -> dict[tuple[int, int], np.ndarray]:
        """F(y -> x) for every pair y <= x, by composing along covers."""
        if self._maps is None:
            below = self.below()
            into: list[dict[int, np.ndarray]] = []
            for x in range(self.size):
                row = {x: gf.eye(self.dims[x])}
                for c in below[x]:
                    A = self.covers[c, x]
                    for y, B in into[c].items():
                        if y not in row:
                            row[y] = gf.mul(A, B, self.p)
                into.append(row)
            self._maps = {(y, x): M for x, row in enumerate(into) for y, M in row.items()}
        return self._maps

    def check_functor(self) -> bool:
        """Every square of covers commutes."""
        below = self.below()
        for x in range(self.size):
            seen: dict[int, np.ndarray] = {}
            for c in below[x]:
                for y in below[c]:
                    v = gf.mul(self.covers[c, x], self.covers[y, c], self.p)
                    if y in seen and not np.array_equal(seen[y], v):
                        return False
                    seen[y] = v
        return True

    def restrict(self, kept: tuple[int, ...]) -> "PosetModule":
        new = {k: j for j, k in enumerate(kept)}
        covers = {(new[a], new[b]): M for (a, b), M in self.covers.items() if a in new and b in new}
        return PosetModule(self.p, tuple(self.dims[k] for k in kept), covers, self.poset_key + (kept,))

    def support_closure(self) -> tuple[int, ...]:
        """Complement of the largest up-closed set on which the module vanishes."""
        up: list[list[int]] = [[] for _ in self.dims]
        for a, b in self.covers:
            up[a].append(b)
        live = [False] * self.size
        for c in range(self.size - 1, -1, -1):
            live[c] = self.dims[c] > 0 or any(live[u] for u in up[c])
        return tuple(c for c in range(self.size) if live[c])


def poset_module(m: QuiverModel, o: SheafObject) -> PosetModule:
    """The object as a representation of the face poset of the cell complex.

    Cells are reindexed by dimension so that covers increase the index.
    """
    cx = m.diagram.cells()
    order = sorted(range(len(cx.cells)), key=lambda c: (cx.cells[c].dim, c))
    pos = {c: k for k, c in enumerate(order)}
    dims = tuple(int(o.dims[cx.cells[c].home]) for c in order)
    p = o.p
    covers: dict[tuple[int, int], np.ndarray] = {}
    for a, b, arcs in cx.covers:
        ka, kb = pos[a], pos[b]
        mat = gf.eye(dims[ka])
        for arc in arcs:
            mat = gf.mul(np.asarray(o.arcs[arc]) % p, mat, p)
        if mat.shape != (dims[kb], dims[ka]):
            raise ExtError("cover map has the wrong shape")
        covers[ka, kb] = mat
    return PosetModule(p, dims, covers, (m.diagram.word.to_text(),))


@dataclass
class ProjectiveResolution:
    """Minimal projective resolution P_n -> ... -> P_0 -> F.

    ``gens[n]`` lists the poset element of each generator of P_n.
    ``diff[n]`` (n >= 1) is the matrix of P_n -> P_{n-1}: column g holds the
    coefficients of the image of generator g on the generators of P_{n-1}
    lying below it.
    """

    gens: list[list[int]]
    diff: list[np.ndarray]


def _complement(S: np.ndarray, n: int, p: int) -> np.ndarray:
    """Columns completing the column space of S to k^n."""
    if S.shape[1] == 0:
        return gf.eye(n)
    basis = gf.colspace_basis(S, p)
    out = []
    cur = basis
    for e in range(n):
        v = gf.zeros(n, 1)
        v[e, 0] = 1
        trial = np.concatenate([cur, v], axis=1)
        if gf.rank(trial, p) > cur.shape[1]:
            cur = trial
            out.append(v)
    return np.concatenate(out, axis=1) if out else gf.zeros(n, 0)


def projective_resolution(F: PosetModule, cap: int = RESOLUTION_CAP) -> ProjectiveResolution:
    p = F.p
    n = F.size
    below = F.below()
    # the ordering relation, needed for coordinates of projectives
    T_le = F.maps()
    le = {(y, x) for (y, x) in T_le}
    gens_all: list[list[int]] = []
    diffs: list[np.ndarray] = []
    dims = list(F.dims)
    T = dict(T_le)
    covers = dict(F.covers)
    prev_embed = None  # for the current representation: element -> (basis matrix in P_{n-1}(x) coords)
    prev_gens: list[int] | None = None
    for step in range(cap + 1):
        if sum(dims) == 0:
            return ProjectiveResolution(gens_all, diffs)
        if step == cap:
            raise ResolutionCapExceeded("projective resolution did not terminate within the cap")
        # projective cover: generators are complements of the radical images
        gens: list[int] = []
        vecs: list[np.ndarray] = []
        for x in range(n):
            if dims[x] == 0:
                continue
            imgs = [covers[c, x] for c in below[x] if dims[c] and (c, x) in covers]
            S = np.concatenate(imgs, axis=1) if imgs else gf.zeros(dims[x], 0)
            C = _complement(S % p, dims[x], p)
            for j in range(C.shape[1]):
                gens.append(x)
                vecs.append(C[:, j])
        # differential into the previous projective
        if prev_embed is not None:
            D = gf.zeros(len(prev_gens), len(gens))
            for g, (x, v) in enumerate(zip(gens, vecs)):
                coords, idx = prev_embed[x]
                col = gf.mul(coords, v.reshape(-1, 1), p)[:, 0]
                for r, gi in enumerate(idx):
                    D[gi, g] = col[r]
            diffs.append(D)
        gens_all.append(gens)
        # kernel of P(x) -> F(x), where P(x) has a coordinate per generator below x
        embed = {}
        new_dims = []
        for x in range(n):
            idx = [g for g, y in enumerate(gens) if (y, x) in le]
            if not idx:
                embed[x] = (gf.zeros(0, 0), idx)
                new_dims.append(0)
                continue
            cols = [gf.mul(T[gens[g], x], vecs[g].reshape(-1, 1), p) for g in idx]
            phi = np.concatenate(cols, axis=1) if dims[x] else gf.zeros(0, len(idx))
            K = gf.nullspace(phi, p) if dims[x] else gf.eye(len(idx))
            embed[x] = (K, idx)
            new_dims.append(K.shape[1])
        # structure maps of the kernel along covers
        new_covers: dict[tuple[int, int], np.ndarray] = {}
        for (a, b) in F.covers:
            Ka, ia = embed[a]
            Kb, ib = embed[b]
            if Ka.shape[1] == 0 or Kb.shape[1] == 0:
                new_covers[a, b] = gf.zeros(Kb.shape[1], Ka.shape[1])
                continue
            pos_b = {g: r for r, g in enumerate(ib)}
            lifted = gf.zeros(len(ib), Ka.shape[1])
            for r, g in enumerate(ia):
                lifted[pos_b[g]] = Ka[r]
            new_covers[a, b] = _solve_columns(Kb, lifted, p)
        rep = PosetModule(p, tuple(new_dims), new_covers)
        T = rep.maps()
        covers = new_covers
        dims = new_dims
        prev_embed = embed
        prev_gens = gens
    raise ExtError("unreachable")


def _solve_columns(B: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    """The unique X with B X = Y for B of full column rank."""
    out = gf.zeros(B.shape[1], Y.shape[1])
    for j in range(Y.shape[1]):
        sol = gf.solve_affine(B, Y[:, j], p)
        if sol is None:
            raise ExtError("kernel is not preserved by the structure maps")
        out[:, j] = sol[0]
    return out


def poset_ext(F: PosetModule, G: PosetModule, cache: dict | None = None) -> tuple[int, ...]:
    """Ext^n(F, G) for n = 0 .. length of the resolution.

    Both modules are first restricted to the closure of the support of G:
    extension by zero from that down-closed set is right adjoint to
    restriction, so Ext is unchanged and the resolution gets smaller.
    ``cache`` maps (id(F), kept) to resolutions for reuse across targets.
    """
    if F.p != G.p or len(F.dims) != len(G.dims) or F.poset_key != G.poset_key:
        raise ExtError("modules on different posets or fields")
    p = F.p
    kept = G.support_closure()
    Fr, G = F.restrict(kept), G.restrict(kept)
    key = (id(F), kept)
    if cache is not None and key in cache:
        res = cache[key]
    else:
        res = projective_resolution(Fr)
        if cache is not None:
            cache[key] = res
    TG = G.maps()
    homs = []
    offsets = []
    for gens in res.gens:
        off = []
        n = 0
        for x in gens:
            off.append(n)
            n += G.dims[x]
        homs.append(n)
        offsets.append(off)
    ranks = []
    for k, D in enumerate(res.diff):
        # Hom(P_k, G) -> Hom(P_{k+1}, G)
        src, dst = res.gens[k], res.gens[k + 1]
        A = gf.zeros(homs[k + 1], homs[k])
        for g2, x2 in enumerate(dst):
            for g1, x1 in enumerate(src):
                c = int(D[g1, g2])
                if c == 0:
                    continue
                blk = (c * TG[x1, x2]) % p
                r0, c0 = offsets[k + 1][g2], offsets[k][g1]
                A[r0: r0 + blk.shape[0], c0: c0 + blk.shape[1]] = (A[r0: r0 + blk.shape[0], c0: c0 + blk.shape[1]] + blk) % p
        ranks.append(gf.rank(A, p) if A.size else 0)
    out = []
    for k, h in enumerate(homs):
        r_in = ranks[k - 1] if k >= 1 else 0
        r_out = ranks[k] if k < len(ranks) else 0
        out.append(h - r_in - r_out)
    return tuple(out)


# ---------------------------------------------------------------------------
# Tables over enumerated objects


def poincare(h: tuple[int, ...]) -> dict[int, int]:
    """h_i = h^{1-i} as an exponent -> coefficient map."""
    return {1 - n: v for n, v in enumerate(h) if v}


def _pad(h: tuple[int, ...], n: int = 3) -> tuple[int, ...]:
    h = tuple(h)
    if len(h) > n and any(h[n:]):
        raise ExtError(f"nonzero Ext beyond degree {n - 1}: {h}")
    return (h + (0,) * n)[:n]


@dataclass
class ExtTable:
    koszul: dict[tuple[int, int], tuple[int, int, int]]
    poset: dict[tuple[int, int], tuple[int, int, int]]

    @property
    def agree(self) -> bool:
        return self.koszul == self.poset

    def to_json(self) -> dict:
        keys = sorted(self.koszul)
        return {
            "pairs": [
                {"source": a, "target": b, "koszul": list(self.koszul[a, b]), "poset": list(self.poset[a, b]),
                 "poincare": {str(k): v for k, v in sorted(poincare(self.koszul[a, b]).items())}}
                for a, b in keys
            ],
            "routes_agree": self.agree,
        }


def _ext_rows(args) -> list[tuple[tuple[int, int], tuple, tuple]]:
    mods, pos, rows, cols = args
    cache: dict = {}
    out = []
    for a in rows:
        for b in cols(a) if callable(cols) else cols:
            out.append(((a, b), koszul_ext(mods[a], mods[b]), _pad(poset_ext(pos[a], pos[b], cache))))
    return out


def _diagonal(a: int) -> list[int]:
    return [a]


def ext_table(m: QuiverModel, objects, pairs: str = "all", layout: PixelLayout | None = None, jobs: int = 1) -> ExtTable:
    """Ext dimensions by both routes for all ordered pairs (or only the diagonal).

    With ``jobs`` > 1 the source objects are split over worker processes;
    results are merged in a fixed order, so the table does not depend on it.
    """
    objects = list(objects)
    layout = layout or pixel_layout(m.diagram)
    mods = [pixelate(m, o, layout) for o in objects]
    pos = [poset_module(m, o) for o in objects]
    n = len(objects)
    cols = _diagonal if pairs == "diagonal" else list(range(n))
    if jobs <= 1 or n < 2:
        chunks = [list(range(n))]
    else:
        chunks = [list(range(n))[k::jobs] for k in range(jobs)]
    if len(chunks) == 1:
        results = [_ext_rows((mods, pos, chunks[0], cols))]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_ext_rows, [(mods, pos, c, cols) for c in chunks]))
    kz, ps = {}, {}
    for key, k, p in sorted(x for r in results for x in r):
        kz[key], ps[key] = k, p
    return ExtTable(kz, ps)
