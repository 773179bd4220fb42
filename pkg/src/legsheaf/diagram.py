"""Front diagrams encoded as Morse-event words.

A front is read left to right as a sequence of events acting on the
strands of the current vertical slice, numbered 1..c from the top:

* ``u<i>``  left cusp; two new strands appear at positions i and i+1
* ``d<i>``  right cusp; the strands at positions i and i+1 join and end
* ``x<i>``  crossing of the strands at positions i and i+1

Gaps between strands are numbered 0..c, gap g lying between strand g and
strand g+1 (gap 0 above everything, gap c below everything).  A word may
carry the prefix ``cyl <n>;`` to live in the cylinder, in which case the
slice after the last event is glued to the slice before the first one.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

LEFT_CUSP = "u"
RIGHT_CUSP = "d"
CROSSING = "x"
EVENT_KINDS = (LEFT_CUSP, RIGHT_CUSP, CROSSING)
PLANE = "plane"
CYLINDER = "cylinder"

SCHEMA_VERSION = "legsheaf.front/1"

MOVES = ("R1", "R1'", "R2", "R2'", "R3", "I")

_TOKEN = re.compile(r"^([udx])(\d+)$")
_CYL = re.compile(r"^\s*cyl\s+(\d+)\s*;(.*)$", re.S)


class FrontError(ValueError):
    """Malformed front word or an impossible operation on a front."""


@dataclass(frozen=True)
class MorseWord:
    events: tuple[tuple[str, int], ...]
    ambient: str = PLANE
    seam: int = 0

    def __post_init__(self):
        validate_events(self.events, self.ambient, self.seam)

    def counts(self) -> list[int]:
        """Strand count of every slice: before event 0, ..., after the last."""
        out = [self.seam]
        for kind, _ in self.events:
            out.append(out[-1] + (2 if kind == LEFT_CUSP else -2 if kind == RIGHT_CUSP else 0))
        return out

    def to_text(self) -> str:
        body = " ".join(f"{k}{i}" for k, i in self.events)
        if self.ambient == CYLINDER:
            return f"cyl {self.seam}; {body}".rstrip()
        return body

    def __str__(self) -> str:
        return self.to_text()

    @property
    def crossings(self) -> int:
        return sum(1 for k, _ in self.events if k == CROSSING)


def validate_events(events: Sequence[tuple[str, int]], ambient: str, seam: int) -> None:
    if ambient not in (PLANE, CYLINDER):
        raise FrontError(f"unknown ambient {ambient!r}")
    if ambient == PLANE and seam != 0:
        raise FrontError("plane fronts start with no strands")
    if seam < 0:
        raise FrontError("negative seam strand count")
    count = seam
    for idx, (kind, level) in enumerate(events):
        if kind not in EVENT_KINDS:
            raise FrontError(f"event {idx}: unknown kind {kind!r}")
        if level < 1:
            raise FrontError(f"event {idx}: level {level} must be positive (running count {count})")
        if kind == LEFT_CUSP:
            if level > count + 1:
                raise FrontError(f"event {idx}: left cusp at level {level} with running count {count}")
            count += 2
        else:
            if level + 1 > count:
                raise FrontError(f"event {idx}: {kind}{level} needs two strands at level {level} but running count is {count}")
            if kind == RIGHT_CUSP:
                count -= 2
    if count != seam:
        raise FrontError(f"word ends with {count} strands, expected {seam}")


def parse_front(text: str) -> MorseWord:
    """Parse the whitespace separated token format into a MorseWord."""
    ambient, seam, body = PLANE, 0, text
    m = _CYL.match(text)
    if m:
        ambient, seam, body = CYLINDER, int(m.group(1)), m.group(2)
    elif text.strip().startswith("cyl"):
        raise FrontError("malformed cylinder prefix; expected 'cyl <n>;'")
    events = []
    for idx, tok in enumerate(body.split()):
        t = _TOKEN.match(tok)
        if not t:
            raise FrontError(f"event {idx}: malformed token {tok!r}")
        events.append((t.group(1), int(t.group(2))))
    return MorseWord(tuple(events), ambient, seam)


def serialize_front(w: MorseWord) -> str:
    return w.to_text()


# ---------------------------------------------------------------------------
# Braid words and closures


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise FrontError("a braid needs at least one strand")
        for a in self.letters:
            if a == 0 or abs(a) > self.strands - 1:
                raise FrontError(f"letter {a} out of range for {self.strands} strands")

    @property
    def positive(self) -> bool:
        return all(a > 0 for a in self.letters)

    @property
    def writhe(self) -> int:
        return sum(1 if a > 0 else -1 for a in self.letters)

    def components(self) -> int:
        perm = list(range(self.strands))
        for a in self.letters:
            i = abs(a) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        seen, comps = set(), 0
        for s in range(self.strands):
            if s in seen:
                continue
            comps += 1
            j = s
            while j not in seen:
                seen.add(j)
                j = perm[j]
        return comps


def parse_braid(text: str, strands: int | None = None) -> BraidWord:
    letters = tuple(int(t) for t in text.replace(",", " ").split())
    if strands is None:
        strands = max([abs(a) for a in letters], default=0) + 1
    return BraidWord(strands, letters)


def rainbow_closure(b: BraidWord) -> MorseWord:
    """Close a positive braid with n nested cusps on each side, braid below."""
    if not b.positive:
        raise FrontError("rainbow closure needs a positive braid")
    n = b.strands
    ev = [(LEFT_CUSP, i) for i in range(1, n + 1)]
    ev += [(CROSSING, n + a) for a in b.letters]
    ev += [(RIGHT_CUSP, i) for i in range(n, 0, -1)]
    return MorseWord(tuple(ev))


def cylindrical_closure(b: BraidWord) -> MorseWord:
    if not b.positive:
        raise FrontError("cylindrical closure needs a positive braid")
    return MorseWord(tuple((CROSSING, a) for a in b.letters), CYLINDER, b.strands)


# ---------------------------------------------------------------------------
# The stratified model


@dataclass
class Arc:
    id: int
    strand: int = -1
    component: int = -1
    above: int = -1
    below: int = -1
    start: int | None = None  # event index, None for the seam
    end: int | None = None
    slices: list[int] = field(default_factory=list)


@dataclass
class Region:
    id: int
    bounded: bool = True
    unbounded_side: str | None = None  # 'outer' (plane), 'upper'/'lower' (cylinder)


@dataclass
class Crossing:
    event: int
    level: int
    upper_left: int
    lower_left: int
    upper_right: int
    lower_right: int
    north: int
    south: int
    west: int
    east: int


@dataclass
class Cusp:
    event: int
    level: int
    side: str  # 'left' or 'right'
    upper: int
    lower: int
    outside: int
    inside: int


class FrontDiagram:
    """Combinatorial stratified model built from a MorseWord.

    Attributes of interest: ``arcs``, ``regions``, ``crossings``, ``cusps``,
    ``slice_arcs[k]`` / ``slice_regions[k]`` (arcs at positions and regions
    at gaps of slice k, slice k sitting before event k), ``strands`` and
    ``components`` (lists of arc ids).
    """

    def __init__(self, word: MorseWord):
        self.word = word
        self.events = word.events
        self.ambient = word.ambient
        self.counts = word.counts()
        self._build()

    # -- construction -------------------------------------------------
    def _build(self) -> None:
        E = len(self.events)
        counts = self.counts
        cyl = self.ambient == CYLINDER
        arc_uf = _UnionFind()
        reg_uf = _UnionFind()
        # provisional node ids: ('a', slice, pos) and ('g', slice, gap)
        for k in range(E + 1):
            for p in range(1, counts[k] + 1):
                arc_uf.add(("a", k, p))
            for g in range(counts[k] + 1):
                reg_uf.add(("g", k, g))
        for k, (kind, i) in enumerate(self.events):
            c = counts[k]
            if kind == CROSSING:
                for p in range(1, c + 1):
                    if p not in (i, i + 1):
                        arc_uf.union(("a", k, p), ("a", k + 1, p))
                for g in range(c + 1):
                    if g != i:
                        reg_uf.union(("g", k, g), ("g", k + 1, g))
            elif kind == LEFT_CUSP:
                for p in range(1, c + 1):
                    arc_uf.union(("a", k, p), ("a", k + 1, p if p < i else p + 2))
                for g in range(c + 1):
                    if g < i - 1:
                        reg_uf.union(("g", k, g), ("g", k + 1, g))
                    elif g == i - 1:
                        reg_uf.union(("g", k, g), ("g", k + 1, g))
                        reg_uf.union(("g", k, g), ("g", k + 1, g + 2))
                    else:
                        reg_uf.union(("g", k, g), ("g", k + 1, g + 2))
            else:
                for p in range(1, c + 1):
                    if p < i:
                        arc_uf.union(("a", k, p), ("a", k + 1, p))
                    elif p > i + 1:
                        arc_uf.union(("a", k, p), ("a", k + 1, p - 2))
                for g in range(c + 1):
                    if g < i - 1:
                        reg_uf.union(("g", k, g), ("g", k + 1, g))
                    elif g == i - 1 or g == i + 1:
                        reg_uf.union(("g", k, g), ("g", k + 1, i - 1))
                    elif g > i + 1:
                        reg_uf.union(("g", k, g), ("g", k + 1, g - 2))
        if cyl:
            for p in range(1, counts[0] + 1):
                arc_uf.union(("a", E, p), ("a", 0, p))
            for g in range(counts[0] + 1):
                reg_uf.union(("g", E, g), ("g", 0, g))
        else:
            # the outer region: top and bottom gaps of every slice
            for k in range(E + 1):
                reg_uf.union(("g", k, 0), ("g", 0, 0))
                reg_uf.union(("g", k, counts[k]), ("g", 0, 0))

        # canonical ids in order of first appearance (slice-major, top-down)
        arc_id: dict = {}
        reg_id: dict = {}
        n_slices = E if cyl else E + 1
        for k in range(n_slices):
            for g in range(counts[k] + 1):
                r = reg_uf.find(("g", k, g))
                if r not in reg_id:
                    reg_id[r] = len(reg_id)
                if g < counts[k]:
                    a = arc_uf.find(("a", k, g + 1))
                    if a not in arc_id:
                        arc_id[a] = len(arc_id)
        if cyl and E == 0:
            pass
        self.slice_arcs = [
            [arc_id[arc_uf.find(("a", k, p))] for p in range(1, counts[k] + 1)] for k in range(E + 1)
        ]
        self.slice_regions = [
            [reg_id[reg_uf.find(("g", k, g))] for g in range(counts[k] + 1)] for k in range(E + 1)
        ]
        self.arcs = [Arc(i) for i in range(len(arc_id))]
        self.regions = [Region(i) for i in range(len(reg_id))]
        for k in range(n_slices):
            for p, a in enumerate(self.slice_arcs[k], start=1):
                arc = self.arcs[a]
                arc.above = self.slice_regions[k][p - 1]
                arc.below = self.slice_regions[k][p]
                arc.slices.append(k)

        # unbounded regions
        if cyl:
            for k in range(E + 1):
                top = self.regions[self.slice_regions[k][0]]
                bot = self.regions[self.slice_regions[k][-1]]
                top.bounded = False
                bot.bounded = False
                top.unbounded_side = top.unbounded_side or "upper"
                if bot.unbounded_side is None:
                    bot.unbounded_side = "lower"
        else:
            outer = self.regions[self.slice_regions[0][0]]
            outer.bounded = False
            outer.unbounded_side = "outer"

        # events
        self.crossings: list[Crossing] = []
        self.cusps: list[Cusp] = []
        self.event_objects: list[Crossing | Cusp] = []
        for k, (kind, i) in enumerate(self.events):
            L, R = self.slice_arcs[k], self.slice_arcs[k + 1]
            LG, RG = self.slice_regions[k], self.slice_regions[k + 1]
            if kind == CROSSING:
                obj = Crossing(k, i, L[i - 1], L[i], R[i - 1], R[i], LG[i - 1], LG[i + 1], LG[i], RG[i])
                self.crossings.append(obj)
                for a in (L[i - 1], L[i]):
                    self.arcs[a].end = k
                for a in (R[i - 1], R[i]):
                    self.arcs[a].start = k
            elif kind == LEFT_CUSP:
                obj = Cusp(k, i, "left", R[i - 1], R[i], RG[i - 1], RG[i])
                self.cusps.append(obj)
                self.arcs[R[i - 1]].start = k
                self.arcs[R[i]].start = k
            else:
                obj = Cusp(k, i, "right", L[i - 1], L[i], LG[i - 1], LG[i])
                self.cusps.append(obj)
                self.arcs[L[i - 1]].end = k
                self.arcs[L[i]].end = k
            self.event_objects.append(obj)

        # strands (straight through crossings) and components (through cusps too)
        suf = _UnionFind()
        cuf = _UnionFind()
        for a in range(len(self.arcs)):
            suf.add(a)
            cuf.add(a)
        for x in self.crossings:
            suf.union(x.upper_left, x.lower_right)
            suf.union(x.lower_left, x.upper_right)
            cuf.union(x.upper_left, x.lower_right)
            cuf.union(x.lower_left, x.upper_right)
        for c in self.cusps:
            cuf.union(c.upper, c.lower)
        self.strands = _classes(suf, len(self.arcs))
        self.components = _classes(cuf, len(self.arcs))
        for sid, members in enumerate(self.strands):
            for a in members:
                self.arcs[a].strand = sid
        for cid, members in enumerate(self.components):
            for a in members:
                self.arcs[a].component = cid
        self._cells = None

    # -- basic queries ------------------------------------------------
    @property
    def bounded_regions(self) -> list[int]:
        return [r.id for r in self.regions if r.bounded]

    @property
    def unbounded_regions(self) -> list[int]:
        return [r.id for r in self.regions if not r.bounded]

    @property
    def n_left_cusps(self) -> int:
        return sum(1 for c in self.cusps if c.side == "left")

    @property
    def n_right_cusps(self) -> int:
        return sum(1 for c in self.cusps if c.side == "right")

    def summary(self) -> dict:
        return {
            "ambient": self.ambient,
            "left_cusps": self.n_left_cusps,
            "right_cusps": self.n_right_cusps,
            "crossings": len(self.crossings),
            "strands": len(self.strands),
            "arcs": len(self.arcs),
            "regions": len(self.regions),
            "bounded_regions": len(self.bounded_regions),
            "components": len(self.components),
        }

    def cells(self) -> "CellComplex":
        if self._cells is None:
            self._cells = CellComplex(self)
        return self._cells

    def to_json(self) -> dict:
        cx = self.cells()
        return {
            "schema": SCHEMA_VERSION,
            "word": self.word.to_text(),
            "ambient": self.ambient,
            "summary": self.summary(),
            "arcs": [
                {"id": a.id, "strand": a.strand, "component": a.component, "above": a.above, "below": a.below}
                for a in self.arcs
            ],
            "regions": [{"id": r.id, "bounded": r.bounded} for r in self.regions],
            "strands": [sorted(s) for s in self.strands],
            "cells": [{"id": c.id, "dim": c.dim, "kind": c.kind, "home": c.home} for c in cx.cells],
            "poset": [[a, b] for a, b, _ in cx.covers],
        }


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if repr(ra) < repr(rb):
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def _classes(uf: _UnionFind, n: int) -> list[list[int]]:
    groups: dict = {}
    for a in range(n):
        groups.setdefault(uf.find(a), []).append(a)
    return sorted(groups.values(), key=min)


def build_complex(w: MorseWord) -> FrontDiagram:
    return FrontDiagram(w)


def front(text_or_word: str | MorseWord | FrontDiagram) -> FrontDiagram:
    """Coerce text, a word or a diagram into a FrontDiagram."""
    if isinstance(text_or_word, FrontDiagram):
        return text_or_word
    if isinstance(text_or_word, MorseWord):
        return FrontDiagram(text_or_word)
    return FrontDiagram(parse_front(text_or_word))


# ---------------------------------------------------------------------------
# Regular cell refinement


@dataclass
class Cell:
    id: int
    dim: int
    kind: str  # 'crossing', 'cusp', 'vertex', 'arc', 'edge', 'face'
    home: int  # region whose stalk this cell carries
    data: tuple = ()


class CellComplex:
    """Regular cell structure refining the front by vertical slice lines.

    Slice lines sit between consecutive events and never pass through a
    crossing or cusp.  ``covers`` lists (face, coface, arcs) triples where
    ``arcs`` is the ordered list of arcs whose upward maps compose to the
    generization map from the face stalk to the coface stalk.
    """

    def __init__(self, d: FrontDiagram):
        self.diagram = d
        self.cells: list[Cell] = []
        self.covers: list[tuple[int, int, tuple[int, ...]]] = []
        self._build()

    def _new(self, dim, kind, home, data=()) -> int:
        c = Cell(len(self.cells), dim, kind, home, data)
        self.cells.append(c)
        return c.id

    def _build(self) -> None:
        d = self.diagram
        E = len(d.events)
        cyl = d.ambient == CYLINDER
        if cyl:
            lines = list(range(E)) if E >= 2 else [0, 0] if E == 0 else [0, 1]
        else:
            lines = list(range(1, E))
        n_lines = len(lines)
        # vertices and edges on slice lines
        vert: dict = {}
        edge: dict = {}
        for li, k in enumerate(lines):
            arcs = d.slice_arcs[k]
            regs = d.slice_regions[k]
            for p, a in enumerate(arcs, start=1):
                vert[li, p] = self._new(0, "vertex", d.arcs[a].below, (li, p, a))
            for g, r in enumerate(regs):
                e = self._new(1, "edge", r, (li, g))
                edge[li, g] = e
                if g >= 1:
                    self.covers.append((vert[li, g], e, ()))
                if g < len(arcs):
                    self.covers.append((vert[li, g + 1], e, (arcs[g],)))

        # columns: column j lies between line j-1 and line j (cyclically on the cylinder)
        if cyl:
            columns = []
            for j in range(n_lines):
                left, right = j, (j + 1) % n_lines
                ev = lines[j] if E >= 2 or (E == 1 and j == 0) else None
                columns.append((left, right, ev))
        else:
            columns = []
            for j in range(E):
                left = j - 1 if j >= 1 else None
                right = j if j < E - 1 else None
                columns.append((left, right, j))

        for left, right, ev in columns:
            self._column(d, lines, left, right, ev, vert, edge)

    def _column(self, d, lines, left, right, ev, vert, edge) -> None:
        # gaps on each side grouped into pieces; arcs through the column
        kind, i = d.events[ev] if ev is not None else (None, 0)
        kL = ev if ev is not None else lines[left]
        kR = ev + 1 if ev is not None else lines[left]
        cL, cR = d.counts[kL], d.counts[kR]
        pieces: dict = {}

        def piece_key(side, g):
            if kind is None:
                return ("p", g)
            if kind == CROSSING:
                if g == i:
                    return ("W", 0) if side == "L" else ("E", 0)
                return ("p", g)
            if kind == LEFT_CUSP:
                if side == "L":
                    return ("p", g if g <= i - 1 else g + 2)
                if g == i:
                    return ("I", 0)
                if g == i + 1:
                    return ("p", i - 1)
                return ("p", g)
            # right cusp: indices in terms of the left slice
            if side == "R":
                return ("p", g if g <= i - 1 else g + 2)
            if g == i:
                return ("I", 0)
            if g == i + 1:
                return ("p", i - 1)
            return ("p", g)

        regs_L, regs_R = d.slice_regions[kL], d.slice_regions[kR]

        def region_of(key):
            tag, g = key
            if tag == "W":
                return regs_L[i]
            if tag == "E":
                return regs_R[i]
            if tag == "I":
                return regs_R[i] if kind == LEFT_CUSP else regs_L[i]
            if kind == LEFT_CUSP:
                return regs_L[g if g <= i - 1 else g - 2]
            return regs_L[g]

        keys = set()
        for g in range(cL + 1):
            keys.add(piece_key("L", g))
        for g in range(cR + 1):
            keys.add(piece_key("R", g))
        for key in sorted(keys):
            pieces[key] = self._new(2, "face", region_of(key), (ev, key))
        if left is not None:
            for g in range(cL + 1):
                self.covers.append((edge[left, g], pieces[piece_key("L", g)], ()))
        if right is not None:
            for g in range(cR + 1):
                self.covers.append((edge[right, g], pieces[piece_key("R", g)], ()))

        def arc_piece(a, key_above, key_below, ends):
            c = self._new(1, "arc", d.arcs[a].below, (ev, a))
            self.covers.append((c, pieces[key_above], (a,)))
            self.covers.append((c, pieces[key_below], ()))
            for v, arcs in ends:
                self.covers.append((v, c, arcs))
            return c

        def lv(p):
            return [(vert[left, p], ())] if left is not None else []

        def rv(p):
            return [(vert[right, p], ())] if right is not None else []

        def between(side, p):
            return piece_key(side, p - 1), piece_key(side, p)

        if kind is None:
            for p in range(1, cL + 1):
                arc_piece(d.slice_arcs[kL][p - 1], *between("L", p), lv(p) + rv(p))
            return
        L, R = d.slice_arcs[kL], d.slice_arcs[kR]
        obj = d.event_objects[ev]
        if kind == CROSSING:
            pt = self._new(0, "crossing", obj.south, (ev,))
            for p in range(1, cL + 1):
                if p not in (i, i + 1):
                    arc_piece(L[p - 1], *between("L", p), lv(p) + rv(p))
            arc_piece(L[i - 1], ("p", i - 1), ("W", 0), lv(i) + [(pt, (obj.lower_left,))])
            arc_piece(L[i], ("W", 0), ("p", i + 1), lv(i + 1) + [(pt, ())])
            arc_piece(R[i - 1], ("p", i - 1), ("E", 0), rv(i) + [(pt, (obj.lower_right,))])
            arc_piece(R[i], ("E", 0), ("p", i + 1), rv(i + 1) + [(pt, ())])
        elif kind == LEFT_CUSP:
            pt = self._new(0, "cusp", obj.outside, (ev,))
            for p in range(1, cL + 1):
                q = p if p < i else p + 2
                arc_piece(L[p - 1], *between("L", p), lv(p) + rv(q))
            arc_piece(R[i - 1], ("p", i - 1), ("I", 0), rv(i) + [(pt, (obj.lower,))])
            arc_piece(R[i], ("I", 0), ("p", i - 1), rv(i + 1) + [(pt, ())])
        else:
            pt = self._new(0, "cusp", obj.outside, (ev,))
            for p in range(1, cL + 1):
                if p in (i, i + 1):
                    continue
                q = p if p < i else p - 2
                arc_piece(L[p - 1], *between("L", p), lv(p) + rv(q))
            arc_piece(L[i - 1], ("p", i - 1), ("I", 0), lv(i) + [(pt, (obj.lower,))])
            arc_piece(L[i], ("I", 0), ("p", i - 1), lv(i + 1) + [(pt, ())])

    def hasse_down(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.cells]
        for a, b, _ in self.covers:
            out[b].append(a)
        return out


# ---------------------------------------------------------------------------
# Orientation and classical invariants


def default_orientation(d: FrontDiagram) -> dict[int, int]:
    """Direction (+1 rightward, -1 leftward) of every arc.

    Each component is oriented so its leftmost, then topmost, arc points
    to the right.
    """
    orient: dict[int, int] = {}
    for comp in d.components:
        first = min(comp, key=lambda a: (d.arcs[a].slices[0] if d.arcs[a].slices else 0,
                                         _position(d, a)))
        _propagate(d, first, +1, orient)
    return orient


def orientation_from_choice(d: FrontDiagram, flips: Iterable[int]) -> dict[int, int]:
    """Default orientation with the listed components reversed."""
    orient = default_orientation(d)
    flips = set(flips)
    for cid in flips:
        for a in d.components[cid]:
            orient[a] = -orient[a]
    return orient


def _position(d: FrontDiagram, a: int) -> int:
    k = d.arcs[a].slices[0] if d.arcs[a].slices else 0
    return d.slice_arcs[k].index(a)


def _propagate(d: FrontDiagram, start: int, direction: int, orient: dict[int, int]) -> None:
    a, dirn = start, direction
    while a not in orient:
        orient[a] = dirn
        end = d.arcs[a].end if dirn > 0 else d.arcs[a].start
        if end is None:
            # wraps through the seam: same strand position on the other side
            nxt = _seam_partner(d, a, dirn)
            a = nxt
            continue
        obj = d.event_objects[end]
        if isinstance(obj, Crossing):
            if dirn > 0:
                a = obj.lower_right if a == obj.upper_left else obj.upper_right
            else:
                a = obj.lower_left if a == obj.upper_right else obj.upper_left
        else:
            a = obj.lower if a == obj.upper else obj.upper
            dirn = -dirn


def _seam_partner(d: FrontDiagram, a: int, dirn: int) -> int:
    # on the cylinder the slice after the last event is slice 0 again, and
    # arcs crossing the seam are identified during construction, so an arc
    # whose end is None never leaves: this only happens for closed strands
    return a


def crossing_sign(d: FrontDiagram, x: Crossing, orient: dict[int, int]) -> int:
    return 1 if orient[x.upper_left] == orient[x.lower_left] else -1


def cusp_direction(d: FrontDiagram, c: Cusp, orient: dict[int, int]) -> str:
    """'down' if traversing the cusp moves from the upper to the lower branch."""
    if c.side == "right":
        return "down" if orient[c.upper] > 0 else "up"
    return "down" if orient[c.upper] < 0 else "up"


@dataclass(frozen=True)
class ClassicalInvariants:
    tb: int
    rot: tuple[int, ...]
    writhe: int

    def to_json(self) -> dict:
        return {"tb": self.tb, "rot": list(self.rot), "writhe": self.writhe}


def classical_invariants(d: FrontDiagram, orientation: dict[int, int] | None = None) -> ClassicalInvariants:
    orient = orientation if orientation is not None else default_orientation(d)
    writhe = sum(crossing_sign(d, x, orient) for x in d.crossings)
    tb = writhe - d.n_right_cusps
    rots = []
    for comp in d.components:
        members = set(comp)
        up = down = 0
        for c in d.cusps:
            if c.upper in members:
                if cusp_direction(d, c, orient) == "up":
                    up += 1
                else:
                    down += 1
        rots.append((up - down) // 2)
    return ClassicalInvariants(tb, tuple(rots), writhe)


# ---------------------------------------------------------------------------
# Maslov potentials


@dataclass(frozen=True)
class MaslovPotential:
    values: tuple[int, ...]  # indexed by strand id
    modulus: int = 0

    @property
    def binary(self) -> bool:
        return self.modulus == 0 and set(self.values) <= {0, 1}

    def of_arc(self, d: FrontDiagram, a: int) -> int:
        return self.values[d.arcs[a].strand]

    def to_json(self) -> dict:
        return {"values": list(self.values), "modulus": self.modulus, "binary": self.binary}


def maslov_potentials(d: FrontDiagram, modulus: int = 0) -> list[MaslovPotential]:
    """Maslov potentials up to shift.

    With modulus 0 the single potential normalized to minimum 0 on every
    component is returned; with modulus m > 0 one potential for every
    relative shift of the components (the first component fixed).
    Empty when some component has no potential.
    """
    ns = len(d.strands)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(ns)]
    for c in d.cusps:
        up, lo = d.arcs[c.upper].strand, d.arcs[c.lower].strand
        adj[lo].append((up, 1))
        adj[up].append((lo, -1))
    values: list[int | None] = [None] * ns
    comp_of_strand = [d.arcs[s[0]].component for s in d.strands]
    comps: dict[int, list[int]] = {}
    for s in range(ns):
        if values[s] is not None:
            continue
        values[s] = 0
        stack = [s]
        members = [s]
        while stack:
            u = stack.pop()
            for v, w in adj[u]:
                val = values[u] + w
                if values[v] is None:
                    values[v] = val
                    stack.append(v)
                    members.append(v)
                elif (values[v] - val) % modulus if modulus else values[v] != val:
                    return []
        if modulus == 0:
            lo = min(values[m] for m in members)
            for m in members:
                values[m] -= lo
        else:
            for m in members:
                values[m] %= modulus
        comps[comp_of_strand[s]] = members
    base = tuple(int(v) for v in values)
    if modulus == 0:
        return [MaslovPotential(base, 0)]
    groups = list(comps.values())
    out = []
    for shifts in itertools.product(range(modulus), repeat=max(len(groups) - 1, 0)):
        vals = list(base)
        for g, sh in zip(groups[1:], shifts):
            for m in g:
                vals[m] = (vals[m] + sh) % modulus
        out.append(MaslovPotential(tuple(vals), modulus))
    return out


def binary_potential(d: FrontDiagram) -> MaslovPotential | None:
    pots = maslov_potentials(d, 0)
    if not pots or not pots[0].binary:
        return None
    return pots[0]


# ---------------------------------------------------------------------------
# Reidemeister moves as word rewrites


@dataclass(frozen=True)
class Site:
    """Where a move applies.

    ``index`` is the event index of the first event of the pattern (or the
    insertion point), ``level`` the strand position involved and
    ``forward`` whether the move adds (True) or removes (False) events.
    """

    index: int
    level: int
    forward: bool = True
    variant: int = 0


def _counts_at(w: MorseWord, index: int) -> int:
    return w.counts()[index]


def applicable_moves(w: MorseWord) -> list[tuple[str, Site]]:
    """Every (move, site) pair applicable to the word."""
    ev = list(w.events)
    counts = w.counts()
    out: list[tuple[str, Site]] = []
    E = len(ev)
    for k in range(E + 1):
        c = counts[k]
        for i in range(1, c + 1):
            out.append(("R1", Site(k, i, True)))
            out.append(("R1'", Site(k, i, True)))
    for k in range(E):
        kind, i = ev[k]
        c = counts[k]
        if kind == LEFT_CUSP:
            if i >= 2:
                out.append(("R2", Site(k, i, True, 0)))
            if i <= c:
                out.append(("R2", Site(k, i, True, 1)))
        if kind == RIGHT_CUSP:
            if i >= 2:
                out.append(("R2'", Site(k, i, True, 0)))
            if i + 2 <= c:
                out.append(("R2'", Site(k, i, True, 1)))
        if k + 2 < E:
            a, b, e = ev[k], ev[k + 1], ev[k + 2]
            if (a[0], b[0], e[0]) == (LEFT_CUSP, CROSSING, RIGHT_CUSP) and b[1] == a[1] - 1 and e[1] == a[1]:
                out.append(("R1", Site(k, a[1] - 1, False)))
            if (a[0], b[0], e[0]) == (LEFT_CUSP, CROSSING, RIGHT_CUSP) and b[1] == a[1] + 1 and e[1] == a[1]:
                out.append(("R1'", Site(k, a[1], False)))
            if (a[0], b[0], e[0]) == (LEFT_CUSP, CROSSING, CROSSING):
                j = a[1]
                if b[1] == j + 1 and e[1] == j:
                    out.append(("R2", Site(k, j + 1, False, 0)))
                if j >= 2 and b[1] == j - 1 and e[1] == j:
                    out.append(("R2", Site(k, j - 1, False, 1)))
            if (a[0], b[0], e[0]) == (CROSSING, CROSSING, RIGHT_CUSP):
                j = e[1]
                if a[1] == j and b[1] == j + 1:
                    out.append(("R2'", Site(k, j + 1, False, 0)))
                if j >= 2 and a[1] == j and b[1] == j - 1:
                    out.append(("R2'", Site(k, j - 1, False, 1)))
            if a[0] == b[0] == e[0] == CROSSING and a[1] == e[1] and abs(a[1] - b[1]) == 1:
                out.append(("R3", Site(k, min(a[1], b[1]), True)))
        if k + 1 < E and _commute(ev[k], ev[k + 1]) is not None:
            out.append(("I", Site(k, ev[k][1], True)))
    return out


def _commute(a: tuple[str, int], b: tuple[str, int]) -> tuple[tuple[str, int], tuple[str, int]] | None:
    """Swap two adjacent events acting on separated strands.

    Footprints are measured in the slice between the two events: a cusp
    point sitting in a gap counts as the half-integer between its strands.
    Returns the re-indexed swapped pair, or None when the events interact.
    """
    ka, ia = a
    kb, ib = b
    fa = (ia - 0.5, ia - 0.5) if ka == RIGHT_CUSP else (ia, ia + 1)
    fb = (ib - 0.5, ib - 0.5) if kb == LEFT_CUSP else (ib, ib + 1)
    da = 2 if ka == LEFT_CUSP else -2 if ka == RIGHT_CUSP else 0
    db = 2 if kb == LEFT_CUSP else -2 if kb == RIGHT_CUSP else 0
    if fa[1] < fb[0]:
        return (kb, ib - da), (ka, ia)
    if fb[1] < fa[0]:
        return (kb, ib), (ka, ia + db)
    return None


def apply_reidemeister(d: FrontDiagram | MorseWord, move: str, site: Site) -> FrontDiagram:
    w = d.word if isinstance(d, FrontDiagram) else d
    if move not in MOVES:
        raise FrontError(f"unknown move {move!r}")
    if (move, site) not in applicable_moves(w):
        raise FrontError(f"move {move} does not apply at {site}")
    ev = list(w.events)
    k, i = site.index, site.level
    if move == "R1":
        if site.forward:
            ev[k:k] = [(LEFT_CUSP, i + 1), (CROSSING, i), (RIGHT_CUSP, i + 1)]
        else:
            del ev[k:k + 3]
    elif move == "R1'":
        if site.forward:
            ev[k:k] = [(LEFT_CUSP, i), (CROSSING, i + 1), (RIGHT_CUSP, i)]
        else:
            del ev[k:k + 3]
    elif move == "R2":
        if site.forward:
            if site.variant == 0:
                ev[k:k + 1] = [(LEFT_CUSP, i - 1), (CROSSING, i), (CROSSING, i - 1)]
            else:
                ev[k:k + 1] = [(LEFT_CUSP, i + 1), (CROSSING, i), (CROSSING, i + 1)]
        else:
            ev[k:k + 3] = [(LEFT_CUSP, i)]
    elif move == "R2'":
        if site.forward:
            if site.variant == 0:
                ev[k:k + 1] = [(CROSSING, i - 1), (CROSSING, i), (RIGHT_CUSP, i - 1)]
            else:
                ev[k:k + 1] = [(CROSSING, i + 1), (CROSSING, i), (RIGHT_CUSP, i + 1)]
        else:
            ev[k:k + 3] = [(RIGHT_CUSP, i)]
    elif move == "R3":
        a, b, _ = ev[k], ev[k + 1], ev[k + 2]
        ev[k:k + 3] = [b, a, b]
    else:
        swapped = _commute(ev[k], ev[k + 1])
        ev[k:k + 2] = list(swapped)
    return FrontDiagram(MorseWord(tuple(ev), w.ambient, w.seam))
