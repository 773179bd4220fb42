"""Rulings of plane fronts: switch sets, eyes, gradedness and normality."""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import CROSSING, CYLINDER, LEFT_CUSP, FrontDiagram, FrontError, MaslovPotential, maslov_potentials

EXPONENT_CONVENTION = "z^(s-n)"


@dataclass(frozen=True)
class Eye:
    left_cusp: int  # event index
    right_cusp: int
    upper: tuple[int, ...]  # arc ids, left to right
    lower: tuple[int, ...]


@dataclass(frozen=True)
class Ruling:
    switches: tuple[int, ...]  # indices into FrontDiagram.crossings
    eyes: tuple[Eye, ...]
    graded: bool
    normal: bool

    @property
    def s(self) -> int:
        return len(self.switches)

    @property
    def n(self) -> int:
        return len(self.eyes)

    @property
    def chi(self) -> int:
        return self.n - self.s

    def to_json(self) -> dict:
        return {"switches": list(self.switches), "eyes": self.n, "chi": self.chi,
                "graded": self.graded, "normal": self.normal}


def enumerate_rulings(
    d: FrontDiagram,
    require_graded: bool = True,
    potential: MaslovPotential | None = None,
    require_normal: bool = True,
) -> list[Ruling]:
    """All rulings of a plane front, ordered by switch set.

    Gradedness uses ``potential`` (default: the canonical integer one; with
    no potential available gradedness cannot hold and only ungraded
    enumeration returns anything).
    """
    if d.ambient == CYLINDER:
        raise FrontError("rulings are only defined for plane fronts")
    if potential is None:
        pots = maslov_potentials(d, 0)
        potential = pots[0] if pots else None
    if require_graded and potential is None:
        return []
    mu = None
    if potential is not None:
        mu = [potential.values[d.arcs[a].strand] for a in range(len(d.arcs))]
    cross_index = {x.event: j for j, x in enumerate(d.crossings)}
    results: list[Ruling] = []
    events = d.events
    E = len(events)

    def rec(k: int, lab: list[int], switches: list[int], graded: bool, normal: bool, next_label: int):
        if k == E:
            results.append(_assemble(d, tuple(switches), graded, normal))
            return
        kind, i = events[k]
        if kind == LEFT_CUSP:
            rec(k + 1, lab[: i - 1] + [next_label, next_label] + lab[i - 1:], switches, graded, normal, next_label + 1)
            return
        A, B = lab[i - 1], lab[i]
        if kind != CROSSING:
            if A == B:
                rec(k + 1, lab[: i - 1] + lab[i + 1:], switches, graded, normal, next_label)
            return
        if A == B:
            return
        swapped = lab[:]
        swapped[i - 1], swapped[i] = B, A
        rec(k + 1, swapped, switches, graded, normal, next_label)
        x = d.event_objects[k]
        g = mu is not None and mu[x.upper_left] == mu[x.lower_left]
        if require_graded and not g:
            return
        pa = [p for p, l in enumerate(lab) if l == A]
        pb = [p for p, l in enumerate(lab) if l == B]
        nrm = not _interlaced(pa, pb)
        if require_normal and not nrm:
            return
        rec(k + 1, lab, switches + [cross_index[k]], graded and g, normal and nrm, next_label)

    rec(0, [], [], True, True, 0)
    results.sort(key=lambda r: (r.s, r.switches))
    return results


def _interlaced(pa: list[int], pb: list[int]) -> bool:
    (ta, ba), (tb, bb) = sorted(pa), sorted(pb)
    if ta > tb:
        ta, ba, tb, bb = tb, bb, ta, ba
    return ta < tb < ba < bb


def _assemble(d: FrontDiagram, switches: tuple[int, ...], graded: bool, normal: bool) -> Ruling:
    """Rebuild the eyes of a ruling from its switch set."""
    switched = {d.crossings[j].event for j in switches}
    lab: list[int] = []
    upper: dict[int, list[int]] = {}
    lower: dict[int, list[int]] = {}
    start: dict[int, int] = {}
    eyes = []
    nxt = 0
    for k, (kind, i) in enumerate(d.events):
        if kind == LEFT_CUSP:
            lab = lab[: i - 1] + [nxt, nxt] + lab[i - 1:]
            start[nxt] = k
            upper[nxt], lower[nxt] = [], []
            nxt += 1
        elif kind == CROSSING:
            if k not in switched:
                lab[i - 1], lab[i] = lab[i], lab[i - 1]
        else:
            e = lab[i - 1]
            eyes.append(Eye(start[e], k, tuple(upper[e]), tuple(lower[e])))
            lab = lab[: i - 1] + lab[i + 1:]
        arcs = d.slice_arcs[k + 1]
        for p, a in enumerate(arcs):
            e = lab[p]
            first = lab.index(e) == p
            path = upper[e] if first else lower[e]
            if not path or path[-1] != a:
                path.append(a)
    eyes.sort(key=lambda e: (e.left_cusp, e.right_cusp))
    return Ruling(switches, tuple(eyes), graded, normal)


@dataclass(frozen=True)
class RulingPolynomial:
    coefficients: tuple[tuple[int, int], ...]  # (exponent, coefficient), sorted
    convention: str = EXPONENT_CONVENTION

    def as_dict(self) -> dict[int, int]:
        return dict(self.coefficients)

    def to_json(self) -> dict:
        return {
            "coefficients": {str(e): c for e, c in self.coefficients},
            "convention": self.convention,
            "note": "exponent s-n equals minus the Euler characteristic of the filling surface",
        }

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(f"{c}*z^{e}" for e, c in self.coefficients)


def ruling_polynomial(rulings: list[Ruling], n: int | None = None) -> RulingPolynomial:
    """Sum of z^(s - n) over the given rulings.

    ``n`` defaults to each ruling's own eye count, which is the number of
    left cusps and so the same for every ruling of one front.
    """
    coeffs: dict[int, int] = {}
    for r in rulings:
        e = r.s - (r.n if n is None else n)
        coeffs[e] = coeffs.get(e, 0) + 1
    return RulingPolynomial(tuple(sorted(coeffs.items())))
