"""HOMFLY polynomials of braid closures and the lowest-a ruling identity.

Conventions: a P(L-) - a^{-1} P(L+) = z P(L0) with z = s - s^{-1}, s = q^{1/2},
where L+ carries a positive braid letter, and P(unknot) = (a - a^{-1}) / z, so
the empty link has value 1. With this choice the closure of a positive braid
with n strands and w letters has lowest a-degree w - n.

The main route is the Hecke algebra with the Ocneanu trace. A second,
unrelated route resolves crossings of the closed braid diagram until it is
descending; the two are compared in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .diagram import BraidWord

INTRO = "intro"
THEOREM = "theorem"
# only the intro sign (-a q^{-1/2})^{n-w} makes the lowest-a coefficient agree
# with the ruling sum when w - n is odd
DEFAULT_SIGN_CONVENTION = INTRO


# ---------------------------------------------------------------------------
# Laurent polynomials in a and z


class AZ:
    """Laurent polynomial in a and z with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], int] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c: int) -> "AZ":
        return cls({(0, 0): c})

    @classmethod
    def mono(cls, i: int, j: int, c: int = 1) -> "AZ":
        return cls({(i, j): c})

    def __add__(self, other: "AZ") -> "AZ":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return AZ(t)

    def __neg__(self) -> "AZ":
        return AZ({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "AZ") -> "AZ":
        return self + (-other)

    def __mul__(self, other: "AZ | int") -> "AZ":
        if isinstance(other, int):
            return AZ({k: v * other for k, v in self.terms.items()})
        t: dict[tuple[int, int], int] = {}
        for (i1, j1), v1 in self.terms.items():
            for (i2, j2), v2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                t[k] = t.get(k, 0) + v1 * v2
        return AZ(t)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AZ) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*a^{i}*z^{j}" for (i, j), v in sorted(self.terms.items()))


A = AZ.mono(1, 0)
A_INV = AZ.mono(-1, 0)
Z = AZ.mono(0, 1)
ONE = AZ.const(1)
# Hecke generators g = a^{-1} sigma satisfy g - g^{-1} = -z
ZETA = AZ.mono(0, 1, -1)
UNKNOT = AZ({(1, -1): 1, (-1, -1): -1})


def _binomial_row(n: int) -> list[int]:
    row = [1]
    for k in range(n):
        row.append(row[-1] * (n - k) // (k + 1))
    return row


@dataclass(frozen=True)
class LaurentAQ:
    """A HOMFLY-type value: numerator in a and s over (s - s^{-1})^den.

    ``terms`` maps (a-exponent, s-exponent) to integer coefficients; ``den``
    is minimal. ``az`` keeps the same value as a Laurent polynomial in a and
    z = s - s^{-1}, which is the canonical form used for equality.
    """

    terms: tuple[tuple[tuple[int, int], int], ...]
    den: int
    az: AZ

    @classmethod
    def from_az(cls, p: AZ) -> "LaurentAQ":
        den = max([0] + [-j for (_, j) in p.terms])
        num: dict[tuple[int, int], int] = {}
        for (i, j), c in p.terms.items():
            e = j + den
            for k, b in enumerate(_binomial_row(e)):
                key = (i, e - 2 * k)
                num[key] = num.get(key, 0) + c * b * (-1) ** k
        num = {k: v for k, v in num.items() if v}
        return cls(tuple(sorted(num.items())), den, p)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentAQ) and self.az == other.az

    def __hash__(self) -> int:
        return hash(self.az)

    def a_coefficient(self, i: int) -> dict[int, int]:
        """z-expansion of the coefficient of a^i."""
        return {j: c for (ii, j), c in self.az.terms.items() if ii == i}

    def min_a_degree(self) -> int:
        return min(i for (i, _) in self.az.terms)

    def evaluate(self, a: Fraction, s: Fraction) -> Fraction:
        z = s - 1 / s
        return sum((Fraction(c) * Fraction(a) ** i * z**j for (i, j), c in self.az.terms.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "numerator": [{"a": i, "s": j, "c": c} for (i, j), c in self.terms],
            "denominator_power": self.den,
            "az": [{"a": i, "z": j, "c": c} for (i, j), c in sorted(self.az.terms.items())],
        }

    def __str__(self) -> str:
        num = " + ".join(f"{c}*a^{i}*s^{j}" for (i, j), c in self.terms) or "0"
        return f"({num})/(s - s^-1)^{self.den}" if self.den else num


# ---------------------------------------------------------------------------
# Hecke algebra route


def _compose(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x[y[k]] for k in range(len(y)))


def _swap(n: int, i: int) -> tuple[int, ...]:
    p = list(range(n))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def _length(w: tuple[int, ...]) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def _inverse(w: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(w)
    for k, v in enumerate(w):
        inv[v] = k
    return tuple(inv)


Hecke = dict  # permutation tuple -> AZ


def _hadd(h: Hecke, w: tuple[int, ...], c: AZ) -> None:
    v = h.get(w)
    v = c if v is None else v + c
    if v.is_zero():
        h.pop(w, None)
    else:
        h[w] = v


def _right_mul(h: Hecke, i: int) -> Hecke:
    """h * g_i with g^2 = ZETA g + 1."""
    out: Hecke = {}
    for w, c in h.items():
        ws = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
        if w[i] < w[i + 1]:
            _hadd(out, ws, c)
        else:
            _hadd(out, w, c * ZETA)
            _hadd(out, ws, c)
    return out


def _left_mul(h: Hecke, i: int) -> Hecke:
    out: Hecke = {}
    for w, c in h.items():
        sw = tuple(i + 1 if v == i else i if v == i + 1 else v for v in w)
        inv = _inverse(w)
        if inv[i] < inv[i + 1]:
            _hadd(out, sw, c)
        else:
            _hadd(out, w, c * ZETA)
            _hadd(out, sw, c)
    return out


@lru_cache(maxsize=None)
def _trace_basis(w: tuple[int, ...]) -> AZ:
    """Ocneanu trace of T_w, with tr(x g_{n-1}) = a^{-1} tr(x) and a free strand giving P(unknot)."""
    n = len(w)
    if n == 0:
        return ONE
    if w[n - 1] == n - 1:
        return UNKNOT * _trace_basis(w[: n - 1])
    # w = u * (s_{n-2} s_{n-3} ... s_j) in 0-based generators, u fixing n-1
    for j in range(n - 2, -1, -1):
        c = tuple(range(n))
        for g in range(n - 2, j - 1, -1):
            c = _compose(c, _swap(n, g))
        u = _compose(w, _inverse(c))
        if u[n - 1] == n - 1:
            break
    else:  # pragma: no cover
        raise AssertionError("coset decomposition failed")
    assert _length(u) + (n - 1 - j) == _length(w)
    h: Hecke = {u[: n - 1]: ONE}
    for g in range(j, n - 2):
        h = _left_mul(h, g)
    total = AZ()
    for v, coeff in h.items():
        total = total + coeff * _trace_basis(v)
    return total * A_INV


def homfly(b: BraidWord) -> LaurentAQ:
    """HOMFLY polynomial of the closure of ``b`` (Hecke algebra route)."""
    n = b.strands
    h: Hecke = {tuple(range(n)): ONE}
    for letter in b.letters:
        i = abs(letter) - 1
        if letter > 0:
            h = _right_mul(h, i)
        else:  # g^{-1} = g - ZETA
            hg = _right_mul(h, i)
            for w, c in h.items():
                _hadd(hg, w, -(c * ZETA))
            h = hg
    total = AZ()
    for w, c in h.items():
        total = total + c * _trace_basis(w)
    return LaurentAQ.from_az(total * AZ.mono(b.writhe, 0))


# ---------------------------------------------------------------------------
# Descending-diagram route


def _trace_components(n: int, letters: tuple[int, ...]):
    """Walk each component of the closure from its top-most starting strand.

    Yields, per component, the sequence of (letter index, strand went over?).
    """
    seen_start: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen_start:
            continue
        walk = []
        pos = start
        while True:
            seen_start.add(pos)
            for k, letter in enumerate(letters):
                i = abs(letter) - 1
                if pos == i:
                    walk.append((k, letter > 0))
                    pos = i + 1
                elif pos == i + 1:
                    walk.append((k, letter < 0))
                    pos = i
            if pos == start:
                break
        comps.append(walk)
    return comps


def homfly_skein(b: BraidWord) -> LaurentAQ:
    """HOMFLY polynomial by switching crossings until the diagram is descending."""

    @lru_cache(maxsize=None)
    def framed(n: int, letters: tuple[int, ...]) -> AZ:
        comps = _trace_components(n, letters)
        visited: set[int] = set()
        for walk in comps:
            for k, over in walk:
                if k in visited:
                    continue
                visited.add(k)
                if not over:
                    # the framed invariant R = a^{-writhe} P obeys R+ - R- = -z R0
                    flipped = letters[:k] + (-letters[k],) + letters[k + 1:]
                    smoothed = letters[:k] + letters[k + 1:]
                    sign = 1 if letters[k] > 0 else -1
                    return framed(n, flipped) - Z * framed(n, smoothed) * sign
        w = sum(1 if x > 0 else -1 for x in letters)
        out = AZ.mono(-w, 0)
        for _ in comps:
            out = out * UNKNOT
        return out

    return LaurentAQ.from_az(framed(b.strands, b.letters) * AZ.mono(b.writhe, 0))


# ---------------------------------------------------------------------------
# Rational functions of q with a pure power of (q - 1) as denominator


@dataclass(frozen=True)
class QRational:
    """numerator(q) / (q - 1)^den with numerator a Laurent polynomial in q.

    Exponents of q are Fractions so half-integral powers can be represented
    before they cancel; ``den`` is minimal.
    """

    numerator: tuple[tuple[Fraction, int], ...]
    den: int

    @classmethod
    def make(cls, num: dict[Fraction, int], den: int) -> "QRational":
        num = {Fraction(k): v for k, v in num.items() if v}
        while den > 0 and num and sum(num.values()) == 0:
            # divide by (q - 1): synthetic division along each residue class of exponents
            out: dict[Fraction, int] = {}
            by_class: dict[Fraction, list[Fraction]] = {}
            for e in num:
                by_class.setdefault(e - (e.numerator // e.denominator), []).append(e)
            ok = True
            for frac, exps in by_class.items():
                lo = min(exps)
                hi = max(exps)
                coeffs = [num.get(lo + k, 0) for k in range(int(hi - lo) + 1)]
                if sum(coeffs) != 0:
                    ok = False
                    break
                # coeffs(q) = (q - 1) * quotient(q), in ascending order
                acc = 0
                for k in range(len(coeffs) - 1):
                    acc -= coeffs[k]
                    if acc:
                        out[lo + k] = out.get(lo + k, 0) + acc
            if not ok:
                break
            num = out
            den -= 1
        if not num:
            den = 0
        return cls(tuple(sorted(num.items())), den)

    def __add__(self, other: "QRational") -> "QRational":
        d = max(self.den, other.den)
        return QRational.make(_add_dicts(_times_qm1(dict(self.numerator), d - self.den),
                                         _times_qm1(dict(other.numerator), d - other.den)), d)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QRational) and self.numerator == other.numerator and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.numerator, self.den))

    def evaluate(self, q: int | Fraction) -> Fraction:
        q = Fraction(q)
        total = Fraction(0)
        for e, c in self.numerator:
            if e.denominator != 1:
                raise ValueError("half-integral power of q cannot be evaluated exactly")
            total += c * q ** int(e)
        return total / (q - 1) ** self.den

    def to_json(self) -> dict:
        return {"numerator": {str(e): c for e, c in self.numerator}, "q_minus_1_power": -self.den}

    def __str__(self) -> str:
        num = " + ".join(f"{c}*q^{e}" for e, c in self.numerator) or "0"
        return f"({num})/(q-1)^{self.den}" if self.den else num


def _add_dicts(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) + v
    return out


def _times_qm1(num: dict[Fraction, int], power: int) -> dict[Fraction, int]:
    for _ in range(power):
        out: dict[Fraction, int] = {}
        for e, c in num.items():
            out[e + 1] = out.get(e + 1, 0) + c
            out[e] = out.get(e, 0) - c
        num = {k: v for k, v in out.items() if v}
    return num


def _z_power(j: int, shift: Fraction) -> QRational:
    """q^shift * z^j with z = q^{1/2} - q^{-1/2} = q^{-1/2} (q - 1)."""
    base = {Fraction(shift) - Fraction(j, 2): 1}
    if j >= 0:
        return QRational.make(_times_qm1(base, j), 0)
    return QRational.make(base, -j)


def lowest_a_coefficient(P: LaurentAQ, n: int, w: int, convention: str = DEFAULT_SIGN_CONVENTION) -> QRational:
    """Coefficient of a^{w-n} in P, times q^{(w-n)/2} (and (-1)^{n-w} under the intro convention)."""
    if convention not in (INTRO, THEOREM):
        raise ValueError(f"unknown sign convention {convention!r}")
    coeff = P.a_coefficient(w - n)
    if not coeff:
        raise ValueError(f"no a^{w - n} term; the braid is not positive or the polynomial is wrong")
    sign = -1 if convention == INTRO and (n - w) % 2 else 1
    total = QRational.make({}, 0)
    for j, c in coeff.items():
        t = _z_power(j, Fraction(w - n, 2))
        total = total + QRational(tuple((e, c * sign * v) for e, v in t.numerator), t.den)
    return total


def rutherford_sum(rulings, w: int, n: int) -> QRational:
    """q^{(w-n)/2} * sum over rulings of (q^{1/2} - q^{-1/2})^{s-n}."""
    total = QRational.make({}, 0)
    for r in rulings:
        total = total + _z_power(r.s - n, Fraction(w - n, 2))
    return total
