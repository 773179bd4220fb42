"""Triply graded homology of braid closures from Soergel bimodules.

Bimodules over a polynomial ring R are stored as free left R-modules with
matrices for the right action of each variable.  Rouquier complexes are
tensor products of the one-letter complexes

    T_i      = [R<-1> -> B_i]     (B_i in degree 0)
    T_i^{-1} = [B_i<1> -> R<1>]   (B_i<1> in degree 0)

and Hochschild homology comes from the Koszul complex of commutators,
computed one graded piece at a time with exact rational linear algebra.

Gradings.  All polynomial degrees are stored halved, so a variable has
degree 1, as does each Koszul generator; the shift <k> lowers degrees by k.
An element of H^i(HH_k) in halved degree h contributes a^{2k} q^{h-k} t^{k-i}.
q-exponents of normalized series can be half-integers and are stored doubled.

Coordinates.  The ring can be taken in the n strand variables x_i, or in
the n - 1 simple roots x_i - x_{i+1}.  Every bimodule in a Rouquier complex
is the root-variable bimodule tensored over Q with Q[x_1 + ... + x_n] acting
the same on both sides, so the strand-variable homology is the root-variable
homology times that of a single free strand, (1 + a^2 t)/(1 - q).  The
root variables are the default because the graded pieces are much smaller.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .diagram import BraidWord
from .homfly import LaurentAQ

MAX_STRANDS = 4
MAX_LETTERS = 8
DEFAULT_QMAX = 6
STRANDS = "strands"
ROOTS = "roots"


class SoergelError(ValueError):
    pass


class BraidTooLarge(SoergelError):
    pass


# ---------------------------------------------------------------------------
# Polynomials and polynomial matrices

Poly = dict  # exponent tuple -> Fraction, no zero coefficients


def p_const(c, r: int) -> Poly:
    c = Fraction(c)
    return {(0,) * r: c} if c else {}


def p_var(j: int, r: int) -> Poly:
    e = [0] * r
    e[j] = 1
    return {tuple(e): Fraction(1)}


def p_add(p: Poly, q: Poly, c=1) -> Poly:
    out = dict(p)
    for e, v in q.items():
        w = out.get(e, 0) + c * v
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


def p_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, v1 in p.items():
        for e2, v2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            w = out.get(e, 0) + v1 * v2
            if w:
                out[e] = w
            else:
                out.pop(e)
    return out


def p_scale(p: Poly, c) -> Poly:
    c = Fraction(c)
    return {e: v * c for e, v in p.items()} if c else {}


@dataclass(frozen=True)
class PMat:
    """Sparse matrix of polynomials: entries[(row, col)]."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict, hash=False, compare=False)

    def __eq__(self, other) -> bool:
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def get(self, i: int, j: int) -> Poly:
        return self.entries.get((i, j), {})

    @property
    def is_zero(self) -> bool:
        return not self.entries


def pm_from(rows: int, cols: int, entries) -> PMat:
    return PMat(rows, cols, {k: v for k, v in entries.items() if v})


def pm_identity(n: int, r: int) -> PMat:
    return pm_from(n, n, {(i, i): p_const(1, r) for i in range(n)})


def pm_scalar(n: int, p: Poly) -> PMat:
    return pm_from(n, n, {(i, i): dict(p) for i in range(n)})


def pm_mul(A: PMat, B: PMat) -> PMat:
    if A.cols != B.rows:
        raise SoergelError("matrix shapes do not compose")
    by_row: dict[int, list] = {}
    for (k, j), v in B.entries.items():
        by_row.setdefault(k, []).append((j, v))
    out: dict = {}
    for (i, k), u in A.entries.items():
        for j, v in by_row.get(k, ()):
            out[i, j] = p_add(out.get((i, j), {}), p_mul(u, v))
    return pm_from(A.rows, B.cols, out)


def pm_add(A: PMat, B: PMat, c=1) -> PMat:
    out = dict(A.entries)
    for k, v in B.entries.items():
        out[k] = p_add(out.get(k, {}), v, c)
    return pm_from(A.rows, A.cols, out)


def pm_scale(A: PMat, c) -> PMat:
    return pm_from(A.rows, A.cols, {k: p_scale(v, c) for k, v in A.entries.items()})


def pm_eval(p: Poly, mats: tuple[PMat, ...], n: int, r: int) -> PMat:
    """p(M_1, ..., M_r) for pairwise commuting n x n matrices."""
    out = pm_from(n, n, {})
    powers: dict[tuple[int, int], PMat] = {}

    def power(j: int, k: int) -> PMat:
        if k == 0:
            return pm_identity(n, r)
        if (j, k) not in powers:
            powers[j, k] = pm_mul(power(j, k - 1), mats[j])
        return powers[j, k]

    for e, c in sorted(p.items()):
        term = pm_identity(n, r)
        for j, k in enumerate(e):
            if k:
                term = pm_mul(term, power(j, k))
        out = pm_add(out, term, c)
    return out


# ---------------------------------------------------------------------------
# Coordinate systems on the polynomial ring


@dataclass(frozen=True)
class Coordinates:
    """Linear coordinates y_1..y_r with the simple reflections acting linearly.

    ``reflect[i][j]`` is s_{i+1}(y_j) and ``root[i]`` is x_{i+1} - x_{i+2},
    both as linear polynomials in the y's.
    """

    name: str
    strands: int
    r: int
    reflect: tuple
    root: tuple


@lru_cache(maxsize=None)
def coordinates(n: int, kind: str = ROOTS) -> Coordinates:
    if kind == STRANDS:
        r = n
        root = tuple(p_add(p_var(i, r), p_var(i + 1, r), -1) for i in range(n - 1))
        reflect = []
        for i in range(n - 1):
            row = []
            for j in range(r):
                k = i + 1 if j == i else i if j == i + 1 else j
                row.append(p_var(k, r))
            reflect.append(tuple(row))
        return Coordinates(kind, n, r, tuple(reflect), root)
    if kind == ROOTS:
        r = n - 1
        root = tuple(p_var(i, r) for i in range(r))
        reflect = []
        for i in range(r):
            row = []
            for j in range(r):
                if j == i:
                    row.append(p_scale(p_var(i, r), -1))
                elif abs(j - i) == 1:
                    row.append(p_add(p_var(j, r), p_var(i, r)))
                else:
                    row.append(p_var(j, r))
            reflect.append(tuple(row))
        return Coordinates(kind, n, r, tuple(reflect), root)
    raise SoergelError(f"unknown coordinates {kind!r}")


def _root_multiple(lin: Poly, root: Poly) -> Fraction:
    """c with lin = c * root, for linear forms known to be proportional."""
    if not lin:
        return Fraction(0)
    e, v = next(iter(sorted(root.items())))
    c = lin.get(e, 0) / v
    if p_add(lin, root, -c):
        raise SoergelError("linear form is not a multiple of the root")
    return c


# ---------------------------------------------------------------------------
# Bimodules


@dataclass(frozen=True)
class GradedBimodule:
    """Free left module with basis degrees and right-action matrices, one per variable."""

    coords: Coordinates
    degrees: tuple[int, ...]
    right: tuple[PMat, ...]
    label: str = ""

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def shift(self, k: int) -> "GradedBimodule":
        """M<k>: degrees lowered by k."""
        lab = f"{self.label}<{k}>" if k else self.label
        return GradedBimodule(self.coords, tuple(d - k for d in self.degrees), self.right, lab)

    def right_of(self, p: Poly) -> PMat:
        return pm_eval(p, self.right, self.rank, self.coords.r)

    def right_commute(self) -> bool:
        for A, B in itertools.combinations(self.right, 2):
            if pm_mul(A, B) != pm_mul(B, A):
                return False
        return True


def regular(c: Coordinates) -> GradedBimodule:
    return GradedBimodule(c, (0,), tuple(pm_scalar(1, p_var(j, c.r)) for j in range(c.r)), "R")


def bs_bimodule(c: Coordinates, i: int) -> GradedBimodule:
    """B_i = R (x)_{R^{s_i}} R with left basis 1(x)1 and 1(x)a, a = x_i - x_{i+1}.

    A linear form g splits as g = g+ + a g- with g+ invariant and g- constant,
    so (1(x)1) g = g+ (1(x)1) + g- (1(x)a) and (1(x)a) g = a^2 g- (1(x)1) + g+ (1(x)a).
    """
    a = c.root[i - 1]
    a2 = p_mul(a, a)
    mats = []
    for j in range(c.r):
        g = p_var(j, c.r)
        minus = _root_multiple(p_add(g, c.reflect[i - 1][j], -1), a) / 2
        plus = p_add(g, a, -minus)
        mats.append(pm_from(2, 2, {(0, 0): plus, (1, 0): p_const(minus, c.r), (0, 1): p_scale(a2, minus), (1, 1): plus}))
    return GradedBimodule(c, (0, 1), tuple(mats), f"B{i}")


def invariant_forms(c: Coordinates, i: int) -> list[Poly]:
    """A basis of the s_i-invariant linear forms."""
    out = []
    for j in range(c.r):
        g = p_var(j, c.r)
        minus = _root_multiple(p_add(g, c.reflect[i - 1][j], -1), c.root[i - 1]) / 2
        out.append(p_add(g, c.root[i - 1], -minus))
    return [g for g in out if g]


def acts_symmetrically(M: GradedBimodule, forms: list[Poly]) -> bool:
    """Left and right multiplication by each form agree on M."""
    return all(M.right_of(g) == pm_scalar(M.rank, g) for g in forms)


def tensor(M: GradedBimodule, N: GradedBimodule) -> GradedBimodule:
    """M (x)_R N with basis e_a (x) f_b indexed b * rank(M) + a."""
    r, m = M.coords.r, M.rank
    degs = tuple(dm + dn for dn in N.degrees for dm in M.degrees)
    mats = []
    for j in range(r):
        out: dict = {}
        for (cidx, b), p in N.right[j].entries.items():
            blk = M.right_of(p)
            for (u, v), q in blk.entries.items():
                out[cidx * m + u, b * m + v] = q
        mats.append(pm_from(len(degs), len(degs), out))
    lab = f"{M.label}{N.label}" if M.label != "R" else N.label
    return GradedBimodule(M.coords, degs, tuple(mats), lab or "R")


def direct_sum(Ms: list[GradedBimodule], c: Coordinates) -> GradedBimodule:
    degs: list[int] = []
    mats: list[dict] = [dict() for _ in range(c.r)]
    off = 0
    for M in Ms:
        for j in range(c.r):
            for (u, v), p in M.right[j].entries.items():
                mats[j][off + u, off + v] = p
        degs.extend(M.degrees)
        off += M.rank
    n = len(degs)
    return GradedBimodule(c, tuple(degs), tuple(pm_from(n, n, m) for m in mats), "+".join(M.label for M in Ms))


def is_bimodule_map(phi: PMat, M: GradedBimodule, N: GradedBimodule) -> bool:
    """phi commutes with the right action (left linearity is built in)."""
    for j in range(M.coords.r):
        if pm_mul(phi, M.right[j]) != pm_mul(N.right[j], phi):
            return False
    return True


def is_homogeneous(phi: PMat, M: GradedBimodule, N: GradedBimodule) -> bool:
    for (b, a), p in phi.entries.items():
        for e in p:
            if sum(e) != M.degrees[a] - N.degrees[b]:
                return False
    return True


# ---------------------------------------------------------------------------
# Rouquier complexes


@dataclass
class RouquierComplex:
    """Bounded complex: terms[i] in cohomological degree i, diffs[i]: terms[i] -> terms[i+1]."""

    coords: Coordinates
    terms: dict[int, GradedBimodule]
    diffs: dict[int, PMat]
    writhe: int = 0

    @property
    def degrees(self) -> range:
        return range(min(self.terms), max(self.terms) + 1)

    def diff(self, i: int) -> PMat:
        M, N = self.terms.get(i), self.terms.get(i + 1)
        if i in self.diffs:
            return self.diffs[i]
        return pm_from(N.rank if N else 0, M.rank if M else 0, {})

    def check(self) -> list[str]:
        errs = []
        for i in self.degrees:
            if i in self.diffs and i + 1 in self.diffs:
                if not pm_mul(self.diffs[i + 1], self.diffs[i]).is_zero:
                    errs.append(f"d^{i + 1} d^{i} != 0")
            if i in self.diffs:
                M, N = self.terms[i], self.terms[i + 1]
                if not is_bimodule_map(self.diffs[i], M, N):
                    errs.append(f"d^{i} is not a bimodule map")
                if not is_homogeneous(self.diffs[i], M, N):
                    errs.append(f"d^{i} is not of degree 0")
        for i, M in self.terms.items():
            if not M.right_commute():
                errs.append(f"right actions on term {i} do not commute")
        return errs


def unit_complex(c: Coordinates) -> RouquierComplex:
    return RouquierComplex(c, {0: regular(c)}, {})


def crossing_complex(c: Coordinates, letter: int) -> RouquierComplex:
    i = abs(letter)
    R, B = regular(c), bs_bimodule(c, i)
    a = c.root[i - 1]
    one = p_const(1, c.r)
    if letter > 0:
        # 1 -> a(1(x)1) + 1(x)a
        d = pm_from(2, 1, {(0, 0): a, (1, 0): one})
        return RouquierComplex(c, {-1: R.shift(-1), 0: B}, {-1: d}, 1)
    # multiplication: 1(x)1 -> 1, 1(x)a -> a
    d = pm_from(1, 2, {(0, 0): one, (0, 1): a})
    return RouquierComplex(c, {0: B.shift(1), 1: R.shift(1)}, {0: d}, -1)


def _block_place(out: dict, blk: PMat, r0: int, c0: int, sign: int) -> None:
    for (u, v), p in blk.entries.items():
        out[r0 + u, c0 + v] = p_add(out.get((r0 + u, c0 + v), {}), p, sign)


def tensor_complexes(C: RouquierComplex, D: RouquierComplex) -> RouquierComplex:
    """Total complex of C (x)_R D with d(a (x) b) = da (x) b + (-1)^|a| a (x) db."""
    c = C.coords
    parts: dict[int, list[tuple[int, int]]] = {}
    for i in sorted(C.terms):
        for j in sorted(D.terms):
            parts.setdefault(i + j, []).append((i, j))
    terms, offsets = {}, {}
    for k, lst in parts.items():
        off = 0
        for i, j in lst:
            offsets[i, j] = off
            off += C.terms[i].rank * D.terms[j].rank
        terms[k] = direct_sum([tensor(C.terms[i], D.terms[j]) for i, j in lst], c)
    diffs = {}
    for k in parts:
        if k + 1 not in parts:
            continue
        out: dict = {}
        for i, j in parts[k]:
            M, N = C.terms[i], D.terms[j]
            col = offsets[i, j]
            if i in C.diffs:
                # d_C (x) 1: block diagonal over the basis of N
                Mi, Mo = M.rank, C.terms[i + 1].rank
                row = offsets[i + 1, j]
                for b in range(N.rank):
                    _block_place(out, C.diffs[i], row + b * Mo, col + b * Mi, 1)
            if j in D.diffs:
                # 1 (x) d_D: block (c, b) is the entry evaluated on the right of M
                row = offsets[i, j + 1]
                m = M.rank
                sign = -1 if i % 2 else 1
                for (cc, b), p in D.diffs[j].entries.items():
                    _block_place(out, M.right_of(p), row + cc * m, col + b * m, sign)
        diffs[k] = pm_from(terms[k + 1].rank, terms[k].rank, out)
    return RouquierComplex(c, terms, diffs, C.writhe + D.writhe)


def check_bounds(b: BraidWord) -> None:
    if b.strands > MAX_STRANDS or len(b.letters) > MAX_LETTERS:
        raise BraidTooLarge(f"braid exceeds the supported size ({MAX_STRANDS} strands, {MAX_LETTERS} letters)")


def rouquier_complex(b: BraidWord, kind: str = ROOTS) -> RouquierComplex:
    check_bounds(b)
    c = coordinates(b.strands, kind)
    T = unit_complex(c)
    for a in b.letters:
        T = tensor_complexes(T, crossing_complex(c, a))
    T.writhe = b.writhe
    return T


# ---------------------------------------------------------------------------
# Graded pieces and Hochschild homology


@lru_cache(maxsize=None)
def monomials(r: int, d: int) -> tuple[tuple[int, ...], ...]:
    if d < 0:
        return ()
    out = []
    for combo in itertools.combinations_with_replacement(range(r), d):
        e = [0] * r
        for j in combo:
            e[j] += 1
        out.append(tuple(e))
    return tuple(sorted(out))


class _Piece:
    """Basis of the Koszul term (M (x) Lambda^k)_h: triples (subset, basis index, monomial)."""

    def __init__(self, M: GradedBimodule, k: int, h: int):
        r = M.coords.r
        self.index: dict = {}
        self.subsets = list(itertools.combinations(range(r), k))
        for S in self.subsets:
            for a, d in enumerate(M.degrees):
                for mono in monomials(r, h - k - d):
                    self.index[S, a, mono] = len(self.index)

    def __len__(self) -> int:
        return len(self.index)


def _apply(phi: PMat, src: _Piece, dst: _Piece, S_src, S_dst, sign: int, out: dict) -> None:
    """Add the matrix of v -> sign * phi(v) from the S_src part of src to the S_dst part of dst."""
    cols: dict[int, list] = {}
    for (b, a), p in phi.entries.items():
        cols.setdefault(a, []).append((b, p))
    for (S, a, mono), col in src.index.items():
        if S != S_src:
            continue
        for b, p in cols.get(a, ()):
            for e, v in p.items():
                key = (S_dst, b, tuple(x + y for x, y in zip(mono, e)))
                row = dst.index.get(key)
                if row is None:
                    raise SoergelError("map leaves the graded piece")
                rowd = out.setdefault(row, {})
                w = rowd.get(col, 0) + sign * v
                if w:
                    rowd[col] = w
                else:
                    rowd.pop(col)


def _dm(out: dict, shape: tuple[int, int]) -> DomainMatrix:
    return DomainMatrix({i: {j: QQ(v.numerator, v.denominator) for j, v in row.items()} for i, row in out.items() if row}, shape, QQ)


class _Koszul:
    """Koszul differentials and the induced maps of a complex, one graded piece at a time."""

    def __init__(self, T: RouquierComplex):
        self.T = T
        c = T.coords
        self.comm: dict[int, list[PMat]] = {}
        for i, M in T.terms.items():
            self.comm[i] = [pm_add(pm_scalar(M.rank, p_var(j, c.r)), M.right[j], -1) for j in range(c.r)]
        self._pieces: dict = {}

    def piece(self, i: int, k: int, h: int) -> _Piece:
        key = (i, k, h)
        if key not in self._pieces:
            self._pieces[key] = _Piece(self.T.terms[i], k, h)
        return self._pieces[key]

    def d_hoch(self, i: int, k: int, h: int) -> DomainMatrix:
        """(M (x) Lambda^k)_h -> (M (x) Lambda^{k-1})_h."""
        src = self.piece(i, k, h)
        dst = self.piece(i, k - 1, h) if k >= 1 else None
        if dst is None:
            return DomainMatrix({}, (0, len(src)), QQ)
        out: dict = {}
        for S in src.subsets:
            for pos, j in enumerate(S):
                S2 = S[:pos] + S[pos + 1:]
                _apply(self.comm[i][j], src, dst, S, S2, -1 if pos % 2 else 1, out)
        return _dm(out, (len(dst), len(src)))

    def d_rouq(self, i: int, k: int, h: int) -> DomainMatrix:
        src = self.piece(i, k, h)
        if i + 1 not in self.T.terms:
            return DomainMatrix({}, (0, len(src)), QQ)
        dst = self.piece(i + 1, k, h)
        out: dict = {}
        for S in src.subsets:
            _apply(self.T.diff(i), src, dst, S, S, 1, out)
        return _dm(out, (len(dst), len(src)))


def _rank(m: DomainMatrix) -> int:
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0
    return m.rank()


def _kernel(m: DomainMatrix) -> DomainMatrix:
    """Columns spanning the kernel."""
    n = m.shape[1]
    if n == 0:
        return DomainMatrix({}, (0, 0), QQ)
    if m.shape[0] == 0:
        return DomainMatrix({j: {j: QQ(1)} for j in range(n)}, (n, n), QQ)
    return m.nullspace().transpose()


def _hcat(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.shape[1] == 0:
        return b
    if b.shape[1] == 0:
        return a
    return a.hstack(b)


def _image(m: DomainMatrix, basis: DomainMatrix) -> DomainMatrix:
    if basis.shape[1] == 0 or m.shape[0] == 0:
        return DomainMatrix({}, (m.shape[0], 0), QQ)
    return m * basis


def hochschild_homology(T: RouquierComplex, h: int, k: int, K: _Koszul | None = None) -> dict[int, int]:
    """dim H^i(HH_k(T)) in halved polynomial degree h, for each cohomological degree i."""
    K = K or _Koszul(T)
    out = {}
    for i in T.degrees:
        n_here = len(K.piece(i, k, h))
        if n_here == 0:
            continue
        Z = _kernel(K.d_hoch(i, k, h))
        if Z.shape[1] == 0:
            continue
        B_here = K.d_hoch(i, k + 1, h) if k + 1 <= T.coords.r else DomainMatrix({}, (n_here, 0), QQ)
        # cycles whose image is a boundary
        if i + 1 in T.terms:
            B_next = K.d_hoch(i + 1, k + 1, h) if k + 1 <= T.coords.r else DomainMatrix({}, (len(K.piece(i + 1, k, h)), 0), QQ)
            dZ = _image(K.d_rouq(i, k, h), Z)
            rb = _rank(B_next)
            kept = Z.shape[1] - (_rank(_hcat(dZ, B_next)) - rb)
        else:
            kept = Z.shape[1]
        # boundaries plus images of cycles from degree i - 1
        if i - 1 in T.terms and len(K.piece(i - 1, k, h)):
            Zp = _kernel(K.d_hoch(i - 1, k, h))
            dZp = _image(K.d_rouq(i - 1, k, h), Zp)
        else:
            dZp = DomainMatrix({}, (n_here, 0), QQ)
        dim = kept - _rank(_hcat(B_here, dZp))
        if dim:
            out[i] = dim
    return out


def hochschild_table(T: RouquierComplex, hmax: int, hmin: int | None = None) -> dict[tuple[int, int, int], int]:
    """dim H^i(HH_k(T))_h for all h in [hmin, hmax + k], keyed by (i, k, h)."""
    K = _Koszul(T)
    if hmin is None:
        hmin = min(min(M.degrees) for M in T.terms.values())
    out = {}
    for k in range(T.coords.r + 1):
        for h in range(hmin + k, hmax + k + 1):
            for i, d in hochschild_homology(T, h, k, K).items():
                out[i, k, h] = d
    return out


def hochschild_series(T: RouquierComplex, qmax: int) -> dict[tuple[int, int], dict[int, int]]:
    """dim H^i(HH_k(T)) by q-degree h - k <= qmax, keyed by (i, k)."""
    out: dict = {}
    for (i, k, h), dim in sorted(hochschild_table(T, qmax).items()):
        out.setdefault((i, k), {})[h - k] = dim
    return out


# ---------------------------------------------------------------------------
# Series


@dataclass(frozen=True)
class TriplySeries:
    """Power series in a, q^{1/2}, t, complete for q-exponents up to ``qmax``.

    ``terms`` maps (a-exponent, doubled q-exponent, t-exponent) to coefficients.
    """

    terms: tuple[tuple[tuple[int, int, int], int], ...]
    qmax: int

    @staticmethod
    def make(d: dict, qmax: int) -> "TriplySeries":
        return TriplySeries(tuple(sorted((k, v) for k, v in d.items() if v and k[1] <= 2 * qmax)), qmax)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def times(self, other: "TriplySeries") -> "TriplySeries":
        out: dict = {}
        for (a1, q1, t1), c1 in self.terms:
            for (a2, q2, t2), c2 in other.terms:
                key = (a1 + a2, q1 + q2, t1 + t2)
                out[key] = out.get(key, 0) + c1 * c2
        return TriplySeries.make(out, min(self.qmax + other.min_q2() / 2, other.qmax + self.min_q2() / 2))

    def min_q2(self) -> int:
        return min((k[1] for k, _ in self.terms), default=0)

    def shifted(self, a: int, q2: int, qmax: int | None = None) -> "TriplySeries":
        """Multiply by a^a q^{q2/2}."""
        d = {(x + a, y + q2, t): c for (x, y, t), c in self.terms}
        return TriplySeries.make(d, self.qmax + q2 / 2 if qmax is None else qmax)

    def truncated(self, qmax) -> "TriplySeries":
        return TriplySeries.make(self.as_dict(), qmax)

    def to_json(self) -> dict:
        return {"series": [[a, q2, t, c] for (a, q2, t), c in self.terms], "truncation_q": self.qmax}

    def __str__(self) -> str:
        parts = []
        for (a, q2, t), c in self.terms:
            q = f"{q2 // 2}" if q2 % 2 == 0 else f"{q2}/2"
            parts.append(f"{c}*a^{a}*q^{q}*t^{t}")
        return " + ".join(parts) or "0"


def free_strand_series(qmax: int) -> TriplySeries:
    """(1 + a^2 t) / (1 - q)."""
    d = {}
    for j in range(qmax + 1):
        d[0, 2 * j, 0] = 1
        d[2, 2 * j, 1] = 1
    return TriplySeries.make(d, qmax)


def bracket_series(b: BraidWord, qmax: int = DEFAULT_QMAX, kind: str = ROOTS) -> TriplySeries:
    """[H^*(HH_*(T_b))]_{a,q,t}, before normalization, complete up to q^qmax."""
    T = rouquier_complex(b, kind)
    if T.check():
        raise SoergelError("; ".join(T.check()))
    # q = h - k, so h - k <= qmax suffices
    table = hochschild_table(T, qmax)
    d = {}
    for (i, k, h), dim in table.items():
        key = (2 * k, 2 * (h - k), k - i)
        d[key] = d.get(key, 0) + dim
    S = TriplySeries.make(d, qmax)
    if kind == ROOTS:
        S = S.times(free_strand_series(qmax - S.min_q2() // 2 if S.min_q2() < 0 else qmax)).truncated(qmax)
    return S


def khr_series(b: BraidWord, qmax: int = DEFAULT_QMAX, kind: str = ROOTS) -> TriplySeries:
    """Normalized series (a q^{-1/2})^{w - n} [H^*(HH_*(T_b))], complete up to q^qmax."""
    shift = b.writhe - b.strands
    # the prefactor lowers q by shift / 2, so compute the bracket further out
    inner = qmax + (shift + 1) // 2 if shift > 0 else qmax
    S = bracket_series(b, max(inner, 0), kind)
    return S.shifted(shift, -shift, qmax).truncated(qmax)


def specialize_t(S: TriplySeries, t: int = -1) -> dict[tuple[int, int], int]:
    """Substitute a value for t: (a-exponent, doubled q-exponent) -> coefficient."""
    out: dict = {}
    for (a, q2, e), c in S.terms:
        out[a, q2] = out.get((a, q2), 0) + c * t**e
    return {k: v for k, v in sorted(out.items()) if v}


def homfly_as_series(P: LaurentAQ, qmax: int) -> dict[tuple[int, int], int]:
    """Expand a HOMFLY value in (a, s) with s = q^{1/2} as a power series in s, up to q^qmax.

    1/(s - s^{-1})^d = (-s)^d * sum_j C(d + j - 1, j) s^{2j}.
    """
    from math import comb

    d = P.den
    out: dict = {}
    lim = 2 * qmax
    for (ai, si), c in P.terms:
        base = si + d
        j = 0
        while base + 2 * j <= lim:
            key = (ai, base + 2 * j)
            if d == 0:
                out[key] = out.get(key, 0) + c
                break
            out[key] = out.get(key, 0) + c * (-1) ** d * comb(d + j - 1, j)
            j += 1
    return {k: v for k, v in sorted(out.items()) if v}


# ---------------------------------------------------------------------------
# Closed form for B_i on two strands, used as an oracle
