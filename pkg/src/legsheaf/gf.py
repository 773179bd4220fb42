"""Exact linear algebra over small prime fields.

Matrices are numpy int64 arrays with entries reduced into ``range(p)``.
Everything here is deliberately small-scale: the matrices that occur in
the sheaf computations are a few rows and columns, while the ones in the
Ext computations have a few thousand entries at most.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

SUPPORTED_PRIMES = (2, 3, 5)


class FqField:
    """The prime field F_p for p in {2, 3, 5}."""

    def __init__(self, p: int):
        if p not in SUPPORTED_PRIMES:
            raise ValueError(f"unsupported field size {p}; expected one of {SUPPORTED_PRIMES}")
        self.p = p
        self.elements = tuple(range(p))
        self.units = tuple(range(1, p))
        self.inverse = {a: pow(a, p - 2, p) for a in self.units}

    @property
    def q(self) -> int:
        return self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.inverse[a % self.p]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FqField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("FqField", self.p))

    def __repr__(self) -> str:
        return f"FqField({self.p})"


def mat(rows, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    return a % p


def zeros(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0 or b.shape[0] == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    if p == 2 and m.shape[0] * m.shape[1] > 4096:
        return _rank_gf2(m)
    return len(rref(m, p)[1])


def _rank_gf2(m: np.ndarray) -> int:
    """Rank over F_2 with rows packed into Python integers."""
    packed = np.packbits((m % 2).astype(np.uint8), axis=1)
    pivots: dict[int, int] = {}
    for row in packed:
        v = int.from_bytes(row.tobytes(), "big")
        while v:
            h = v.bit_length() - 1
            if h in pivots:
                v ^= pivots[h]
            else:
                pivots[h] = v
                break
    return len(pivots)


def nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Basis of {v : m v = 0} as the columns of the returned matrix."""
    rows, cols = m.shape
    if cols == 0:
        return zeros(0, 0)
    if rows == 0:
        return eye(cols)
    r, piv = rref(m, p)
    free = [c for c in range(cols) if c not in piv]
    basis = zeros(cols, len(free))
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(piv):
            basis[pc, j] = (-r[i, f]) % p
    return basis


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([m % p, eye(n)], axis=1)
    r, piv = rref(aug, p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return r[:, n:].copy()


def is_injective(m: np.ndarray, p: int) -> bool:
    return rank(m, p) == m.shape[1]


def is_surjective(m: np.ndarray, p: int) -> bool:
    return rank(m, p) == m.shape[0]


def solve_affine(a: np.ndarray, b: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray] | None:
    """Solve a x = b for a column vector x.

    Returns (particular solution, kernel basis) or None when inconsistent.
    """
    rows, cols = a.shape
    aug = np.concatenate([a % p, b.reshape(rows, 1) % p], axis=1)
    r, piv = rref(aug, p)
    if cols in piv:
        return None
    x = zeros(cols, 1)
    for i, pc in enumerate(piv):
        x[pc, 0] = r[i, cols]
    return x[:, 0], nullspace(a, p)


def colspace_key(m: np.ndarray, p: int) -> tuple:
    """Canonical hashable key of the column space of m."""
    if m.shape[1] == 0:
        return (m.shape[0], ())
    r, piv = rref(m.T, p)
    return (m.shape[0], tuple(map(tuple, r[: len(piv)].tolist())))


def rowspace_key(m: np.ndarray, p: int) -> tuple:
    return colspace_key(m.T, p)


def colspace_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis (RREF-transposed) of the column space of m."""
    if m.shape[1] == 0:
        return zeros(m.shape[0], 0)
    r, piv = rref(m.T, p)
    return r[: len(piv)].T.copy()


def key(m: np.ndarray) -> tuple:
    return (m.shape, tuple(m.ravel().tolist()))


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


@lru_cache(maxsize=None)
def _gl_elements(n: int, p: int) -> tuple:
    if n == 0:
        return (zeros(0, 0),)
    out = []
    for entries in itertools.product(range(p), repeat=n * n):
        m = np.array(entries, dtype=np.int64).reshape(n, n)
        if rank(m, p) == n:
            m.setflags(write=False)
            out.append(m)
    return tuple(out)


def gl_elements(n: int, p: int) -> tuple:
    """All elements of GL_n(F_p); only sensible for tiny n and p."""
    if p**(n * n) > 5_000_000:
        raise ValueError(f"GL_{n}(F_{p}) is too large to list")
    return _gl_elements(n, p)


def subspaces(n: int, k: int, p: int) -> list[np.ndarray]:
    """All k-dimensional subspaces of F_p^n, as canonical column bases."""
    out = []
    for piv in itertools.combinations(range(n), k):
        free_slots = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, n) if c not in piv]
        for vals in itertools.product(range(p), repeat=len(free_slots)):
            r = zeros(k, n)
            for i, pc in enumerate(piv):
                r[i, pc] = 1
            for (i, c), v in zip(free_slots, vals):
                r[i, c] = v
            out.append(r.T.copy())
    return out


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def flag_count(n: int, q: int) -> int:
    out = 1
    for i in range(1, n + 1):
        out *= (q**i - 1) // (q - 1)
    return out
