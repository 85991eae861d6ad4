"""Exact linear algebra over GF(2), GF(4) and GF(p) for small primes p.

Matrices are plain ``numpy.uint8`` arrays holding field elements.  Over
GF(2) the row reductions run on rows packed 64 columns to a machine word.
GF(4) elements are encoded as ``a + 2b`` for ``a + b*w``, so ``0, 1, w, w^2``
are ``0, 1, 2, 3`` and addition is XOR.

Pivoting is deterministic: the leftmost column with a nonzero entry, and in
that column the first available row.  Every downstream choice of
representatives inherits this order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "Field",
    "get_field",
    "GF2",
    "GF4",
    "Echelon",
    "ComplexSlice",
    "LinearSolver",
    "rref",
    "rank",
    "kernel",
    "solve",
    "homology_dim",
    "independent_subset",
]


class Field:
    """A finite field of order 2, 4 or a prime p <= 7.

    Arithmetic is table driven; the tables are checked against the field
    axioms when the object is built.
    """

    def __init__(self, order: int):
        if order not in (2, 3, 4, 5, 7):
            raise ValueError(f"unsupported field order {order}; use 2, 3, 4, 5 or 7")
        self.order = order
        self.char = 2 if order == 4 else order
        self.name = f"GF({order})"
        q = order
        if order == 4:
            add = np.array([[a ^ b for b in range(4)] for a in range(4)], dtype=np.uint8)
            # (a0 + a1 w)(b0 + b1 w) with w^2 = w + 1
            mul = np.zeros((4, 4), dtype=np.uint8)
            for a, b in itertools.product(range(4), repeat=2):
                a0, a1, b0, b1 = a & 1, a >> 1, b & 1, b >> 1
                c0 = (a0 & b0) ^ (a1 & b1)
                c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1)
                mul[a, b] = c0 | (c1 << 1)
        else:
            r = np.arange(q)
            add = ((r[:, None] + r[None, :]) % q).astype(np.uint8)
            mul = ((r[:, None] * r[None, :]) % q).astype(np.uint8)
        self.add_table = add
        self.mul_table = mul
        neg = np.zeros(q, dtype=np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(q):
            neg[a] = int(np.nonzero(add[a] == 0)[0][0])
            if a:
                inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.neg_table = neg
        self.inv_table = inv
        self._check_axioms()

    def _check_axioms(self) -> None:
        q, A, M = self.order, self.add_table, self.mul_table
        els = range(q)
        for a, b in itertools.product(els, repeat=2):
            if A[a, b] != A[b, a] or M[a, b] != M[b, a]:
                raise AssertionError(f"{self.name}: commutativity fails at {a},{b}")
        for a, b, c in itertools.product(els, repeat=3):
            if A[A[a, b], c] != A[a, A[b, c]] or M[M[a, b], c] != M[a, M[b, c]]:
                raise AssertionError(f"{self.name}: associativity fails at {a},{b},{c}")
            if M[a, A[b, c]] != A[M[a, b], M[a, c]]:
                raise AssertionError(f"{self.name}: distributivity fails at {a},{b},{c}")
        for a in els:
            if A[a, 0] != a or M[a, 1] != a or A[a, self.neg_table[a]] != 0:
                raise AssertionError(f"{self.name}: identity/negation fails at {a}")
            if a and M[a, self.inv_table[a]] != 1:
                raise AssertionError(f"{self.name}: no inverse for {a}")

    # elementwise arithmetic on ints or uint8 arrays
    def add(self, a, b):
        if self.char == 2:
            return np.bitwise_xor(a, b)
        return self.add_table[a, b]

    def sub(self, a, b):
        if self.char == 2:
            return np.bitwise_xor(a, b)
        return self.add_table[a, self.neg_table[b]]

    def neg(self, a):
        if self.char == 2:
            return a
        return self.neg_table[a]

    def mul(self, a, b):
        if self.order == 2:
            return np.bitwise_and(a, b)
        return self.mul_table[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.inv_table[a]

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> field."""
        return int(n) % self.char

    def parse(self, token: str) -> int:
        t = token.strip().lower()
        if self.order == 4:
            names = {"0": 0, "1": 1, "w": 2, "omega": 2, "ω": 2,
                     "wbar": 3, "w2": 3, "omegabar": 3, "ω̄": 3, "w^2": 3}
            if t in names:
                return names[t]
        if t.lstrip("-").isdigit():
            return self.from_int(int(t))
        raise ValueError(f"cannot read {token!r} as an element of {self.name}")

    def fmt(self, a: int) -> str:
        if self.order == 4:
            return ("0", "1", "w", "wbar")[int(a)]
        return str(int(a))

    def zeros(self, *shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.uint8)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.uint8)

    def asarray(self, a) -> np.ndarray:
        arr = np.asarray(a)
        if arr.dtype != np.uint8:
            if self.order == 4:
                arr = arr.astype(np.int64)
                if arr.size and (arr.min() < 0 or arr.max() > 3):
                    raise ValueError("GF(4) entries must be encoded 0..3")
                arr = arr.astype(np.uint8)
            else:
                arr = (arr.astype(np.int64) % self.char).astype(np.uint8)
        return arr

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product; float BLAS is exact at these entry sizes."""
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        if self.order == 4:
            a0, a1 = (a & 1), (a >> 1)
            b0, b1 = (b & 1), (b >> 1)
            g = GF2.matmul
            c0 = g(a0, b0) ^ g(a1, b1)
            c1 = g(a0, b1) ^ g(a1, b0) ^ g(a1, b1)
            return (c0 | (c1 << 1)).astype(np.uint8)
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(prod, self.char).astype(np.uint8)

    def dot(self, a: np.ndarray, b: np.ndarray) -> int:
        return int(self.matmul(np.asarray(a)[None, :], np.asarray(b)[:, None])[0, 0])

    def scale(self, c: int, v: np.ndarray) -> np.ndarray:
        return self.mul(np.uint8(c), np.asarray(v, dtype=np.uint8))

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.order == self.order

    def __hash__(self) -> int:
        return hash(("Field", self.order))


@lru_cache(maxsize=None)
def _field(order: int) -> Field:
    return Field(order)


def get_field(spec) -> Field:
    """Look up a field by order or by a name such as ``'GF(4)'`` or ``'gf2'``."""
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, int):
        return _field(spec)
    s = str(spec).strip().lower().replace(" ", "")
    for pre in ("gf(", "gf", "f"):
        if s.startswith(pre):
            s = s[len(pre):]
            break
    s = s.rstrip(")")
    if not s.isdigit():
        raise ValueError(f"unknown field {spec!r}")
    return _field(int(s))


GF2 = get_field(2)
GF4 = get_field(4)


# -- GF(2) bit packing --------------------------------------------------------

def _pack(a: np.ndarray) -> np.ndarray:
    m, n = a.shape
    words = max(1, (n + 63) // 64)
    padded = np.zeros((m, words * 64), dtype=np.uint8)
    padded[:, :n] = a
    packed = np.packbits(padded, axis=1)
    return np.ascontiguousarray(packed).view(">u8").astype(np.uint64)


def _unpack(p: np.ndarray, n: int) -> np.ndarray:
    if p.shape[0] == 0:
        return np.zeros((0, n), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(p.astype(">u8")).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1)[:, :n].copy()


def _rref_gf2(a: np.ndarray):
    m, n = a.shape
    M = _pack(a)
    r = 0
    pivots = []
    one = np.uint64(1)
    for c in range(n):
        if r == m:
            break
        w = c >> 6
        bit = one << np.uint64(63 - (c & 63))
        hits = np.nonzero(M[r:, w] & bit)[0]
        if hits.size == 0:
            continue
        k = r + int(hits[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        rows = np.nonzero(M[:, w] & bit)[0]
        rows = rows[rows != r]
        if rows.size:
            M[rows, w:] ^= M[r, w:]
        pivots.append(c)
        r += 1
    return _unpack(M[:r], n), pivots


def _rref_dense(a: np.ndarray, F: Field):
    M = a.copy()
    m, n = M.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        hits = np.nonzero(M[r:, c])[0]
        if hits.size == 0:
            continue
        k = r + int(hits[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        lead = M[r, c]
        if lead != 1:
            M[r] = F.mul(F.inv(lead), M[r])
        rows = np.nonzero(M[:, c])[0]
        rows = rows[rows != r]
        if rows.size:
            M[rows] = F.sub(M[rows], F.mul(M[rows, c][:, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    return M[:r].copy(), pivots


@dataclass(frozen=True)
class Echelon:
    """Reduced row-echelon form: ``rows`` are the nonzero rows."""

    field: Field
    rows: np.ndarray
    pivots: tuple
    ncols: int
    nrows: int = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def reduced(self) -> np.ndarray:
        """Full-height reduced matrix (zero rows at the bottom)."""
        out = np.zeros((max(self.nrows, self.rank), self.ncols), dtype=np.uint8)
        out[: self.rank] = self.rows
        return out

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Residue of vector(s) modulo the row space; zero on pivot columns."""
        v = np.asarray(v, dtype=np.uint8)
        single = v.ndim == 1
        V = v[None, :] if single else v
        if self.rank:
            F = self.field
            V = F.sub(V, F.matmul(V[:, list(self.pivots)], self.rows))
        return V[0] if single else V

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(v))

    def coordinates(self, v: np.ndarray):
        """Coefficients expressing v in ``rows``, or None if v is outside the span."""
        v = np.asarray(v, dtype=np.uint8)
        if np.any(self.reduce(v)):
            return None
        return v[list(self.pivots)].copy()


def rref(a, field: Field = GF2) -> Echelon:
    """Row-reduce ``a``; rank, pivot columns and reduced rows in one object."""
    F = get_field(field)
    a = F.asarray(a)
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = a.shape
    if m == 0 or n == 0:
        return Echelon(F, np.zeros((0, n), dtype=np.uint8), (), n, m)
    rows, piv = _rref_gf2(a) if F.order == 2 else _rref_dense(a, F)
    return Echelon(F, rows, tuple(piv), n, m)


def rank(a, field: Field = GF2) -> int:
    return rref(a, field).rank


def kernel(a, field: Field = GF2) -> np.ndarray:
    """Columns spanning the null space of ``a`` (shape cols x nullity)."""
    F = get_field(field)
    a = F.asarray(a)
    n = a.shape[1]
    E = rref(a, F)
    free = [j for j in range(n) if j not in set(E.pivots)]
    K = np.zeros((n, len(free)), dtype=np.uint8)
    if free:
        K[free, np.arange(len(free))] = 1
        if E.rank:
            K[list(E.pivots), :] = F.neg(E.rows[:, free])
    return K


def solve(a, b, field: Field = GF2):
    """A solution x of a.x = b supported on pivot columns, or None.

    Free variables are set to zero, which makes the answer the
    lexicographically first solution with respect to the pivot order.
    """
    F = get_field(field)
    a = F.asarray(a)
    b = F.asarray(b)
    if a.ndim != 2 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise ValueError(f"solve: shapes {a.shape} and {b.shape} are incompatible")
    m, n = a.shape
    E = rref(np.concatenate([a, b[:, None]], axis=1), F)
    if E.pivots and E.pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.uint8)
    if E.rank:
        x[list(E.pivots)] = E.rows[:, n]
    return x


class LinearSolver:
    """Solve a.x = b for many right-hand sides with one elimination.

    ``extra`` rows, if given, are homogeneous side conditions extra.x = 0.
    """

    def __init__(self, a, field: Field = GF2, extra=None):
        F = get_field(field)
        a = F.asarray(a)
        if extra is not None and len(extra):
            extra = F.asarray(extra)
            a = np.concatenate([a, extra], axis=0)
        self.field = F
        self.m, self.n = a.shape
        self.m_eq = self.m if extra is None else self.m - len(extra)
        aug = np.concatenate([a, np.eye(self.m, dtype=np.uint8)], axis=1)
        E = rref(aug, F)
        piv = [p for p in E.pivots if p < self.n]
        r = len(piv)
        self.rank = r
        self.pivots = piv
        self.R = E.rows[:r, : self.n]
        self.T = E.rows[:, self.n:]  # rows of the transformation
        self.consistency = E.rows[r:, self.n:]

    def solve(self, b):
        F = self.field
        b = F.asarray(b)
        if b.shape[0] == self.m_eq and self.m_eq != self.m:
            b = np.concatenate([b, np.zeros(self.m - self.m_eq, dtype=np.uint8)])
        if b.shape[0] != self.m:
            raise ValueError(f"right-hand side has length {b.shape[0]}, expected {self.m}")
        if self.consistency.shape[0] and np.any(F.matmul(self.consistency, b[:, None])):
            return None
        x = np.zeros(self.n, dtype=np.uint8)
        if self.rank:
            x[self.pivots] = F.matmul(self.T[: self.rank], b[:, None])[:, 0]
        return x


@dataclass(frozen=True)
class ComplexSlice:
    """Middle term of prev --d_in--> mid --d_out--> next (column vectors)."""

    d_in: np.ndarray
    d_out: np.ndarray


def independent_subset(base, cand, field: Field = GF2) -> list:
    """Indices of the rows of ``cand`` that are greedily independent modulo rows of ``base``."""
    F = get_field(field)
    cand = F.asarray(cand)
    if cand.shape[0] == 0:
        return []
    base = F.asarray(base) if base is not None else np.zeros((0, cand.shape[1]), np.uint8)
    if base.shape[0]:
        cand = rref(base, F).reduce(cand)
    return list(rref(cand.T, F).pivots)


def homology_dim(s: ComplexSlice, field: Field = GF2):
    """Dimension of ker(d_out)/im(d_in) and cycle representatives (as columns)."""
    F = get_field(field)
    d_in = F.asarray(s.d_in)
    d_out = F.asarray(s.d_out)
    if d_in.shape[0] != d_out.shape[1]:
        raise ValueError(f"slice shapes {d_in.shape}, {d_out.shape} do not compose")
    comp = F.matmul(d_out, d_in)
    if np.any(comp):
        i, j = (int(t) for t in np.argwhere(comp)[0])
        raise ValueError(f"d_out . d_in is nonzero: entry ({i},{j}) = {F.fmt(comp[i, j])}")
    Z = kernel(d_out, F)
    keep = independent_subset(d_in.T, Z.T, F)
    reps = Z[:, keep]
    return len(keep), reps
