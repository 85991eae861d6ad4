"""Finite-dimensional algebras given by structure constants.

A basis element carries its target and source vertex (both 0 for local
algebras) and an optional multidegree.  ``T[i, j, k]`` is the coefficient
of ``b_k`` in ``b_i b_j``.  Elements are coordinate vectors.

Quiver algebras use paths as basis, so every basis element lies in a
single ``e_t A e_s``.  Group algebras use group elements; they are local,
so the single vertex condition holds trivially.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .exactlin import GF2, Field, LinearSolver, get_field, rref

__all__ = ["FDAlgebra", "fcontract", "ENVELOPING_LIMIT"]

# dense structure constants of A^e have (dim A)^6 entries
ENVELOPING_LIMIT = 16


def fcontract(F: Field, subscripts: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``np.einsum`` of two field-valued arrays, reduced in the field."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if F.order == 4:
        a0, a1 = a & 1, a >> 1
        b0, b1 = b & 1, b >> 1
        g = lambda x, y: fcontract(GF2, subscripts, x, y)
        c0 = g(a0, b0) ^ g(a1, b1)
        c1 = g(a0, b1) ^ g(a1, b0) ^ g(a1, b1)
        return (c0 | (c1 << 1)).astype(np.uint8)
    out = np.einsum(subscripts, a.astype(np.int64), b.astype(np.int64))
    return np.mod(out, F.char).astype(np.uint8)


@dataclass
class FDAlgebra:
    field: Field
    T: np.ndarray
    labels: list
    tgt: np.ndarray
    src: np.ndarray
    vertices: list
    degrees: list | None = None
    rad_gens: list = dc_field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        self.field = get_field(self.field)
        self.T = np.asarray(self.T, dtype=np.uint8)
        self.tgt = np.asarray(self.tgt, dtype=np.int64)
        self.src = np.asarray(self.src, dtype=np.int64)
        self.dim = self.T.shape[0]
        self._TL = self.T.reshape(self.dim, self.dim * self.dim)
        self._TR = self.T.transpose(1, 0, 2).reshape(self.dim, self.dim * self.dim)
        self._idem = None
        self._rad = None
        self._top = None

    # -- arithmetic ----------------------------------------------------------
    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, np.uint8)

    def basis_vec(self, i: int) -> np.ndarray:
        v = self.zero()
        v[i] = 1
        return v

    def mul(self, u, v) -> np.ndarray:
        return self.field.matmul(np.asarray(u, np.uint8)[None, :], self.R(v))[0]

    def R(self, m) -> np.ndarray:
        """Right multiplication by m on row vectors: x @ R(m) = x m."""
        return self.field.matmul(np.asarray(m, np.uint8)[None, :], self._TR).reshape(self.dim, self.dim)

    def L(self, a) -> np.ndarray:
        """Left multiplication by a on row vectors: x @ L(a) = a x."""
        return self.field.matmul(np.asarray(a, np.uint8)[None, :], self._TL).reshape(self.dim, self.dim)

    def matmul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Product of algebra-valued matrices, shapes (r, s, N) and (s, t, N)."""
        r, s, N = X.shape
        s2, t, _ = Y.shape
        if s != s2:
            raise ValueError(f"cannot compose {X.shape[:2]} with {Y.shape[:2]}")
        if r == 0 or t == 0 or s == 0:
            return np.zeros((r, t, N), np.uint8)
        LX = self.field.matmul(X.reshape(-1, N), self._TL).reshape(r, s, N, N)
        return fcontract(self.field, "ikbc,kjb->ijc", LX, Y)

    # -- structure -----------------------------------------------------------
    @property
    def unit(self) -> np.ndarray:
        u = self.zero()
        for e in self.idempotents():
            u = self.field.add(u, e)
        return u

    def idempotents(self) -> list:
        """Primitive vertex idempotents e_v, one per vertex."""
        if self._idem is None:
            out = []
            for v in range(len(self.vertices)):
                idx = [i for i in range(self.dim) if self.tgt[i] == v and self.src[i] == v
                       and self.labels[i] in (f"e_{self.vertices[v]}", "1")]
                if len(idx) != 1:
                    raise ValueError(f"no idempotent basis element at vertex {self.vertices[v]}")
                out.append(self.basis_vec(idx[0]))
            self._idem = out
        return self._idem

    def radical(self):
        """Echelon form of J = sum of rad_gens * A."""
        if self._rad is None:
            rows = [self.L(a) for a in self.rad_gens]
            M = np.concatenate(rows, axis=0) if rows else np.zeros((0, self.dim), np.uint8)
            # rows of L(a) are a * b_i
            self._rad = rref(M, self.field)
        return self._rad

    def in_radical(self, v) -> bool:
        return self.radical().contains(np.asarray(v, np.uint8))

    def top_coefficients(self, v) -> np.ndarray:
        """Coefficients of the vertex idempotents modulo the radical."""
        if self._top is None:
            E = self.radical()
            basis = np.concatenate([np.array(self.idempotents()), E.rows], axis=0)
            self._top = LinearSolver(basis.T, self.field)
            if self._top.rank != self.dim:
                raise ValueError("idempotents and radical do not span the algebra")
        x = self._top.solve(np.asarray(v, np.uint8))
        return x[: len(self.vertices)]

    def check(self) -> None:
        """Associativity and unit axioms."""
        F = self.field
        lhs = fcontract(F, "ijm,mkn->ijkn", self.T, self.T)
        rhs = fcontract(F, "jkm,imn->ijkn", self.T, self.T)
        if not np.array_equal(lhs, rhs):
            i, j, k, n = (int(x) for x in np.argwhere(lhs != rhs)[0])
            raise ValueError(f"not associative at ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")
        u = self.unit
        for i in range(self.dim):
            e = self.basis_vec(i)
            if not (np.array_equal(self.mul(u, e), e) and np.array_equal(self.mul(e, u), e)):
                raise ValueError(f"unit fails on {self.labels[i]}")

    def block_key(self, i: int):
        return (int(self.tgt[i]), self.degrees[i] if self.degrees is not None else ())

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_group(cls, G, field=GF2, rad_gens: Sequence | None = None) -> "FDAlgebra":
        """Group algebra kG with the group elements as basis (ungraded, local)."""
        n = G.order
        T = np.zeros((n, n, n), np.uint8)
        for i in range(n):
            for j in range(n):
                T[i, j, G.table[i, j]] = 1
        labels = [G.label(i) for i in range(n)]
        labels[G.identity] = "1"
        A = cls(get_field(field), T, labels, np.zeros(n, np.int64), np.zeros(n, np.int64),
                ["k"], None, [], name=f"k{G.family}{G.order}")
        if rad_gens is None:
            rad_gens = []
            for g in (G.g, G.h):
                v = A.basis_vec(g)
                v[G.identity] = A.field.add(v[G.identity], A.field.neg(np.uint8(1)))
                rad_gens.append(v)
        A.rad_gens = [np.asarray(r, np.uint8) for r in rad_gens]
        return A

    @classmethod
    def from_presentation(cls, p) -> "FDAlgebra":
        """A finite-dimensional quiver or free presentation from ncalg."""
        F = p.field
        if p.mode == "quiver":
            basis = p.quiver_basis()
        elif p.mode == "free":
            basis = []
            w = 0
            empty = 0
            while True:
                degs = p.nonzero_degrees(w)
                for d in degs:
                    basis.extend(p.piece(d).basis)
                empty = 0 if degs else empty + 1
                if empty > max((p.wt(g.degree) for g in p.gens), default=0):
                    break
                w += 1
                if w > 4 * p.bound:
                    raise ValueError(f"{p.name} does not look finite-dimensional")
        else:
            raise ValueError("commutative presentations are not handled here")
        pos = {w: i for i, w in enumerate(basis)}
        n = len(basis)
        T = np.zeros((n, n, n), np.uint8)
        for i, u in enumerate(basis):
            for j, v in enumerate(basis):
                m = p.mul_words(u, v)
                if m is None:
                    continue
                for bw, c in p.normal_form(m).items():
                    T[i, j, pos[bw]] = c
        if p.mode == "quiver":
            ends = [p.word_ends(w) for w in basis]
            src = [e[0] for e in ends]
            tgt = [e[1] for e in ends]
            vertices = list(p.vertices)
            labels = [p.word_str(w) for w in basis]
        else:
            src = tgt = [0] * n
            vertices = ["k"]
            labels = [p.word_str(w) if w else "1" for w in basis]
        degrees = [p.word_degree(w) for w in basis]
        rad = [np.eye(n, dtype=np.uint8)[pos[(a,)]] for a in range(len(p.gens)) if (a,) in pos]
        A = cls(F, T, labels, tgt, src, vertices, degrees, rad, name=p.name)
        A.words = basis
        A.presentation = p
        return A

    def enveloping(self) -> "FDAlgebra":
        """A^e = A (x) A^op with (a(x)b)(a'(x)b') = aa' (x) b'b.  Local algebras only."""
        N = self.dim
        if N > ENVELOPING_LIMIT:
            raise ValueError(f"enveloping algebra of a {N}-dimensional algebra exceeds the dense limit {ENVELOPING_LIMIT}")
        if len(self.vertices) != 1:
            raise ValueError("enveloping algebras are implemented for local algebras only")
        F = self.field
        # T_e[(i,j),(k,l),(m,n)] = T[i,k,m] * T[l,j,n]
        Te = fcontract(F, "ikm,ljn->ijklmn", self.T, self.T).reshape(N * N, N * N, N * N)
        labels = [f"{a}|{b}" for a in self.labels for b in self.labels]
        degrees = None
        if self.degrees is not None:
            degrees = [tuple(x + y for x, y in zip(a, b)) for a in self.degrees for b in self.degrees]
        one = self.unit
        rad = []
        for r in self.rad_gens:
            rad.append(fcontract(F, "i,j->ij", r, one).reshape(-1))
            rad.append(fcontract(F, "i,j->ij", one, r).reshape(-1))
        z = np.zeros(N * N, np.int64)
        E = FDAlgebra(F, Te, labels, z, z, ["k"], degrees, [np.asarray(x, np.uint8) for x in rad],
                      name=f"({self.name})^e")
        i1 = int(np.nonzero(one)[0][0])
        E.labels[i1 * N + i1] = "1"
        E.base = self
        return E

    def bimodule_action(self) -> np.ndarray:
        """Action tensor of A^e on A: rho[(i,j)] with m @ rho = b_i m b_j."""
        N = self.dim
        L = np.array([self.L(self.basis_vec(i)) for i in range(N)])
        R = np.array([self.R(self.basis_vec(j)) for j in range(N)])
        rho = fcontract(self.field, "iab,jbc->ijac", L, R)
        return rho.reshape(N * N, N, N)
