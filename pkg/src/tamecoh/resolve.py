"""Minimal resolutions, Ext algebras, DG endomorphism algebras and HH dimensions.

Two engines live here.

* Finite-dimensional algebras (:class:`~tamecoh.fdalg.FDAlgebra`): minimal
  projective resolutions of modules given by action matrices.  A projective
  is ``P = sum_j A e_{v_j}`` with a degree shift per summand; maps are
  matrices of algebra elements in the row-vector convention, so entry
  ``(i, j)`` of ``d: P -> P'`` lies in ``e_{v_i} A e_{w_j}`` and the generator
  ``g_i`` goes to ``sum_j d[i, j] g'_j``.
* Commutative graded rings (:class:`~tamecoh.ncalg.Presentation` in
  commutative mode): minimal graded free resolutions of cyclic modules
  ``S/N``, computed degree by degree in increasing weight.

All kernels are taken block by block (vertex and internal degree), and
new generators are chosen as a complement of ``J * kernel``, which makes
the resolutions minimal.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .exactlin import (ComplexSlice, Field, LinearSolver, homology_dim, independent_subset,
                       kernel, rank, rref)
from .fdalg import FDAlgebra, fcontract

__all__ = [
    "Module",
    "Resolution",
    "minimal_resolution",
    "ExtAlgebra",
    "ext_algebra",
    "lift_cocycle",
    "EndDGA",
    "dg_endomorphism",
    "homotopy_witness",
    "hochschild_dims",
    "GradedResolution",
    "graded_resolution",
    "graded_ext_dims",
    "bimodule_hh_dims",
    "ResolutionError",
]


class ResolutionError(RuntimeError):
    pass


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


# ---------------------------------------------------------------------------
# finite-dimensional engine
# ---------------------------------------------------------------------------

@dataclass
class Module:
    """A left module: ``m @ rho[i]`` is ``b_i . m`` for basis element b_i of A."""

    algebra: FDAlgebra
    rho: np.ndarray
    blocks: list  # per basis vector of M: (vertex, degree)
    name: str = ""

    @property
    def dim(self) -> int:
        return self.rho.shape[1]

    def act(self, a) -> np.ndarray:
        F = self.algebra.field
        a = np.asarray(a, np.uint8)
        return F.matmul(a[None, :], self.rho.reshape(self.algebra.dim, -1)).reshape(self.dim, self.dim)

    @classmethod
    def simple(cls, A: FDAlgebra, v: int = 0) -> "Module":
        rho = np.zeros((A.dim, 1, 1), np.uint8)
        for i in range(A.dim):
            rho[i, 0, 0] = A.top_coefficients(A.basis_vec(i))[v]
        deg = tuple(0 for _ in A.degrees[0]) if A.degrees is not None else ()
        return cls(A, rho, [(v, deg)], name=f"S_{A.vertices[v]}")

    @classmethod
    def regular_bimodule(cls, Ae: FDAlgebra) -> "Module":
        """A as a module over its enveloping algebra."""
        A = Ae.base
        blocks = [(0, A.degrees[i] if A.degrees is not None else ()) for i in range(A.dim)]
        return cls(Ae, A.bimodule_action(), blocks, name=f"{A.name} as bimodule")


class _Proj:
    """Bookkeeping for P = sum_j A e_{v_j}(shift_j) in flat coordinates j*N + b."""

    def __init__(self, A: FDAlgebra, gens: list):
        self.A = A
        self.gens = gens  # list of (vertex, shift)
        N = A.dim
        self.blocks = defaultdict(list)
        for j, (v, s) in enumerate(gens):
            for b in range(N):
                if A.src[b] == v:
                    deg = _add(A.degrees[b], s) if A.degrees is not None else ()
                    self.blocks[(int(A.tgt[b]), deg)].append(j * N + b)
        self.blocks = {k: np.array(v, np.int64) for k, v in self.blocks.items()}
        self.block_of = {}
        for k, rows in self.blocks.items():
            for f in rows.tolist():
                self.block_of[f] = k

    @property
    def rank(self):
        return len(self.gens)

    @property
    def flat_dim(self):
        return len(self.gens) * self.A.dim


def _left_mult_flat(A: FDAlgebra, Gmat: np.ndarray) -> np.ndarray:
    """For each generator row G_i (an element of P, shape (r, N)), all products b*G_i.

    Returns shape (N, r*N): row b is b * G flattened.
    """
    out = fcontract(A.field, "bxc,jx->bjc", A.T, Gmat)
    return out.reshape(A.dim, -1)


@dataclass
class Resolution:
    algebra: FDAlgebra
    module: Module
    gens: list  # gens[n] = list of (vertex, shift)
    D: list  # D[n] for n >= 1: array (r_n, r_{n-1}, N); D[0] unused
    eps: np.ndarray  # P_0 generators -> M, shape (r_0, dim M)
    lin: list = dc_field(default_factory=list, repr=False)  # lin[n]: flat P_n -> flat P_{n-1}
    proj: list = dc_field(default_factory=list, repr=False)

    @property
    def length(self) -> int:
        return len(self.gens) - 1

    def ranks(self) -> list:
        return [len(g) for g in self.gens]

    def check_minimal(self) -> bool:
        A = self.algebra
        E = A.radical()
        for n in range(1, len(self.D)):
            M = self.D[n]
            if M.size and not np.all(~np.any(E.reduce(M.reshape(-1, A.dim)), axis=1)):
                return False
        return True

    def check_complex(self) -> bool:
        A = self.algebra
        for n in range(2, len(self.D)):
            if np.any(A.matmul(self.D[n], self.D[n - 1])):
                return False
        return True

    def check_exact(self) -> bool:
        """rank(lin_{n+1}) = dim ker(lin_n) for every computed n >= 1, and at P_0."""
        F = self.algebra.field
        for n in range(1, len(self.lin)):
            r_next = rank(self.lin[n], F)
            if n == 1:
                prev = self._eps_lin()
            else:
                prev = self.lin[n - 1]
            dim_ker = self.proj[n - 1].flat_dim - rank(prev, F) - self._invalid(n - 1)
            if r_next != dim_ker:
                return False
        return True

    def _invalid(self, n):
        P = self.proj[n]
        return P.flat_dim - sum(len(v) for v in P.blocks.values())

    def _eps_lin(self):
        A = self.algebra
        G = np.zeros((len(self.gens[0]), self.module.dim), np.uint8)
        return _eps_linear(A, self.module, self.eps)

    def generator_label(self, n: int, j: int) -> str:
        v, s = self.gens[n][j]
        return f"P{n}[{j}]@{self.algebra.vertices[v]}{s}"


def _eps_linear(A: FDAlgebra, M: Module, eps: np.ndarray) -> np.ndarray:
    """Flat P_0 -> M: row (j, b) is b . m_j."""
    F = A.field
    rows = fcontract(F, "bxy,jx->jby", M.rho, eps)  # b . m_j = m_j @ rho[b]
    return rows.reshape(-1, M.dim)


def _kernel_blocks(F: Field, lin: np.ndarray, P: _Proj, target_blocks: dict | None) -> dict:
    """Kernel of flat P -> target restricted to each block of P."""
    out = {}
    for key, rows in P.blocks.items():
        sub = lin[rows]
        if target_blocks is not None:
            cols = target_blocks.get(key)
            sub = sub[:, cols] if cols is not None else sub[:, :0]
        if sub.shape[1] == 0:
            K = np.eye(len(rows), dtype=np.uint8)
        else:
            K = kernel(sub.T, F).T
        if len(K):
            full = np.zeros((len(K), P.flat_dim), np.uint8)
            full[:, rows] = K
            out[key] = full
    return out


def _radical_times(A: FDAlgebra, P: _Proj, K: dict) -> dict:
    """Rows spanning J*K grouped by block."""
    F = A.field
    N = A.dim
    out = defaultdict(list)
    Ls = [A.L(a) for a in A.rad_gens]
    for key, rows in K.items():
        R = rows.reshape(len(rows), P.rank, N)
        for L in Ls:
            prod = F.matmul(R.reshape(-1, N), L).reshape(len(rows), -1)
            for v in prod:
                if np.any(v):
                    nz = np.nonzero(v)[0][0]
                    out[P.block_of[int(nz)]].append(v)
    return {k: np.array(v, np.uint8) for k, v in out.items()}


def minimal_resolution(A: FDAlgebra, M: Module, nmax: int) -> Resolution:
    """Minimal projective resolution P_nmax -> ... -> P_0 -> M."""
    F = A.field
    N = A.dim
    # generators of M: complement of J M, blockwise
    JM = np.concatenate([M.act(a) for a in A.rad_gens], axis=0) if A.rad_gens else np.zeros((0, M.dim), np.uint8)
    gens0, eps_rows = [], []
    mblocks = defaultdict(list)
    for i, b in enumerate(M.blocks):
        mblocks[b].append(i)
    for key in sorted(mblocks, key=repr):
        cand = np.eye(M.dim, dtype=np.uint8)[mblocks[key]]
        for i in independent_subset(JM, cand, F):
            gens0.append(key)
            eps_rows.append(cand[i])
    eps = np.array(eps_rows, np.uint8).reshape(-1, M.dim)
    P0 = _Proj(A, gens0)
    lin0 = _eps_linear(A, M, eps)
    K = _kernel_blocks(F, lin0, P0, None)
    res = Resolution(A, M, [gens0], [None], eps, [lin0], [P0])
    for n in range(1, nmax + 1):
        P = res.proj[-1]
        JK = _radical_times(A, P, K)
        new_gens, rows = [], []
        for key in sorted(K, key=repr):
            cand = K[key]
            base = JK.get(key)
            keep = independent_subset(base, cand, F)
            for i in keep:
                new_gens.append(key)
                rows.append(cand[i])
        r_new = len(new_gens)
        Dn = np.array(rows, np.uint8).reshape(r_new, P.rank, N)
        Pn = _Proj(A, new_gens)
        lin = _left_mult_flat_all(A, Pn, Dn)
        res.gens.append(new_gens)
        res.D.append(Dn)
        res.lin.append(lin)
        res.proj.append(Pn)
        if n < nmax:
            K = _kernel_blocks(F, lin, Pn, P.blocks)
    return res


def _left_mult_flat_all(A: FDAlgebra, Pn: _Proj, Dn: np.ndarray) -> np.ndarray:
    """Flat matrix of d: P_n -> P_{n-1}; row (i, b) = b * d(g_i)."""
    N = A.dim
    r = Dn.shape[0]
    if r == 0:
        return np.zeros((0, Dn.shape[1] * N), np.uint8)
    prods = fcontract(A.field, "bxc,ijx->ibjc", A.T, Dn)  # b * Dn[i, j]
    return prods.reshape(r * N, -1)


# -- Ext algebra of a simple module -----------------------------------------------

def _lin_solver(res: Resolution, i: int):
    cache = res.__dict__.setdefault("_solvers", {})
    if i not in cache:
        cache[i] = LinearSolver(res.lin[i].T, res.algebra.field)
    return cache[i]


def lift_cocycle(res: Resolution, n: int, cocycle: Sequence[int], upto: int) -> list:
    """Chain map F_i: P_{n+i} -> P_i (i = 0..upto) lifting a cocycle P_n -> S_v.

    ``cocycle`` gives one field value per generator of P_n.  The lift is
    the lexicographically first solution at each stage.
    """
    A = res.algebra
    F = A.field
    N = A.dim
    v = res.gens[0][0][0]
    if len(res.gens[0]) != 1:
        raise ResolutionError("lifting is implemented for resolutions of simple modules")
    if n + upto > res.length:
        raise ResolutionError(f"resolution too short: need length {n + upto}, have {res.length}")
    c = np.asarray(cocycle, np.uint8)
    e = A.idempotents()[v]
    F0 = np.zeros((len(res.gens[n]), 1, N), np.uint8)
    for g, val in enumerate(c):
        if val:
            if res.gens[n][g][0] != v:
                raise ResolutionError("cocycle is nonzero on a generator at another vertex")
            F0[g, 0] = F.mul(np.uint8(val), e)
    out = [F0]
    for i in range(1, upto + 1):
        rhs = A.matmul(res.D[n + i], out[-1])  # (r_{n+i}, r_{i-1}, N)
        S = _lin_solver(res, i)
        Fi = np.zeros((len(res.gens[n + i]), len(res.gens[i]), N), np.uint8)
        for g in range(rhs.shape[0]):
            y = rhs[g].reshape(-1)
            x = S.solve(y)
            if x is None:
                raise ResolutionError(f"lift fails at stage {i}, generator {g}")
            Fi[g] = x.reshape(len(res.gens[i]), N)
        out.append(Fi)
    return out


@dataclass
class ExtAlgebra:
    """Ext*(S_v, S_v) from a minimal resolution; basis = generators of P_n at v."""

    resolution: Resolution
    vertex: int
    basis: dict  # n -> list of generator indices at vertex v

    def dims(self) -> dict:
        """{(n, internal degree of the class): dim}; the class of a generator with shift s has internal degree -s."""
        out = defaultdict(int)
        for n, idx in self.basis.items():
            for j in idx:
                s = self.resolution.gens[n][j][1]
                out[(n, _neg(s))] += 1
        return dict(out)

    def total_dims(self) -> list:
        return [len(self.basis[n]) for n in sorted(self.basis)]

    def element(self, n: int, k: int) -> np.ndarray:
        c = np.zeros(len(self.resolution.gens[n]), np.uint8)
        c[self.basis[n][k]] = 1
        return c

    def product(self, alpha: tuple, beta: tuple) -> np.ndarray:
        """Yoneda product alpha . beta = alpha o lift(beta); arguments are (n, cocycle)."""
        (m, a), (n, b) = alpha, beta
        res = self.resolution
        A = res.algebra
        F = A.field
        lift = lift_cocycle(res, n, b, m)
        Fm = lift[m]  # P_{n+m} -> P_m
        out = np.zeros(len(res.gens[n + m]), np.uint8)
        for g in range(Fm.shape[0]):
            acc = np.uint8(0)
            for j in range(Fm.shape[1]):
                if a[j]:
                    t = A.top_coefficients(Fm[g, j])[res.gens[m][j][0]]
                    acc = F.add(acc, F.mul(np.uint8(a[j]), np.uint8(t)))
            out[g] = acc
        return out

    def check_associative(self, max_total: int) -> bool:
        """(ab)c = a(bc) on all triples of basis elements with total degree <= max_total."""
        F = self.resolution.algebra.field
        elems = [(n, self.element(n, k)) for n in sorted(self.basis) if n > 0
                 for k in range(len(self.basis[n]))]
        for (n1, a), (n2, b), (n3, c) in itertools.product(elems, repeat=3):
            if n1 + n2 + n3 > max_total:
                continue
            ab = self.product((n1, a), (n2, b))
            bc = self.product((n2, b), (n3, c))
            left = self.product((n1 + n2, ab), (n3, c))
            right = self.product((n1, a), (n2 + n3, bc))
            if not np.array_equal(left, right):
                return False
        return True


def ext_algebra(A: FDAlgebra, v: int = 0, nmax: int = 6, res: Resolution | None = None) -> ExtAlgebra:
    if res is None:
        res = minimal_resolution(A, Module.simple(A, v), nmax)
    basis = {n: [j for j, (w, _) in enumerate(res.gens[n]) if w == v] for n in range(res.length + 1)}
    return ExtAlgebra(res, v, basis)


# -- DG endomorphism algebra ------------------------------------------------------

class EndDGA:
    """End(P_*) truncated at P_N, or the periodic model for a periodic resolution.

    An element of degree d has components Phi_n: P_{n+d} -> P_n.  In the
    truncated model n ranges over 0..N-d; in the periodic model n ranges
    over 0..p-1 and P_{m+p} is P_m shifted by the periodicity shift.

    Composition (phi o psi)_n = Psi_{n+|phi|} . Phi_n (row convention:
    first Psi then Phi is not meant; the matrix product applies Psi's map
    first because rows are generators of the source).  The differential is
    D(phi)_n = Phi_{n+1} d_{n+1} - (-1)^d d_{n+d+1} Phi_n.
    """

    def __init__(self, res: Resolution, N: int | None = None, period: int | None = None):
        self.res = res
        self.A = res.algebra
        self.F = self.A.field
        self.period = period
        self.N = N
        if period is not None:
            self._setup_periodic(period)
        elif N is None or N > res.length:
            raise ResolutionError("truncation level must not exceed the resolution length")
        self._slices = {}
        self._dmat = {}
        self.arity = len(self.A.degrees[0]) if self.A.degrees is not None else 0

    def _setup_periodic(self, p: int):
        res = self.res
        if res.length < 2 * p:
            raise ResolutionError(f"need a resolution of length {2 * p} to certify period {p}")
        if [g[0] for g in res.gens[p]] != [g[0] for g in res.gens[0]]:
            raise ResolutionError(f"P_{p} and P_0 have different vertices")
        shift = res.gens[p][0][1]
        self.shift = shift
        for n in range(1, p + 1):
            if not np.array_equal(res.D[n + p], res.D[n]):
                raise ResolutionError(f"d_{n + p} differs from d_{n}; period {p} not established")
            for (v1, s1), (v2, s2) in zip(res.gens[n + p], res.gens[n]):
                if v1 != v2 or _sub(s1, s2) != shift:
                    raise ResolutionError(f"generator shifts of P_{n + p} are not those of P_{n} moved by {shift}")

    # generators of P_m, extended periodically
    def gens(self, m: int) -> list:
        if self.period is None:
            return self.res.gens[m]
        p = self.period
        q, r = divmod(m, p)
        return [(v, tuple(x + q * y for x, y in zip(s, self.shift))) for v, s in self.res.gens[r]]

    def d(self, m: int) -> np.ndarray:
        if self.period is None:
            return self.res.D[m]
        p = self.period
        return self.res.D[(m - 1) % p + 1]

    def components(self, d: int) -> range:
        if self.period is None:
            return range(0, self.N - d + 1)
        return range(0, self.period)

    def slice(self, d: int, D: tuple) -> list:
        """Coordinates (n, i, j, b) of the degree (d, D) part."""
        key = (d, D)
        if key in self._slices:
            return self._slices[key]
        A = self.A
        coords = []
        if d >= 0:
            for n in self.components(d):
                src, tgt = self.gens(n + d), self.gens(n)
                for i, (vi, si) in enumerate(src):
                    for j, (wj, tj) in enumerate(tgt):
                        want = _add(_sub(si, tj), D) if A.degrees is not None else None
                        for b in range(A.dim):
                            if A.tgt[b] == vi and A.src[b] == wj and (
                                    want is None or A.degrees[b] == want):
                                coords.append((n, i, j, b))
        self._slices[key] = coords
        return coords

    def to_components(self, d: int, D: tuple, vec) -> dict:
        out = {}
        for n in self.components(d):
            out[n] = np.zeros((len(self.gens(n + d)), len(self.gens(n)), self.A.dim), np.uint8)
        for (n, i, j, b), c in zip(self.slice(d, D), vec):
            if c:
                out[n][i, j, b] = c
        return out

    def from_components(self, d: int, D: tuple, comps: dict, strict: bool = True) -> np.ndarray:
        coords = self.slice(d, D)
        vec = np.zeros(len(coords), np.uint8)
        seen = {n: M.copy() for n, M in comps.items()}
        for k, (n, i, j, b) in enumerate(coords):
            if n in seen:
                vec[k] = seen[n][i, j, b]
                seen[n][i, j, b] = 0
        if strict:
            for n, M in seen.items():
                if n in self.components(d) and np.any(M):
                    raise ResolutionError(f"component {n} has entries outside the degree ({d}, {D}) slice")
        return vec

    def compose(self, x: tuple, y: tuple) -> tuple:
        """(phi o psi); x and y are (d, D, vec)."""
        d1, D1, v1 = x
        d2, D2, v2 = y
        d, D = d1 + d2, _add(D1, D2) if self.arity else ()
        P1 = self.to_components(d1, D1, v1)
        P2 = self.to_components(d2, D2, v2)
        comps = {}
        for n in self.components(d):
            m = n + d1
            if self.period is not None:
                Psi = P2[m % self.period]
            else:
                Psi = P2[m]
            comps[n] = self.A.matmul(Psi, P1[n])
        return d, D, self.from_components(d, D, comps)

    def differential_matrix(self, d: int, D: tuple) -> np.ndarray:
        """Matrix (column convention) of D: E^{d,D} -> E^{d+1,D}."""
        key = (d, D)
        if key in self._dmat:
            return self._dmat[key]
        src = self.slice(d, D)
        tgt = self.slice(d + 1, D)
        M = np.zeros((len(tgt), len(src)), np.uint8)
        for k in range(len(src)):
            e = np.zeros(len(src), np.uint8)
            e[k] = 1
            M[:, k] = self.differential((d, D, e))[2]
        self._dmat[key] = M
        return M

    def differential(self, x: tuple) -> tuple:
        d, D, v = x
        F = self.F
        Phi = self.to_components(d, D, v)
        comps = {}
        sign = np.uint8(F.from_int(-1 if d % 2 == 0 else 1))  # -(-1)^d
        for n in self.components(d + 1):
            if self.period is not None:
                a = self.A.matmul(self.d(n + d + 1), Phi[n])
                b = self.A.matmul(Phi[(n + 1) % self.period], self.d(n + 1))
            else:
                a = self.A.matmul(self.d(n + d + 1), Phi[n])
                b = self.A.matmul(Phi[n + 1], self.d(n + 1))
            comps[n] = F.add(b, F.mul(sign, a))
        return d + 1, D, self.from_components(d + 1, D, comps)

    def identity(self) -> tuple:
        D0 = tuple(0 for _ in range(self.arity)) if self.arity else ()
        comps = {}
        for n in self.components(0):
            r = len(self.gens(n))
            M = np.zeros((r, r, self.A.dim), np.uint8)
            for i, (v, _) in enumerate(self.gens(n)):
                M[i, i] = self.A.idempotents()[v]
            comps[n] = M
        return 0, D0, self.from_components(0, D0, comps)

    def periodicity(self) -> tuple:
        """z~: the identification P_{n+p} = P_n as an element of degree p."""
        if self.period is None:
            raise ResolutionError("not a periodic model")
        p = self.period
        D = _neg(self.shift) if self.arity else ()
        comps = {}
        for n in range(p):
            r = len(self.gens(n))
            M = np.zeros((r, r, self.A.dim), np.uint8)
            for i, (v, _) in enumerate(self.gens(n)):
                M[i, i] = self.A.idempotents()[v]
            comps[n] = M
        return p, D, self.from_components(p, D, comps)

    def homology(self, d: int, D: tuple):
        """(dim, representatives as columns) of H^{d,D}."""
        din = self.differential_matrix(d - 1, D) if d >= 1 else np.zeros((len(self.slice(d, D)), 0), np.uint8)
        dout = self.differential_matrix(d, D)
        return homology_dim(ComplexSlice(din, dout), self.F)

    def internal_degrees(self, d: int) -> list:
        """Internal degrees D for which the slice (d, D) is nonzero."""
        A = self.A
        if not self.arity:
            return [()]
        out = set()
        for n in self.components(d):
            for vi, si in self.gens(n + d):
                for wj, tj in self.gens(n):
                    for b in range(A.dim):
                        if A.tgt[b] == vi and A.src[b] == wj:
                            out.add(_sub(A.degrees[b], _sub(si, tj)))
        return sorted(out)

    def unroll(self, x: tuple, target: "EndDGA") -> tuple:
        """A periodic element viewed in a truncated model of the same resolution."""
        if self.period is None or target.period is not None:
            raise ResolutionError("unroll goes from a periodic model to a truncated one")
        d, D, v = x
        P = self.to_components(d, D, v)
        comps = {n: P[n % self.period] for n in target.components(d)}
        return d, D, target.from_components(d, D, comps)

    def cocycle_from_lift(self, lift: list, n: int, D: tuple) -> tuple:
        """Element of degree n built from a chain-map lift (truncated model)."""
        comps = {i: lift[i] for i in range(len(lift)) if i in self.components(n)}
        return n, D, self.from_components(n, D, comps)


def dg_endomorphism(res: Resolution, N: int | None = None, period: int | None = None) -> EndDGA:
    return EndDGA(res, N=N, period=period)


def homotopy_witness(E: EndDGA, target: tuple, side: Sequence[tuple] = ()) -> tuple | None:
    """u with D(u) = target and u o s = s o u = 0 for each s in ``side``.

    Returns (d-1, D, vec) or None if no such u exists.  The answer is the
    lexicographically first solution.
    """
    d, D, v = target
    Dm = E.differential_matrix(d - 1, D)
    extra = []
    n_src = len(E.slice(d - 1, D))
    for s in side:
        for left in (True, False):
            rows = []
            for k in range(n_src):
                e = np.zeros(n_src, np.uint8)
                e[k] = 1
                u = (d - 1, D, e)
                prod = E.compose(u, s) if left else E.compose(s, u)
                rows.append(prod[2])
            if rows:
                extra.append(np.array(rows, np.uint8).T)
    extra = np.concatenate(extra, axis=0) if extra else None
    x = LinearSolver(Dm, E.F, extra=extra).solve(v)
    if x is None:
        return None
    return d - 1, D, x


# -- Hochschild cohomology via the enveloping algebra -----------------------------

def hochschild_dims(A: FDAlgebra, nmax: int, graded: bool = False):
    """dim HH^n(A) for n = 0..nmax, from a minimal resolution of A over A^e.

    With ``graded=True`` the answer is {(n, internal degree): dim} instead.
    """
    if A.dim == 1:
        return [1] + [0] * nmax if not graded else {(0, tuple(0 for _ in (A.degrees or [()])[0])): 1}
    Ae = A.enveloping()
    M = Module.regular_bimodule(Ae)
    res = minimal_resolution(Ae, M, nmax + 1)
    F = A.field
    N = A.dim
    rho = M.rho

    def dstar(n):
        # cochains on P_n: phi = (phi(g_j))_j in A^{r_n}; (phi d_{n+1})(g_i) = sum_j d[i,j] . phi(g_j)
        Dm = res.D[n + 1]  # (r_{n+1}, r_n, N^2)
        act = fcontract(F, "ijk,kab->ijab", Dm, rho)  # (r_{n+1}, r_n, N, N)
        r1, r0 = Dm.shape[0], Dm.shape[1]
        # column convention: rows (i, c), columns (j, a)
        return act.transpose(0, 3, 1, 2).reshape(r1 * N, r0 * N)

    def degree_of(n, j, a):
        s = res.gens[n][j][1]
        return _sub(A.degrees[a], s)

    out = {} if graded else []
    for n in range(nmax + 1):
        dout = dstar(n)
        din = dstar(n - 1) if n >= 1 else np.zeros((len(res.gens[0]) * N, 0), np.uint8)
        if not graded:
            out.append(homology_dim(ComplexSlice(din, dout), F)[0])
            continue
        # split by internal degree of the cochain
        cols = defaultdict(list)
        for j in range(len(res.gens[n])):
            for a in range(N):
                cols[degree_of(n, j, a)].append(j * N + a)
        rows_next = defaultdict(list)
        for i in range(len(res.gens[n + 1])):
            for a in range(N):
                rows_next[degree_of(n + 1, i, a)].append(i * N + a)
        cols_prev = defaultdict(list)
        if n >= 1:
            for i in range(len(res.gens[n - 1])):
                for a in range(N):
                    cols_prev[degree_of(n - 1, i, a)].append(i * N + a)
        for E, idx in cols.items():
            dsub = dout[np.ix_(rows_next.get(E, []), idx)] if rows_next.get(E) else np.zeros((0, len(idx)), np.uint8)
            pidx = cols_prev.get(E, [])
            isub = din[np.ix_(idx, pidx)] if pidx else np.zeros((len(idx), 0), np.uint8)
            h = homology_dim(ComplexSlice(isub, dsub), F)[0]
            if h:
                out[(n, E)] = h
    return out


# ---------------------------------------------------------------------------
# commutative graded engine
# ---------------------------------------------------------------------------

class _CommRing:
    """Multiplication tables between graded pieces of a commutative presentation."""

    def __init__(self, S):
        if S.mode != "commutative":
            raise ResolutionError("graded resolutions need a commutative presentation")
        self.S = S
        self.F = S.field
        self._mult = {}

    def dim(self, d):
        if self.S.wt(d) < 0:
            return 0
        return self.S.piece(d).dim

    def mult(self, d1, d2) -> np.ndarray:
        key = (d1, d2)
        if key not in self._mult:
            P1, P2 = self.S.piece(d1), self.S.piece(d2)
            d12 = _add(d1, d2)
            M = np.zeros((P1.dim, P2.dim, self.dim(d12)), np.uint8)
            for i, u in enumerate(P1.basis):
                for j, v in enumerate(P2.basis):
                    M[i, j] = self.S.nf_vector(tuple(sorted(u + v)))[1]
            self._mult[key] = M
        return self._mult[key]

    def vec(self, poly: dict, d) -> np.ndarray:
        v = np.zeros(self.dim(d), np.uint8)
        for w, c in poly.items():
            dd, nv = self.S.nf_vector(w)
            if dd != d:
                raise ResolutionError(f"term {w} has degree {dd}, expected {d}")
            v = self.F.add(v, self.F.mul(np.uint8(c), nv))
        return v


@dataclass
class GradedResolution:
    """Minimal graded free resolution of S/N over a commutative graded ring S.

    ``gens[n]`` lists the degree shifts of the generators of P_n, and
    ``maps[n][i]`` is {j: coordinate vector of d(g_i)_j in S_{s_i - s_j}}.
    Everything is complete through generator weight ``max_weight``.
    """

    ring: object
    gens: list
    maps: list
    max_weight: int
    nmax: int

    def betti(self) -> dict:
        out = defaultdict(int)
        for n, gs in enumerate(self.gens):
            for s in gs:
                out[(n, s)] += 1
        return dict(out)


def graded_resolution(S, nmax: int, max_weight: int, ideal: Sequence[dict] | None = None) -> GradedResolution:
    """Resolve S/N where N is generated by ``ideal`` (default: the generators of S)."""
    R = _CommRing(S)
    F = R.F
    zero = tuple(0 for _ in range(S.arity))
    if ideal is None:
        ideal = [{(i,): 1} for i in range(len(S.gens))]
    ideal = [dict(p) for p in ideal if p]
    ideal_deg = [S.word_degree(next(iter(p))) for p in ideal]
    gw = [S.wt(g.degree) for g in S.gens]

    gens = [[zero]] + [[] for _ in range(nmax)]
    maps = [[{}]] + [[] for _ in range(nmax)]
    # kernel cache: kern[n][D] = rows over F_n(D) coordinates
    kern = [dict() for _ in range(nmax + 1)]

    def layout(n, D):
        """Offsets of each generator's block inside F_n(D)."""
        offs, total = [], 0
        for s in gens[n]:
            k = R.dim(_sub(D, s))
            offs.append((total, k))
            total += k
        return offs, total

    def lin(n, D):
        """Matrix of d_n: F_n(D) -> F_{n-1}(D) (row convention), n >= 1."""
        offs, tot = layout(n, D)
        offs_t, tot_t = layout(n - 1, D)
        M = np.zeros((tot, tot_t), np.uint8)
        for i, s in enumerate(gens[n]):
            o, k = offs[i]
            if not k:
                continue
            for j, c in maps[n][i].items():
                ot, kt = offs_t[j]
                if not kt or not np.any(c):
                    continue
                t = gens[n - 1][j]
                mt = R.mult(_sub(D, s), _sub(s, t))  # (k, dim c, kt)
                M[o:o + k, ot:ot + kt] = F.add(M[o:o + k, ot:ot + kt],
                                              fcontract(F, "abc,b->ac", mt, c))
        return M

    def times_gen(n, D, rows, g):
        """Multiply vectors in F_n(D) by generator g, landing in F_n(D + |g|)."""
        E = _add(D, S.gens[g].degree)
        offs, tot = layout(n, D)
        offs2, tot2 = layout(n, E)
        out = np.zeros((len(rows), tot2), np.uint8)
        for i, s in enumerate(gens[n]):
            o, k = offs[i]
            o2, k2 = offs2[i]
            if k and k2:
                RM = S.right_mul_matrix(_sub(D, s), g)
                out[:, o2:o2 + k2] = F.matmul(rows[:, o:o + k], RM)
        return out

    def degrees_of_weight(n, W):
        out = set()
        for s in gens[n]:
            w = W - S.wt(s)
            if w < 0:
                continue
            for E in S.nonzero_degrees(w):
                out.add(_add(s, E))
        return sorted(out)

    def kernel0(D):
        """N_D inside S_D."""
        rows = []
        for p, e in zip(ideal, ideal_deg):
            m = _sub(D, e)
            if S.wt(m) < 0 or not R.dim(m):
                continue
            rows.append(fcontract(F, "abc,b->ac", R.mult(m, e), R.vec(p, e)))
        if not rows:
            return np.zeros((0, R.dim(D)), np.uint8)
        return rref(np.concatenate(rows, axis=0), F).rows

    for W in range(0, max_weight + 1):
        for n in range(0, nmax):
            for D in degrees_of_weight(n, W):
                _, tot = layout(n, D)
                if n == 0:
                    K = kernel0(D)
                else:
                    K = kernel(lin(n, D).T, F).T if tot else np.zeros((0, 0), np.uint8)
                kern[n][D] = K
                if not len(K):
                    continue
                SK = []
                for g in range(len(S.gens)):
                    Dm = _sub(D, S.gens[g].degree)
                    if S.wt(Dm) < 0 or Dm not in kern[n] or not len(kern[n][Dm]):
                        continue
                    SK.append(times_gen(n, Dm, kern[n][Dm], g))
                base = np.concatenate(SK, axis=0) if SK else None
                keep = independent_subset(base, K, F)
                offs, _ = layout(n, D)
                for k in keep:
                    row = K[k]
                    entry = {}
                    for j, (o, kk) in enumerate(offs):
                        c = row[o:o + kk]
                        if np.any(c):
                            entry[j] = c.copy()
                    gens[n + 1].append(D)
                    maps[n + 1].append(entry)
    return GradedResolution(S, gens, maps, max_weight, nmax)


def graded_ext_dims(S, nmax: int, max_weight: int) -> dict:
    """{(-n, -D): dim Ext^n_S(k, k) in internal degree -D}, complete for wt(D) <= max_weight."""
    res = graded_resolution(S, nmax, max_weight)
    out = defaultdict(int)
    for n, gs in enumerate(res.gens):
        for s in gs:
            out[(-n,) + _neg(s)] += 1
    return dict(out)


def _doubled(S):
    """S (x) S with generators x' and x'' as a commutative presentation."""
    from .ncalg import Generator, Presentation
    n = len(S.gens)
    gens = [Generator(g.name + "_1", g.degree) for g in S.gens] + \
           [Generator(g.name + "_2", g.degree) for g in S.gens]
    rels = []
    for r in S.relations:
        rels.append(dict(r))
        rels.append({tuple(i + n for i in w): c for w, c in r.items()})
    return Presentation(S.field, S.arity, "commutative", gens, rels, (), S.scale, S.scale_mask,
                        f"{S.name}^e", max(S.bound, 2 * S.bound))


def bimodule_hh_dims(S, nmax: int, max_weight: int, degrees: Sequence[tuple] | None = None) -> dict:
    """HH^n(S) by multidegree from a minimal resolution of S over S (x) S.

    Returns {(-n,) + E: dim} where a cochain of internal degree E sends a
    generator of shift s to S_{s+E}; entries are reported for the given
    ``degrees`` (cochain degrees E) or for every E with wt(s+E) small enough
    to be covered.  Completeness: generators of P_{n+1} must be complete,
    which needs generator weights up to ``max_weight``.
    """
    Se = _doubled(S)
    F = S.field
    n = len(S.gens)
    ideal = []
    for i in range(n):
        ideal.append({(i,): 1, (i + n,): int(F.neg(np.uint8(1)))})
    res = graded_resolution(Se, nmax + 1, max_weight, ideal)
    R = _CommRing(S)
    Re = _CommRing(Se)

    # projection S^e -> S on pieces
    proj_cache = {}

    def proj(d):
        if d not in proj_cache:
            P = Se.piece(d)
            M = np.zeros((P.dim, R.dim(d)), np.uint8)
            for k, w in enumerate(P.basis):
                M[k] = S.nf_vector(tuple(sorted(i % n for i in w)))[1]
            proj_cache[d] = M
        return proj_cache[d]

    def cochain_matrix(m, E):
        """Column-convention matrix of Hom(P_m, S)_E -> Hom(P_{m+1}, S)_E."""
        src = [R.dim(_add(s, E)) for s in res.gens[m]]
        tgt = [R.dim(_add(s, E)) for s in res.gens[m + 1]]
        so = np.concatenate([[0], np.cumsum(src)]).astype(int)
        to = np.concatenate([[0], np.cumsum(tgt)]).astype(int)
        M = np.zeros((to[-1], so[-1]), np.uint8)
        for i, s in enumerate(res.gens[m + 1]):
            for j, c in res.maps[m + 1][i].items():
                t = res.gens[m][j]
                if not tgt[i] or not src[j]:
                    continue
                cd = _sub(s, t)
                pc = F.matmul(c[None, :], proj(cd))[0]  # element of S_{s-t}
                if not np.any(pc):
                    continue
                mt = R.mult(cd, _add(t, E))  # (dim cd, src_j, tgt_i)
                block = fcontract(F, "abc,a->bc", mt, pc)  # src_j x tgt_i
                M[to[i]:to[i + 1], so[j]:so[j + 1]] = F.add(M[to[i]:to[i + 1], so[j]:so[j + 1]], block.T)
        return M

    if degrees is None:
        degs = set()
        for m in range(nmax + 1):
            for s in res.gens[m]:
                for w in range(0, max_weight + 1):
                    for d in S.nonzero_degrees(w):
                        degs.add(_sub(d, s))
        degrees = sorted(degs)
    out = {}
    for E in degrees:
        for m in range(nmax + 1):
            dout = cochain_matrix(m, E)
            din = cochain_matrix(m - 1, E) if m >= 1 else np.zeros((dout.shape[1], 0), np.uint8)
            h = homology_dim(ComplexSlice(din, dout), F)[0]
            if h:
                out[(-m,) + tuple(E)] = h
    return out
