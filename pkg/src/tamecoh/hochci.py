"""Graded complete intersections: Cliff(q), Ext, Hochschild cohomology.

R = Q/(f_1..f_c) with Q = k[x_1..x_n] and the f_k a homogeneous regular
sequence in m^2.  The Clifford complex is free over R on ordered
monomials x^_I s^a, so its differential only needs d(x^_i) = sum b_ik s_k
and never the Clifford product itself.  Multidegrees are (H,) + E where H
is the Hochschild (cohomological, negated) degree and E has the shape of
the ring's own grading.
"""
from __future__ import annotations

import itertools
import os
import re
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Callable, Mapping, Sequence

import numpy as np

from .exactlin import ComplexSlice, homology_dim
from .ncalg import (Generator, Presentation, PresentationError, _data_dir, _int_expr,
                    catalog, quadratic_dual)

__all__ = [
    "CIError", "CIPresentation", "Jacobian", "divided_jacobian", "CliffordComplex",
    "clifford_complex", "ext_ci", "HHResult", "hh_ci", "koszul_hh", "KoszulComplex",
    "degree_monomial_enumeration", "verify_matrix_factorization", "load_factorizations",
    "polynomial_ring",
]

DEFAULT_HOCH_BOUND = 12
DEFAULT_INTERNAL_BOUND = 48

Poly = dict  # exponent vector -> integer coefficient


class CIError(ValueError):
    """Input is not a complete intersection of the supported kind."""


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


def _scale(c, a):
    return tuple(c * x for x in a)


# ---------------------------------------------------------------------------
# presentations

def _word_to_exps(w: tuple, n: int) -> tuple:
    e = [0] * n
    for i in w:
        e[i] += 1
    return tuple(e)


def _exps_to_word(e: tuple) -> tuple:
    return tuple(i for i, k in enumerate(e) for _ in range(k))


@dataclass
class CIPresentation:
    """R = Q/(f_1, ..., f_c), stored as a commutative presentation.

    ``relations`` are exponent dictionaries with integer coefficients in
    0..p-1 (their integer lifts are used for the derivative check).
    """

    ring: Presentation
    relations: list
    regularity_bound: int = 0

    @property
    def n(self) -> int:
        return len(self.ring.gens)

    @property
    def c(self) -> int:
        return len(self.relations)

    @property
    def names(self) -> list:
        return [g.name for g in self.ring.gens]

    def gen_degree(self, i: int) -> tuple:
        return self.ring.gens[i].degree

    def relation_degree(self, k: int) -> tuple:
        e = next(iter(self.relations[k]))
        d = (0,) * self.ring.arity
        for i, a in enumerate(e):
            d = _add(d, _scale(a, self.gen_degree(i)))
        return d

    @classmethod
    def from_presentation(cls, p: Presentation | str, check_regular: bool = True,
                          bound: int | None = None) -> "CIPresentation":
        if isinstance(p, str):
            p = catalog(p)
        if p.mode != "commutative":
            raise CIError(f"{p.name}: a complete intersection needs a commutative presentation")
        if p.field.order == 4:
            raise CIError("divided derivatives are only implemented over prime fields")
        n = len(p.gens)
        rels = []
        for r in p.relations:
            poly = {_word_to_exps(w, n): int(c) for w, c in r.items()}
            low = [e for e in poly if sum(e) < 2]
            if low:
                raise CIError(f"{p.name}: relation {p.poly_str(r)} is not in m^2")
            rels.append(poly)
        ci = cls(p, rels)
        if check_regular:
            ci.check_regular(bound)
        return ci

    def hilbert_mismatches(self, bound: int) -> list:
        """Degrees (weight <= bound) where dim R differs from the CI product formula."""
        p = self.ring
        wts = [p.wt(g.degree) for g in p.gens]
        if any(w <= 0 for w in wts):
            raise CIError("the ring grading has no positive weight")
        ambient = defaultdict(int)

        def rec(i, w, d):
            if i == self.n:
                ambient[d] += 1
                return
            k = 0
            while w + k * wts[i] <= bound:
                rec(i + 1, w + k * wts[i], _add(d, _scale(k, self.gen_degree(i))))
                k += 1

        rec(0, 0, (0,) * p.arity)
        rdeg = [self.relation_degree(k) for k in range(self.c)]
        out = []
        for d in sorted(ambient, key=p.wt):
            expect = 0
            for S in itertools.product((0, 1), repeat=self.c):
                e = d
                for k, on in enumerate(S):
                    if on:
                        e = _sub(e, rdeg[k])
                expect += (-1) ** sum(S) * ambient.get(e, 0)
            got = p.piece(d).dim
            if got != expect:
                out.append((d, got, expect))
        return out

    def check_regular(self, bound: int | None = None) -> None:
        if bound is None:
            fw = max((self.ring.wt(self.relation_degree(k)) for k in range(self.c)), default=0)
            gw = max(self.ring.wt(g.degree) for g in self.ring.gens)
            bound = min(max(2 * fw + gw, 12), max(self.ring.bound, 12))
        bad = self.hilbert_mismatches(bound)
        if bad:
            d, got, expect = bad[0]
            raise CIError(f"{self.ring.name}: the relations are not a regular sequence "
                          f"(degree {d}: dim {got}, complete intersection predicts {expect})")
        self.regularity_bound = bound


def polynomial_ring(names: Sequence[str], degrees: Sequence[tuple], field="GF(2)",
                    name: str = "Q") -> Presentation:
    gens = [Generator(a, tuple(d)) for a, d in zip(names, degrees)]
    return Presentation(field, len(gens[0].degree), "commutative", gens, [], name=name)


# ---------------------------------------------------------------------------
# derivatives

def _d1(f: Poly, i: int) -> Poly:
    out = defaultdict(int)
    for e, c in f.items():
        if e[i]:
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] += c * e[i]
    return dict(out)


def _d2_divided(f: Poly, i: int) -> Poly:
    out = defaultdict(int)
    for e, c in f.items():
        if e[i] >= 2:
            e2 = list(e)
            e2[i] -= 2
            out[tuple(e2)] += c * comb(e[i], 2)
    return dict(out)


def _mod(f: Poly, p: int) -> Poly:
    return {e: c % p for e, c in f.items() if c % p}


@dataclass
class Jacobian:
    """First partials b[i][k] and Hessian coefficients a[i][j][k], reduced mod p."""

    b: list
    a: list
    integral_check: bool


def divided_jacobian(ci: CIPresentation) -> Jacobian:
    p = ci.ring.field.order
    n, c = ci.n, ci.c
    b = [[_mod(_d1(ci.relations[k], i), p) for k in range(c)] for i in range(n)]
    a = [[[None] * c for _ in range(n)] for _ in range(n)]
    ok = True
    for k, f in enumerate(ci.relations):
        for i in range(n):
            for j in range(n):
                if i == j:
                    div = _d2_divided(f, i)
                    # over the integers d^2 f / dx^2 = 2 * divided second derivative
                    plain = _d1(_d1(f, i), i)
                    ok &= {e: v for e, v in plain.items() if v} == {e: 2 * v for e, v in div.items() if v}
                    a[i][j][k] = _mod(div, p)
                else:
                    a[i][j][k] = _mod(_d1(_d1(f, i), j), p)
    return Jacobian(b, a, ok)


# ---------------------------------------------------------------------------
# Cliff(q)

def _poly_str(names, f: Poly, field) -> str:
    if not f:
        return "0"
    terms = []
    for e in sorted(f, key=lambda e: (-sum(e), tuple(-x for x in e))):
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k) or "1"
        c = f[e]
        terms.append(mono if c == 1 else f"{field.fmt(c)}*{mono}" if mono != "1" else field.fmt(c))
    return " + ".join(terms)


class CliffordComplex:
    """Cliff(q) as a complex of free R-modules on x^_I s^a."""

    def __init__(self, ci: CIPresentation):
        self.ci = ci
        self.R = ci.ring
        self.F = ci.ring.field
        self.jac = divided_jacobian(ci)
        self.hat_names = [g + "^" for g in ci.names]
        self.s_names = ["s"] if ci.c == 1 else [f"s{k + 1}" for k in range(ci.c)]
        self.xdeg = [ci.gen_degree(i) for i in range(ci.n)]
        self.fdeg = [ci.relation_degree(k) for k in range(ci.c)]
        self._mult: dict = {}
        self._bases: dict = {}

    # -- presentation data ------------------------------------------------------
    def hat_degree(self, i: int) -> tuple:
        return (-1,) + _neg(self.xdeg[i])

    def s_degree(self, k: int) -> tuple:
        return (-2,) + _neg(self.fdeg[k])

    def _r_poly(self, f: Poly) -> str:
        """Image of a Q-polynomial in R, as text."""
        if not f:
            return "0"
        w = {_exps_to_word(e): c for e, c in f.items()}
        return self.R.poly_str(self.R.normal_form(w))

    def _s_comb(self, coeffs) -> str:
        terms = []
        for k, f in enumerate(coeffs):
            t = self._r_poly(f)
            if t == "0":
                continue
            terms.append(self.s_names[k] if t == "1" else
                         f"({t})*{self.s_names[k]}" if "+" in t else f"{t}*{self.s_names[k]}")
        return " + ".join(terms) or "0"

    def relations(self) -> list:
        """Clifford relations with coefficients in R, as strings."""
        out = []
        a = self.jac.a
        h = self.hat_names
        for i in range(self.ci.n):
            out.append(f"{h[i]}*{h[i]} = {self._s_comb(a[i][i])}")
        for i in range(self.ci.n):
            for j in range(i + 1, self.ci.n):
                out.append(f"{h[i]}*{h[j]} + {h[j]}*{h[i]} = {self._s_comb(a[i][j])}")
        return out

    def differential_text(self) -> dict:
        return {self.hat_names[i]: self._s_comb(self.jac.b[i]) for i in range(self.ci.n)}

    # -- slices -------------------------------------------------------------------
    def shapes(self, H: int) -> list:
        """(eps, alpha) with |eps| + 2|alpha| = -H."""
        m = -H
        out = []
        if m < 0:
            return out
        for eps in itertools.product((0, 1), repeat=self.ci.n):
            r = m - sum(eps)
            if r < 0 or r % 2:
                continue
            for alpha in _compositions(r // 2, self.ci.c):
                out.append((eps, alpha))
        return out

    def r_degree(self, E: tuple, eps, alpha) -> tuple:
        d = E
        for i, e in enumerate(eps):
            if e:
                d = _add(d, self.xdeg[i])
        for k, a in enumerate(alpha):
            d = _add(d, _scale(a, self.fdeg[k]))
        return d

    def basis(self, H: int, E: tuple) -> list:
        """[(eps, alpha, r-degree, dim, offset)] for the slice (H, E)."""
        key = (H, E)
        if key not in self._bases:
            out, off = [], 0
            for eps, alpha in self.shapes(H):
                d = self.r_degree(E, eps, alpha)
                dim = self.R.piece(d).dim if self.R.wt(d) >= 0 else 0
                if dim:
                    out.append((eps, alpha, d, dim, off))
                    off += dim
            self._bases[key] = (out, off)
        return self._bases[key]

    def _mult_matrix(self, d: tuple, i: int, k: int) -> np.ndarray:
        """Matrix (dim R_d x dim R_{d + deg b_ik}) of multiplication by b_ik."""
        key = (d, i, k)
        if key not in self._mult:
            f = self.jac.b[i][k]
            bd = _sub(self.fdeg[k], self.xdeg[i])
            td = _add(d, bd)
            P = self.R.piece(d)
            tdim = self.R.piece(td).dim if self.R.wt(td) >= 0 else 0
            M = np.zeros((P.dim, tdim), np.uint8)
            if tdim and f:
                F = self.F
                for r, u in enumerate(P.basis):
                    for e, c in f.items():
                        dd, v = self.R.nf_vector(tuple(sorted(u + _exps_to_word(e))))
                        M[r] = F.add(M[r], F.mul(np.uint8(c), v))
            self._mult[key] = M
        return self._mult[key]

    def differential_matrix(self, H: int, E: tuple) -> np.ndarray:
        """Columns: basis of (H, E); rows: basis of (H - 1, E)."""
        src, ns = self.basis(H, E)
        tgt, nt = self.basis(H - 1, E)
        F = self.F
        M = np.zeros((nt, ns), np.uint8)
        if not ns or not nt:
            return M
        pos = {(eps, alpha): (d, dim, off) for eps, alpha, d, dim, off in tgt}
        for eps, alpha, d, dim, off in src:
            ones = [i for i, e in enumerate(eps) if e]
            for j, i in enumerate(ones):
                sign = 1 if j % 2 == 0 else int(F.neg(np.uint8(1)))
                eps2 = tuple(0 if t == i else e for t, e in enumerate(eps))
                for k in range(self.ci.c):
                    if not self.jac.b[i][k]:
                        continue
                    alpha2 = tuple(a + (t == k) for t, a in enumerate(alpha))
                    if (eps2, alpha2) not in pos:
                        continue
                    d2, dim2, off2 = pos[(eps2, alpha2)]
                    B = self._mult_matrix(d, i, k)
                    blk = B.T if sign == 1 else F.mul(np.uint8(sign), B.T)
                    M[off2:off2 + dim2, off:off + dim] = F.add(M[off2:off2 + dim2, off:off + dim], blk)
        return M

    def check_d_squared(self, H: int, E: tuple) -> bool:
        A = self.differential_matrix(H, E)
        B = self.differential_matrix(H - 1, E)
        if not A.size or not B.size:
            return True
        return not np.any(self.F.matmul(B, A))

    def homology(self, H: int, E: tuple):
        """(dim, list of representative strings) for H at (H, E)."""
        dout = self.differential_matrix(H, E)
        din = self.differential_matrix(H + 1, E)
        sl = ComplexSlice(din, dout)
        h, reps = homology_dim(sl, self.F)
        return h, [self.element_str(H, E, reps[:, j]) for j in range(h)]

    def homology_dim(self, H: int, E: tuple) -> int:
        _, n = self.basis(H, E)
        if not n:
            return 0
        return homology_dim(ComplexSlice(self.differential_matrix(H + 1, E),
                                         self.differential_matrix(H, E)), self.F)[0]

    def element_str(self, H: int, E: tuple, vec) -> str:
        src, _ = self.basis(H, E)
        terms = []
        F = self.F
        for eps, alpha, d, dim, off in src:
            P = self.R.piece(d)
            for r in range(dim):
                c = int(vec[off + r])
                if not c:
                    continue
                parts = [] if not P.basis[r] else [self.R.word_str(P.basis[r])]
                parts += [self.hat_names[i] for i, e in enumerate(eps) if e]
                parts += [self.s_names[k] if a == 1 else f"{self.s_names[k]}^{a}"
                          for k, a in enumerate(alpha) if a]
                mono = "*".join(parts) or "1"
                terms.append(mono if c == 1 else f"{F.fmt(c)}*{mono}")
        return " + ".join(terms) or "0"

    def degrees(self, hoch_bound: int, internal_bound: int) -> list:
        """Every (H, E) with -hoch_bound <= H <= 0 and some nonzero slice term of R-weight <= bound."""
        out = set()
        R = self.R
        rdegs = [d for w in range(internal_bound + 1) for d in R.nonzero_degrees(w)]
        for m in range(hoch_bound + 1):
            for eps, alpha in self.shapes(-m):
                shift = self.r_degree((0,) * R.arity, eps, alpha)
                for d in rdegs:
                    out.add((-m, _sub(d, shift)))
        return sorted(out)


def _map(fn, keys, jobs: int):
    if jobs <= 1:
        return [fn(k) for k in keys]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(jobs) as ex:
        return list(ex.map(fn, keys))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for a in range(total, -1, -1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def clifford_complex(ci: CIPresentation | Presentation | str) -> CliffordComplex:
    if not isinstance(ci, CIPresentation):
        ci = CIPresentation.from_presentation(ci)
    return CliffordComplex(ci)


def ext_ci(ci: CIPresentation | Presentation | str) -> Presentation:
    """k (x)_R Cliff(q): generators x^_i, central s_k, constant Clifford relations."""
    C = clifford_complex(ci)
    ci = C.ci
    F = C.F
    n, c = ci.n, ci.c
    gens = [Generator(C.hat_names[i], C.hat_degree(i)) for i in range(n)]
    gens += [Generator(C.s_names[k], C.s_degree(k)) for k in range(c)]
    zero = (0,) * n
    one = 1
    neg1 = int(F.neg(np.uint8(1)))
    rels = []

    def const(f):
        return int(f.get(zero, 0)) % F.order

    for i in range(n):
        r = {(i, i): one}
        for k in range(c):
            a0 = const(C.jac.a[i][i][k])
            if a0:
                r[(n + k,)] = int(F.mul(np.uint8(neg1), np.uint8(a0)))
        rels.append(r)
        for j in range(i + 1, n):
            r = {(i, j): one, (j, i): one}
            for k in range(c):
                a0 = const(C.jac.a[i][j][k])
                if a0:
                    r[(n + k,)] = int(F.mul(np.uint8(neg1), np.uint8(a0)))
            rels.append(r)
    for k in range(c):
        for g in range(n + c):
            if g != n + k:
                if g > n + k or g < n:
                    rels.append({(n + k, g): one, (g, n + k): neg1})
    R = ci.ring
    mask = (False,) + R.scale_mask
    return Presentation(F, R.arity + 1, "free", gens, rels, (), R.scale, mask,
                        f"Ext_{R.name}(k,k)", max(R.bound, 48), False)


# ---------------------------------------------------------------------------
# Hochschild cohomology

@dataclass
class HHResult:
    """Dimensions of HH by multidegree (H,) + E, with representative monomial sums."""

    dims: dict
    reps: dict = dc_field(default_factory=dict)
    bound: tuple = ()
    ring: Presentation | None = None

    def degree(self, H: int, E: Sequence[int]) -> int:
        return self.dims.get((H,) + tuple(E), 0)

    def unscaled(self) -> dict:
        """Keys with the ring's stored scaling undone."""
        if self.ring is None:
            return dict(self.dims)
        return {(k[0],) + self.ring.unscale(k[1:]): v for k, v in self.dims.items()}


def hh_ci(ci: CIPresentation | Presentation | str, hoch_bound: int = DEFAULT_HOCH_BOUND,
          internal_bound: int = DEFAULT_INTERNAL_BOUND, degrees: Sequence[tuple] | None = None,
          with_reps: bool = False, jobs: int = 1) -> HHResult:
    """H*(Cliff(q), d) slice by slice.

    ``degrees`` restricts the computation to the listed (H,) + E keys; by
    default every slice within the bounds is computed.
    """
    C = clifford_complex(ci)
    if degrees is None:
        keys = C.degrees(hoch_bound, internal_bound)
    else:
        keys = [(k[0], tuple(k[1:])) for k in degrees]
    dims, reps = {}, {}

    def one(key):
        return C.homology(*key) if with_reps else (C.homology_dim(*key), [])

    for (H, E), (h, r) in zip(keys, _map(one, keys, jobs)):
        if h:
            dims[(H,) + E] = h
            if with_reps:
                reps[(H,) + E] = r
    return HHResult(dims, reps, (hoch_bound, internal_bound), C.R)


class KoszulComplex:
    """R (x) R^! with differential [e, -], e = sum x_i (x) x^_i."""

    def __init__(self, R: Presentation):
        if R.mode == "quiver":
            raise CIError("koszul_hh does not handle quivers")
        bad = [R.poly_str(r) for r in R.relations if any(len(w) != 2 for w in r)]
        if bad:
            raise CIError(f"{R.name}: koszul_hh needs quadratic relations; got {bad}")
        if R.mode != "commutative" and not R.koszul_trusted:
            raise CIError(f"{R.name}: noncommutative input must be flagged 'koszul trusted'")
        self.R = R
        self.D = quadratic_dual(R)
        self.F = R.field
        self.n = len(R.gens)
        self._left: dict = {}
        self._rmul: dict = {}
        self._bases: dict = {}

    def dual_degrees(self, h: int) -> list:
        """Internal degrees of words of length h in the dual generators."""
        out = set()
        for combo in itertools.combinations_with_replacement(range(self.n), h):
            d = (0,) * (self.R.arity + 1)
            for i in combo:
                d = _add(d, self.D.gens[i].degree)
            out.add(d)
        return sorted(out)

    def basis(self, H: int, E: tuple):
        key = (H, E)
        if key not in self._bases:
            out, off = [], 0
            if H <= 0:
                for dd in self.dual_degrees(-H):
                    P = self.D.piece(dd)
                    if not P.dim:
                        continue
                    rd = _sub(E, dd[1:])
                    if self.R.wt(rd) < 0:
                        continue
                    Q = self.R.piece(rd)
                    if Q.dim:
                        out.append((dd, rd, P.dim, Q.dim, off))
                        off += P.dim * Q.dim
            self._bases[key] = (out, off)
        return self._bases[key]

    def _dual_mul(self, dd: tuple, i: int, left: bool) -> np.ndarray:
        key = (dd, i, left)
        if key not in self._left:
            P = self.D.piece(dd)
            td = _add(dd, self.D.gens[i].degree)
            Q = self.D.piece(td)
            M = np.zeros((P.dim, Q.dim), np.uint8)
            for r, w in enumerate(P.basis):
                ww = (i,) + tuple(w) if left else tuple(w) + (i,)
                _, v = self.D.nf_vector(ww)
                M[r] = v
            self._left[key] = M
        return self._left[key]

    def _ring_mul(self, rd: tuple, i: int) -> np.ndarray:
        key = (rd, i)
        if key not in self._rmul:
            P = self.R.piece(rd)
            td = _add(rd, self.R.gens[i].degree)
            Q = self.R.piece(td)
            M = np.zeros((P.dim, Q.dim), np.uint8)
            for r, u in enumerate(P.basis):
                _, v = self.R.nf_vector(tuple(sorted(u + (i,))))
                M[r] = v
            self._rmul[key] = M
        return self._rmul[key]

    def differential_matrix(self, H: int, E: tuple) -> np.ndarray:
        src, ns = self.basis(H, E)
        tgt, nt = self.basis(H - 1, E)
        F = self.F
        M = np.zeros((nt, ns), np.uint8)
        if not ns or not nt:
            return M
        pos = {dd: (rd, pd, qd, off) for dd, rd, pd, qd, off in tgt}
        h = -H
        neg = int(F.neg(np.uint8(1)))
        for dd, rd, pd, qd, off in src:
            for i in range(self.n):
                td = _add(dd, self.D.gens[i].degree)
                if td not in pos:
                    continue
                trd, tpd, tqd, toff = pos[td]
                L = self._dual_mul(dd, i, True)
                Rm = self._dual_mul(dd, i, False)
                # x^_i w - (-1)^h w x^_i
                c = neg if h % 2 == 0 else 1
                W = F.add(L, F.mul(np.uint8(c), Rm)) if c != 1 else F.add(L, Rm)
                X = self._ring_mul(rd, i)
                # basis index (a, b) -> a * qd + b with a over dual, b over ring
                blk = np.kron(W, X).T
                M[toff:toff + tpd * tqd, off:off + pd * qd] = F.add(
                    M[toff:toff + tpd * tqd, off:off + pd * qd], blk)
        return M

    def check_d_squared(self, H: int, E: tuple) -> bool:
        A = self.differential_matrix(H, E)
        B = self.differential_matrix(H - 1, E)
        if not A.size or not B.size:
            return True
        return not np.any(self.F.matmul(B, A))

    def homology_dim(self, H: int, E: tuple) -> int:
        _, n = self.basis(H, E)
        if not n:
            return 0
        return homology_dim(ComplexSlice(self.differential_matrix(H + 1, E),
                                         self.differential_matrix(H, E)), self.F)[0]


def koszul_hh(R: Presentation | str, hoch_bound: int = DEFAULT_HOCH_BOUND,
              internal_bound: int = DEFAULT_INTERNAL_BOUND,
              degrees: Sequence[tuple] | None = None, jobs: int = 1) -> HHResult:
    """HH*(R) as H*(R (x) R^!, [e, -]) for a quadratic Koszul algebra R."""
    if isinstance(R, str):
        R = catalog(R)
    K = KoszulComplex(R)
    if degrees is None:
        keys = set()
        rdegs = [d for w in range(internal_bound + 1) for d in R.nonzero_degrees(w)]
        for h in range(hoch_bound + 1):
            for dd in K.dual_degrees(h):
                if K.D.piece(dd).dim:
                    for d in rdegs:
                        keys.add((-h, _add(d, dd[1:])))
        keys = sorted(keys)
    else:
        keys = [(k[0], tuple(k[1:])) for k in degrees]
    dims = {}
    for (H, E), h in zip(keys, _map(lambda k: K.homology_dim(*k), keys, jobs)):
        if h:
            dims[(H,) + E] = h
    return HHResult(dims, {}, (hoch_bound, internal_bound), R)


# ---------------------------------------------------------------------------
# monomial enumeration

def degree_monomial_enumeration(p: Presentation | str, target: Callable[[int], Sequence[int]],
                                ns: Sequence[int]) -> dict:
    """{n: normal-form monomials of p in degree target(n)}.

    The enumeration is exhaustive: a presentation with a positive weight
    has finitely many monomials in each degree.  Without one the search
    would be unbounded, which is an error.
    """
    if isinstance(p, str):
        p = catalog(p)
    if p.weight is None:
        raise CIError(f"{p.name}: no positive weight, so the monomial enumeration is unbounded")
    out = {}
    for n in ns:
        d = tuple(int(x) for x in target(n))
        if p.wt(d) < 0:
            out[n] = []
            continue
        P = p.piece(d, bound=max(p.bound, p.wt(d)))
        out[n] = [p.word_str(w) for w in P.basis]
    return out


# ---------------------------------------------------------------------------
# matrix factorisations

def _as_matrix(ring: Presentation, M) -> list:
    rows = []
    for row in M:
        rows.append([ring.poly(x) if isinstance(x, str) else dict(x) for x in row])
    return rows


def _matmul_poly(ring: Presentation, A: list, B: list) -> list:
    n, m, k = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = {}
            for t in range(m):
                if A[i][t] and B[t][j]:
                    acc = ring.poly_add(acc, ring.poly_mul(A[i][t], B[t][j]))
            row.append(ring.normal_form(acc) if acc else {})
        out.append(row)
    return out


def verify_matrix_factorization(A, B, f, ring: Presentation) -> bool:
    """True iff A*B = B*A = f*I over the polynomial ring ``ring``."""
    A = _as_matrix(ring, A)
    B = _as_matrix(ring, B)
    n = len(A)
    if any(len(r) != n for r in A) or len(B) != n or any(len(r) != n for r in B):
        raise CIError("matrix factorisation needs two square matrices of the same size")
    fp = ring.normal_form(ring.poly(f) if isinstance(f, str) else f)
    for P in (_matmul_poly(ring, A, B), _matmul_poly(ring, B, A)):
        for i in range(n):
            for j in range(n):
                want = fp if i == j else {}
                if ring.normal_form(ring.poly_add(P[i][j], {w: int(ring.field.neg(np.uint8(c)))
                                                            for w, c in want.items()})):
                    return False
    return True


_EXP = re.compile(r"\^\(([^)]*)\)")


def load_factorizations(name: str, params: Mapping[str, int] | None = None,
                        field=None) -> tuple:
    """Read a factorisation file: returns (ring, f, [(label, A, B)]).

    Format: ``ring x : (-3) ; y : (-4)``, ``poly <f>``, ``family <label>``
    followed by ``A : row ; row`` and ``B : row ; row`` with comma-separated
    entries.  ``param j = 1`` sets a default; exponents like ``y^(j+1)`` use
    the parameters.
    """
    path = name if os.path.isabs(name) or os.path.exists(name) else os.path.join(_data_dir(), name)
    if not path.endswith(".txt") and not os.path.exists(path):
        path += ".txt"
    params = dict(params or {})
    defaults, gens, fam, f, fld = {}, [], [], None, "GF(2)"
    with open(path) as fh:
        lines = fh.read().splitlines()
    for k, v in [l.split("#", 1)[0].strip()[6:].split("=") for l in lines
                 if l.split("#", 1)[0].strip().startswith("param ")]:
        defaults[k.strip()] = int(v)
    for k, v in defaults.items():
        params.setdefault(k, v)

    def sub(t):
        return _EXP.sub(lambda m: "^" + str(_int_expr(m.group(1), params)), t)

    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("param "):
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "field":
            fld = rest
        elif key == "ring":
            for part in rest.split(";"):
                nm, _, deg = part.partition(":")
                gens.append((nm.strip(), tuple(int(x) for x in deg.strip()[1:-1].split(","))))
        elif key == "poly":
            f = rest
        elif key == "family":
            fam.append([rest, None, None])
        elif key in ("A", "B"):
            body = rest.lstrip(":").strip()
            M = [[sub(x.strip()) for x in row.split(",")] for row in body.split(";")]
            fam[-1][1 if key == "A" else 2] = M
        else:
            raise PresentationError(f"{path}: unknown directive {key!r}")
    ring = polynomial_ring([g[0] for g in gens], [g[1] for g in gens], field or fld, "Q")
    return ring, f, [tuple(x) for x in fam]
