"""Multigraded presented algebras: commutative, free, and quivers with relations.

Every graded piece is realised by exact linear algebra.

* commutative mode: the degree-d piece is spanned by the monomials of
  degree d modulo the span of (monomial) * (relation).
* free mode: pieces are built by the recursion
  ``A_d = (sum_g A_{d-|g|} g) / span{u r : u a basis word of A_{d-|r|}}``,
  which needs a linear form that is positive on every generator degree.
* quiver mode: the algebra must be finite-dimensional.  It is computed as
  ``kQ/(I + J^{L+1})`` for increasing ``L`` until every path of length ``L``
  lies in the ideal.

Words are tuples of generator indices.  In commutative mode they are
sorted.  In quiver mode a word ``(u, v)`` means the composite ``u o v``
(first ``v``, then ``u``); the empty path at vertex ``i`` is ``(-1-i,)``.
Inside a piece, columns are ordered so that pivots land on the biggest
words and the retained basis words are the smallest ones.  Free words and
paths compare by length, then lexicographically with earlier generators
bigger.  Commutative monomials of one degree compare the other way round
on length (fewer factors is bigger), so ``z^2`` reduces to ``x^2*y`` in
k[x,y,z]/(x^2y+z^2).
"""
from __future__ import annotations

import itertools
import os
import re
import threading
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from importlib import resources
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import expr
from .exactlin import GF2, Echelon, Field, get_field, independent_subset, rref

__all__ = [
    "Generator",
    "Presentation",
    "GradedPiece",
    "PresentationError",
    "parse_presentation",
    "load_presentation",
    "catalog",
    "catalog_names",
    "degree_basis",
    "normal_form",
    "quadratic_dual",
    "derived_relation_check",
    "hilbert_series_truncated",
    "DEFAULT_BOUND",
]

DEFAULT_BOUND = 24
MODES = ("commutative", "free", "quiver")


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: tuple
    src: int | None = None
    tgt: int | None = None


@dataclass
class GradedPiece:
    degree: tuple
    basis: list
    columns: list = dc_field(default_factory=list, repr=False)
    echelon: Echelon | None = dc_field(default=None, repr=False)
    free_cols: list = dc_field(default_factory=list, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    dim = dimension


def _add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _word_key(w: tuple, shortest_first: bool = False):
    # larger key = bigger word; pivots go to the biggest words
    if shortest_first:
        return (-len(w), tuple(-i for i in w))
    return (len(w), tuple(-i for i in w))


class Presentation:
    """Generators with multidegrees plus homogeneous relations."""

    # expected Ext Poincare series (t homological, u internal), if recorded
    series: str | None = None

    def __init__(self, field: Field, arity: int, mode: str, gens: Sequence[Generator],
                 relations: Sequence[Mapping[tuple, int]], vertices: Sequence[str] = (),
                 scale: int = 1, scale_mask: Sequence[bool] | None = None,
                 name: str = "", bound: int = DEFAULT_BOUND, koszul_trusted: bool = False,
                 source: str = ""):
        if mode not in MODES:
            raise PresentationError(f"unknown mode {mode!r}")
        self.field = get_field(field)
        self.arity = arity
        self.mode = mode
        self.gens = list(gens)
        self.vertices = list(vertices)
        self.scale = scale
        if scale_mask is None:
            scale_mask = (True,) if arity == 1 else (False,) + (True,) * (arity - 1)
        self.scale_mask = tuple(scale_mask)
        self.name = name
        self.bound = bound
        self.koszul_trusted = koszul_trusted
        self.source = source
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        for g in self.gens:
            if len(g.degree) != arity:
                raise PresentationError(f"generator {g.name} has degree {g.degree}, expected {arity} components")
        if mode == "quiver":
            if not self.vertices:
                raise PresentationError("quiver mode needs vertices")
            for g in self.gens:
                if g.src is None or g.tgt is None:
                    raise PresentationError(f"arrow {g.name} lacks endpoints")
        self.relations = []
        for k, r in enumerate(relations):
            r = {self.canon(w): c % self.field.order if self.field.order != 4 else c
                 for w, c in r.items()}
            r = {w: c for w, c in r.items() if c}
            self._check_homogeneous(r, k)
            if r:
                self.relations.append(r)
        self.weight = self._find_weight()
        self._lock = threading.RLock()
        self._pieces: dict = {}
        self._rmul: dict = {}
        self._monos: dict = {}
        self._fd = None

    # -- words -------------------------------------------------------------
    def canon(self, w: tuple) -> tuple:
        return tuple(sorted(w)) if self.mode == "commutative" else tuple(w)

    def is_idempotent_word(self, w: tuple) -> bool:
        return len(w) == 1 and w[0] < 0

    def word_degree(self, w: tuple) -> tuple:
        d = (0,) * self.arity
        for i in w:
            if i >= 0:
                d = _add(d, self.gens[i].degree)
        return d

    def word_ends(self, w: tuple):
        """(source vertex, target vertex) of a path; None outside quiver mode."""
        if self.mode != "quiver":
            return None
        if self.is_idempotent_word(w):
            v = -1 - w[0]
            return v, v
        return self.gens[w[-1]].src, self.gens[w[0]].tgt

    def mul_words(self, u: tuple, v: tuple):
        if self.mode == "commutative":
            return tuple(sorted(u + v))
        if self.mode == "free":
            return u + v
        su, tu = self.word_ends(u)
        sv, tv = self.word_ends(v)
        if su != tv:
            return None
        if self.is_idempotent_word(u):
            return v
        if self.is_idempotent_word(v):
            return u
        return u + v

    def word_str(self, w: tuple) -> str:
        if self.is_idempotent_word(w):
            return f"e_{self.vertices[-1 - w[0]]}"
        if not w:
            return "1"
        out = []
        for name, grp in itertools.groupby(self.gens[i].name for i in w):
            k = len(list(grp))
            out.append(name if k == 1 else f"{name}^{k}")
        return "*".join(out)

    def one(self) -> dict:
        if self.mode == "quiver":
            return {(-1 - v,): 1 for v in range(len(self.vertices))}
        return {(): 1}

    def _check_homogeneous(self, r: dict, k: int) -> None:
        degs = {self.word_degree(w) for w in r}
        if len(degs) > 1:
            raise PresentationError(f"relation {k + 1} is inhomogeneous: degrees {sorted(degs)}")
        if self.mode == "quiver":
            ends = set()
            for w in r:
                for a, b in zip(w, w[1:]):
                    if a >= 0 and b >= 0 and self.gens[a].src != self.gens[b].tgt:
                        raise PresentationError(f"relation {k + 1}: word {self.word_str(w)} is not a path")
                ends.add(self.word_ends(w))
            if len(ends) > 1:
                raise PresentationError(f"relation {k + 1} mixes paths with different endpoints")

    def _find_weight(self):
        degs = [g.degree for g in self.gens]
        if not degs:
            return (1,) + (0,) * (self.arity - 1)
        # widen the search box only when the small one has no positive functional
        for r in (2, 5, 12):
            if (2 * r + 1) ** self.arity > 2_000_000:
                break
            cands = []
            for lam in itertools.product(range(-r, r + 1), repeat=self.arity):
                if all(sum(a * b for a, b in zip(lam, d)) > 0 for d in degs):
                    cands.append((sum(abs(x) for x in lam), tuple(-abs(x) for x in lam), lam))
            if cands:
                return min(cands)[2]
        return None

    def wt(self, d: tuple) -> int:
        if self.weight is None:
            raise PresentationError(f"{self.name or 'presentation'} has no positive grading")
        return sum(a * b for a, b in zip(self.weight, d))

    def unscale(self, d: tuple):
        """Undo the stored scaling of half-integral gradings."""
        from fractions import Fraction
        out = []
        for x, m in zip(d, self.scale_mask):
            if m and self.scale != 1:
                f = Fraction(x, self.scale)
                out.append(int(f) if f.denominator == 1 else f)
            else:
                out.append(x)
        return tuple(out)

    # -- polynomials ---------------------------------------------------------
    def poly(self, text: str) -> dict:
        """Parse a noncommutative polynomial in the generator names."""
        tree = expr.parse(text)
        names = dict(self.index)
        if self.mode == "quiver":
            for v, vn in enumerate(self.vertices):
                names.setdefault(f"e_{vn}", -1 - v)
        unknown = expr.names_in(tree) - set(names)
        if unknown:
            raise PresentationError(f"unknown names {sorted(unknown)} in {text!r}")
        env = {n: _Poly(self, {((i,) if i >= 0 else (i,)): 1}) for n, i in names.items()}
        F = self.field
        return expr.evaluate(tree, env, lambda n: _Poly(self, {w: F.from_int(n) for w in self.one()}),
                             power=lambda b, k: b ** k).terms

    def poly_mul(self, a: dict, b: dict) -> dict:
        return (_Poly(self, a) * _Poly(self, b)).terms

    def poly_add(self, a: dict, b: dict) -> dict:
        return (_Poly(self, a) + _Poly(self, b)).terms

    def poly_str(self, p: Mapping[tuple, int]) -> str:
        if not p:
            return "0"
        F = self.field
        terms = []
        for w in sorted(p, key=self.key):
            c = p[w]
            s = self.word_str(w)
            terms.append(s if c == 1 else f"{F.fmt(c)}*{s}")
        return " + ".join(terms)

    def relation_degree(self, r: dict) -> tuple:
        return self.word_degree(next(iter(r)))

    # -- graded pieces -------------------------------------------------------
    def _check_bound(self, d: tuple, bound: int | None) -> None:
        b = self.bound if bound is None else bound
        if self.mode != "quiver" and self.wt(d) > b:
            raise PresentationError(f"degree {d} has weight {self.wt(d)} beyond the bound {b}")

    def piece(self, d: Sequence[int], bound: int | None = None) -> GradedPiece:
        d = tuple(int(x) for x in d)
        if len(d) != self.arity:
            raise PresentationError(f"degree {d} should have {self.arity} components")
        with self._lock:
            if d in self._pieces:
                return self._pieces[d]
        if self.mode == "quiver":
            P = self._quiver_piece(d)
        else:
            if self.wt(d) < 0:
                P = GradedPiece(d, [])
            else:
                self._check_bound(d, bound if bound is not None else max(self.bound, self.wt(d)))
                P = self._comm_piece(d) if self.mode == "commutative" else self._free_piece(d)
        with self._lock:
            self._pieces[d] = P
        return P

    def monomials(self, d: tuple) -> list:
        """All commutative monomials (sorted words) of degree d."""
        with self._lock:
            if d in self._monos:
                return self._monos[d]
        out = [tuple(g for g, a in enumerate(e) for _ in range(a)) for e in self._mono_suffix(0, d)]
        out.sort(key=self.key, reverse=True)
        with self._lock:
            self._monos[d] = out
        return out

    def _mono_suffix(self, k: int, d: tuple) -> tuple:
        """Exponent vectors of generators k.. with total degree d (memoised)."""
        memo = self.__dict__.setdefault("_msuf", {})
        key = (k, d)
        if key in memo:
            return memo[key]
        n = len(self.gens)
        if not n:
            return ((),) if not any(d) else ()
        W = self.wt(d)
        out = []
        if W >= 0:
            g = self.gens[k].degree
            w = self.wt(g)
            if k == n - 1:
                a, r = divmod(W, w)
                if not r and tuple(a * x for x in g) == d:
                    out.append((a,))
            else:
                for a in range(W // w, -1, -1):
                    rest = _sub(d, tuple(a * x for x in g))
                    out.extend((a,) + e for e in self._mono_suffix(k + 1, rest))
        memo[key] = res = tuple(out)
        return res

    def key(self, w: tuple):
        return _word_key(w, self.mode == "commutative")

    def _finish_piece(self, d, cols, rows) -> GradedPiece:
        F = self.field
        order = sorted(range(len(cols)), key=lambda i: self.key(cols[i]), reverse=True)
        cols = [cols[i] for i in order]
        if rows:
            M = np.array(rows, dtype=np.uint8)[:, order]
            E = rref(M, F)
        else:
            E = rref(np.zeros((0, len(cols)), np.uint8), F)
        piv = set(E.pivots)
        free = [j for j in range(len(cols)) if j not in piv]
        return GradedPiece(d, [cols[j] for j in free], cols, E, free)

    def _comm_piece(self, d) -> GradedPiece:
        cols = self.monomials(d)
        if not cols:
            return GradedPiece(d, [])
        pos = {w: i for i, w in enumerate(cols)}
        rows = []
        for r in self.relations:
            rd = self.relation_degree(r)
            e = _sub(d, rd)
            if self.wt(e) < 0:
                continue
            for m in self.monomials(e):
                v = np.zeros(len(cols), np.uint8)
                for w, c in r.items():
                    v[pos[tuple(sorted(m + w))]] = int(self.field.add(v[pos[tuple(sorted(m + w))]], c))
                rows.append(v)
        # _finish_piece reorders columns; pass rows in original column order
        return self._finish_piece(d, cols, rows)

    def _free_piece(self, d) -> GradedPiece:
        F = self.field
        if not any(d):
            return GradedPiece(d, [()], [()], rref(np.zeros((0, 1), np.uint8), F), [0])
        cols = []
        start = {}
        for gi, g in enumerate(self.gens):
            e = _sub(d, g.degree)
            if self.wt(e) < 0:
                continue
            P = self.piece(e)
            if P.dim:
                start[gi] = (len(cols), P)
                cols.extend(b + (gi,) for b in P.basis)
        if not cols:
            return GradedPiece(d, [])
        rows = []
        for r in self.relations:
            e = _sub(d, self.relation_degree(r))
            if self.wt(e) < 0:
                continue
            P = self.piece(e)
            for bi in range(P.dim):
                v = np.zeros(len(cols), np.uint8)
                ok = True
                for w, c in r.items():
                    vec = np.zeros(P.dim, np.uint8)
                    vec[bi] = 1
                    cur = e
                    for g in w[:-1]:
                        vec = F.matmul(vec[None, :], self.right_mul_matrix(cur, g))[0]
                        cur = _add(cur, self.gens[g].degree)
                    last = w[-1]
                    if last not in start:
                        if np.any(vec):
                            raise AssertionError("inconsistent piece bookkeeping")
                        continue
                    s0, Q = start[last]
                    v[s0:s0 + Q.dim] = F.add(v[s0:s0 + Q.dim], F.mul(np.uint8(c), vec))
                if ok:
                    rows.append(v)
        return self._finish_piece(d, cols, rows)

    def _reduce_cols(self, P: GradedPiece, v: np.ndarray) -> np.ndarray:
        """Coordinates in P.basis of a vector given over P.columns (sorted order)."""
        if P.echelon is not None and P.echelon.rank:
            v = P.echelon.reduce(v)
        return v[P.free_cols]

    def right_mul_matrix(self, d: tuple, g: int) -> np.ndarray:
        """Matrix of right multiplication by generator g from degree d (row vectors)."""
        key = (d, g)
        with self._lock:
            if key in self._rmul:
                return self._rmul[key]
        P = self.piece(d)
        e = _add(d, self.gens[g].degree)
        Q = self.piece(e)
        M = np.zeros((P.dim, Q.dim), np.uint8)
        if P.dim and Q.dim:
            if self.mode == "free":
                # columns of Q: words b + (g,) for b in P.basis live in a block
                pos = {w: i for i, w in enumerate(Q.columns)}
                for bi, b in enumerate(P.basis):
                    v = np.zeros(len(Q.columns), np.uint8)
                    v[pos[b + (g,)]] = 1
                    M[bi] = self._reduce_cols(Q, v)
            else:
                for bi, b in enumerate(P.basis):
                    M[bi] = self.nf_vector(self.mul_words(b, (g,)))[1]
        with self._lock:
            self._rmul[key] = M
        return M

    def nf_vector(self, w: tuple):
        """(degree, coordinates in the piece basis) of a single word."""
        w = self.canon(w)
        d = self.word_degree(w)
        if self.mode == "quiver":
            return self._quiver_nf(w)
        P = self.piece(d)
        if self.mode == "commutative":
            pos = {c: i for i, c in enumerate(P.columns)}
            v = np.zeros(len(P.columns), np.uint8)
            if w in pos:
                v[pos[w]] = 1
            return d, self._reduce_cols(P, v)
        vec = np.ones(1, np.uint8)
        cur = (0,) * self.arity
        for g in w:
            vec = self.field.matmul(vec[None, :], self.right_mul_matrix(cur, g))[0]
            cur = _add(cur, self.gens[g].degree)
        return d, vec

    def normal_form(self, p) -> dict:
        """Reduce a word, polynomial or string to {basis word: coefficient}."""
        if isinstance(p, str):
            p = self.poly(p)
        elif isinstance(p, tuple):
            p = {p: 1}
        F = self.field
        acc: dict = {}
        for w, c in p.items():
            d, v = self.nf_vector(w)
            P = self.piece(d) if self.mode != "quiver" else self._quiver_piece_for_word(w)
            for bi in np.nonzero(v)[0]:
                bw = P.basis[bi]
                acc[bw] = int(F.add(np.uint8(acc.get(bw, 0)), F.mul(np.uint8(c), v[bi])))
        return {w: c for w, c in acc.items() if c}

    # -- quiver algebras -----------------------------------------------------
    def _paths_upto(self, L: int) -> list:
        paths = [(-1 - v,) for v in range(len(self.vertices))]
        layer = [(a,) for a in range(len(self.gens))]
        length = 1
        while layer and length <= L:
            paths.extend(layer)
            nxt = []
            for p in layer:
                s = self.gens[p[-1]].src
                for a, g in enumerate(self.gens):
                    if g.tgt == s:
                        nxt.append(p + (a,))
            layer = nxt
            length += 1
        return paths

    def _path_key(self, w):
        src, tgt = self.word_ends(w)
        return (self.word_degree(w), src, tgt)

    def _build_quiver(self, max_len: int = 64):
        F = self.field
        for L in range(1, max_len + 1):
            paths = self._paths_upto(L)
            groups = defaultdict(list)
            for p in paths:
                groups[self._path_key(p)].append(p)
            cols = {k: sorted(v, key=_word_key, reverse=True) for k, v in groups.items()}
            pos = {k: {w: i for i, w in enumerate(v)} for k, v in cols.items()}

            def vec_of(poly, key):
                v = np.zeros(len(cols[key]), np.uint8)
                for w, c in poly.items():
                    if len(w) <= L or self.is_idempotent_word(w):
                        if w in pos[key]:
                            v[pos[key][w]] = int(F.add(v[pos[key][w]], np.uint8(c)))
                return v

            ideal = {k: np.zeros((0, len(v)), np.uint8) for k, v in cols.items()}
            ech = {}
            frontier = defaultdict(list)
            for r in self.relations:
                w0 = next(iter(r))
                key = self._path_key(w0)
                if key not in cols:
                    continue
                frontier[key].append(vec_of(r, key))
            while frontier:
                new_front = defaultdict(list)
                added = {}
                for key, vecs in frontier.items():
                    V = np.array(vecs, dtype=np.uint8)
                    if key in ech and ech[key].rank:
                        V = ech[key].reduce(V)
                    V = V[np.any(V, axis=1)]
                    if not len(V):
                        continue
                    E_new = rref(V, F)
                    rows = E_new.rows
                    ideal[key] = np.concatenate([ideal[key], rows], axis=0)
                    ech[key] = rref(ideal[key], F)
                    added[key] = rows
                for key, rows in added.items():
                    for row in rows:
                        poly = {cols[key][i]: int(row[i]) for i in np.nonzero(row)[0]}
                        for a, g in enumerate(self.gens):
                            for side in (0, 1):
                                prod = {}
                                for w, c in poly.items():
                                    m = self.mul_words((a,), w) if side == 0 else self.mul_words(w, (a,))
                                    if m is None or (len(m) > L and not self.is_idempotent_word(m)):
                                        continue
                                    prod[m] = int(F.add(np.uint8(prod.get(m, 0)), np.uint8(c)))
                                prod = {w: c for w, c in prod.items() if c}
                                if prod:
                                    k2 = self._path_key(next(iter(prod)))
                                    new_front[k2].append(vec_of(prod, k2))
                frontier = new_front
            # do all paths of length L lie in the ideal?
            done = True
            for key, ws in cols.items():
                longs = [i for i, w in enumerate(ws) if len(w) == L and not self.is_idempotent_word(w)]
                if not longs:
                    continue
                E = ech.get(key)
                for i in longs:
                    u = np.zeros(len(ws), np.uint8)
                    u[i] = 1
                    if E is None or not E.contains(u):
                        done = False
                        break
                if not done:
                    break
            if done:
                pieces = {}
                for key, ws in cols.items():
                    E = ech.get(key) or rref(np.zeros((0, len(ws)), np.uint8), F)
                    piv = set(E.pivots)
                    free = [j for j in range(len(ws)) if j not in piv]
                    pieces[key] = GradedPiece(key[0], [ws[j] for j in free], ws, E, free)
                self._fd = {"L": L, "pieces": pieces, "pos": pos}
                return self._fd
        raise PresentationError(f"quiver algebra {self.name} is not finite-dimensional up to path length {max_len}")

    def quiver_data(self):
        with self._lock:
            if self._fd is None:
                self._build_quiver()
            return self._fd

    def _quiver_piece_for_word(self, w):
        return self.quiver_data()["pieces"].get(self._path_key(w), GradedPiece(self.word_degree(w), []))

    def is_path(self, w: tuple) -> bool:
        """Whether consecutive arrows compose (``a*b`` means b first)."""
        if self.is_idempotent_word(w):
            return True
        return all(self.gens[w[i + 1]].tgt == self.gens[w[i]].src for i in range(len(w) - 1))

    def _quiver_nf(self, w):
        data = self.quiver_data()
        key = self._path_key(w)
        P = data["pieces"].get(key)
        if P is None or not self.is_path(w) or (len(w) > data["L"] and not self.is_idempotent_word(w)):
            return key[0], np.zeros(P.dim if P else 0, np.uint8)
        v = np.zeros(len(P.columns), np.uint8)
        v[data["pos"][key][w]] = 1
        return key[0], self._reduce_cols(P, v)

    def _quiver_piece(self, d) -> GradedPiece:
        data = self.quiver_data()
        basis = []
        for key, P in sorted(data["pieces"].items(), key=lambda kv: (kv[0][1], kv[0][2])):
            if key[0] == d:
                basis.extend(P.basis)
        return GradedPiece(d, basis)

    def quiver_basis(self) -> list:
        """All basis paths of a finite-dimensional quiver algebra."""
        data = self.quiver_data()
        out = []
        for key in sorted(data["pieces"], key=lambda k: (k[1], k[2], k[0])):
            out.extend(data["pieces"][key].basis)
        return out

    # -- enumeration -----------------------------------------------------------
    def nonzero_degrees(self, weight: int) -> list:
        """Degrees of the given weight whose piece is nonzero (not for quivers)."""
        memo = getattr(self, "_nzdeg", None)
        if memo is None:
            memo = self._nzdeg = {0: [(0,) * self.arity]}
        if weight in memo:
            return memo[weight]
        if weight < 0:
            return []
        cand = set()
        for g in self.gens:
            w = self.wt(g.degree)
            for d in self.nonzero_degrees(weight - w):
                cand.add(_add(d, g.degree))
        out = sorted(d for d in cand if self.piece(d).dim)
        memo[weight] = out
        return out

    def __repr__(self):
        return f"Presentation({self.name or '?'}, {self.mode}, {len(self.gens)} generators, {len(self.relations)} relations)"


class _Poly:
    """Throwaway polynomial wrapper used while parsing relations."""

    __slots__ = ("p", "terms")

    def __init__(self, p: Presentation, terms: dict):
        self.p = p
        self.terms = {w: c for w, c in terms.items() if c}

    def _lift(self, o):
        if isinstance(o, _Poly):
            return o
        return _Poly(self.p, {w: self.p.field.from_int(o) for w in self.p.one()})

    def __add__(self, o):
        o = self._lift(o)
        F = self.p.field
        out = dict(self.terms)
        for w, c in o.terms.items():
            out[w] = int(F.add(np.uint8(out.get(w, 0)), np.uint8(c)))
        return _Poly(self.p, out)

    def __neg__(self):
        F = self.p.field
        return _Poly(self.p, {w: int(F.neg(np.uint8(c))) for w, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __mul__(self, o):
        o = self._lift(o)
        F = self.p.field
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in o.terms.items():
                m = self.p.mul_words(w1, w2)
                if m is None:
                    continue
                m = self.p.canon(m)
                out[m] = int(F.add(np.uint8(out.get(m, 0)), F.mul(np.uint8(c1), np.uint8(c2))))
        return _Poly(self.p, out)

    def __pow__(self, k: int):
        out = self._lift(1)
        for _ in range(k):
            out = out * self
        return out


# -- text format -----------------------------------------------------------------

_PARAM_EXP = re.compile(r"\^\(([^()]*)\)")


def _int_expr(text: str, params: Mapping[str, int]) -> int:
    t = re.sub(r"(\d)([A-Za-z_])", r"\1*\2", text.strip())
    tree = expr.parse(t)
    val = expr.evaluate(tree, params, lambda n: n)
    return int(val)


def _degree(text: str, params) -> tuple:
    t = text.strip()
    if not (t.startswith("(") and t.endswith(")")):
        raise PresentationError(f"degree {text!r} must be a parenthesised tuple")
    return tuple(_int_expr(x, params) for x in t[1:-1].split(","))


def parse_presentation(text: str, params: Mapping[str, int] | None = None,
                       source: str = "<string>") -> Presentation:
    """Read the line-oriented presentation format.

    Directives: ``name``, ``param q = 2``, ``field GF(2)``, ``grading 3 scale 2``,
    ``mode commutative|free|quiver``, ``vertex k``, ``gen x : (-1,-2,0)``,
    ``arrow a : M -> k : (1, 2q-1)``, ``rel <polynomial or equation>``,
    ``bound 24``, ``koszul trusted``, ``series <expression>``.  ``#`` starts a comment.  Degree
    components and parenthesised exponents may use the parameters.
    """
    params = dict(params or {})
    field, arity, scale, mode, name, bound = GF2, None, 1, "commutative", "", DEFAULT_BOUND
    scale_mask = None
    vertices, gens, rel_lines = [], [], []
    trusted = False
    series = None
    defaults = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "name":
                name = rest
            elif key == "param":
                pname, _, val = rest.partition("=")
                defaults[pname.strip()] = int(val)
            elif key == "field":
                field = get_field(rest)
            elif key == "grading":
                parts = rest.split()
                arity = int(parts[0])
                if "scale" in parts:
                    scale = int(parts[parts.index("scale") + 1])
                if "on" in parts:
                    on = {int(x) for x in parts[parts.index("on") + 1].split(",")}
                    scale_mask = tuple(i + 1 in on for i in range(arity))
            elif key == "mode":
                mode = rest
            elif key == "bound":
                bound = int(rest)
            elif key == "series":
                series = rest
            elif key == "koszul":
                trusted = rest == "trusted"
            elif key == "vertex":
                vertices.extend(rest.replace(",", " ").split())
            elif key in ("gen", "arrow"):
                for k, v in defaults.items():
                    params.setdefault(k, v)
                parts = [s.strip() for s in rest.split(":")]
                gname = parts[0]
                if key == "gen":
                    gens.append(Generator(gname, _degree(parts[1], params)))
                else:
                    src, _, tgt = parts[1].partition("->")
                    src, tgt = src.strip(), tgt.strip()
                    if src not in vertices or tgt not in vertices:
                        raise PresentationError(f"arrow {gname} uses an undeclared vertex")
                    gens.append(Generator(gname, _degree(parts[2], params),
                                          vertices.index(src), vertices.index(tgt)))
            elif key == "rel":
                rel_lines.append((lineno, rest))
            else:
                raise PresentationError(f"unknown directive {key!r}")
        except PresentationError as exc:
            raise PresentationError(f"{source}:{lineno}: {exc}") from None
        except (ValueError, KeyError) as exc:
            raise PresentationError(f"{source}:{lineno}: {exc}") from None
    for k, v in defaults.items():
        params.setdefault(k, v)
    if arity is None:
        arity = len(gens[0].degree) if gens else 1
    P = Presentation(field, arity, mode, gens, [], vertices, scale, scale_mask, name, bound,
                     trusted, source)
    rels = []
    for lineno, txt in rel_lines:
        txt = _PARAM_EXP.sub(lambda m: "^" + str(_int_expr(m.group(1), params)), txt)
        try:
            r = P.poly(txt)
            P._check_homogeneous(r, len(rels))
        except PresentationError as exc:
            raise PresentationError(f"{source}:{lineno}: {exc}") from None
        rels.append(r)
    out = Presentation(field, arity, mode, gens, rels, vertices, scale, scale_mask, name,
                       bound, trusted, source)
    out.series = series
    return out


def _data_dir() -> str:
    env = os.environ.get("TAMECOH_DATA")
    if env:
        return env
    return str(resources.files("tamecoh") / "data")


def catalog_names() -> list:
    d = _data_dir()
    # A-infinity tables, morphisms and factorisation fixtures share the directory
    skip = ("_", "ainf_", "morph_", "mf_")
    return sorted(f[:-4] for f in os.listdir(d) if f.endswith(".txt") and not f.startswith(skip))


def _split_name(name: str):
    base, *opts = name.split(":")
    params = {}
    for o in opts:
        m = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*=\s*(\d+)\s*", o)
        if m:
            params[m.group(1)] = int(m.group(2))
        elif not re.fullmatch(r"\s*[A-Za-z_]\w*\s*(>=|≥)\s*\d+\s*", o):
            raise PresentationError(f"cannot read catalog option {o!r}")
    return base, params


def load_presentation(path: str, params: Mapping[str, int] | None = None) -> Presentation:
    with open(path) as fh:
        return parse_presentation(fh.read(), params, source=path)


def catalog(name: str) -> Presentation:
    """A named ring from the shipped data directory, e.g. ``"HBD:q=2"``."""
    base, params = _split_name(name)
    path = os.path.join(_data_dir(), base + ".txt")
    if not os.path.exists(path):
        raise PresentationError(f"unknown catalog entry {name!r}; available: {', '.join(catalog_names())}")
    P = load_presentation(path, params)
    if "q" in params and params["q"] & (params["q"] - 1):
        raise PresentationError("q must be a power of two")
    return P


# -- module-level operations -------------------------------------------------------

def degree_basis(p: Presentation, d: Sequence[int], bound: int | None = None) -> GradedPiece:
    return p.piece(tuple(d), bound)


def normal_form(p: Presentation, word) -> dict:
    return p.normal_form(word)


def derived_relation_check(p: Presentation, identity: str) -> bool:
    """True when ``identity`` (an equation or polynomial) holds in the quotient."""
    return not p.normal_form(p.poly(identity))


def hilbert_series_truncated(p: Presentation, total_degree_bound: int) -> dict:
    """{degree: dim} for every nonzero piece of weight at most the bound."""
    if p.mode == "quiver":
        data = p.quiver_data()
        out: dict = defaultdict(int)
        for key, P in data["pieces"].items():
            out[key[0]] += P.dim
        return dict(out)
    out = {}
    for w in range(0, total_degree_bound + 1):
        for d in p.nonzero_degrees(w):
            out[d] = p.piece(d).dim
    return out


def quadratic_dual(p: Presentation) -> Presentation:
    """R^! = k<x^_i>/(S^perp) for a quadratic algebra R = T(V)/(S).

    Generator x^_i gets degree (-1, -|x_i|) (a new first component).  In
    commutative mode S also contains the commutators x_i x_j - x_j x_i.
    The pairing is <x^_i x^_j, x_k x_l> = delta_ik delta_jl.
    """
    if p.mode == "quiver":
        raise PresentationError("quadratic_dual is not implemented for quivers")
    bad = [p.poly_str(r) for r in p.relations if any(len(w) != 2 for w in r)]
    if bad:
        raise PresentationError(f"non-quadratic relations: {bad}")
    F = p.field
    n = len(p.gens)
    rows = []
    for r in p.relations:
        v = np.zeros(n * n, np.uint8)
        for w, c in r.items():
            v[w[0] * n + w[1]] = int(F.add(v[w[0] * n + w[1]], np.uint8(c)))
        rows.append(v)
        if p.mode == "commutative":
            # r stands for every ordering of its monomials; S contains all of them
            pass
    if p.mode == "commutative":
        for i in range(n):
            for j in range(i + 1, n):
                v = np.zeros(n * n, np.uint8)
                v[i * n + j] = 1
                v[j * n + i] = int(F.neg(np.uint8(1)))
                rows.append(v)
    S = np.array(rows, dtype=np.uint8) if rows else np.zeros((0, n * n), np.uint8)
    from .exactlin import kernel
    perp = kernel(S, F).T if len(S) else np.eye(n * n, dtype=np.uint8)
    gens = [Generator(g.name + "^", (-1,) + tuple(-x for x in g.degree)) for g in p.gens]
    rels = []
    for row in rref(perp, F).rows:
        rels.append({(int(k) // n, int(k) % n): int(row[k]) for k in np.nonzero(row)[0]})
    mask = (False,) + p.scale_mask
    return Presentation(F, p.arity + 1, "free", gens, rels, (), p.scale, mask,
                        f"({p.name})!", p.bound, True)
