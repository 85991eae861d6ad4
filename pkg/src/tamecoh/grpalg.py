"""Dihedral, semidihedral and generalised quaternion 2-groups and their group algebras.

All three families are metacyclic.  An element is stored as ``a^i b^e``
with ``0 <= i < n`` and ``e in {0, 1}``, at index ``i + n*e``, where

* ``b a b^-1 = a^r`` and ``b^2 = a^c``,
* dihedral (order 4q): ``n = 2q, r = -1, c = 0``, generators ``g = b``, ``h = ab``;
* semidihedral (order 8q): ``n = 4q, r = 2q-1, c = 0``, ``g = a``, ``h = b``;
* quaternion (order 8q): ``n = 4q, r = -1, c = 2q``, ``g = b``, ``h = ba``.

These choices make the standard presentations in ``g, h`` hold, which is
checked on construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from . import expr
from .exactlin import GF2, GF4, Field, get_field, rref

__all__ = [
    "FiniteGroup",
    "GroupAlgebraElement",
    "build_group",
    "sd_generators",
    "q_generators",
    "QGenerators",
    "verify_relation",
    "RelationReport",
    "spanning_check",
    "alternating_words",
    "radical_filtration",
]

FAMILIES = ("dihedral", "semidihedral", "quaternion")


def _is_pow2(q: int) -> bool:
    return isinstance(q, (int, np.integer)) and q >= 1 and (q & (q - 1)) == 0


class FiniteGroup:
    """A metacyclic 2-group with a full multiplication table."""

    def __init__(self, family: str, q: int, n: int, r: int, c: int):
        self.family = family
        self.q = q
        self.n = n
        self.r = r % n
        self.c = c % n
        self.order = 2 * n
        N = self.order
        idx = np.arange(N)
        i, e = idx % n, idx // n
        # (a^i b^e)(a^j b^f) = a^(i + r^e j) b^(e+f), with b^2 = a^c
        rpow = np.where(e == 1, self.r, 1)
        I = (i[:, None] + rpow[:, None] * i[None, :]) % n
        E = e[:, None] + e[None, :]
        I = np.where(E == 2, (I + self.c) % n, I)
        E = E % 2
        self.table = (I + n * E).astype(np.int64)
        self.identity = 0
        inv = np.empty(N, dtype=np.int64)
        for x in range(N):
            inv[x] = int(np.nonzero(self.table[x] == 0)[0][0])
        self.inverse = inv
        self._check_table()
        a, b = 1 % n, n
        if family == "dihedral":
            self.g, self.h = b, self.mul(a, b)
        elif family == "semidihedral":
            self.g, self.h = a, b
        else:
            self.g, self.h = b, self.mul(b, a)

    def _check_table(self) -> None:
        T, N = self.table, self.order
        if not all(sorted(T[x]) == list(range(N)) for x in range(N)):
            raise AssertionError("multiplication table is not a Latin square")
        if N <= 64:
            # T[T[x,y], z] == T[x, T[y,z]] for all triples
            if not np.array_equal(T[T][:, :, :], T[:, T]):
                raise AssertionError("multiplication table is not associative")
        else:
            rng = np.random.default_rng(0)
            xs, ys, zs = rng.integers(0, N, (3, 4096))
            if not np.array_equal(T[T[xs, ys], zs], T[xs, T[ys, zs]]):
                raise AssertionError("multiplication table is not associative")

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def power(self, x: int, k: int) -> int:
        out = self.identity
        if k < 0:
            x, k = int(self.inverse[x]), -k
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def word(self, letters: str) -> int:
        """Evaluate a word in g, h, G (= g^-1), H (= h^-1)."""
        out = self.identity
        lookup = {"g": self.g, "h": self.h, "G": int(self.inverse[self.g]),
                  "H": int(self.inverse[self.h])}
        for ch in letters:
            out = self.mul(out, lookup[ch])
        return out

    def label(self, x: int) -> str:
        i, e = x % self.n, x // self.n
        parts = []
        if i:
            parts.append("a" if i == 1 else f"a^{i}")
        if e:
            parts.append("b")
        return "".join(parts) or "1"

    def defining_relations(self) -> dict:
        """The standard presentation in g, h, evaluated."""
        g, h, q = self.g, self.h, self.q
        P = self.power
        if self.family == "dihedral":
            return {"g^2=1": P(g, 2) == 0, "h^2=1": P(h, 2) == 0,
                    "(gh)^2q=1": P(self.mul(g, h), 2 * q) == 0,
                    "order": self.order == 4 * q}
        if self.family == "semidihedral":
            conj = self.mul(self.mul(h, g), int(self.inverse[h]))
            return {"g^4q=1": P(g, 4 * q) == 0, "h^2=1": P(h, 2) == 0,
                    "hgh^-1=g^(2q-1)": conj == P(g, 2 * q - 1),
                    "order": self.order == 8 * q}
        gih = self.mul(int(self.inverse[g]), h)
        return {"g^2=h^2": P(g, 2) == P(h, 2),
                "h^2=(g^-1h)^2q": P(h, 2) == P(gih, 2 * q),
                "g^4=1": P(g, 4) == 0,
                "order": self.order == 8 * q}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.family}, q={self.q}, order={self.order})"


def build_group(family: str, q: int) -> FiniteGroup:
    """Dihedral of order 4q, or semidihedral / quaternion of order 8q."""
    family = family.lower()
    aliases = {"d": "dihedral", "sd": "semidihedral", "q": "quaternion"}
    family = aliases.get(family, family)
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    if not _is_pow2(q):
        raise ValueError(f"q must be a power of two, got {q}")
    if family == "semidihedral" and q < 2:
        raise ValueError("semidihedral groups need q >= 2")
    if family == "dihedral":
        G = FiniteGroup(family, q, 2 * q, -1, 0)
    elif family == "semidihedral":
        G = FiniteGroup(family, q, 4 * q, 2 * q - 1, 0)
    else:
        G = FiniteGroup(family, q, 4 * q, -1, 2 * q)
    bad = [k for k, ok in G.defining_relations().items() if not ok]
    if bad:
        raise AssertionError(f"{G}: relations {bad} fail")
    return G


class GroupAlgebraElement:
    """An element of kG as a coefficient vector indexed by group elements."""

    __slots__ = ("group", "field", "coeffs")

    def __init__(self, group: FiniteGroup, field: Field, coeffs):
        self.group = group
        self.field = field
        self.coeffs = np.asarray(coeffs, dtype=np.uint8)

    @classmethod
    def basis(cls, group, field, x: int, coeff: int = 1):
        v = np.zeros(group.order, dtype=np.uint8)
        v[x] = coeff
        return cls(group, field, v)

    @classmethod
    def scalar(cls, group, field, c: int):
        return cls.basis(group, field, group.identity, field.from_int(c))

    def _coerce(self, other):
        if isinstance(other, GroupAlgebraElement):
            return other
        if isinstance(other, (int, np.integer)):
            return GroupAlgebraElement.scalar(self.group, self.field, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return GroupAlgebraElement(self.group, self.field, self.field.add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return GroupAlgebraElement(self.group, self.field, self.field.sub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return GroupAlgebraElement(self.group, self.field, self.field.neg(self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        F, T = self.field, self.group.table
        out = np.zeros(self.group.order, dtype=np.uint8)
        y = other.coeffs
        for i in np.nonzero(self.coeffs)[0]:
            row = T[i]
            out[row] = F.add(out[row], F.mul(self.coeffs[i], y))
        return GroupAlgebraElement(self.group, F, out)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = GroupAlgebraElement.scalar(self.group, self.field, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def augmentation(self) -> int:
        F = self.field
        s = 0
        for c in self.coeffs[np.nonzero(self.coeffs)[0]]:
            s = int(F.add(np.uint8(s), c))
        return s

    def support(self) -> list:
        return [int(i) for i in np.nonzero(self.coeffs)[0]]

    def __repr__(self) -> str:
        terms = []
        for i in self.support():
            c = self.coeffs[i]
            lab = self.group.label(i)
            terms.append(lab if c == 1 else f"{self.field.fmt(c)}*{lab}")
        return " + ".join(terms) if terms else "0"


def _el(G: FiniteGroup, F: Field, x: int) -> GroupAlgebraElement:
    return GroupAlgebraElement.basis(G, F, x)


def sd_generators(q: int, field: Field = GF2):
    """The elements X = 1+h and Y = (1+h)u + g^{2q} + h g^{4q-1} of kSD_{8q}."""
    G = build_group("semidihedral", q)
    F = get_field(field)
    g = lambda k: _el(G, F, G.power(G.g, k))
    h = _el(G, F, G.h)
    one = _el(G, F, G.identity)
    u = GroupAlgebraElement(G, F, np.zeros(G.order, np.uint8))
    for i in range(q // 2):
        u = u + g(4 * i + 1)
    for i in range(q // 2 + 1, q + 1):
        u = u + g(4 * i - 1)
    X = one + h
    Y = (one + h) * u + g(2 * q) + h * g(4 * q - 1)
    return X, Y


@dataclass
class QGenerators:
    X: GroupAlgebraElement
    Y: GroupAlgebraElement
    extras: dict = dc_field(default_factory=dict)


def q_generators(q: int, field: Field | str | None = None, variant: str = "corrected") -> QGenerators:
    """Generators X, Y of kQ_{8q} satisfying the quaternion presentation.

    For q = 1 this needs GF(4).  For q >= 2 the ``"corrected"`` variant builds
    x = (g+1)+v, y = (h+1)+v; the ``"printed"`` variant uses u = g+h in place
    of v and is kept only as a negative check (its relations fail).
    """
    if not _is_pow2(q):
        raise ValueError(f"q must be a power of two, got {q}")
    G = build_group("quaternion", q)
    if q == 1:
        F = get_field(field if field is not None else GF4)
        if F.order != 4:
            raise ValueError("q = 1 requires GF(4)")
        w, wb = 2, 3
        g, h = _el(G, F, G.g), _el(G, F, G.h)
        gh = g * h
        X = gh + GroupAlgebraElement.basis(G, F, G.g, w) + GroupAlgebraElement.basis(G, F, G.h, wb)
        Y = gh + GroupAlgebraElement.basis(G, F, G.g, wb) + GroupAlgebraElement.basis(G, F, G.h, w)
        return QGenerators(X, Y, {"g": g, "h": h})
    F = get_field(field if field is not None else GF2)
    if F.char != 2:
        raise ValueError("the quaternion presentation needs characteristic two")
    one = _el(G, F, G.identity)
    g, h = _el(G, F, G.g), _el(G, F, G.h)
    u = g + h
    v = u ** (4 * q - 3)
    k = 2
    while k <= q:
        v = v + u ** (2 * q - k)
        k *= 2
    shift = v if variant == "corrected" else u
    if variant not in ("corrected", "printed"):
        raise ValueError(f"unknown variant {variant!r}")
    x = (g + one) + shift
    y = (h + one) + shift
    X = x + (x * y) ** (2 * q - 1)
    Y = y + (y * x) ** (2 * q - 1)
    return QGenerators(X, Y, {"g": g, "h": h, "u": u, "v": v, "x": x, "y": y})


@dataclass
class RelationReport:
    relation: str
    holds: bool
    difference: GroupAlgebraElement


def _evaluate(text_or_tree, env: Mapping[str, GroupAlgebraElement]):
    tree = expr.parse(text_or_tree) if isinstance(text_or_tree, str) else text_or_tree
    missing = expr.names_in(tree) - set(env)
    if missing:
        raise KeyError(f"unbound names: {sorted(missing)}")
    any_el = next(iter(env.values()))
    const = lambda n: GroupAlgebraElement.scalar(any_el.group, any_el.field, n)
    return expr.evaluate(tree, env, const, power=lambda b, k: b ** k)


def verify_relation(lhs: str, rhs: str | None = None,
                    env: Mapping[str, GroupAlgebraElement] | None = None) -> RelationReport:
    """Check lhs = rhs in the group algebra; ``lhs`` may be a full equation."""
    if env is None or not env:
        raise ValueError("verify_relation needs bound elements")
    text = lhs if rhs is None else f"{lhs} - ({rhs})"
    diff = _evaluate(text, env)
    return RelationReport(lhs if rhs is None else f"{lhs} = {rhs}", diff.is_zero(), diff)


def alternating_words(order: int) -> list:
    """1, X, Y, XY, YX, ... ending with the single word (XY)^{order/4}.

    For a group of order N this gives N words: both alternating words of
    every length below N/2 and one word of length N/2.
    """
    top = order // 2
    words = ["1"]
    for L in range(1, top):
        for start, other in (("X", "Y"), ("Y", "X")):
            words.append("*".join(start if i % 2 == 0 else other for i in range(L)))
    words.append("*".join("X" if i % 2 == 0 else "Y" for i in range(top)))
    return words


def spanning_check(words: Sequence[str], env: Mapping[str, GroupAlgebraElement]) -> dict:
    """Rank of the evaluated words, and whether they form a basis of kG."""
    vecs = [_evaluate(w, env).coeffs for w in words]
    any_el = next(iter(env.values()))
    if not vecs:
        return {"is_basis": False, "rank": 0}
    r = rref(np.array(vecs), any_el.field).rank
    return {"is_basis": r == len(words) == any_el.group.order, "rank": r}


def radical_filtration(X: GroupAlgebraElement, Y: GroupAlgebraElement) -> dict:
    """Dimensions of J^i/J^{i+1} for J generated by X and Y, and of the socle."""
    for name, el in (("X", X), ("Y", Y)):
        if el.augmentation() != 0:
            raise ValueError(f"{name} has nonzero augmentation, so it is not in J")
    G, F = X.group, X.field
    N = G.order
    current = np.eye(N, dtype=np.uint8)  # basis of J^0 = kG
    dims = []
    prev_dim = N
    while prev_dim:
        nxt = []
        for row in current:
            el = GroupAlgebraElement(G, F, row)
            nxt.append((el * X).coeffs)
            nxt.append((el * Y).coeffs)
        E = rref(np.array(nxt), F)
        dims.append(prev_dim - E.rank)
        current = E.rows
        prev_dim = E.rank
        if len(dims) > N + 1:
            raise AssertionError("X and Y do not generate a nilpotent ideal")
    if sum(dims) != N:
        raise AssertionError("X and Y do not generate the radical")
    # socle = {s : Xs = Ys = 0}
    LX = np.array([(X * GroupAlgebraElement.basis(G, F, i)).coeffs for i in range(N)]).T
    LY = np.array([(Y * GroupAlgebraElement.basis(G, F, i)).coeffs for i in range(N)]).T
    soc = N - rref(np.concatenate([LX, LY], axis=0), F).rank
    # J^i = 0 exactly from i = len(dims) on
    return {"layers": dims, "loewy_length": len(dims), "nilpotency_index": len(dims),
            "socle_dim": soc}
