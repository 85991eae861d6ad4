"""Rational Poincare series with integer coefficients.

A series is a quotient of Laurent polynomials in a few named variables.
Equality is decided by cross-multiplication.  Power-series expansion
happens in one chosen variable, the others riding along as Laurent
coefficients; this needs the lowest coefficient of the denominator to be
a unit, i.e. plus or minus a monomial.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Mapping, Sequence

from . import expr

__all__ = [
    "LaurentPoly",
    "RationalSeries",
    "parse_series",
    "koszul_dual_series",
    "expand",
    "compare_with_dims",
]


class LaurentPoly:
    """Integer Laurent polynomial; terms map exponent tuples to coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, int] | None = None):
        self.vars = tuple(variables)
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, variables, c: int):
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str, power: int = 1):
        e = [0] * len(variables)
        e[list(variables).index(name)] = power
        return cls(variables, {tuple(e): 1})

    def _check(self, other):
        if other.vars != self.vars:
            raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.vars, out)

    def __neg__(self):
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict = defaultdict(int)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return LaurentPoly(self.vars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial_unit(self) -> bool:
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def unit_inverse(self):
        if not self.is_monomial_unit():
            raise ValueError(f"{self} is not invertible")
        (e, c), = self.terms.items()
        return LaurentPoly(self.vars, {tuple(-a for a in e): c})

    def pow(self, k: int):
        if k < 0:
            return self.unit_inverse().pow(-k)
        out = LaurentPoly.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def min_exponent(self, i: int) -> int:
        return min((e[i] for e in self.terms), default=0)

    def shift(self, i: int, k: int):
        """Multiply by vars[i]^k."""
        return LaurentPoly(self.vars, {tuple(a + (k if j == i else 0) for j, a in enumerate(e)): c
                                       for e, c in self.terms.items()})

    def slice(self, i: int) -> dict:
        """Split by the exponent of vars[i]: {k: coefficient poly in the same variables}."""
        out: dict = defaultdict(dict)
        for e, c in self.terms.items():
            k = e[i]
            rest = tuple(0 if j == i else a for j, a in enumerate(e))
            out[k][rest] = c
        return {k: LaurentPoly(self.vars, t) for k, t in out.items()}

    def substitute(self, values: Mapping[str, "LaurentPoly"]):
        """Replace variables by Laurent polynomials in (possibly) other variables."""
        target = next(iter(values.values())).vars
        out = LaurentPoly(target)
        for e, c in self.terms.items():
            term = LaurentPoly.const(target, c)
            for name, a in zip(self.vars, e):
                v = values.get(name, LaurentPoly.var(target, name) if name in target else None)
                if v is None:
                    raise ValueError(f"no value for variable {name}")
                term = term * v.pow(a)
            out = out + term
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(
                (v if a == 1 else f"{v}^{a}") for v, a in zip(self.vars, e) if a)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class RationalSeries:
    """num/den with integer Laurent polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.const(num.vars, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def const(cls, variables, c: int):
        return cls(LaurentPoly.const(variables, c))

    def _lift(self, other):
        if isinstance(other, int):
            return RationalSeries.const(self.vars, other)
        return other

    def __add__(self, other):
        o = self._lift(other)
        return RationalSeries(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalSeries(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalSeries(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def reciprocal(self):
        if self.num.is_zero():
            raise ZeroDivisionError("reciprocal of zero series")
        return RationalSeries(self.den, self.num)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def pow(self, k: int):
        if k < 0:
            return self.reciprocal().pow(-k)
        return RationalSeries(self.num.pow(k), self.den.pow(k))

    def __eq__(self, other):
        o = self._lift(other)
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):  # equality is up to cross-multiplication
        raise TypeError("RationalSeries is not hashable")

    def normalized(self):
        """Same series with common monomial factors removed; a monomial denominator is divided out."""
        N, D = self.num, self.den
        for i in range(len(self.vars)):
            m = min(N.min_exponent(i), D.min_exponent(i)) if not N.is_zero() else D.min_exponent(i)
            N, D = N.shift(i, -m), D.shift(i, -m)
        if D.is_monomial_unit():
            N, D = N * D.unit_inverse(), LaurentPoly.const(self.vars, 1)
        return RationalSeries(N, D)

    def substitute(self, values: Mapping[str, LaurentPoly]):
        return RationalSeries(self.num.substitute(values), self.den.substitute(values))

    def __repr__(self):
        return f"({self.num})/({self.den})"


def parse_series(text: str, variables: Sequence[str] | None = None) -> RationalSeries:
    """Read ``(1+t*u^4)*(1+t*u)/(1-t*u-t*u^3-t^2*u^3)`` and the like."""
    tree = expr.parse(text)
    names = sorted(expr.names_in(tree))
    if variables is None:
        variables = names
    variables = tuple(variables)
    extra = set(names) - set(variables)
    if extra:
        raise ValueError(f"unknown variables {sorted(extra)}; declared {variables}")
    env = {v: RationalSeries(LaurentPoly.var(variables, v)) for v in variables}
    return expr.evaluate(tree, env, lambda n: RationalSeries.const(variables, n),
                         div=lambda a, b: a / b, power=lambda b, k: b.pow(k))


def koszul_dual_series(p: RationalSeries, hom: str | None = None,
                       internal: str | None = None) -> RationalSeries:
    """p_{R!}(s,t) = 1/p_R(-s t^-1, t^-1); with one variable, 1/p_R(-s)."""
    vs = p.vars
    if hom is None:
        hom = vs[0]
    if internal is None and len(vs) == 2:
        internal = vs[1] if vs[0] == hom else vs[0]
    if internal is None:
        values = {hom: LaurentPoly.var(vs, hom) * -1}
    else:
        values = {hom: LaurentPoly.var(vs, hom) * LaurentPoly.var(vs, internal, -1) * -1,
                  internal: LaurentPoly.var(vs, internal, -1)}
    sub = p.substitute(values)
    if sub.num.is_zero():
        raise ValueError("substitution gives a zero series; the reciprocal does not exist")
    out = sub.reciprocal().normalized()
    # must still be expandable in the homological variable
    expand(out, 0, var=hom)
    return out


def expand(p: RationalSeries, order: int, var: str | None = None):
    """Coefficients of var^k for k up to ``order``.

    With one variable the result is a list of integers starting at the
    lowest exponent (which is 0 for ordinary power series).  With several
    variables it is a dict {k: LaurentPoly in the remaining variables}.
    """
    vs = p.vars
    if var is None:
        var = vs[0]
    i = vs.index(var)
    N, D = p.num, p.den
    dn, dd = D.min_exponent(i), N.min_exponent(i)
    D = D.shift(i, -dn)
    N = N.shift(i, -dd)
    offset = dd - dn
    Ds, Ns = D.slice(i), N.slice(i)
    d0 = Ds.get(0)
    if d0 is None or not d0.is_monomial_unit():
        raise ValueError(f"denominator {p.den} is not expandable in {var}")
    d0inv = d0.unit_inverse()
    zero = LaurentPoly(vs)
    coeffs: list = []
    for k in range(0, order - offset + 1):
        acc = Ns.get(k, zero)
        for j in range(1, k + 1):
            if j in Ds:
                acc = acc - Ds[j] * coeffs[k - j]
        coeffs.append(acc * d0inv)
    result = {offset + k: c for k, c in enumerate(coeffs)}
    if len(vs) == 1:
        if offset < 0:
            return {k: c.terms.get((0,), 0) for k, c in result.items()}
        return [result[k].terms.get((0,), 0) if k in result else 0 for k in range(0, order + 1)]
    return result


def _flatten(p: RationalSeries, order: int, var: str) -> dict:
    vs = p.vars
    i = vs.index(var)
    out = {}
    ex = expand(p, order, var)
    if isinstance(ex, list):
        return {(k,): c for k, c in enumerate(ex) if c}
    for k, poly in ex.items():
        for e, c in poly.terms.items():
            full = list(e)
            full[i] = k
            out[tuple(full)] = c
    return out


def compare_with_dims(p: RationalSeries, dims: Mapping[tuple, int], order: int,
                      var: str | None = None,
                      covered: Callable[[tuple], bool] | None = None) -> list:
    """Mismatches between series coefficients and a table of dimensions.

    Keys of ``dims`` are exponent tuples in the order of ``p.vars``.  Only
    exponents with ``var``-degree at most ``order`` and, if given,
    ``covered(exponents)`` true are compared.  An empty list means agreement.
    """
    vs = p.vars
    for key in dims:
        if len(key) != len(vs):
            raise ValueError(f"dimension key {key} does not match series variables {vs}")
    if var is None:
        var = vs[0]
    i = vs.index(var)
    coeffs = _flatten(p, order, var)
    keys = set(coeffs) | set(dims)
    bad = []
    for key in sorted(keys):
        if key[i] > order or (covered is not None and not covered(key)):
            continue
        a, b = coeffs.get(key, 0), dims.get(key, 0)
        if a != b:
            bad.append({"exponents": key, "series": a, "computed": b})
    return bad
