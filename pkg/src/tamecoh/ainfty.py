"""A-infinity structures, Hochschild cochains and the Kadeishvili transfer.

Conventions.  Every graded space here is graded homologically in its first
component: a class of cohomological degree n sits in degree -n, and m_n has
degree n - 2.  Only parities of degrees enter signs.  Vectors are sparse
dicts ``{basis key: coefficient}`` with coefficients reduced mod p; zero
coefficients are never stored.  Only prime fields are supported.

Stasheff and morphism identities use the Koszul rule when maps are applied
to tensors of elements:

    sum_{r+s+t=n} (-1)^(r+st) m_{r+1+t}(id^r (x) m_s (x) id^t) = 0

with (id^r (x) m_s (x) id^t)(a_1, ..., a_n) picking up (-1)^(s(|a_1|+...+|a_r|)).

Hochschild calculus (circle product, coboundary, cup, bracket) follows
Gerstenhaber's ungraded formulas with the cochain degree taken to be its
arity; element degrees do not contribute signs there.  In characteristic
two the two sign systems agree; in odd characteristic the Hochschild
formulas are exact for algebras concentrated in even degrees.
"""
from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import expr
from .exactlin import Field, LinearSolver, get_field
from .ncalg import Presentation, PresentationError, _data_dir, catalog

__all__ = [
    "AInftyError", "Space", "PresentationSpace", "TableSpace", "AInftyStructure",
    "AInftyMorphism", "HochschildCochain", "check_stasheff", "check_morphism", "report_ok",
    "circle_composition", "circle_product", "hochschild_differential", "cup", "bracket",
    "zero_cochain", "coboundary_equivalent", "congruence_vanishing_check",
    "kadeishvili_transfer", "transfer_with_periodicity", "TransferResult", "TransferError",
    "load_structure", "load_morphism", "dg_structure", "structure_from_presentation",
    "tuples_upto", "vec_add", "vec_scale",
]


class AInftyError(ValueError):
    pass


# -- sparse vectors ----------------------------------------------------------------

def vec_add(p: int, *vs: Mapping, coeffs: Sequence[int] | None = None) -> dict:
    out: dict = {}
    for k, v in enumerate(vs):
        c = 1 if coeffs is None else coeffs[k] % p
        if not c:
            continue
        for key, a in v.items():
            x = (out.get(key, 0) + c * a) % p
            if x:
                out[key] = x
            else:
                out.pop(key, None)
    return out


def vec_scale(p: int, c: int, v: Mapping) -> dict:
    c %= p
    if not c:
        return {}
    return {k: (a * c) % p for k, a in v.items() if (a * c) % p}


def _accumulate(p: int, acc: dict, c: int, v: Mapping) -> None:
    c %= p
    if not c:
        return
    for key, a in v.items():
        x = (acc.get(key, 0) + c * a) % p
        if x:
            acc[key] = x
        else:
            acc.pop(key, None)


def _prime(F: Field) -> int:
    if F.order != F.char:
        raise AInftyError(f"A-infinity computations need a prime field, not GF({F.order})")
    return F.char


# -- graded spaces ---------------------------------------------------------------

class Space:
    """Basis keys with degrees, weights for bounding, and an optional unit key."""

    unit = None

    def degree(self, key) -> tuple:
        raise NotImplementedError

    def weight(self, key) -> int:
        raise NotImplementedError

    def label(self, key) -> str:
        return str(key)

    def basis_upto(self, weight: int) -> list:
        """Non-unit basis keys of weight 1..weight."""
        raise NotImplementedError

    def parity(self, key) -> int:
        return self.degree(key)[0] & 1

    def vec_str(self, v: Mapping) -> str:
        if not v:
            return "0"
        parts = []
        for k in sorted(v, key=lambda k: (self.weight(k), self.label(k))):
            c = v[k]
            parts.append(self.label(k) if c == 1 else f"{c}*{self.label(k)}")
        return " + ".join(parts)


class PresentationSpace(Space):
    """Normal-form basis words of a commutative or free presentation."""

    def __init__(self, p: Presentation):
        if p.mode == "quiver":
            raise AInftyError("quiver presentations are not graded spaces for A-infinity tables")
        self.p = p
        self.unit = ()
        self._basis: dict = {}

    def degree(self, key) -> tuple:
        return self.p.word_degree(key)

    def weight(self, key) -> int:
        return self.p.wt(self.p.word_degree(key))

    def label(self, key) -> str:
        return self.p.word_str(key)

    def basis_upto(self, weight: int) -> list:
        if weight not in self._basis:
            out = []
            for w in range(1, weight + 1):
                for d in self.p.nonzero_degrees(w):
                    out.extend(self.p.piece(d).basis)
            self._basis[weight] = out
        return self._basis[weight]

    def element(self, text: str) -> dict:
        """Normal form of a polynomial string as a sparse vector."""
        return dict(self.p.normal_form(text))

    def product(self, u, v) -> dict:
        w = self.p.mul_words(u, v)
        if w is None:
            return {}
        return dict(self.p.normal_form(w))


class TableSpace(Space):
    """An explicit finite basis; keys are arbitrary hashables."""

    def __init__(self, degrees: Mapping, labels: Mapping | None = None, unit=None,
                 weights: Mapping | None = None):
        self.degrees = dict(degrees)
        self.labels = dict(labels or {})
        self.unit = unit
        self.weights = dict(weights) if weights is not None else {
            k: -d[0] for k, d in self.degrees.items()}

    def degree(self, key) -> tuple:
        return self.degrees[key]

    def weight(self, key) -> int:
        return self.weights[key]

    def label(self, key) -> str:
        return self.labels.get(key, str(key))

    def basis_upto(self, weight: int) -> list:
        keys = [k for k in self.degrees if k != self.unit and 1 <= self.weights[k] <= weight]
        return sorted(keys, key=lambda k: (self.weights[k], self.label(k)))

    def key_of(self, label: str):
        for k, s in self.labels.items():
            if s == label:
                return k
        raise KeyError(label)


def tuples_upto(space: Space, n: int, bound: int, keys: Sequence | None = None) -> list:
    """n-tuples of non-unit basis keys whose weights sum to at most ``bound``."""
    keys = list(space.basis_upto(bound)) if keys is None else list(keys)
    wts = [space.weight(k) for k in keys]
    out = []

    def rec(prefix, rem, left):
        if left == 0:
            out.append(tuple(prefix))
            return
        for k, w in zip(keys, wts):
            if w <= rem - (left - 1):
                prefix.append(k)
                rec(prefix, rem - w, left - 1)
                prefix.pop()

    rec([], bound, n)
    return out


# -- templated operation tables ----------------------------------------------------

_EXP = re.compile(r"^([A-Za-z_]\w*)?\s*(?:([+-])\s*(\d+))?$")


def _parse_exponent(text: str):
    """'i', 'i+1', 'j-1', '3' -> (variable or None, constant)."""
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1].strip()
    if re.fullmatch(r"-?\d+", t):
        return None, int(t)
    m = _EXP.match(t)
    if not m or not m.group(1):
        raise AInftyError(f"exponent {text!r} should look like i, i+1 or 3")
    c = int(m.group(3) or 0)
    if m.group(2) == "-":
        c = -c
    return m.group(1), c


@dataclass
class _Template:
    inputs: list          # per input: list of tokens ('@', name) or ('g', gen, (var, const))
    output: str
    conditions: list      # (var, op, value)
    line: int


def _cond_ok(conds, env) -> bool:
    for var, op, val in conds:
        if var not in env:
            continue
        x = env[var]
        if not {">=": x >= val, "<=": x <= val, ">": x > val, "<": x < val,
                "=": x == val, "==": x == val, "!=": x != val}[op]:
            return False
    return True


class TemplateTable:
    """m_n or f_n given by templated lines over a presentation-backed space.

    A line ``x^i, y, x, y^j -> x^(i-1)*y^(j-1)*t | i>=1, j>=1`` matches
    input words whose exponents fit the pattern; ``@1`` placeholders match
    any word in the declared placeholder generators.  Generators declared
    linear are stripped from every input first and multiplied back onto
    the value.  Tuples that match no line evaluate to zero.
    """

    def __init__(self, arity: int, source: PresentationSpace, target: PresentationSpace,
                 linear: Sequence[str] = (), word_gens: Sequence[str] = ()):
        self.arity = arity
        self.source = source
        self.target = target
        self.linear_src = [source.p.index[g] for g in linear]
        self.linear_tgt = {g: target.p.index[g] for g in linear}
        self.linear_names = list(linear)
        self.word_gens = {source.p.index[g] for g in word_gens}
        self.templates: list = []
        self._memo: dict = {}

    def add(self, inputs: Sequence[str], output: str, conditions: Sequence[tuple], line: int = 0):
        if len(inputs) != self.arity:
            raise AInftyError(f"line {line}: {len(inputs)} inputs for an arity {self.arity} operation")
        p = self.source.p
        parsed = []
        for text in inputs:
            toks = []
            for fac in text.replace(" ", "").split("*"):
                if fac in ("1", ""):
                    continue
                if fac.startswith("@"):
                    if p.mode == "commutative":
                        raise AInftyError(f"line {line}: word placeholders need a free presentation")
                    toks.append(("@", fac))
                    continue
                name, _, ex = fac.partition("^")
                if name not in p.index:
                    raise AInftyError(f"line {line}: unknown generator {name!r}")
                toks.append(("g", p.index[name], _parse_exponent(ex) if ex else (None, 1)))
            if p.mode == "commutative":
                toks.sort(key=lambda t: t[1])
            for a, b in zip(toks, toks[1:]):
                if a[0] == b[0] == "g" and a[1] == b[1]:
                    raise AInftyError(f"line {line}: repeated generator in one input")
            parsed.append(toks)
        self.templates.append(_Template(parsed, output, list(conditions), line))
        self._memo.clear()

    # matching ------------------------------------------------------------------
    def _runs(self, word):
        return [(g, len(list(grp))) for g, grp in itertools.groupby(word)]

    def _match(self, toks, runs, env):
        if not toks:
            if not runs:
                yield env
            return
        tok = toks[0]
        if tok[0] == "@":
            name = tok[1]
            for k in range(len(runs) + 1):
                if any(g not in self.word_gens for g, _ in runs[:k]):
                    break
                seg = tuple(runs[:k])
                if name in env and env[name] != seg:
                    continue
                e2 = dict(env)
                e2[name] = seg
                yield from self._match(toks[1:], runs[k:], e2)
            return
        _, g, (var, c) = tok
        options = []
        if runs and runs[0][0] == g:
            options.append((runs[0][1], runs[1:]))
        options.append((0, runs))
        for val, rest in options:
            if var is None:
                if c != val:
                    continue
                yield from self._match(toks[1:], rest, env)
            else:
                v = val - c
                if v < 0 or (var in env and env[var] != v):
                    continue
                e2 = dict(env)
                e2[var] = v
                yield from self._match(toks[1:], rest, e2)

    def _match_tuple(self, tpl: _Template, words):
        envs = [{}]
        for toks, w in zip(tpl.inputs, words):
            nxt = []
            for env in envs:
                nxt.extend(self._match(toks, self._runs(w), env))
            envs = nxt
            if not envs:
                return []
        return [e for e in envs if _cond_ok(tpl.conditions, e)]

    def _render(self, tpl: _Template, env) -> str | None:
        sp = self.source.p
        s = tpl.output

        def word_text(seg):
            parts = [f"{sp.gens[g].name}^{k}" if k > 1 else sp.gens[g].name for g, k in seg]
            return "(" + ("*".join(parts) if parts else "1") + ")"

        for name, val in env.items():
            if name.startswith("@"):
                s = re.sub(re.escape(name) + r"(?!\d)", word_text(val), s)
        ints = {k: v for k, v in env.items() if not k.startswith("@")}

        def sub_paren(m):
            tree = expr.parse(m.group(1))
            val = expr.evaluate(tree, ints, lambda n: n)
            return f"^({val})"

        s = re.sub(r"\^\(([^()]*)\)", sub_paren, s)
        s = re.sub(r"\^([A-Za-z_]\w*)", lambda m: f"^({ints[m.group(1)]})", s)
        if re.search(r"\^\(-\d+\)", s):
            return None
        return s

    def __call__(self, words: tuple) -> dict:
        if words in self._memo:
            return self._memo[words]
        sp = self.source.p
        stripped = []
        power = {}
        for w in words:
            keep = []
            for g in w:
                if g in self.linear_src:
                    name = sp.gens[g].name
                    power[name] = power.get(name, 0) + 1
                else:
                    keep.append(g)
            stripped.append(tuple(keep))
        out: dict = {}
        tp = self.target.p
        P = _prime(tp.field)
        for tpl in self.templates:
            envs = self._match_tuple(tpl, stripped)
            if len(envs) > 1:
                raise AInftyError(f"line {tpl.line}: ambiguous match on {[sp.word_str(w) for w in words]}")
            for env in envs:
                text = self._render(tpl, env)
                if text is None:
                    continue
                for name, k in power.items():
                    text = f"({text})*{name}^{k}"
                _accumulate(P, out, 1, tp.normal_form(text))
        self._memo[words] = out
        return out


# -- operations ------------------------------------------------------------------

class AInftyStructure:
    """A graded space with operations m_n.

    ``ops[n]`` is a callable on n-tuples of basis keys returning a sparse
    vector; ``bounds[n]`` (optional) is the largest total weight of input
    tuples on which the operation is known.  A strict unit, if the space
    has one, is handled here: m_2(1, a) = m_2(a, 1) = a and m_n vanishes on
    tuples containing 1 for n != 2.
    """

    def __init__(self, space: Space, field: Field, ops: Mapping[int, Callable],
                 bounds: Mapping[int, int] | None = None, name: str = ""):
        self.space = space
        self.field = get_field(field)
        self.p = _prime(self.field)
        self.ops = dict(ops)
        self.bounds = dict(bounds or {})
        self.name = name

    @property
    def arities(self) -> list:
        return sorted(self.ops)

    def m(self, n: int, args: tuple) -> dict:
        u = self.space.unit
        if u is not None and u in args:
            if n == 2:
                other = args[1] if args[0] == u else args[0]
                return {other: 1}
            return {}
        op = self.ops.get(n)
        if op is None:
            return {}
        b = self.bounds.get(n)
        if b is not None and sum(self.space.weight(a) for a in args) > b:
            raise AInftyError(f"m_{n} is not known on {tuple(self.space.label(a) for a in args)}: "
                              f"total weight exceeds {b}")
        return op(tuple(args))

    def apply(self, n: int, vecs: Sequence[Mapping]) -> dict:
        """Multilinear extension of m_n to sparse vectors."""
        return _multilinear(self.p, lambda t: self.m(n, t), vecs)

    def cochain(self, n: int) -> "HochschildCochain":
        return HochschildCochain(self, n, lambda t: self.m(n, t), name=f"m{n}")

    def with_ops(self, ops: Mapping[int, Callable], name: str = "") -> "AInftyStructure":
        new = dict(self.ops)
        new.update(ops)
        return AInftyStructure(self.space, self.field, new, self.bounds, name or self.name)

    def table(self, n: int, bound: int) -> dict:
        """Nonzero values of m_n on non-unit tuples of total weight <= bound."""
        out = {}
        for t in tuples_upto(self.space, n, bound):
            v = self.m(n, t)
            if v:
                out[t] = v
        return out

    def check_homogeneous(self, n: int, bound: int) -> list:
        """Tuples where m_n has a term of the wrong degree (should be n-2 higher)."""
        bad = []
        sp = self.space
        for t in tuples_upto(sp, n, bound):
            want = tuple(sum(x) for x in zip(*(sp.degree(a) for a in t)))
            want = (want[0] + n - 2,) + want[1:]
            for k in self.m(n, t):
                if tuple(sp.degree(k)) != want:
                    bad.append(t)
                    break
        return bad


def _multilinear(p: int, fn: Callable, vecs: Sequence[Mapping]) -> dict:
    out: dict = {}
    items = [list(v.items()) for v in vecs]
    if any(not it for it in items):
        return out
    for combo in itertools.product(*items):
        c = 1
        for _, a in combo:
            c = c * a % p
        _accumulate(p, out, c, fn(tuple(k for k, _ in combo)))
    return out


def _deg_sum_parity(space: Space, keys: Iterable) -> int:
    return sum(space.parity(k) for k in keys) & 1


def check_stasheff(a: AInftyStructure, n_max: int, degree_bound: int, n_min: int = 1,
                   keys: Sequence | None = None, tuples: Mapping[int, list] | None = None) -> dict:
    """Residuals of the Stasheff identities for arities n_min..n_max.

    Returns {n: {tuple: residual}} with only nonzero residuals listed; an
    empty dict at every n means the identities hold on the tested tuples.
    """
    P = a.p
    sp = a.space
    report = {}
    for n in range(n_min, n_max + 1):
        bad = {}
        dom = tuples[n] if tuples and n in tuples else tuples_upto(sp, n, degree_bound, keys)
        for t in dom:
            res = _stasheff_at(a, t)
            if res:
                bad[t] = res
        report[n] = bad
    return report


def _stasheff_at(a: AInftyStructure, t: tuple) -> dict:
    P = a.p
    sp = a.space
    n = len(t)
    acc: dict = {}
    for s in range(1, n + 1):
        if s not in a.ops and not (s == 2 and sp.unit is not None):
            continue
        for r in range(0, n - s + 1):
            tt = n - s - r
            outer = r + 1 + tt
            if outer not in a.ops:
                continue
            sign = (-1) ** ((r + s * tt) + s * _deg_sum_parity(sp, t[:r]))
            inner = a.m(s, t[r:r + s])
            if not inner:
                continue
            for k, c in inner.items():
                _accumulate(P, acc, sign * c, a.m(outer, t[:r] + (k,) + t[r + s:]))
    return acc


# -- morphisms ---------------------------------------------------------------------

class AInftyMorphism:
    """Maps f_n from source to target, f_n of degree n - 1."""

    def __init__(self, source: AInftyStructure, target: AInftyStructure,
                 maps: Mapping[int, Callable], bounds: Mapping[int, int] | None = None):
        self.source = source
        self.target = target
        self.maps = dict(maps)
        self.bounds = dict(bounds or {})
        self.p = target.p

    def f(self, n: int, args: tuple) -> dict:
        u = self.source.space.unit
        if u is not None and u in args:
            if n == 1:
                tu = self.target.space.unit
                return {tu: 1} if tu is not None else {}
            return {}
        fn = self.maps.get(n)
        if fn is None:
            return {}
        b = self.bounds.get(n)
        if b is not None and sum(self.source.space.weight(x) for x in args) > b:
            raise AInftyError(f"f_{n} is not known on {tuple(self.source.space.label(x) for x in args)}")
        return fn(tuple(args))

    def apply(self, n: int, vecs: Sequence[Mapping]) -> dict:
        return _multilinear(self.p, lambda t: self.f(n, t), vecs)


def _compositions(n: int, r: int):
    if r == 1:
        yield (n,)
        return
    for i in range(1, n - r + 2):
        for rest in _compositions(n - i, r - 1):
            yield (i,) + rest


def _morphism_residual(f: AInftyMorphism, t: tuple) -> dict:
    P = f.p
    S, T = f.source, f.target
    sp = S.space
    n = len(t)
    acc: dict = {}
    # left side: sum (-1)^(r+st) f_{r+1+t}(id^r (x) m_s (x) id^t)
    for s in range(1, n + 1):
        if s not in S.ops and not (s == 2 and sp.unit is not None):
            continue
        for r in range(0, n - s + 1):
            tt = n - s - r
            outer = r + 1 + tt
            if outer not in f.maps and not (outer == 1 and sp.unit is not None):
                continue
            sign = (-1) ** ((r + s * tt) + s * _deg_sum_parity(sp, t[:r]))
            inner = S.m(s, t[r:r + s])
            for k, c in inner.items():
                _accumulate(P, acc, sign * c, f.f(outer, t[:r] + (k,) + t[r + s:]))
    # right side: sum (-1)^sigma m'_r(f_{i_1} (x) ... (x) f_{i_r})
    for r in range(1, n + 1):
        if r not in T.ops and not (r == 2 and T.space.unit is not None):
            continue
        for comp in _compositions(n, r):
            sigma = sum((r - j) * (comp[j - 1] - 1) for j in range(1, r))
            pos = 0
            vecs = []
            kos = 0
            for i in comp:
                kos += (i - 1) * _deg_sum_parity(sp, t[:pos])
                vecs.append(f.f(i, t[pos:pos + i]))
                pos += i
            if any(not v for v in vecs):
                continue
            sign = (-1) ** (sigma + kos)
            _accumulate(P, acc, -sign, T.apply(r, vecs))
    return acc


def check_morphism(f: AInftyMorphism, n_max: int, degree_bound: int, n_min: int = 1,
                   keys: Sequence | None = None) -> dict:
    """Residuals {n: {tuple: residual}} of the morphism identities."""
    report = {}
    for n in range(n_min, n_max + 1):
        bad = {}
        for t in tuples_upto(f.source.space, n, degree_bound, keys):
            res = _morphism_residual(f, t)
            if res:
                bad[t] = res
        report[n] = bad
    return report


def report_ok(report: Mapping) -> bool:
    return all(not v for v in report.values())


# -- Hochschild cochains -----------------------------------------------------------

class HochschildCochain:
    """A multilinear map on n-tuples of basis keys of ``algebra.space``.

    The algebra supplies m_2 for the coboundary and cup product.  Values
    are memoised; cochains built from others are evaluated lazily.
    """

    def __init__(self, algebra: AInftyStructure, arity: int, fn: Callable | Mapping,
                 degree: int | None = None, name: str = ""):
        self.algebra = algebra
        self.arity = arity
        if isinstance(fn, Mapping):
            table = {tuple(k): dict(v) for k, v in fn.items()}
            fn = lambda t, _tb=table: _tb.get(t, {})
        self._fn = fn
        self.degree = degree
        self.name = name
        self._memo: dict = {}

    def __call__(self, t: tuple) -> dict:
        t = tuple(t)
        if t not in self._memo:
            self._memo[t] = self._fn(t)
        return self._memo[t]

    def apply(self, vecs: Sequence[Mapping]) -> dict:
        return _multilinear(self.algebra.p, self, vecs)

    def _insert(self, t: tuple, i: int, v: Mapping) -> dict:
        """self(t_0..t_{i-1}, v, t_i..) for a vector v."""
        P = self.algebra.p
        out: dict = {}
        for k, c in v.items():
            _accumulate(P, out, c, self(t[:i] + (k,) + t[i:]))
        return out

    def __add__(self, o: "HochschildCochain") -> "HochschildCochain":
        P = self.algebra.p
        return HochschildCochain(self.algebra, self.arity, lambda t: vec_add(P, self(t), o(t)),
                                 self.degree, f"({self.name}+{o.name})")

    def __sub__(self, o: "HochschildCochain") -> "HochschildCochain":
        P = self.algebra.p
        return HochschildCochain(self.algebra, self.arity,
                                 lambda t: vec_add(P, self(t), o(t), coeffs=(1, -1)),
                                 self.degree, f"({self.name}-{o.name})")

    def scaled(self, c: int) -> "HochschildCochain":
        P = self.algebra.p
        return HochschildCochain(self.algebra, self.arity, lambda t: vec_scale(P, c, self(t)),
                                 self.degree, f"{c}{self.name}")

    def nonzero_on(self, tuples: Iterable) -> dict:
        out = {}
        for t in tuples:
            v = self(t)
            if v:
                out[t] = v
        return out


def zero_cochain(algebra: AInftyStructure, arity: int) -> HochschildCochain:
    return HochschildCochain(algebra, arity, lambda t: {}, name="0")


def circle_composition(f: HochschildCochain, g: HochschildCochain, i: int) -> HochschildCochain:
    """f o_i g: g inserted after the first i arguments of f."""
    m, n = f.arity, g.arity

    def ev(t):
        return f._insert(t[:i] + t[i + n:], i, g(t[i:i + n]))

    return HochschildCochain(f.algebra, m + n - 1, ev, name=f"{f.name}o{i}{g.name}")


def circle_product(f: HochschildCochain, g: HochschildCochain) -> HochschildCochain:
    """f o g = sum_i (-1)^((n+1)i) f o_i g, n the arity of g."""
    m, n = f.arity, g.arity
    P = f.algebra.p
    parts = [(1 if ((n + 1) * i) % 2 == 0 else -1, circle_composition(f, g, i)) for i in range(m)]

    def ev(t):
        out: dict = {}
        for s, h in parts:
            _accumulate(P, out, s, h(t))
        return out

    return HochschildCochain(f.algebra, m + n - 1, ev, name=f"({f.name}o{g.name})")


def hochschild_differential(f: HochschildCochain) -> HochschildCochain:
    """delta f = (-1)^(|f|+1) m2 o f - f o m2, with |f| the arity of f."""
    A = f.algebra
    P = A.p
    m2 = A.cochain(2)
    left = circle_product(m2, f)
    right = circle_product(f, m2)
    s = 1 if (f.arity + 1) % 2 == 0 else -1

    def ev(t):
        return vec_add(P, left(t), right(t), coeffs=(s, -1))

    return HochschildCochain(A, f.arity + 1, ev, name=f"d({f.name})")


def cup(f: HochschildCochain, g: HochschildCochain) -> HochschildCochain:
    """(f u g)(a, b) = m2(f(a), g(b))."""
    A = f.algebra
    m, n = f.arity, g.arity

    def ev(t):
        return A.apply(2, [f(t[:m]), g(t[m:])])

    return HochschildCochain(A, m + n, ev, name=f"({f.name}u{g.name})")


def bracket(f: HochschildCochain, g: HochschildCochain) -> HochschildCochain:
    """[f, g] = f o g - (-1)^((m-1)(n-1)) g o f."""
    P = f.algebra.p
    a, b = circle_product(f, g), circle_product(g, f)
    s = -1 if ((f.arity - 1) * (g.arity - 1)) % 2 == 0 else 1

    def ev(t):
        return vec_add(P, a(t), b(t), coeffs=(1, s))

    return HochschildCochain(f.algebra, f.arity + g.arity - 1, ev, name=f"[{f.name},{g.name}]")


def _output_degree(space: Space, t: tuple, shift: int) -> tuple:
    d = tuple(sum(x) for x in zip(*(space.degree(a) for a in t)))
    return (d[0] + shift,) + d[1:]


def coboundary_equivalent(m: HochschildCochain, m2: HochschildCochain, degree_bound: int,
                          check_cocycle: bool = True) -> HochschildCochain | None:
    """h with delta h = m - m2 on all non-unit tuples of weight <= degree_bound.

    m and m2 have arity n and degree n - 2.  The witness h has arity n - 1
    and the same degree shift; it is the lexicographically first solution
    of the truncated linear system, or None when none exists.
    """
    A = m.algebra
    sp = A.space
    P = A.p
    n = m.arity
    if m2.arity != n:
        raise AInftyError("cochains of different arity")
    diff = m - m2
    dom_n = tuples_upto(sp, n, degree_bound)
    if check_cocycle:
        for c in (m, m2):
            bad = hochschild_differential(c).nonzero_on(tuples_upto(sp, n + 1, degree_bound))
            if bad:
                t = next(iter(bad))
                raise AInftyError(f"{c.name or 'cochain'} is not a cocycle: nonzero on "
                                  f"{tuple(sp.label(a) for a in t)}")
    shift = n - 2
    # unknowns: coefficient of each basis key of the right degree in h(s)
    dom_h = tuples_upto(sp, n - 1, degree_bound)
    targets = {}
    all_keys = sp.basis_upto(degree_bound + max(0, -shift) + 2)
    by_degree: dict = {}
    for k in all_keys:
        by_degree.setdefault(tuple(sp.degree(k)), []).append(k)
    if sp.unit is not None:
        by_degree.setdefault(tuple(sp.degree(sp.unit)), []).append(sp.unit)
    unknowns = []
    for s in dom_h:
        for k in by_degree.get(_output_degree(sp, s, shift), []):
            unknowns.append((s, k))
    index = {u: i for i, u in enumerate(unknowns)}

    def h_basis(i):
        s, k = unknowns[i]
        return HochschildCochain(A, n - 1, lambda t, s=s, k=k: {k: 1} if t == s else {})

    rows = {}
    cols = []
    for i in range(len(unknowns)):
        d = hochschild_differential(h_basis(i))
        col = {}
        for t in dom_n:
            for k, c in d(t).items():
                col[(t, k)] = c
        cols.append(col)
    rhs = {}
    for t in dom_n:
        for k, c in diff(t).items():
            rhs[(t, k)] = c
    eqs = sorted(set(rhs) | {e for col in cols for e in col}, key=repr)
    if not eqs:
        return zero_cochain(A, n - 1)
    eq_index = {e: i for i, e in enumerate(eqs)}
    M = np.zeros((len(eqs), len(unknowns)), np.uint8)
    for j, col in enumerate(cols):
        for e, c in col.items():
            M[eq_index[e], j] = c % P
    b = np.zeros(len(eqs), np.uint8)
    for e, c in rhs.items():
        b[eq_index[e]] = c % P
    x = LinearSolver(M, A.field).solve(b) if unknowns else (None if b.any() else np.zeros(0, np.uint8))
    if x is None:
        return None
    table: dict = {}
    for i, c in enumerate(x):
        if c:
            s, k = unknowns[i]
            table.setdefault(s, {})[k] = int(c)
    return HochschildCochain(A, n - 1, table, name="h")


def congruence_vanishing_check(a: AInftyStructure, modulus: int, n_max: int, degree_bound: int,
                               keys: Sequence | None = None) -> dict:
    """m_n must vanish unless modulus divides n - 2; the others satisfy the circle recursion.

    For n = s*modulus + 2 with s >= 2 the check is
    delta m_n = sum_{i=1}^{s-1} (-1)^(i(modulus+2)) m_{i*modulus+2} o m_{(s-i)*modulus+2}.
    Returns {"forbidden": {n: [tuples]}, "recursion": {n: [tuples]}} listing failures.
    """
    sp = a.space
    P = a.p
    out = {"forbidden": {}, "recursion": {}}
    base = modulus + 2
    for n in range(3, n_max + 1):
        if n not in a.ops:
            continue
        if (n - 2) % modulus:
            bad = [t for t in tuples_upto(sp, n, degree_bound, keys) if a.m(n, t)]
            out["forbidden"][n] = bad
            continue
        s = (n - 2) // modulus
        if s < 2:
            lhs = hochschild_differential(a.cochain(n))
            out["recursion"][n] = list(lhs.nonzero_on(tuples_upto(sp, n + 1, degree_bound, keys)))
            continue
        lhs = hochschild_differential(a.cochain(n))
        terms = []
        for i in range(1, s):
            c = 1 if (i * base) % 2 == 0 else -1
            terms.append((c, circle_product(a.cochain(i * modulus + 2), a.cochain((s - i) * modulus + 2))))
        bad = []
        for t in tuples_upto(sp, n + 1, degree_bound, keys):
            r = dict(lhs(t))
            for c, h in terms:
                _accumulate(P, r, -c, h(t))
            if r:
                bad.append(t)
        out["recursion"][n] = bad
    return out


# -- presentation-backed structures --------------------------------------------

def structure_from_presentation(p: Presentation, name: str = "") -> AInftyStructure:
    """The graded algebra of a presentation with m_2 its product."""
    sp = PresentationSpace(p)
    return AInftyStructure(sp, p.field, {2: lambda t: sp.product(t[0], t[1])}, name=name or p.name)


def dg_structure(p: Presentation, differential: Mapping[str, str], name: str = "") -> AInftyStructure:
    """A DG algebra given by a presentation and the differential on generators.

    m_1 is extended by the Leibniz rule d(uv) = d(u)v + (-1)^|u| u d(v);
    it is checked to kill every relation.
    """
    sp = PresentationSpace(p)
    P = _prime(p.field)
    dgen = {}
    for g in p.gens:
        text = differential.get(g.name, "0")
        dgen[p.index[g.name]] = dict(p.normal_form(text)) if text.strip() != "0" else {}
    memo: dict = {}

    def d_word(w: tuple) -> dict:
        if w in memo:
            return memo[w]
        out: dict = {}
        sgn_par = 0
        for i, g in enumerate(w):
            if dgen[g]:
                for dw, c in dgen[g].items():
                    word = w[:i] + dw + w[i + 1:]
                    word = p.canon(word)
                    _accumulate(P, out, (-1) ** sgn_par * c, p.normal_form(word))
            sgn_par ^= p.gens[g].degree[0] & 1
        memo[w] = out
        return out

    for k, r in enumerate(p.relations):
        acc: dict = {}
        for w, c in r.items():
            _accumulate(P, acc, c, d_word(w))
        if acc:
            raise AInftyError(f"the differential does not preserve relation {k + 1}")
    ops = {1: lambda t: d_word(t[0]), 2: lambda t: sp.product(t[0], t[1])}
    return AInftyStructure(sp, p.field, ops, name=name or p.name)


# -- data files ------------------------------------------------------------------

def _split_line(line: str):
    body, _, cond = line.partition("|")
    lhs, arrow, rhs = body.partition("->")
    if not arrow:
        raise AInftyError(f"missing '->' in {line!r}")
    head, colon, args = lhs.partition(":")
    if not colon:
        raise AInftyError(f"missing ':' in {line!r}")
    kind, _, n = head.strip().partition(" ")
    conds = []
    for c in cond.split(","):
        c = c.strip()
        if not c:
            continue
        m = re.fullmatch(r"([A-Za-z_]\w*)\s*(>=|<=|==|!=|=|>|<)\s*(-?\d+)", c)
        if not m:
            raise AInftyError(f"cannot read condition {c!r}")
        conds.append((m.group(1), m.group(2), int(m.group(3))))
    inputs = [a.strip() for a in _split_args(args)]
    return kind.strip(), int(n), inputs, rhs.strip(), conds


def _split_args(text: str) -> list:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _resolve_file(name: str) -> str:
    if os.path.exists(name):
        return name
    path = os.path.join(_data_dir(), name)
    if not os.path.exists(path) and not name.endswith(".txt"):
        path += ".txt"
    if not os.path.exists(path):
        raise AInftyError(f"no A-infinity data file {name!r}")
    return path


def _read_directives(path: str):
    with open(path) as fh:
        for num, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield num, line


def load_structure(name: str) -> AInftyStructure:
    """Read an A-infinity table file.

    Directives: ``structure CATALOG:q=2`` names the underlying algebra,
    ``linear t`` declares multilinearity over k[t], ``word @ : a, b``
    declares the generators placeholders may use, ``bound N`` limits the
    input weight, and ``m n : in_1, ..., in_n -> value | conditions`` adds
    a templated entry.
    """
    path = _resolve_file(name)
    base = None
    linear: list = []
    word_gens: list = []
    bound = None
    lines = []
    title = os.path.basename(path)
    for num, line in _read_directives(path):
        word = line.split()[0]
        if word == "structure":
            base = catalog(line.split(None, 1)[1].strip())
        elif word == "linear":
            linear.extend(x.strip() for x in line.split(None, 1)[1].split(","))
        elif word == "word":
            word_gens.extend(x.strip() for x in line.split(":", 1)[1].split(","))
        elif word == "bound":
            bound = int(line.split()[1])
        elif word == "name":
            title = line.split(None, 1)[1]
        elif word == "m":
            lines.append((num, line))
        else:
            raise AInftyError(f"{path}:{num}: unknown directive {word!r}")
    if base is None:
        raise AInftyError(f"{path}: missing 'structure' line")
    a = structure_from_presentation(base, title)
    sp = a.space
    tables: dict = {}
    for num, line in lines:
        kind, n, inputs, rhs, conds = _split_line(line)
        if n < 3:
            raise AInftyError(f"{path}:{num}: m_1 and m_2 come from the presentation")
        if n not in tables:
            tables[n] = TemplateTable(n, sp, sp, linear, word_gens)
        tables[n].add(inputs, rhs, conds, num)
    ops = dict(a.ops)
    ops.update(tables)
    out = AInftyStructure(sp, base.field, ops, {n: bound for n in tables} if bound else None, title)
    out.linear = linear
    return out


def load_morphism(name: str, source: AInftyStructure | None = None):
    """Read a morphism file; returns (morphism, source, target).

    Directives: ``source FILE`` (an A-infinity table file) or
    ``source-algebra CATALOG``, ``target CATALOG``, ``diff g -> value``
    (differential of the target), ``linear``, ``word``, and
    ``f n : inputs -> value`` entries evaluated in the target.
    """
    path = _resolve_file(name)
    tgt_p = None
    diffs = {}
    linear, word_gens = [], []
    lines = []
    for num, line in _read_directives(path):
        word = line.split()[0]
        if word == "source":
            if source is None:
                source = load_structure(line.split(None, 1)[1].strip())
        elif word == "source-algebra":
            if source is None:
                source = structure_from_presentation(catalog(line.split(None, 1)[1].strip()))
        elif word == "target":
            tgt_p = catalog(line.split(None, 1)[1].strip())
        elif word == "diff":
            g, _, v = line.split(None, 1)[1].partition("->")
            diffs[g.strip()] = v.strip()
        elif word == "linear":
            linear.extend(x.strip() for x in line.split(None, 1)[1].split(","))
        elif word == "word":
            word_gens.extend(x.strip() for x in line.split(":", 1)[1].split(","))
        elif word == "f":
            lines.append((num, line))
        else:
            raise AInftyError(f"{path}:{num}: unknown directive {word!r}")
    if source is None or tgt_p is None:
        raise AInftyError(f"{path}: need both source and target")
    target = dg_structure(tgt_p, diffs)
    maps: dict = {}
    for num, line in lines:
        kind, n, inputs, rhs, conds = _split_line(line)
        if n not in maps:
            maps[n] = TemplateTable(n, source.space, target.space, linear, word_gens)
        maps[n].add(inputs, rhs, conds, num)
    return AInftyMorphism(source, target, maps), source, target


# -- Kadeishvili transfer -------------------------------------------------------

class TransferError(AInftyError):
    pass


def _el_add(F: Field, x, y, c: int = 1):
    d1, D1, v1 = x
    d2, D2, v2 = y
    if (d1, D1) != (d2, D2):
        raise TransferError(f"adding elements of degrees {(d1, D1)} and {(d2, D2)}")
    return d1, D1, F.add(v1, F.mul(np.uint8(F.from_int(c)), v2))


@dataclass
class TransferResult:
    structure: AInftyStructure
    morphism: dict               # n -> {tuple: element (d, D, vec)}
    space: TableSpace
    reps: dict                   # key -> element
    classes: dict                # (d, D) -> list of keys
    log: list = dc_field(default_factory=list)

    def m(self, n: int, labels: Sequence[str]) -> dict:
        keys = tuple(self.space.key_of(s) for s in labels)
        return self.structure.m(n, keys)


def kadeishvili_transfer(E, n_max: int, degree_bound: int, section: Callable | None = None,
                         side: Callable | None = None, labels: Callable | None = None,
                         verify: bool = True) -> TransferResult:
    """Minimal model of a DG algebra E (the interface of resolve.EndDGA).

    E supplies ``F``, ``internal_degrees(d)``, ``slice(d, D)``,
    ``differential_matrix(d, D)``, ``homology(d, D)``, ``compose``,
    ``identity()``, and ``N`` or ``period``.  Degrees here are cohomological:
    classes live in degrees 1..degree_bound; degree 0 contributes only the
    unit.  ``section(d, D, default)`` receives the default list of
    (label, cocycle) pairs for H^{d,D} and returns the pairs to use; the
    cocycles must form a basis of the homology.  ``side(t)`` may return DG
    elements s for which f_n(t) must satisfy f_n(t) s = s f_n(t) = 0.

    Every m_n and f_n is computed on the tuples of classes with total
    degree at most ``degree_bound``.
    """
    F = E.F
    P = _prime(F)
    period = getattr(E, "period", None)
    if period is None and degree_bound > E.N:
        raise TransferError(f"degree bound {degree_bound} exceeds the truncation N={E.N} of the DG algebra")
    arity = E.arity
    zeroD = tuple(0 for _ in range(arity))

    # homology and section
    degrees, labels_map, reps, classes = {}, {}, {}, {}
    proj = {}
    for d in range(1, degree_bound + 1):
        for D in E.internal_degrees(d):
            h, R = E.homology(d, D)
            if not h:
                continue
            chosen = [(labels(d, D, k) if labels else f"c{d}_{k}" + (f"{list(D)}" if arity else ""),
                       (d, D, np.asarray(R[:, k], np.uint8))) for k in range(h)]
            if section is not None:
                chosen = section(d, D, chosen)
                if len(chosen) != h:
                    raise TransferError(f"section gives {len(chosen)} classes in degree ({d}, {D}); "
                                        f"the homology has dimension {h}")
            keys = []
            for k, (lab, rep) in enumerate(chosen):
                key = (d, D, k)
                if rep[0] != d or tuple(rep[1]) != tuple(D):
                    raise TransferError(f"representative {lab} has the wrong degree")
                reps[key] = rep
                degrees[key] = (-d,) + tuple(D)
                labels_map[key] = lab
                keys.append(key)
            classes[(d, D)] = keys
    if reps:
        low = min(k[0] for k in reps)
        if n_max * low > degree_bound:
            raise TransferError(f"degree bound {degree_bound} is too small: m_{n_max} on classes of "
                                f"degree {low} needs total degree {n_max * low}")
    unit = ("unit",)
    degrees[unit] = (0,) + zeroD
    labels_map[unit] = "1"
    space = TableSpace(degrees, labels_map, unit)

    def class_solver(d, D):
        if (d, D) not in proj:
            keys = classes.get((d, D), [])
            R = (np.array([reps[k][2] for k in keys], np.uint8).T if keys
                 else np.zeros((len(E.slice(d, D)), 0), np.uint8))
            Dprev = E.differential_matrix(d - 1, D) if d >= 1 else np.zeros((R.shape[0], 0), np.uint8)
            S = LinearSolver(np.concatenate([R, Dprev], axis=1), F)
            if S.rank != len(keys) + LinearSolver(Dprev, F).rank:
                raise TransferError(f"representatives in degree ({d}, {D}) are dependent modulo boundaries")
            proj[(d, D)] = (S, keys)
        return proj[(d, D)]

    def check_degree(d):
        if period is None and d > E.N:
            raise TransferError(f"degree {d} is beyond the truncation N={E.N}; raise N or lower the bound")

    for key, rep in reps.items():
        if np.any(E.differential(rep)[2]):
            raise TransferError(f"representative of {labels_map[key]} is not a cocycle")
        class_solver(rep[0], rep[1])

    f: dict = {1: {}}
    for key in reps:
        f[1][(key,)] = reps[key]
    m: dict = {}
    log: list = []

    def fval(n, t):
        if unit in t:
            if n == 1:
                return E.identity()
            return None
        return f[n].get(t)

    def m_get(n, t):
        if unit in t:
            if n == 2:
                other = t[1] if t[0] == unit else t[0]
                return {other: 1}
            return {}
        return m[n].get(t, {})

    def par(t):
        return sum(degrees[k][0] & 1 for k in t) & 1

    def add_into(acc, c, x):
        if x is None:
            return acc
        c %= P
        if not c:
            return acc
        if acc is None:
            return x[0], x[1], F.mul(np.uint8(c), x[2])
        return _el_add(F, acc, x, c)

    for n in range(2, n_max + 1):
        f[n] = {}
        m[n] = {}
        for t in tuples_upto(space, n, degree_bound):
            dsum = sum(k[0] for k in t)
            Dsum = tuple(sum(x) for x in zip(*(k[1] for k in t))) if arity else ()
            out_d = dsum + 2 - n
            U = None
            for i in range(1, n):
                j = n - i
                a, b = fval(i, t[:i]), fval(j, t[i:])
                if a is None or b is None:
                    continue
                sign = (-1) ** ((i - 1) + ((1 - j) & 1) * par(t[:i]))
                U = add_into(U, sign, E.compose(a, b))
            for s in range(2, n):
                for r in range(0, n - s + 1):
                    tt = n - s - r
                    inner = m_get(s, t[r:r + s])
                    if not inner:
                        continue
                    sign = (-1) ** ((r + s * tt) + s * par(t[:r]))
                    for k, c in inner.items():
                        x = fval(r + 1 + tt, t[:r] + (k,) + t[r + s:])
                        U = add_into(U, -sign * c, x)
            if U is None:
                continue
            check_degree(out_d)
            if U[0] != out_d:
                raise TransferError(f"internal error: degree {U[0]} != {out_d}")
            if np.any(E.differential(U)[2]):
                raise TransferError(f"obstruction at {tuple(labels_map[k] for k in t)} is not a cocycle; "
                                    f"degree {out_d} needs a larger truncation")
            S, keys = class_solver(out_d, Dsum)
            c = S.solve(U[2])
            if c is None:
                raise TransferError(f"cannot split degree ({out_d}, {Dsum})")
            val = {keys[k]: int(c[k]) for k in range(len(keys)) if c[k]}
            if val:
                m[n][t] = val
            # f_n: D x = f1(m_n) - U
            rhs = (U[0], U[1], F.neg(U[2]))
            for k, cc in val.items():
                rhs = _el_add(F, rhs, reps[k], cc)
            if not np.any(rhs[2]):
                continue
            fd = out_d - 1
            Dm = E.differential_matrix(fd, Dsum)
            extra = None
            if side is not None:
                conds = side(t) or []
                rows = []
                nsrc = Dm.shape[1]
                for s_el in conds:
                    for left in (True, False):
                        cols = []
                        for q in range(nsrc):
                            e = np.zeros(nsrc, np.uint8)
                            e[q] = 1
                            u = (fd, Dsum, e)
                            prod = E.compose(u, s_el) if left else E.compose(s_el, u)
                            cols.append(prod[2])
                        if cols:
                            rows.append(np.array(cols, np.uint8).T)
                if rows:
                    extra = np.concatenate(rows, axis=0)
            x = LinearSolver(Dm, F, extra=extra).solve(rhs[2])
            if x is None:
                raise TransferError(f"no homotopy f_{n} at {tuple(labels_map[k] for k in t)}"
                                    + (" under the side conditions" if extra is not None else ""))
            if np.any(x):
                f[n][t] = (fd, Dsum, x)
        log.append((n, len(m[n]), len(f[n])))

    ops = {n: (lambda t, tb=m[n]: dict(tb.get(t, {}))) for n in m}
    bounds = {n: degree_bound for n in m}
    structure = AInftyStructure(space, F, ops, bounds, name="transfer")
    result = TransferResult(structure, f, space, reps, classes, log)
    if verify:
        rep = check_stasheff(structure, n_max + 1, degree_bound, n_min=3)
        if not report_ok(rep):
            raise TransferError(f"transferred structure fails the Stasheff identities: "
                                f"{ {n: len(v) for n, v in rep.items() if v} }")
    return result


def _power(E, x, k):
    out = E.identity() if k == 0 else x
    for _ in range(k - 1):
        out = E.compose(out, x)
    return out


def transfer_with_periodicity(res, period: int, n_max: int, degree_bound: int,
                              names: Sequence[str] = ("y",), use_side: bool = True,
                              N: int | None = None) -> TransferResult:
    """Transfer for a periodic resolution, with f_1 multiplicative on the periodicity.

    The section sends y^e z^i to y~^e z~^i, where z~ is the periodicity map
    and y~ ranges over periodic cocycles of degree below the period that
    are nonzero in Ext.  Both are built in the periodic model and unrolled
    into the truncation End(P_{<=N}); N defaults to degree_bound plus two
    periods, since the side conditions can fail for homotopies whose
    components reach the truncation edge.  With ``use_side``
    every homotopy f_n(t) is chosen with f_n(t) y~ = y~ f_n(t) = 0.
    """
    from .resolve import dg_endomorphism
    Et = dg_endomorphism(res, N=degree_bound + 2 * period if N is None else N)
    Ep = dg_endomorphism(res, period=period)
    F = Et.F
    zt = Ep.unroll(Ep.periodicity(), Et)
    odd = []
    for r in range(1, period):
        for D in Ep.internal_degrees(r):
            hp, Rp = Ep.homology(r, D)
            if not hp:
                continue
            ht, _ = Et.homology(r, D)
            if not ht:
                continue
            Dprev = Et.differential_matrix(r - 1, D)
            base = LinearSolver(Dprev, F).rank
            picked = []
            for k in range(hp):
                x = Ep.unroll((r, D, np.asarray(Rp[:, k], np.uint8)), Et)
                cols = [y[2] for _, y in picked] + [x[2]]
                M = np.concatenate([np.array(cols, np.uint8).T, Dprev], axis=1)
                if LinearSolver(M, F).rank == base + len(cols):
                    picked.append((None, x))
            odd.extend(x for _, x in picked)
    if len(odd) > len(names):
        raise TransferError(f"{len(odd)} odd generators found; give that many names")
    gens = list(zip(names, odd))
    zD = zt[1]

    def section(d, D, default):
        i, r = divmod(d, period)
        zi = _power(Et, zt, i)
        zlab = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
        if r == 0:
            cands = [(zlab or "1", zi)]
        else:
            cands = [("*".join(x for x in (lab, zlab) if x), Et.compose(y, zi))
                     for lab, y in gens if y[0] == r]
        cands = [c for c in cands if tuple(c[1][1]) == tuple(D)]
        if len(cands) != len(default):
            raise TransferError(f"the periodic section does not span degree ({d}, {D})")
        return cands

    side = (lambda t: [y for _, y in gens]) if use_side else None
    res_ = kadeishvili_transfer(Et, n_max, degree_bound, section=section, side=side)
    res_.witnesses = {"z": zt, **{lab: y for lab, y in gens}}
    res_.dga = Et
    return res_
