"""A small recursive-descent reader for arithmetic expressions.

The same grammar is used for group-algebra words, algebra relations,
Poincare series and matrix entries::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)?
    atom   := INT | NAME | '(' expr ')'

Multiplication is always explicit.  Names are letters, digits and
underscores, starting with a letter.  ``lhs = rhs`` at top level reads as
``lhs - rhs``.
"""
from __future__ import annotations

import re
from typing import Any, Callable, Mapping

__all__ = ["ParseError", "parse", "evaluate", "names_in"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, sym = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            if sym not in "+-*/^()=,":
                raise ParseError(f"unexpected character {sym!r} in {text!r}")
            out.append(("sym", sym))
        pos = m.end()
    return out


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, sym=None):
        tok = self.peek()
        if sym is not None and tok != ("sym", sym):
            raise ParseError(f"expected {sym!r} at token {self.i} of {self.text!r}")
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("sym", "*"), ("sym", "/")):
            op = self.take()[1]
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        if self.peek() == ("sym", "-"):
            self.take()
            return ("neg", self.unary())
        if self.peek() == ("sym", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            return ("pow", base, self.exponent())
        return base

    def exponent(self) -> int:
        sign = 1
        if self.peek() == ("sym", "("):
            self.take()
            e = self.exponent()
            self.take(")")
            return e
        while self.peek() == ("sym", "-"):
            self.take()
            sign = -sign
        kind, val = self.take()
        if kind != "int":
            raise ParseError(f"exponent must be an integer in {self.text!r}")
        return sign * val

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return ("num", val)
        if kind == "name":
            return ("var", val)
        if (kind, val) == ("sym", "("):
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse(text: str):
    """Parse ``text`` into a nested-tuple syntax tree."""
    r = _Reader(text)
    if not r.toks:
        raise ParseError("empty expression")
    node = r.expr()
    if r.peek() == ("sym", "="):
        r.take()
        node = ("sub", node, r.expr())
    if r.i != len(r.toks):
        raise ParseError(f"trailing input after token {r.i} in {text!r}")
    return node


def names_in(node) -> set:
    tag = node[0]
    if tag == "var":
        return {node[1]}
    if tag == "num":
        return set()
    if tag == "pow":
        return names_in(node[1])
    return set().union(*(names_in(c) for c in node[1:]))


def evaluate(node, env: Mapping[str, Any], const: Callable[[int], Any],
             div: Callable[[Any, Any], Any] | None = None,
             power: Callable[[Any, int], Any] | None = None):
    """Evaluate a tree with ``+ - *`` from the values themselves.

    ``env`` maps names to values, ``const`` turns integers into values.
    ``div`` and ``power`` (for negative or fast powers) are optional hooks.
    """
    def ev(n):
        tag = n[0]
        if tag == "num":
            return const(n[1])
        if tag == "var":
            if n[1] not in env:
                raise KeyError(f"unbound name {n[1]!r}")
            return env[n[1]]
        if tag == "add":
            return ev(n[1]) + ev(n[2])
        if tag == "sub":
            return ev(n[1]) - ev(n[2])
        if tag == "neg":
            return -ev(n[1])
        if tag == "mul":
            return ev(n[1]) * ev(n[2])
        if tag == "div":
            if div is None:
                raise ParseError("division is not available here")
            return div(ev(n[1]), ev(n[2]))
        if tag == "pow":
            base, k = ev(n[1]), n[2]
            if power is not None:
                return power(base, k)
            if k < 0:
                raise ParseError("negative exponent is not available here")
            out = const(1)
            for _ in range(k):
                out = out * base
            return out
        raise ParseError(f"bad node {n!r}")

    return ev(node)
