"""Command line entry point: ``tamecoh <command> ...``.

Every command builds a RunReport and prints a short table; ``--json PATH``
(or ``--json -``) writes the machine-readable form.  Exit codes: 0 when
every check passes, 1 when a mathematical check fails, 2 on usage or
input errors.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
import sys
import time
from dataclasses import dataclass, field
from typing import Any

import click

from . import __version__

SCHEMA = "tamecoh.run-report/1"

PASS, FAIL, XFAIL = "pass", "fail", "expected-fail"

# --no-timing drops wall-clock data so reports replay byte-identically
_TIMING = True


@dataclass
class RunReport:
    command: str
    args: dict
    files: dict = field(default_factory=dict)
    results: list = field(default_factory=list)
    seconds: float = 0.0

    def add(self, check: str, ok: bool, data: Any = None, expect_fail: bool = False) -> None:
        if expect_fail:
            status = XFAIL if not ok else FAIL
        else:
            status = PASS if ok else FAIL
        self.results.append({"check": check, "status": status, "data": _jsonable(data)})

    def note(self, check: str, data: Any) -> None:
        self.results.append({"check": check, "status": "info", "data": _jsonable(data)})

    def track(self, path: str) -> None:
        if path and os.path.exists(path):
            with open(path, "rb") as fh:
                self.files[os.path.basename(path)] = hashlib.sha256(fh.read()).hexdigest()

    @property
    def failed(self) -> bool:
        return any(r["status"] == FAIL for r in self.results)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": __version__,
            "command": self.command,
            "inputs": {"args": self.args, "files": dict(sorted(self.files.items()))},
            "results": self.results,
            "timing": {"seconds": round(self.seconds, 3)} if _TIMING else None,
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {_key(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def _key(k) -> str:
    if isinstance(k, tuple):
        return "(" + ",".join(str(v) for v in k) + ")"
    return str(k)


def _finish(report: RunReport, json_out: str | None, t0: float) -> None:
    report.seconds = time.perf_counter() - t0
    for r in report.results:
        data = r["data"]
        text = json.dumps(data) if not isinstance(data, str) else data
        if len(text) > 100:
            text = text[:97] + "..."
        click.echo(f"{r['status'].upper():>13}  {r['check']}  {text if data is not None else ''}".rstrip())
    if json_out:
        payload = json.dumps(report.to_json(), indent=2, sort_keys=False)
        if json_out == "-":
            click.echo(payload)
        else:
            with open(json_out, "w") as fh:
                fh.write(payload + "\n")
    sys.exit(1 if report.failed else 0)


class InputError(click.ClickException):
    exit_code = 2


def _pow2(q: int) -> bool:
    return q >= 1 and not q & (q - 1)


# ---------------------------------------------------------------------------
# parsing --alg arguments

_GROUPS = {"D": ("dihedral", 4), "SD": ("semidihedral", 8), "Q": ("quaternion", 8)}


def _group_spec(name: str):
    m = re.fullmatch(r"(SD|D|Q)(\d+)", name)
    if not m:
        raise InputError(f"unknown group {name!r}; use D<4q>, SD<8q> or Q<8q>")
    fam, base = _GROUPS[m.group(1)]
    order = int(m.group(2))
    q, r = divmod(order, base)
    if r or not _pow2(q) or (fam != "quaternion" and fam != "dihedral" and q < 2):
        raise InputError(f"{name}: order must be {base} times a power of two")
    return fam, q


def _catalog_path(name: str) -> str:
    from .ncalg import _data_dir
    return os.path.join(_data_dir(), name.split(":")[0] + ".txt")


def _load_presentation(spec: str, report: RunReport):
    from .ncalg import PresentationError, catalog, load_presentation
    kind, _, rest = spec.partition(":")
    try:
        if kind == "catalog":
            report.track(_catalog_path(rest))
            return catalog(rest)
        if kind == "file":
            report.track(rest)
            return load_presentation(rest)
        if kind == "block":
            report.track(_catalog_path(rest))
            return catalog(rest)
    except (PresentationError, OSError) as exc:
        raise InputError(str(exc)) from None
    raise InputError(f"cannot read algebra {spec!r}; use group:NAME, catalog:NAME, block:NAME or file:PATH")


def _fd_algebra(spec: str, report: RunReport, field: str | None = None):
    from .exactlin import get_field
    from .fdalg import FDAlgebra
    from .grpalg import build_group
    kind, _, rest = spec.partition(":")
    if kind == "group":
        fam, q = _group_spec(rest)
        return FDAlgebra.from_group(build_group(fam, q), get_field(field or "GF(2)"))
    p = _load_presentation(spec, report)
    if p.mode == "commutative":
        return p
    return FDAlgebra.from_presentation(p)


# ---------------------------------------------------------------------------

@click.group()
@click.version_option(__version__, prog_name="tamecoh")
@click.option("--no-timing", is_flag=True, help="omit timing from JSON reports")
def main(no_timing):
    """Exact cohomology computations for tame 2-blocks."""
    global _TIMING
    _TIMING = not no_timing


@main.command("verify-group")
@click.option("--family", type=click.Choice(["semidihedral", "quaternion"]), required=True)
@click.option("--q", "q", type=int, required=True)
@click.option("--field", default=None, help="gf2 (default) or gf4")
@click.option("--json", "json_out", default=None, help="write the JSON report here ('-' for stdout)")
def verify_group(family, q, field, json_out):
    """Check the two-generator presentation of kSD or kQ."""
    from .exactlin import get_field
    from .grpalg import (alternating_words, q_generators, sd_generators, spanning_check,
                         verify_relation)
    t0 = time.perf_counter()
    if not _pow2(q) or (family == "semidihedral" and q < 2):
        raise click.BadParameter(f"q={q} is not an admissible power of two", param_hint="--q")
    report = RunReport("verify-group", {"family": family, "q": q, "field": field})
    try:
        F = get_field(field) if field else None
    except (KeyError, ValueError) as exc:
        raise click.BadParameter(str(exc), param_hint="--field")
    if family == "semidihedral":
        X, Y = sd_generators(q, F or get_field("GF(2)"))
        env = {"X": X, "Y": Y}
        m = 2 * q - 1
        rels = ["X^2 = 0", f"Y^2 = X*(Y*X)^{m} + (Y*X)^{2 * q}"]
        variant = f"Y^2 = X*(Y*X)^{m}"
        order = 8 * q
    else:
        try:
            gens = q_generators(q, F)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--field")
        env = {"X": gens.X, "Y": gens.Y}
        order = 8 * q
        if q == 1:
            rels = ["X^2 = Y*X*Y", "Y^2 = X*Y*X", "X^4 = 0", "Y^4 = 0"]
            variant = None
        else:
            m = 2 * q - 1
            rels = [f"X^2 = (Y*X)^{m}*Y + (X*Y)^{2 * q}", f"Y^2 = (X*Y)^{m}*X + (Y*X)^{2 * q}",
                    "X^4 = 0", "Y^4 = 0"]
            pg = q_generators(q, F, variant="printed")
            penv = {"X": pg.X, "Y": pg.Y}
            variant = None
            ok = all(verify_relation(r, env=penv).holds for r in rels)
            report.add("generators built from u = g+h satisfy the relations", ok, None, expect_fail=True)
    for r in rels:
        report.add(f"relation {r}", verify_relation(r, env=env).holds)
    if variant is not None:
        report.add(f"variant without socle term {variant}", verify_relation(variant, env=env).holds,
                   None, expect_fail=True)
    words = alternating_words(order)
    sp = spanning_check(words, env)
    report.add(f"{len(words)} alternating words form a basis", sp["is_basis"], {"rank": sp["rank"]})
    _finish(report, json_out, t0)


@main.command("ext")
@click.option("--alg", required=True, help="group:D8, catalog:NAME[:q=2], block:SL23 or file:PATH")
@click.option("--nmax", type=int, default=6, show_default=True)
@click.option("--vertex", type=int, default=0, show_default=True)
@click.option("--max-weight", type=int, default=16, show_default=True,
              help="internal weight bound for commutative rings")
@click.option("--series", "series_expr", default=None, help="compare with this Poincare series")
@click.option("--field", default=None)
@click.option("--json", "json_out", default=None)
def ext(alg, nmax, vertex, max_weight, series_expr, field, json_out):
    """Dimensions of Ext^n(S, S) for a simple module S."""
    from .resolve import ResolutionError, ext_algebra, graded_ext_dims
    t0 = time.perf_counter()
    report = RunReport("ext", {"alg": alg, "nmax": nmax, "vertex": vertex, "max_weight": max_weight,
                               "series": series_expr})
    A = _fd_algebra(alg, report, field)
    try:
        if hasattr(A, "mode"):
            dims = graded_ext_dims(A, nmax, max_weight)
            by_n = {}
            for k, v in dims.items():
                by_n[-k[0]] = by_n.get(-k[0], 0) + v
            total = [by_n.get(n, 0) for n in range(nmax + 1)]
            report.note(f"graded dims, internal weight <= {max_weight}", dims)
        else:
            E = ext_algebra(A, vertex, nmax)
            total = E.total_dims()
            report.note("dims by internal degree", E.dims())
    except ResolutionError as exc:
        raise InputError(str(exc)) from None
    report.note("dim Ext^n, n = 0..nmax" + (" (weight-truncated)" if hasattr(A, "mode") else ""), total)
    if series_expr is None and hasattr(A, "mode"):
        series_expr = A.series
    if series_expr:
        from .series import compare_with_dims, parse_series
        p = parse_series(series_expr)
        if len(p.vars) == 1:
            bad = [n for n, c in enumerate(_expand1(p, nmax)) if c != total[n]]
            report.add("series agrees with dim Ext^n", not bad, {"mismatch": bad})
        else:
            if not hasattr(A, "mode") or A.arity != 1:
                raise InputError("two-variable comparison needs a singly graded commutative ring")
            tab = {(-k[0], k[1]): v for k, v in dims.items()}
            bad = compare_with_dims(p, tab, nmax, covered=lambda e: e[1] <= max_weight)
            report.add("series agrees with graded dims", not bad, bad[:5])
    _finish(report, json_out, t0)


def _expand1(p, order):
    from .series import expand
    return expand(p, order)


def _parse_degree_template(text: str):
    from .ncalg import _int_expr
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise click.BadParameter("degree template must look like (-n,n-2,0)", param_hint="--enumerate")
    parts = [x.strip() for x in body[1:-1].split(",")]
    return lambda n: tuple(_int_expr(x, {"n": n}) for x in parts)


def _range(text: str):
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise click.BadParameter("use a range like 3..20", param_hint="--n-range")
    return range(int(m.group(1)), int(m.group(2)) + 1)


@main.command("hh")
@click.option("--mode", type=click.Choice(["ci", "koszul", "envelope"]), required=True)
@click.option("--alg", required=True)
@click.option("--nmax", type=int, default=3, show_default=True, help="envelope mode: top degree")
@click.option("--hoch-bound", type=int, default=None, help="ci/koszul: Hochschild degree bound")
@click.option("--bound", "internal_bound", type=int, default=None, help="ci/koszul: internal weight bound")
@click.option("--enumerate", "template", default=None, help="degree template such as (-n,n-2,0)")
@click.option("--n-range", default="3..20", show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--json", "json_out", default=None)
def hh(mode, alg, nmax, hoch_bound, internal_bound, template, n_range, jobs, json_out):
    """Hochschild cohomology dimensions."""
    from .hochci import (DEFAULT_HOCH_BOUND, DEFAULT_INTERNAL_BOUND, CIError, hh_ci, koszul_hh)
    from .resolve import hochschild_dims
    t0 = time.perf_counter()
    hb = DEFAULT_HOCH_BOUND if hoch_bound is None else hoch_bound
    ib = DEFAULT_INTERNAL_BOUND if internal_bound is None else internal_bound
    report = RunReport("hh", {"mode": mode, "alg": alg, "nmax": nmax, "hoch_bound": hb,
                              "bound": ib, "enumerate": template, "n_range": n_range})
    if mode == "envelope":
        A = _fd_algebra(alg, report)
        if hasattr(A, "mode"):
            raise InputError("envelope mode needs a finite-dimensional algebra")
        dims = hochschild_dims(A, nmax)
        report.note("dim HH^n, n = 0..nmax", dims)
        _finish(report, json_out, t0)
    p = _load_presentation(alg, report)
    try:
        if template:
            tmpl = _parse_degree_template(template)
            mask = (False,) + tuple(p.scale_mask)

            def target(n):
                d = tmpl(n)
                if len(d) != p.arity + 1:
                    raise click.BadParameter(f"template has {len(d)} components; expected {p.arity + 1}",
                                             param_hint="--enumerate")
                return tuple(x * p.scale if m and p.scale != 1 else x for x, m in zip(d, mask))

            ns = list(_range(n_range))
            keys = [target(n) for n in ns]
            if mode == "ci":
                res = hh_ci(p, degrees=keys, with_reps=True, jobs=jobs)
                found = {n: res.reps.get(k, []) for n, k in zip(ns, keys)}
            else:
                res = koszul_hh(p, degrees=keys, jobs=jobs)
                found = {n: res.dims.get(k, 0) for n, k in zip(ns, keys)}
            report.note(f"classes in degree {template}", {n: v for n, v in found.items() if v})
        else:
            res = (hh_ci if mode == "ci" else koszul_hh)(p, hb, ib, jobs=jobs)
            report.note("dims by multidegree", res.unscaled())
            report.note("total dimension within bounds", sum(res.dims.values()))
    except CIError as exc:
        raise InputError(str(exc)) from None
    _finish(report, json_out, t0)


@main.command("transfer")
@click.option("--alg", required=True, help="group:D8 or block:SL23")
@click.option("--nmax", type=int, default=4, show_default=True)
@click.option("--degree-bound", type=int, default=None)
@click.option("--json", "json_out", default=None)
def transfer(alg, nmax, degree_bound, json_out):
    """Minimal A-infinity model of Ext by homotopy transfer."""
    from .ainfty import TransferError, check_stasheff, kadeishvili_transfer, transfer_with_periodicity
    from .fdalg import FDAlgebra
    from .ncalg import catalog
    from .resolve import Module, dg_endomorphism, minimal_resolution
    t0 = time.perf_counter()
    report = RunReport("transfer", {"alg": alg, "nmax": nmax, "degree_bound": degree_bound})
    kind, _, rest = alg.partition(":")
    try:
        if kind == "group":
            fam, q = _group_spec(rest)
            if fam != "dihedral":
                raise InputError("transfer supports the dihedral groups (graded presentation kD)")
            b = nmax if degree_bound is None else degree_bound
            report.track(_catalog_path("kD"))
            report.track(_catalog_path("HBD"))
            B = FDAlgebra.from_presentation(catalog(f"kD:q={q}"))
            r = minimal_resolution(B, Module.simple(B), b + 1)
            E = dg_endomorphism(r, N=b)
            labels = _dihedral_labels(q)
            T = kadeishvili_transfer(E, nmax, b, labels=labels)
        elif kind == "block" and rest == "SL23":
            b = 3 * nmax + 2 if degree_bound is None else degree_bound
            report.track(_catalog_path("SL23"))
            C = FDAlgebra.from_presentation(catalog("SL23"))
            r = minimal_resolution(C, Module.simple(C, 0), b + 9)
            T = transfer_with_periodicity(r, 4, nmax, b)
        else:
            raise InputError(f"no transfer recipe for {alg!r}; use group:D<4q> or block:SL23")
    except TransferError as exc:
        raise InputError(str(exc)) from None
    sp = T.space
    for n in range(3, nmax + 1):
        tab = T.structure.table(n, b)
        entries = {",".join(sp.label(a) for a in k): sp.vec_str(v) for k, v in tab.items()}
        report.note(f"m_{n} nonzero values", entries)
    if kind == "group":
        val = sp.vec_str(T.m(4, ["x", "y", "x", "y"])) if nmax >= 4 else None
        if val is not None:
            report.add("m_4(x,y,x,y) = t", val == "t", val)
            report.add("m_4(y,x,y,x) = t", sp.vec_str(T.m(4, ["y", "x", "y", "x"])) == "t")
        report.add("m_3 = 0", not T.structure.table(3, b))
    else:
        report.add(f"m_n = 0 for 3 <= n <= {nmax}",
                   all(not T.structure.table(n, b) for n in range(3, nmax + 1)))
    st = check_stasheff(T.structure, nmax + 1, b, n_min=1)
    report.add("Stasheff identities within the bound", all(not v for v in st.values()))
    _finish(report, json_out, t0)


def _dihedral_labels(q: int):
    """Name Ext classes of kD by matching internal bidegree with the H*BD catalog."""
    from .ncalg import catalog
    H = catalog(f"HBD:q={q}")

    def label(d, D, k):
        deg = (-d,) + tuple(H.scale * x for x in D)
        try:
            P = H.piece(deg)
        except Exception:
            return f"c{d}_{k}"
        if P.dim == 1:
            return H.word_str(P.basis[0])
        return f"c{d}_{k}" + str(list(D))

    return label


@main.command("series")
@click.argument("expression", required=False)
@click.option("--order", type=int, default=8, show_default=True)
@click.option("--var", default=None, help="expansion variable")
@click.option("--koszul-dual", "dual", is_flag=True, help="apply p -> 1/p(-s/t, 1/t)")
@click.option("--equals", default=None, help="check equality with another series")
@click.option("--json", "json_out", default=None)
def series(expression, order, var, dual, equals, json_out):
    """Expand, dualise or compare rational Poincare series."""
    from .series import expand, koszul_dual_series, parse_series
    t0 = time.perf_counter()
    if not expression:
        raise click.UsageError("give a series expression")
    report = RunReport("series", {"expression": expression, "order": order, "var": var,
                                  "koszul_dual": dual, "equals": equals})
    try:
        p = parse_series(expression)
        if dual:
            p = koszul_dual_series(p, hom=var)
            report.note("Koszul dual", repr(p))
        if equals:
            other = parse_series(equals, p.vars)
            report.add(f"equal to {equals}", p == other)
        ex = expand(p, order, var)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if isinstance(ex, list):
        report.note("coefficients", ex)
    else:
        report.note("coefficients", {k: repr(v) for k, v in ex.items()})
    _finish(report, json_out, t0)


if __name__ == "__main__":  # pragma: no cover
    main()
