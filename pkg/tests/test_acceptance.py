"""End-to-end acceptance checks, one test per criterion (criterion 4 is split).

Every test records its outcome with ``acceptance_log.record``; the pytest
session prints a one-line verdict per criterion at the end of the run.
"""
import time

import numpy as np
import pytest

from acceptance_log import record
from tamecoh.ainfty import (check_stasheff, circle_product, hochschild_differential,
                            kadeishvili_transfer, load_structure, report_ok,
                            transfer_with_periodicity, tuples_upto)
from tamecoh.exactlin import GF2, GF4
from tamecoh.fdalg import FDAlgebra
from tamecoh.grpalg import alternating_words, build_group, q_generators, sd_generators, spanning_check, verify_relation
from tamecoh.hochci import (CIError, clifford_complex, degree_monomial_enumeration, ext_ci, hh_ci,
                            koszul_hh, load_factorizations, verify_matrix_factorization)
from tamecoh.ncalg import catalog, derived_relation_check
from tamecoh.resolve import (Module, bimodule_hh_dims, dg_endomorphism, ext_algebra, graded_ext_dims,
                             hochschild_dims, minimal_resolution)
from tamecoh.series import compare_with_dims, expand, koszul_dual_series, parse_series


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


# ---------------------------------------------------------------------------
# 1. group presentations


@pytest.mark.parametrize("q", [2, 4])
def test_criterion_1_semidihedral(q):
    with Clock() as c:
        X, Y = sd_generators(q)
        env = {"X": X, "Y": Y}
        m = 2 * q - 1
        rels = verify_relation("X^2 = 0", env=env).holds and \
            verify_relation(f"Y^2 = X*(Y*X)^{m} + (Y*X)^{2 * q}", env=env).holds
        basis = spanning_check(alternating_words(8 * q), env)["is_basis"]
        variant_fails = not verify_relation(f"Y^2 = X*(Y*X)^{m}", env=env).holds
    ok = rels and basis and variant_fails and c.seconds < 5
    record(1, f"SD{8 * q} relations, basis, socle-free variant fails", ok, f"{c.seconds:.2f}s")
    assert ok


@pytest.mark.parametrize("q,field", [(1, GF4), (2, GF2), (4, GF2)])
def test_criterion_1_quaternion(q, field):
    with Clock() as c:
        gens = q_generators(q, field)
        env = {"X": gens.X, "Y": gens.Y}
        if q == 1:
            rels = ["X^2 = Y*X*Y", "Y^2 = X*Y*X", "X^4 = 0", "Y^4 = 0"]
        else:
            m = 2 * q - 1
            rels = [f"X^2 = (Y*X)^{m}*Y + (X*Y)^{2 * q}", f"Y^2 = (X*Y)^{m}*X + (Y*X)^{2 * q}",
                    "X^4 = 0", "Y^4 = 0"]
        ok = all(verify_relation(r, env=env).holds for r in rels)
    ok = ok and c.seconds < 5
    record(1, f"Q{8 * q} relations over {field.name}", ok, f"{c.seconds:.2f}s")
    assert ok


# ---------------------------------------------------------------------------
# 2. Ext rings


def test_criterion_2_ext():
    with Clock() as c:
        A = FDAlgebra.from_group(build_group("dihedral", 2), GF2)
        d8 = ext_algebra(A, 0, 8).total_dims()
        B = FDAlgebra.from_presentation(catalog("kD:q=2"))
        E = ext_algebra(B, 0, 4, res=minimal_resolution(B, Module.simple(B), 4))
        x, y = (1, E.element(1, 0)), (1, E.element(1, 1))
        xy_zero = not E.product(x, y).any() and not E.product(y, x).any()
        C = FDAlgebra.from_presentation(catalog("SL23"))
        sl = ext_algebra(C, 0, 8, res=minimal_resolution(C, Module.simple(C, 0), 10)).total_dims()
    ok_d8 = d8 == [n + 1 for n in range(9)]
    ok_sl = sl[:9] == [1, 0, 0, 1, 1, 0, 0, 1, 1]
    record(2, "dim Ext^n kD8 = n+1, n <= 8", ok_d8, str(d8))
    record(2, "SL(2,3) block Ext pattern", ok_sl, str(sl[:9]))
    record(2, "Yoneda xy = yx = 0 in the dihedral case", xy_zero)
    record(2, "runtime < 60 s", c.seconds < 60, f"{c.seconds:.1f}s")
    assert ok_d8 and ok_sl and xy_zero and c.seconds < 60


# ---------------------------------------------------------------------------
# 3. Hochschild cohomology of kD8


def test_criterion_3_hochschild_kd8():
    with Clock() as c:
        G = build_group("dihedral", 2)
        dims = hochschild_dims(FDAlgebra.from_group(G, GF2), 3)
        classes = {frozenset(G.mul(G.mul(g, x), int(G.inverse[g])) for g in range(G.order))
                   for x in range(G.order)}
    ok = dims == [4 * n + 5 for n in range(4)] and len(classes) == 5 and c.seconds < 300
    record(3, "HH^n(kD8) = 4n+5 for n <= 3, dim Z(kD8) = 5", ok, f"{dims} in {c.seconds:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 4. Cliff(q) against the Koszul complex and a minimal resolution


def test_criterion_4_hbd_clifford_equals_koszul():
    C = clifford_complex("HBD:q=2")
    keys = [(H,) + E for H, E in C.degrees(12, 48)]
    a = hh_ci("HBD:q=2", degrees=keys, jobs=4)
    b = koszul_hh("HBD:q=2", degrees=keys, jobs=4)
    ok = a.dims == b.dims
    record(4, "HBD hh_ci = koszul_hh at the default bound", ok,
           f"{len(keys)} multidegrees, {len(a.dims)} nonzero")
    assert ok


@pytest.mark.xfail(strict=True, raises=CIError,
                   reason="koszul_hh needs quadratic relations; these rings have cubic ones")
@pytest.mark.parametrize("name", ["HBQ", "SD1:q=2", "SD2:q=2"])
def test_criterion_4_koszul_on_cubic_rings(name):
    try:
        koszul_hh(name)
    except CIError as exc:
        record(4, f"{name} hh_ci = koszul_hh", False, str(exc), expected_fail=True)
        raise
    record(4, f"{name} hh_ci = koszul_hh", False, "koszul_hh unexpectedly accepted the ring")


@pytest.mark.parametrize("name,h,ib,mw", [("HBQ", 3, 8, 14), ("SD1:q=2", 4, 16, 28),
                                          ("SD2:q=2", 3, 12, 20)])
def test_criterion_4_substitute_bimodule_route(name, h, ib, mw):
    C = clifford_complex(name)
    keys = C.degrees(h, ib)
    via_bimodule = bimodule_hh_dims(catalog(name), h, mw, sorted({E for _, E in keys}))
    via_cliff = hh_ci(name, h, ib).dims
    flat = [(H,) + E for H, E in keys]
    ok = all(via_cliff.get(k, 0) == via_bimodule.get(k, 0) for k in flat)
    record(4, f"{name} hh_ci = bimodule-resolution HH (substitute route, HH degree <= {h})", ok,
           f"{len(flat)} multidegrees")
    assert ok


@pytest.mark.parametrize("name", ["HBD:q=2", "HBQ", "SD1:q=2", "SD2:q=2"])
def test_criterion_4_ext(name):
    nmax, mw = 8, 24
    R, E = catalog(name), ext_ci(name)
    inside = lambda k: R.wt(tuple(-c for c in k[1:])) <= mw
    resolved = {k: v for k, v in graded_ext_dims(R, nmax, mw).items() if inside(k)}
    clifford = {d: E.piece(d).dim for n in range(nmax + 1) for d in E.nonzero_degrees(n) if inside(d)}
    ok = resolved == clifford
    record(4, f"{name} ext_ci = resolved Ext", ok, f"{len(resolved)} multidegrees")
    assert ok


# ---------------------------------------------------------------------------
# 5. monomial enumeration


def test_criterion_5_dihedral():
    ns = range(3, 13)
    enum = degree_monomial_enumeration("HHBD:q=2", lambda n: (-n, n - 2, 0, 0), ns)
    direct = hh_ci("HBD:q=2", degrees=[(-n, n - 2, 0, 0) for n in ns], with_reps=True)
    ok = {n: m for n, m in enum.items() if m} == {4: ["s^2*t"]} and \
        direct.dims == {(-4, 2, 0, 0): 1} and direct.reps[(-4, 2, 0, 0)] == ["t*s^2"]
    record(5, "dihedral: only s^2 t in degrees (-n,n-2,0,0), 2 < n <= 12", ok)
    assert ok


@pytest.mark.parametrize("ring_name,hh_name", [("SD1:q=2", "HHSD1:q=2"), ("SD2:q=2", "HHSD2:q=2")])
def test_criterion_5_semidihedral(ring_name, hh_name):
    ns = range(3, 21)
    enum = degree_monomial_enumeration(hh_name, lambda n: (-n, n - 2, 0), ns)
    direct = hh_ci(ring_name, degrees=[(-n, n - 2, 0) for n in ns])
    ok = all(not m for m in enum.values()) and not direct.dims
    record(5, f"{ring_name}: nothing in degrees (-n,n-2,0), 2 < n <= 20", ok)
    assert ok


# ---------------------------------------------------------------------------
# 6. Kadeishvili transfer


def test_criterion_6_kd8():
    with Clock() as c:
        B = FDAlgebra.from_presentation(catalog("kD:q=2"))
        r = minimal_resolution(B, Module.simple(B), 7)
        names = {(1, (-1, 0)): "x", (1, (0, -1)): "y", (2, (-2, -2)): "t"}
        T = kadeishvili_transfer(dg_endomorphism(r, N=6), 5, 6,
                                 labels=lambda d, D, k: names.get((d, D), f"c{d}{list(D)}"))
        sp = T.space
        m4 = sp.vec_str(T.m(4, ["x", "y", "x", "y"])), sp.vec_str(T.m(4, ["y", "x", "y", "x"]))
        ok = m4 == ("t", "t") and not T.structure.table(3, 6) and \
            report_ok(check_stasheff(T.structure, 5, 6, n_min=1))
    ok = ok and c.seconds < 600
    record(6, "kD8: m3 = 0, m4(x,y,x,y) = m4(y,x,y,x) = t, Stasheff", ok, f"{c.seconds:.1f}s")
    assert ok


def test_criterion_6_sl23():
    with Clock() as c:
        C = FDAlgebra.from_presentation(catalog("SL23"))
        b = 20
        r = minimal_resolution(C, Module.simple(C, 0), b + 9)
        T = transfer_with_periodicity(r, 4, 6, b)
        zero = all(not T.structure.table(n, b) for n in range(3, 7))
        ok = zero and report_ok(check_stasheff(T.structure, 7, b, n_min=1))
    ok = ok and c.seconds < 600
    record(6, "SL(2,3) block: m_n = 0 for 3 <= n <= 6, Stasheff", ok, f"{c.seconds:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 7. circle-product recursion


def test_criterion_7():
    A = load_structure("ainf_HBD_q2.txt")
    m4, m6 = A.cochain(4), A.cochain(6)
    cocycle = not hochschild_differential(m4).nonzero_on(tuples_upto(A.space, 5, 10))
    dom = tuples_upto(A.space, 7, 10)
    rhs = circle_product(m4, m4)
    recursion = rhs.nonzero_on(dom) and not (hochschild_differential(m6) - rhs).nonzero_on(dom)
    S = load_structure("ainf_HOmegaSD1_q2.txt")
    m3 = S.cochain(3)
    sd1 = bool(S.table(3, 14)) and not circle_product(m3, m3).nonzero_on(tuples_upto(S.space, 5, 14))
    record(7, "dihedral q=2: delta m4 = 0", cocycle)
    record(7, "dihedral q=2: delta m6 = m4 o m4", recursion)
    record(7, "SD1 loop homology: m3 o m3 = 0", sd1)
    assert cocycle and recursion and sd1


# ---------------------------------------------------------------------------
# 8. series identities


def test_criterion_8():
    with Clock() as c:
        dual = koszul_dual_series(parse_series("1/((1-s*t^-2)*(1-s*t^-4))"), hom="s") == \
            parse_series("(1+s*t)*(1+s*t^3)", ("s", "t"))
        loop = expand(parse_series("(1+t)^3/(1-3*t)"), 5) == [1, 6, 21, 64, 192, 576]
        g2 = parse_series("(1+t^2)*(1+t^3)*(1+t^4)*(1+t^5)*(1+t^6)/((1-t^8)*(1-t^10))") == \
            parse_series("(1+t^3)*(1+t^6)/((1-t^2)*(1-t^5))")
        bsol = parse_series("(1+t^7)*(1+t^11)*(1+t^13)*(1+t^14)*(1+t^6)*(1+t^10)*(1+t^12)"
                            "/((1-t^20)*(1-t^24)*(1-t^26))") == \
            parse_series("(1+t^7)*(1+t^11)*(1+t^14)/((1-t^6)*(1-t^10)*(1-t^13))")
    fast = c.seconds < 1
    R = catalog("HBSD:q=2")
    dims = {(-k[0], k[1]): v for k, v in graded_ext_dims(R, 8, 16).items()}
    sd = compare_with_dims(parse_series(R.series), dims, 8, "t", covered=lambda e: e[1] <= 16) == []
    record(8, "Koszul dual series (1+st)(1+st^3)", dual)
    record(8, "semidihedral Ext series vs computed dims through order 8", sd)
    record(8, "(1+t)^3/(1-3t) = 1,6,21,64,192,576", loop)
    record(8, "G2 and BSol identities", g2 and bsol)
    record(8, "series arithmetic < 1 s", fast, f"{c.seconds:.3f}s")
    assert dual and sd and loop and g2 and bsol and fast


# ---------------------------------------------------------------------------
# 9. matrix factorisations


@pytest.mark.parametrize("j", [1, 2])
def test_criterion_9(j):
    R, f, fams = load_factorizations("mf_x2y_z2", {"j": j}, "GF(2)")
    ok = len(fams) == 4 and all(verify_matrix_factorization(A, B, f, R) for _, A, B in fams)
    record(9, f"four factorisations of x^2 y + z^2, j = {j}", ok)
    assert ok


# ---------------------------------------------------------------------------
# 10. derived relations in quiver algebras


def test_criterion_10():
    with Clock() as c:
        sd2 = all(derived_relation_check(catalog("QSD2:q=2"), r) for r in ["d^2*b", "c*d^2", "b*c*b", "c*b*c"])
        sl = all(derived_relation_check(catalog("SL23"), r) for r in
                 ["a*c*d", "b*a*c", "b*f*e", "c*e*f", "d*b*a", "d*c*e", "e*a*b", "f*d*c", "f*e*a",
                  "c*e*a = b*f*d", "e*a*c = d*b*f", "a*c*e = f*d*b"])
        sd1 = all(derived_relation_check(catalog("QSD1:q=2"), r) for r in ["f^3", "c*a*c", "a*c*a", "d^5"])
    record(10, "SD2 quiver: d^2 b = c d^2 = bcb = cbc = 0", sd2)
    record(10, "SL(2,3) quiver derived relations", sl)
    record(10, "f^3 = cac = aca = d^5 = 0 (SD1 quiver, q=2)", sd1)
    record(10, "runtime < 10 s", c.seconds < 10, f"{c.seconds:.2f}s")
    assert sd2 and sl and sd1 and c.seconds < 10
