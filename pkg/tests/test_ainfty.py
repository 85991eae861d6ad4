import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tamecoh.ainfty import (AInftyError, AInftyMorphism, AInftyStructure, HochschildCochain,
                            TableSpace, TransferError, bracket, check_morphism, check_stasheff,
                            circle_product, coboundary_equivalent, congruence_vanishing_check,
                            cup, dg_structure, hochschild_differential, kadeishvili_transfer,
                            load_morphism, load_structure, report_ok, structure_from_presentation,
                            tuples_upto, zero_cochain)
from tamecoh.exactlin import get_field
from tamecoh.fdalg import FDAlgebra
from tamecoh.ncalg import catalog, parse_presentation
from tamecoh.resolve import Module, dg_endomorphism, minimal_resolution

GF3 = get_field(3)


def _ring(body, field="GF(3)", mode="commutative"):
    return parse_presentation(f"field {field}\ngrading 1\nmode {mode}\n" + body)


@pytest.fixture(scope="module")
def hbd_table():
    return load_structure("ainf_HBD_q2.txt")


@pytest.fixture(scope="module")
def kd8_transfer():
    B = FDAlgebra.from_presentation(catalog("kD:q=2"))
    r = minimal_resolution(B, Module.simple(B), 7)
    E = dg_endomorphism(r, N=6)
    names = {(1, (-1, 0)): "x", (1, (0, -1)): "y", (2, (-2, -2)): "t"}
    return kadeishvili_transfer(E, 5, 6,
                                labels=lambda d, D, k: names.get((d, D), f"c{d}{list(D)}"))


def _drop(a, n, bad_tuple):
    op = a.ops[n]
    return a.with_ops({n: lambda t: {} if t == bad_tuple else op(t)}, name="corrupted")


# -- Stasheff identities --------------------------------------------------------

def test_associative_algebra_is_a_infinity():
    a = structure_from_presentation(_ring("gen x : (-1)\ngen y : (-2)\nrel x^3\n"))
    assert report_ok(check_stasheff(a, 5, 8))


def test_graded_signs_in_odd_characteristic():
    # k<x, y>/(x^2) over GF(3) with d y = x, |x| odd: Leibniz with Koszul signs
    p = _ring("gen x : (-1)\ngen y : (-2)\nrel x*x\n", mode="free")
    with pytest.raises(AInftyError):
        dg_structure(p, {"x": "y"})  # d(x^2) = yx - xy does not vanish
    q = parse_presentation("field GF(3)\ngrading 2\nmode free\ngen x : (-1, -1)\n"
                           "gen y : (0, -1)\n")
    dga = dg_structure(q, {"y": "x"})
    assert report_ok(check_stasheff(dga, 3, 4))
    # dropping the Koszul sign breaks the Leibniz identity at n = 2
    sp = dga.space
    d_naive = {}

    def naive(t):
        (w,) = t
        out = {}
        for i, g in enumerate(w):
            if q.gens[g].name == "y":
                word = w[:i] + (q.index["x"],) + w[i + 1:]
                out[word] = (out.get(word, 0) + 1) % 3
        return {k: v for k, v in out.items() if v}

    wrong = dga.with_ops({1: naive})
    assert not report_ok(check_stasheff(wrong, 2, 3))


def test_hbd_table_satisfies_stasheff(hbd_table):
    assert report_ok(check_stasheff(hbd_table, 7, 9, n_min=3))


def test_corrupted_m4_is_detected(hbd_table):
    sp = hbd_table.space
    x, y = next(iter(sp.element("x"))), next(iter(sp.element("y")))
    assert hbd_table.m(4, (x, y, x, y))
    bad = _drop(hbd_table, 4, (x, y, x, y))
    rep = check_stasheff(bad, 5, 6, n_min=5)
    assert rep[5]


def test_homega_d_table_satisfies_stasheff():
    a = load_structure("ainf_HOmegaD_q2.txt")
    assert a.table(5, 10)
    assert report_ok(check_stasheff(a, 6, 10))


def test_table_outside_its_bound_raises():
    a = load_structure("ainf_HOmegaD_q2.txt")
    sp = a.space
    big = next(k for k in sp.basis_upto(30) if sp.weight(k) >= 6)
    with pytest.raises(AInftyError, match="not known"):
        a.m(5, (big,) * 5)


# -- morphisms --------------------------------------------------------------------

def test_identity_morphism():
    a = load_structure("ainf_HOmegaSD1_q2.txt")
    f = AInftyMorphism(a, a, {1: lambda t: {t[0]: 1}})
    assert report_ok(check_morphism(f, 4, 14))


def test_sd1_quasi_isomorphism_through_arity_three():
    f, src, tgt = load_morphism("morph_SD1_q2.txt")
    assert report_ok(check_morphism(f, 3, 16))


def test_morphism_perturbations_are_detected():
    f, src, tgt = load_morphism("morph_SD1_q2.txt")
    sp = src.space
    xh = next(iter(sp.element("xh")))
    xi = next(iter(tgt.space.element("xi")))
    f1 = f.maps[1]
    broken = AInftyMorphism(src, tgt, {**f.maps, 1: lambda t: {xi: 1} if t == (xh,) else f1(t)})
    assert check_morphism(broken, 1, 16)[1]
    f2 = f.maps[2]
    no_f2 = AInftyMorphism(src, tgt, {**f.maps, 2: lambda t: {} if t == (xh, xh) else f2(t)})
    assert not report_ok(check_morphism(no_f2, 2, 16))


# -- Hochschild calculus ----------------------------------------------------------

def _nonassociative():
    sp = TableSpace({"a": (-2,), "b": (-4,)}, weights={"a": 1, "b": 2})
    table = {("a", "a"): {"b": 1}, ("a", "b"): {"a": 1}}
    return AInftyStructure(sp, GF3, {2: lambda t: table.get(t, {})})


def test_m2_circle_m2_is_the_associator():
    A = _nonassociative()
    m2 = A.cochain(2)
    assoc = circle_product(m2, m2)
    for t in tuples_upto(A.space, 3, 6):
        left = A.apply(2, [A.m(2, t[:2]), {t[2]: 1}])
        right = A.apply(2, [{t[0]: 1}, A.m(2, t[1:])])
        expect = {k: (left.get(k, 0) - right.get(k, 0)) % 3 for k in set(left) | set(right)}
        assert assoc(t) == {k: v for k, v in expect.items() if v}
    assert assoc(("a", "a", "b"))


def test_m2_circle_m2_vanishes_when_associative():
    A = structure_from_presentation(_ring("gen x : (-2)\ngen y : (-2)\nrel x^2*y\n"))
    m2 = A.cochain(2)
    assert not circle_product(m2, m2).nonzero_on(tuples_upto(A.space, 3, 6))


def test_composition_with_zero():
    A = _nonassociative()
    f = A.cochain(2)
    assert not circle_product(f, zero_cochain(A, 3)).nonzero_on(tuples_upto(A.space, 4, 8))


def _truncated_poly():
    # k[x]/(x^4) over GF(3), x even so no element signs
    return structure_from_presentation(_ring("gen x : (-2)\nrel x^4\n"))


def _random_cochain(A, arity, data):
    keys = A.space.basis_upto(10)
    table = {}
    for t in tuples_upto(A.space, arity, 6):
        v = data.draw(st.dictionaries(st.sampled_from(keys), st.integers(1, 2), max_size=2))
        if v:
            table[t] = v
    return HochschildCochain(A, arity, table)


def test_derivation_is_a_cocycle():
    A = _truncated_poly()
    sp = A.space
    # Euler derivation x^k -> k x^k
    D = HochschildCochain(A, 1, lambda t: {t[0]: len(t[0]) % 3} if len(t[0]) % 3 else {})
    assert not hochschild_differential(D).nonzero_on(tuples_upto(sp, 2, 6))


@settings(max_examples=25)
@given(st.data())
def test_coboundary_squares_to_zero(data):
    A = _truncated_poly()
    n = data.draw(st.integers(1, 2))
    f = _random_cochain(A, n, data)
    assert not hochschild_differential(hochschild_differential(f)).nonzero_on(
        tuples_upto(A.space, n + 2, 6))


@settings(max_examples=20)
@given(st.data())
def test_pre_lie_identity(data):
    # (f o g) o h - f o (g o h) is graded symmetric in g and h
    A = _truncated_poly()
    f = _random_cochain(A, 2, data)
    g = _random_cochain(A, data.draw(st.integers(1, 2)), data)
    h = _random_cochain(A, data.draw(st.integers(1, 2)), data)

    def assoc(f, g, h):
        l, r = circle_product(circle_product(f, g), h), circle_product(f, circle_product(g, h))
        return lambda t: {k: (l(t).get(k, 0) - r(t).get(k, 0)) % 3
                          for k in set(l(t)) | set(r(t)) if (l(t).get(k, 0) - r(t).get(k, 0)) % 3}

    s = 1 if ((g.arity - 1) * (h.arity - 1)) % 2 == 0 else -1
    one, two = assoc(f, g, h), assoc(f, h, g)
    for t in tuples_upto(A.space, f.arity + g.arity + h.arity - 2, 6):
        want = {k: (s * v) % 3 for k, v in two(t).items()}
        assert one(t) == want


@settings(max_examples=20)
@given(st.data())
def test_self_bracket_of_odd_cochain_vanishes(data):
    A = _truncated_poly()
    f = _random_cochain(A, 3, data)  # arity 3: degree 2 in the shifted grading
    assert not bracket(f, f).nonzero_on(tuples_upto(A.space, 5, 6))


def test_self_bracket_in_characteristic_two():
    a = load_structure("ainf_HBD_q2.txt")
    m4 = a.cochain(4)
    assert not bracket(m4, m4).nonzero_on(tuples_upto(a.space, 7, 9))


def test_cup_product_is_m2_of_values():
    A = _truncated_poly()
    D = HochschildCochain(A, 1, lambda t: {t[0]: 1})
    c = cup(D, D)
    (x,) = A.space.element("x")
    (x2,) = A.space.element("x^2")
    assert c((x, x)) == {x2: 1}


# -- circle-product recursion on shipped tables ------------------------------------

def test_dihedral_m4_is_a_cocycle(hbd_table):
    m4 = hbd_table.cochain(4)
    assert not hochschild_differential(m4).nonzero_on(tuples_upto(hbd_table.space, 5, 10))


def test_dihedral_m6_recursion(hbd_table):
    m4, m6 = hbd_table.cochain(4), hbd_table.cochain(6)
    dom = tuples_upto(hbd_table.space, 7, 10)
    lhs, rhs = hochschild_differential(m6), circle_product(m4, m4)
    assert rhs.nonzero_on(dom)  # the identity is not vacuous
    assert not (lhs - rhs).nonzero_on(dom)


def test_congruence_check(hbd_table):
    out = congruence_vanishing_check(hbd_table, 2, 6, 10)
    assert all(not v for v in out["forbidden"].values())
    assert all(not v for v in out["recursion"].values())
    odd = hbd_table.with_ops({5: lambda t: {t[0]: 1}})
    assert congruence_vanishing_check(odd, 2, 5, 8)["forbidden"][5]
    trivial = structure_from_presentation(catalog("HBD:q=2"))
    assert congruence_vanishing_check(trivial, 2, 6, 6) == {"forbidden": {}, "recursion": {}}


def test_sd1_m3_squares_to_zero():
    a = load_structure("ainf_HOmegaSD1_q2.txt")
    m3 = a.cochain(3)
    assert a.table(3, 14)
    assert not circle_product(m3, m3).nonzero_on(tuples_upto(a.space, 5, 14))


# -- coboundaries -------------------------------------------------------------------

def test_equal_cochains_have_zero_witness(hbd_table):
    m4 = hbd_table.cochain(4)
    h = coboundary_equivalent(m4, m4, 8)
    assert h is not None and not h.nonzero_on(tuples_upto(hbd_table.space, 3, 8))


def test_perturbed_cocycle_has_a_witness(hbd_table):
    sp = hbd_table.space
    (x2,), (y,), (t,) = sp.element("x^2"), sp.element("y"), sp.element("t")
    h = HochschildCochain(hbd_table, 3, {(x2, y, y): {t: 1}})
    m4 = hbd_table.cochain(4)
    m4b = m4 + hochschild_differential(h)
    w = coboundary_equivalent(m4, m4b, 8)
    assert w is not None
    dom = tuples_upto(sp, 4, 8)
    assert not (hochschild_differential(w) - (m4 - m4b)).nonzero_on(dom)


def test_kd8_m4_is_not_a_coboundary(kd8_transfer):
    A = kd8_transfer.structure
    assert coboundary_equivalent(A.cochain(4), zero_cochain(A, 4), 6) is None


# -- Kadeishvili transfer -------------------------------------------------------------

def test_kd8_transfer(kd8_transfer):
    T = kd8_transfer
    sp = T.space
    assert sp.vec_str(T.m(4, ["x", "y", "x", "y"])) == "t"
    assert sp.vec_str(T.m(4, ["y", "x", "y", "x"])) == "t"
    assert not T.structure.table(3, 6)
    assert not T.structure.table(5, 6)
    assert sp.vec_str(T.m(2, ["x", "y"])) == "0"
    assert report_ok(check_stasheff(T.structure, 5, 6))


def test_formal_input_transfers_to_zero_higher_maps():
    # the resolution of k over k[x]/(x^2) is formal: Ext = k[x^]
    A = FDAlgebra.from_presentation(_ring("gen x : (1)\nrel x^2\n", field="GF(2)", mode="free"))
    r = minimal_resolution(A, Module.simple(A), 7)
    T = kadeishvili_transfer(dg_endomorphism(r, N=6), 4, 6)
    for n in (3, 4):
        assert not T.structure.table(n, 6)


def test_transfer_rejects_small_bound():
    B = FDAlgebra.from_presentation(catalog("kD:q=2"))
    r = minimal_resolution(B, Module.simple(B), 4)
    with pytest.raises(TransferError, match="too small"):
        kadeishvili_transfer(dg_endomorphism(r, N=3), 4, 3)


def test_transfer_section_must_give_a_basis():
    B = FDAlgebra.from_presentation(catalog("kD:q=2"))
    r = minimal_resolution(B, Module.simple(B), 5)
    E = dg_endomorphism(r, N=4)

    def section(d, D, default):
        return [(lab, (dd, DD, np.zeros_like(v))) for lab, (dd, DD, v) in default]

    with pytest.raises(TransferError):
        kadeishvili_transfer(E, 3, 4, section=section)
