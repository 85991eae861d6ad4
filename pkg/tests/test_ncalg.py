import itertools
import os

import pytest
from hypothesis import given, strategies as st

from tamecoh.ncalg import (PresentationError, catalog, catalog_names, degree_basis,
                           derived_relation_check, hilbert_series_truncated, normal_form,
                           parse_presentation, quadratic_dual)


def ring(body, header="field GF(2)\ngrading 1\nmode commutative\n"):
    return parse_presentation(header + body)


def by_first(hs):
    out = {}
    for d, v in hs.items():
        out[-d[0]] = out.get(-d[0], 0) + v
    return out


def test_hbd_degrees_are_doubled():
    p = catalog("HBD:q=2")
    degs = {g.name: g.degree for g in p.gens}
    assert degs == {"x": (-1, -2, 0), "y": (-1, 0, -2), "t": (-2, -4, -4)}
    assert p.unscale((-1, -2, 0)) == (-1, -1, 0)


def test_hbd_degree_minus_three_basis():
    p = catalog("HBD:q=2")
    words = set()
    for w in range(4):
        for d in p.nonzero_degrees(3):
            if d[0] == -3:
                words.update(p.word_str(b) for b in p.piece(d).basis)
    assert words == {"x^3", "y^3", "x*t", "y*t"}


def test_hbd_dims_per_homological_degree():
    hs = by_first(hilbert_series_truncated(catalog("HBD:q=2"), 6))
    assert [hs[n] for n in range(7)] == [1, 2, 3, 4, 5, 6, 7]


def test_degree_zero_is_one_dimensional():
    for name in ("HBD:q=2", "HBQ:q=2", "SD1:q=2", "HBSD:q=2"):
        p = catalog(name)
        assert degree_basis(p, (0,) * p.arity).dim == 1


def test_quiver_degree_zero_counts_vertices():
    p = catalog("QSD1:q=2")
    assert p.piece((0,)).dim >= 3  # idempotents plus any degree-zero paths
    assert len([w for w in p.piece((0,)).basis if p.is_idempotent_word(w)]) == 3


def test_xy_ring_dimensions():
    p = ring("gen x : (-1)\ngen y : (-1)\nrel x*y\n")
    for n in range(1, 9):
        assert p.piece((-n,)).dim == 2


def test_polynomial_ring_in_even_degree():
    p = ring("gen x : (-2)\n")
    assert [p.piece((-n,)).dim for n in range(7)] == [1, 0, 1, 0, 1, 0, 1]


def test_normal_forms():
    H = catalog("HBD:q=2")
    assert normal_form(H, "x*y") == {}
    assert H.poly_str(normal_form(H, "t*x^2")) == H.poly_str(H.poly("x^2*t"))
    S = catalog("SD1:q=2")
    assert normal_form(S, "z^2") == normal_form(S, "x^2*y")


def test_kd8_free_presentation_has_group_order():
    p = catalog("kD:q=2")
    total = sum(hilbert_series_truncated(p, 8).values())
    assert total == 8


def test_quiver_identity_word():
    p = catalog("SL23")
    for i, g in enumerate(p.gens):
        w = (i,)
        assert normal_form(p, w) == {w: 1}


def test_catalog_errors():
    with pytest.raises(PresentationError, match="available"):
        catalog("nonexistent")
    with pytest.raises(PresentationError):
        catalog("HBD:q=3")
    names = catalog_names()
    assert "HBD" in names and not any(n.startswith("ainf_") for n in names)


def test_parser_errors():
    with pytest.raises(PresentationError, match="unknown directive"):
        ring("frobnicate\n")
    with pytest.raises(PresentationError):
        ring("gen x : (-1)\ngen y : (-2)\nrel x + y\n")  # not homogeneous


def test_data_dir_override(tmp_path, monkeypatch):
    (tmp_path / "Tiny.txt").write_text("name Tiny\nfield GF(3)\ngrading 1\nmode commutative\n"
                                       "gen x : (-1)\nrel x^3\n")
    monkeypatch.setenv("TAMECOH_DATA", str(tmp_path))
    p = catalog("Tiny")
    assert [p.piece((-n,)).dim for n in range(5)] == [1, 1, 1, 0, 0]


# -- derived relations in block algebras --------------------------------------

SL23_DERIVED = ["a*c*d", "b*a*c", "b*f*e", "c*e*f", "d*b*a", "d*c*e", "e*a*b", "f*d*c", "f*e*a",
                "c*e*a = b*f*d", "e*a*c = d*b*f", "a*c*e = f*d*b"]


@pytest.mark.parametrize("rel", SL23_DERIVED)
def test_sl23_derived_relations(rel):
    assert derived_relation_check(catalog("SL23"), rel)


def test_sl23_paths_of_length_five_vanish():
    p = catalog("SL23")
    n = len(p.gens)
    paths = [w for w in itertools.product(range(n), repeat=5) if p.is_path(w)]
    assert len(paths) == 3 * 2 ** 5  # two arrows leave every vertex
    for w in paths:
        assert not normal_form(p, w)
    assert not normal_form(p, (0, 0))  # a*a does not compose
    assert len(p.quiver_basis()) == 24


@pytest.mark.parametrize("rel", ["d^2*b", "c*d^2", "b*c*b", "c*b*c"])
def test_qsd2_derived_relations(rel):
    assert derived_relation_check(catalog("QSD2:q=2"), rel)


@pytest.mark.parametrize("rel", ["f^3", "c*a*c", "a*c*a", "d^5"])
def test_qsd1_derived_relations(rel):
    assert derived_relation_check(catalog("QSD1:q=2"), rel)


def test_nonrelation_is_rejected():
    assert not derived_relation_check(catalog("QSD2:q=2"), "b*a")


# -- quadratic duals ------------------------------------------------------------

def _dims_by_n(p, nmax):
    return [sum(p.piece(d).dim for w in [n] for d in p.nonzero_degrees(w) if d[0] == -n)
            for n in range(nmax + 1)]


def test_dual_of_polynomial_ring_is_exterior():
    R = ring("gen x : (-2)\ngen y : (-2)\n")
    D = quadratic_dual(R)
    pieces = {}
    for w in range(0, 5):
        for d in D.nonzero_degrees(w):
            pieces[d] = D.piece(d).dim
    assert pieces == {(0, 0): 1, (-1, 2): 2, (-2, 4): 1}


def test_dual_of_exterior_is_polynomial():
    R = parse_presentation("field GF(2)\ngrading 1\nmode free\ngen x : (-1)\nrel x^2\n")
    D = quadratic_dual(R)
    assert not D.relations
    assert [D.piece((-n, n)).dim for n in range(5)] == [1] * 5


def test_dual_of_hbd():
    D = quadratic_dual(catalog("HBD:q=2"))
    rels = {D.poly_str(r) for r in D.relations}
    assert {"x^^2", "y^^2", "t^^2", "t^*x^ + x^*t^", "t^*y^ + y^*t^"} == rels
    # Lambda(tau) (x) k<x^, y^ | x^2, y^2>: two words in each positive length, doubled
    assert _dims_by_n(D, 4) == [1, 3, 4, 4, 4]


def test_dual_rejects_cubic():
    with pytest.raises(PresentationError, match="non-quadratic"):
        quadratic_dual(catalog("SD1:q=2"))


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=3))
def test_commutative_products_commute(pairs):
    p = ring("gen x : (-1)\ngen y : (-1)\ngen z : (-2)\nrel x*y + z\n".replace("rel x*y + z\n",
                                                                               "rel x^2*y\n"))
    names = "xyz"
    u = "*".join(names[i] for i, _ in pairs)
    v = "*".join(names[j] for _, j in pairs)
    assert normal_form(p, f"{u}*{v}") == normal_form(p, f"{v}*{u}")
