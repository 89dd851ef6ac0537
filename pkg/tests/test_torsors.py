from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import integer_nthroot

from ffgs import fixtures as fx
from ffgs.errors import WitnessFailure
from ffgs.hopf import from_trivial, identity_morphism, trivial_group
from ffgs.iso import find_isomorphism
from ffgs.linalg import Matrix
from ffgs.rings import BaseRing
from ffgs.torsors import (AffineBase, Triple, TripleMorphism, contract, contracted_product,
                          contraction_witness, extend_torsor, flat_closure_triple, generic_fiber_triple,
                          identity_triple_morphism, is_triple_isomorphism, reductions, reduces_to,
                          trivial_triple, verify_triple)

from helpers import cofactor_det, sym
import cases

Q, Z, Z2, Z3 = BaseRing.QQ(), BaseRing.ZZ(), BaseRing.localized(2), BaseRing.localized(3)
PQ = AffineBase(Q)
ZT = AffineBase(Z, "torus")


# -- bases ---------------------------------------------------------------------

def test_affine_base_units_and_sections():
    u = ZT.u
    assert ZT.is_unit(u ** -3) and ZT.is_unit(-u) and not ZT.is_unit(u + 1) and not ZT.is_unit(2 * u)
    assert ZT.section(u ** 2 + 3) == 4
    assert ZT.generic() == AffineBase(Q, "torus")
    assert AffineBase.from_dict(ZT.to_dict()) == ZT
    with pytest.raises(ValueError):
        AffineBase(Q, "line")
    with pytest.raises(ValueError):
        PQ.u


# -- triples -------------------------------------------------------------------

@pytest.mark.parametrize("d", fx.triple_catalog(), ids=lambda d: d.name)
def test_catalog_triples_verify(d):
    t = d.make()
    assert t.rank == d.expected_rank
    assert verify_triple(t).ok
    assert (t.point is not None) == d.expected.get("pointed", True)
    assert t.base.is_unit(t.torsor_determinant())


def test_kummer_without_rational_point():
    t = fx.kummer_triple(PQ, 2, 5)
    assert t.point is None
    g = t.gamma_matrix()
    assert t.torsor_determinant() == cofactor_det([list(r) for r in g.rows]) == -5


@given(st.integers(2, 4), st.integers(1, 40))
def test_kummer_reduces_to_trivial_exactly_for_nth_powers(n, b):
    t = fx.kummer_triple(PQ, n, b)
    assert verify_triple(t).ok
    red = reduces_to(t, fx.mu_inclusion(Q, 1, n))
    assert (red is not None) == integer_nthroot(b, n)[1]


@given(st.integers(2, 4), st.integers(-5, 5).filter(bool))
def test_kummer_torsor_determinant_matches_sympy(n, b):
    t = fx.kummer_triple(PQ, n, b)
    g = t.gamma_matrix()
    assert t.torsor_determinant() == sym(g.rows).det()


def test_kummer_over_torus_is_not_trivial():
    t = fx.kummer_triple(ZT, 2, ZT.u)
    assert t.point == (1, 1)
    assert reduces_to(t, fx.mu_inclusion(Z, 1, 2)) is None
    s = fx.kummer_triple(ZT, 2, ZT.u ** 2)
    assert reduces_to(s, fx.mu_inclusion(Z, 1, 2)) is not None


def test_trivial_torsor_reduces_through_every_subgroup():
    t = trivial_triple(fx.mu_n(Z, 4), ZT)
    for i in fx.subgroup_catalog(t.group):
        reds = reductions(t, i)
        assert reds and all(r.morphism.verify().ok for r in reds)


def test_kummer_5_in_mu4_reduces_back_through_mu2():
    t = fx.kummer_triple(PQ, 2, 5)
    c = contract(t, fx.mu_inclusion(Q, 2, 4)).triple
    assert c.rank == 4 and verify_triple(c).ok
    assert c.torsor_determinant() == 625
    reds = reductions(c, fx.mu_inclusion(Q, 2, 4))
    # y^2 = 5 and y^2 = -5 both contract to the same mu_4-torsor (-1 is a square of a 4th root)
    assert sorted(r.triple.mult.rows[3][0] for r in reds) == [-5, 5]
    for r in reds:
        w = contraction_witness(r.morphism)
        assert w.target == c and is_triple_isomorphism(w)


def test_broken_coaction_is_detected():
    t = fx.kummer_triple(PQ, 2, 5)
    bad = Triple(t.base, t.group, t.mult, t.unit, Matrix(Q, [[1, 0, 0, 0], [0, 0, 0, 2]], 4))
    rep = verify_triple(bad)
    assert not rep.ok and not rep["coaction_multiplicative"].ok


def test_non_torsor_fails_determinant_check():
    # T = Q x Q with the trivial mu_2-action is not a torsor
    G = fx.mu_n(Q, 2)
    t = Triple.from_tables(PQ, G, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [1, 1],
                           [[1, 0, 0, 0], [0, 0, 1, 0]])
    rep = verify_triple(t)
    assert not rep["torsor_unit_determinant"].ok


def test_artin_schreier_torsors():
    F3 = AffineBase(BaseRing.GF(3))
    t = fx.artin_schreier_triple(F3, 0)
    assert verify_triple(t).ok and t.point is not None
    assert reduces_to(t, fx.cyclic_map(BaseRing.GF(3), 1, 3, 0)) is not None
    F2T = AffineBase(BaseRing.GF(2), "torus")
    s = fx.artin_schreier_triple(F2T, F2T.u + 1)
    assert verify_triple(s).ok
    assert reduces_to(s, fx.cyclic_map(BaseRing.GF(2), 1, 2, 0)) is None
    with pytest.raises(ValueError):
        fx.artin_schreier_triple(PQ, 1)


# -- contraction ---------------------------------------------------------------

def test_contract_checks_the_group():
    t = fx.kummer_triple(PQ, 2, 5)
    with pytest.raises(ValueError):
        contract(t, fx.cyclic_map(Q, 2, 4, 2))


def test_contracting_along_identity_returns_isomorphic_triple():
    for d in fx.triple_catalog():
        t = d.make()
        c = contract(t, identity_morphism(t.group))
        w = contraction_witness(c.canonical_morphism())
        assert is_triple_isomorphism(w) and w.target == c.triple


def test_identity_morphism_verifies_and_composes():
    t = fx.kummer_triple(ZT, 3, ZT.u)
    i = identity_triple_morphism(t)
    assert i.verify().ok and is_triple_isomorphism(i)


def test_bad_triple_morphism_is_rejected():
    t = fx.kummer_triple(PQ, 2, 5)
    s = fx.kummer_triple(PQ, 2, 20)
    f = TripleMorphism(s, t, Matrix.identity(Q, 2), identity_morphism(t.group))
    assert not f.verify().ok
    g = TripleMorphism(s, t, Matrix(Q, [[1, 0], [0, Fraction(1, 2)]], 2), identity_morphism(t.group))
    assert g.verify().ok and is_triple_isomorphism(g)


# -- closures and extensions ---------------------------------------------------

def test_flat_closure_of_graph_triple():
    AB, h = cases.graph_mu2()
    P = trivial_triple(AB)
    phi = TripleMorphism(trivial_triple(h.source), generic_fiber_triple(P), h.matrix, h)
    res = flat_closure_triple(phi, P)
    assert res.triple.rank == 2 and verify_triple(res.triple).ok
    assert find_isomorphism(res.triple.group, fx.constant_cyclic(Z2, 2)) is not None


def test_flat_closure_of_a_point():
    G = fx.mu_n(Z2, 2)
    P = trivial_triple(G)
    yK = trivial_triple(trivial_group(Q))
    phi = TripleMorphism(yK, generic_fiber_triple(P), Matrix(Q, [[1], [1]], 1), from_trivial(G.base_change(Q)))
    res = flat_closure_triple(phi, P)
    assert res.triple.rank == 1 and verify_triple(res.triple).ok


def test_non_dominated_closure_is_smaller():
    t = trivial_triple(fx.mu_n(Z, 4), ZT)
    assert not fx.is_dominated(t)


@pytest.mark.parametrize("example", cases.extend_examples(), ids=lambda e: e[0])
def test_extend_torsor_examples(example):
    _, yK, P, gamma = example
    r = extend_torsor(yK, P, gamma)
    assert verify_triple(r.triple).ok and r.projection.verify().ok
    assert is_triple_isomorphism(r.torsor_witness)


def test_first_extension_returns_the_torsor():
    _, yK, P, gamma = cases.extend_examples()[0]
    assert extend_torsor(yK, P, gamma).triple == P


def test_twisted_extension_has_mu2_structure_group():
    _, yK, P, gamma = cases.extend_examples()[2]
    r = extend_torsor(yK, P, gamma)
    assert find_isomorphism(r.group, fx.mu_n(Z2, 2)) is not None
    assert find_isomorphism(r.group, fx.constant_cyclic(Z2, 2)) is None


def test_extend_rejects_unrelated_torsor():
    _, yK, P, gamma = cases.extend_examples()[1]
    other = fx.kummer_triple(PQ, 2, 5)
    with pytest.raises(WitnessFailure):
        extend_torsor(other, P, gamma)


def test_contracted_product_matches_contract():
    t = fx.kummer_triple(PQ, 2, 5)
    f = fx.mu_inclusion(Q, 2, 6)
    assert contracted_product(t, f) == contract(t, f).triple
