import pytest
from hypothesis import given, strategies as st
from sympy import totient

from ffgs import fixtures as fx
from ffgs.errors import IsoUndecided
from ffgs.hopf import cartier_dual
from ffgs.iso import find_isomorphism, grouplikes, hopf_isomorphisms, is_hopf_isomorphism, isomorphic, points
from ffgs.linalg import Matrix
from ffgs.rings import BaseRing

Q, Z, Z2, Z3 = BaseRing.QQ(), BaseRing.ZZ(), BaseRing.localized(2), BaseRing.localized(3)


@pytest.mark.parametrize("n", range(1, 9))
def test_automorphisms_of_cyclic_groups_count_units(n):
    isos = hopf_isomorphisms(fx.constant_cyclic(Z, n), fx.constant_cyclic(Z, n))
    assert len(isos) == totient(n)
    assert len(set(isos)) == len(isos)


@pytest.mark.parametrize("n", range(1, 7))
def test_automorphisms_of_mu_n_over_Q(n):
    A = fx.mu_n(Q, n)
    isos = hopf_isomorphisms(A, A)
    assert len(isos) == totient(n)
    assert all(is_hopf_isomorphism(A, A, M) for M in isos)


def test_points_of_mu_n_over_Q():
    assert len(points(fx.mu_n(Q, 4))) == 2
    assert len(points(fx.constant_cyclic(Q, 4))) == 4
    assert len(grouplikes(fx.mu_n(Q, 4))) == 4


def test_mu2_against_z2_over_various_bases():
    assert isomorphic(fx.mu_n(Q, 2), fx.constant_cyclic(Q, 2))
    assert isomorphic(fx.mu_n(Z3, 2), fx.constant_cyclic(Z3, 2))
    assert not isomorphic(fx.mu_n(Z2, 2), fx.constant_cyclic(Z2, 2))
    assert not isomorphic(fx.mu_n(Z, 2), fx.constant_cyclic(Z, 2))


@given(st.integers(3, 7))
def test_mu_n_and_z_n_differ_over_Q_for_n_at_least_3(n):
    assert find_isomorphism(fx.mu_n(Q, n), fx.constant_cyclic(Q, n)) is None
    w = find_isomorphism(cartier_dual(fx.constant_cyclic(Q, n)), fx.mu_n(Q, n))
    assert w is not None


def test_rank_mismatch_means_no_iso():
    assert hopf_isomorphisms(fx.mu_n(Z, 2), fx.mu_n(Z, 3)) == []


def test_witness_check_rejects_bad_matrices():
    A = fx.mu_n(Z, 2)
    assert is_hopf_isomorphism(A, A, Matrix.identity(Z, 2))
    assert not is_hopf_isomorphism(A, A, Matrix(Z, [[1, 0], [0, 2]], 2))
    assert not is_hopf_isomorphism(A, A, Matrix(Z, [[1, 0], [0, 0]], 2))
    assert not is_hopf_isomorphism(A, A, Matrix(Z, [[1, 0]], 2))


def test_undecided_for_infinitesimal_groups():
    F3 = BaseRing.GF(3)
    A = fx.alpha_p(F3)
    assert find_isomorphism(A, A) == Matrix.identity(F3, 3)
    with pytest.raises(IsoUndecided):
        find_isomorphism(A, cartier_dual(A))


def test_different_bases_are_rejected():
    with pytest.raises(ValueError):
        hopf_isomorphisms(fx.mu_n(Z, 2), fx.mu_n(Q, 2))
