"""Flat closures, quotient models and prolongations of group schemes over R inside K.

Every result carries explicit witness matrices so that its claims can be
replayed: nothing is asserted "up to isomorphism" without a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ModelMismatch, NotNormal
from .hopf import (HopfAlgebra, HopfMorphism, SubgroupData, cartier_dual, hopf_ideal_failures,
                   is_normal, is_schematically_dominant, kernel_ideal, quotient_algebra,
                   quotient_by_normal)
from .iso import is_hopf_isomorphism
from .linalg import (Matrix, Submodule, clear_denominators, inverse, kernel, lattice_coords,
                     quotient_basis, saturate, vecmat)


# ---------------------------------------------------------------------------
# Generic subgroups and their closures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenericSubgroup:
    """A closed subgroup of the generic fiber of a flat group scheme G_j over R.

    ``ideal`` is its Hopf ideal in A_K; ``subgroup`` presents it as the
    quotient algebra A_K/I_K with the surjection from A_K.
    """

    ambient: HopfAlgebra
    ideal: Submodule
    subgroup: SubgroupData

    @classmethod
    def from_ideal(cls, ambient: HopfAlgebra, ideal_rows) -> "GenericSubgroup":
        K = ambient.base.fraction_field()
        AK = ambient.base_change(K)
        I = Submodule.span(K, ambient.rank, ideal_rows)
        return cls(ambient, I, quotient_algebra(AK, I, name="generic"))

    @classmethod
    def from_immersion(cls, ambient: HopfAlgebra, f: HopfMorphism) -> "GenericSubgroup":
        """From a closed immersion f: H -> (G_j)_K over K (ideal = kernel of the comorphism)."""
        K = ambient.base.fraction_field()
        I = kernel(f.matrix.change_ring(K))
        return cls.from_ideal(ambient, I.basis.rows)


@dataclass(frozen=True)
class ModelResult:
    """Flat model H of a generic subgroup, with its immersion into G_j.

    ``witness`` is the Hopf isomorphism H_K -> G_K (row i = image of the i-th
    basis element of H in the presentation of G_K).
    """

    model: HopfAlgebra
    immersion: HopfMorphism
    witness: Matrix
    ideal: Submodule
    subgroup: SubgroupData


def closure_ideal(ambient: HopfAlgebra, ideal_K: Submodule) -> Submodule:
    """I_K intersected with A: clear denominators, then saturate."""
    R = ambient.base
    rows = clear_denominators(R, ideal_K.basis.rows)
    return saturate(Submodule.span(R, ambient.rank, rows))


def flat_closure_subgroup(g: GenericSubgroup) -> ModelResult:
    """Scheme-theoretic closure of a generic subgroup inside G_j."""
    A = g.ambient
    I = closure_ideal(A, g.ideal)
    sub = quotient_algebra(A, I, name="closure")      # raises NotHopfIdeal on bad input
    # basis of the closure = images of the complement rows; evaluate them on G_K
    q = g.subgroup.inclusion.matrix
    K = A.base.fraction_field()
    witness = Matrix(K, [vecmat(w, q) for w in sub.complement.rows], q.ncols, coerce=False)
    return ModelResult(sub.algebra, sub.inclusion, witness, I, sub)


def is_flat_closed_subgroup(ambient: HopfAlgebra, ideal: Submodule) -> bool:
    """Saturated Hopf ideal of A (so A/I is a flat closed subgroup)."""
    return ideal.is_saturated() and ideal.is_integral() and not hopf_ideal_failures(ambient, ideal)


# ---------------------------------------------------------------------------
# Quotient models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientModelResult:
    """H with v: G -> H faithfully flat, and witness H' -> H_K (row i = image of e_i of H')."""

    model: HopfAlgebra
    projection: HopfMorphism
    witness: Matrix
    closure: ModelResult


def quotient_model(G: HopfAlgebra, u: HopfMorphism) -> QuotientModelResult:
    """Model over R of the quotient u: G_K -> H' (u dominant over K)."""
    K = G.base.fraction_field()
    if u.source.rank != G.rank or u.source.base != K:
        raise ValueError("u must start at the generic fiber of G")
    if not is_schematically_dominant(u):
        raise ValueError("u is not dominant")
    N = GenericSubgroup.from_ideal(G, kernel_ideal(u).basis.rows)
    closure = flat_closure_subgroup(N)
    if not is_normal(closure.subgroup):
        raise NotNormal("closure of ker u is not normal")
    H, v = quotient_by_normal(G, closure.subgroup, name="quotient")
    rows = []
    for r in u.matrix.rows:
        c = lattice_coords(v.matrix, r)
        if c is None:
            raise ModelMismatch("u does not factor through the quotient")
        rows.append(c)
    W = Matrix(K, rows, H.rank, coerce=False)
    return QuotientModelResult(H, v, W, closure)


# ---------------------------------------------------------------------------
# Prolongation of closed immersions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProlongResult:
    """Output of :func:`prolong_overgroup`.

    ``model`` is H, ``morphism`` is v: G -> H over R, ``witness`` maps O(H')
    to O(H)_K (row i = image of e_i of H'), ``coalgebra`` is the flat quotient
    C of A^dual (x) B^dual (with H = Spec of its dual), and ``phi_bar`` is the
    isomorphism C_K -> B^dual_K used to transport structure.
    """

    model: HopfAlgebra
    morphism: HopfMorphism
    witness: Matrix
    coalgebra: object
    phi_bar: Matrix
    cartesian: bool


def _dual_basis_structure(C_rows: Matrix, Bd, K):
    """Structure tensors on the lattice spanned by rows of C_rows inside Bd (over K)."""
    Ci = inverse(C_rows)
    rows = C_rows.rows
    mult = [[vecmat(Bd.mul(a, b), Ci) for b in rows] for a in rows]
    unit = vecmat(Bd.unit, Ci)
    CC = Ci.kron(Ci)
    comult = [vecmat(Bd.delta(a), CC) for a in rows]
    counit = [Bd.eps(a) for a in rows]
    anti = [vecmat(Bd.S(a), Ci) for a in rows]
    return mult, unit, comult, counit, anti


def prolong_overgroup(G: HopfAlgebra, u: HopfMorphism, L: HopfAlgebra, model_iso: Matrix) -> ProlongResult:
    """Extend a closed immersion u: G_K -> H' to a morphism G -> H of flat models.

    ``model_iso`` is a Hopf isomorphism O(H') -> O(L)_K (row i = image of e_i).
    """
    R = G.base
    K = R.fraction_field()
    Hp = u.target
    if Hp.base != K or u.source.rank != G.rank:
        raise ValueError("u must be a K-morphism out of the generic fiber of G")
    LK = L.base_change(K)
    if not is_hopf_isomorphism(Hp, LK, model_iso):
        raise ModelMismatch("supplied iso is not a Hopf isomorphism onto L_K")
    nA, nB = G.rank, L.rank
    u_hat = inverse(model_iso) @ u.matrix.change_ring(K)          # B_K -> A_K
    Bd = cartier_dual(L)
    BdK = Bd.base_change(K)
    u_dual = u_hat.T                                            # A^dual -> B^dual
    # rho: e^i -> e^i (x) 1, the unit of B^dual being the counit of B
    rho = Matrix(R, [tuple((R.one if k == i else R.zero) * c for k in range(nA) for c in L.counit)
                     for i in range(nA)], nA * nB)
    phi_rows = []
    for i in range(nA):
        x = u_dual.rows[i]
        for j in range(nB):
            phi_rows.append(BdK.mul(x, BdK.e(j)))
    phi = Matrix(K, phi_rows, nB, coerce=False)
    if rho.change_ring(K) @ phi != u_dual:
        raise ModelMismatch("phi o rho differs from the dual of u")
    ker = kernel(Matrix(R, phi.rows, nB, coerce=False))     # saturated in the integral lattice
    W, r = quotient_basis(ker)
    if nA * nB - r != nB:
        raise ModelMismatch("flat quotient has the wrong rank")
    P = inverse(W).select_cols(range(r, nA * nB))                # projection onto C
    comp = W.select_rows(range(r, nA * nB))
    phi_bar = comp.change_ring(K) @ phi                          # C_K -> B^dual_K
    mult, unit, comult, counit, anti = _dual_basis_structure(phi_bar, BdK, K)
    cls = type(Bd)
    C = cls.from_tables(R, mult, unit, comult, counit, anti, name="C")
    if not C.is_integral():
        raise ModelMismatch("flat quotient does not inherit an integral structure")
    H = cartier_dual(C)
    H.name = "prolongation"
    v_sharp = (rho @ Matrix(R, P.rows, P.ncols, coerce=False)).T  # O(H) -> A
    v = HopfMorphism(G, H, v_sharp)
    # B_K -> O(H)_K is the transpose of phi_bar; compose with model_iso for H'
    witness = model_iso @ phi_bar.T
    cartesian = witness @ v_sharp.change_ring(K) == u.matrix.change_ring(K)
    return ProlongResult(H, v, witness, C, phi_bar, cartesian)


def prolongation_oracle(u_hat: Matrix, L: HopfAlgebra, nA: int) -> Submodule:
    """Independent description of O(H) inside B_K: {b : (u_hat (x) id) Delta(b) integral}.

    Returns the lattice as an R-submodule of K^rank(L) (rows are elements of B_K).
    """
    R = L.base
    K = R.fraction_field()
    nB = L.rank
    psi_rows = []
    for j in range(nB):
        d = L.delta(L.e(j))
        out = [K.zero] * (nA * nB)
        for kl, c in enumerate(d):
            if not c:
                continue
            k, l_ = divmod(kl, nB)
            for a, x in enumerate(u_hat.rows[k]):
                if x:
                    out[a * nB + l_] += c * x
        psi_rows.append(tuple(out))
    Psi = Matrix(K, psi_rows, nA * nB, coerce=False)
    lat = saturate(Submodule.span(R, nA * nB, clear_denominators(R, Psi.rows)))
    pre = []
    for s in lat.basis.rows:
        c = lattice_coords(Psi, s)
        if c is None:
            raise ValueError("oracle lattice outside the image")
        pre.append(c)
    return Submodule.span(R, nB, pre)


def prolongation_lattice(res: ProlongResult, model_iso: Matrix) -> Submodule:
    """O(H) of a prolongation, written inside B_K (the R-span of the H basis)."""
    R = res.model.base
    to_H = res.phi_bar.T        # B_K -> O(H)_K
    back = inverse(to_H)
    return Submodule.span(R, back.ncols, back.rows)


def closure_of_image(v: HopfMorphism) -> ModelResult:
    """Flat closure inside H of the generic image of v: G -> H."""
    K = v.base.fraction_field()
    I = kernel(v.matrix.change_ring(K))
    return flat_closure_subgroup(GenericSubgroup.from_ideal(v.target, I.basis.rows))
