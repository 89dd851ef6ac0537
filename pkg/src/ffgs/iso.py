"""Isomorphism search for small Hopf algebras, with explicit witness matrices.

The search works after base change to the fraction field K.  When both
algebras split over K (as many K-points as the rank) every Hopf isomorphism
comes from a group isomorphism of the point groups, so the finitely many
K-isomorphisms can be listed and filtered for integrality.  When the algebras
are cocommutative and their duals split, the same is done on the duals.
Otherwise the question is reported as undecided.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .errors import IsoUndecided
from .hopf import HopfAlgebra, HopfMorphism, StructureTensors, cartier_dual
from .linalg import Matrix, inverse, is_unimodular, kernel, lattice_coords, vecmat


# ---------------------------------------------------------------------------
# K-points
# ---------------------------------------------------------------------------

def _field_roots(K, M: Matrix):
    """Eigenvalues of a square matrix that lie in the field K, without multiplicity."""
    n = M.nrows
    if K.kind == "prime_field":
        out = []
        for v in range(K.p):
            lam = K.coerce(v)
            shifted = M - Matrix.identity(K, n).scale(lam)
            if kernel(shifted).rank:
                out.append(lam)
        return out
    sm = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M.rows])
    lam = sympy.Symbol("lam")
    poly = sympy.Poly(sm.charpoly(lam).as_expr(), lam, domain="QQ")
    roots = poly.ground_roots()
    return sorted(Fraction(int(sympy.fraction(r)[0]), int(sympy.fraction(r)[1])) for r in roots)


def _restrict(K, op: Matrix, V: Matrix):
    """Matrix of a column-acting operator restricted to the invariant column span of V.

    V is n x d with independent columns; returns d x d R with op V = V R.
    """
    OV = op @ V
    d = V.ncols
    basis = V.T
    cols = []
    for j in range(d):
        c = lattice_coords(basis, tuple(r[j] for r in OV.rows))
        if c is None:
            raise ValueError("subspace is not invariant")
        cols.append(c)
    return Matrix(K, [tuple(cols[j][i] for j in range(d)) for i in range(d)], d, coerce=False)


def points(A: StructureTensors):
    """All K-valued points (algebra characters) of A, as tuples chi(e_i), in canonical order."""
    K = A.base.fraction_field()
    n = A.rank
    # column-acting multiplication operators: (L_i)[k][j] = coefficient of e_k in e_i e_j
    ops = []
    for i in range(n):
        rows = [[K.zero] * n for _ in range(n)]
        for j in range(n):
            prod = A.mul(A.e(i), A.e(j))
            for k, c in enumerate(prod):
                rows[k][j] = K.coerce(c)
        ops.append(Matrix(K, rows, n, coerce=False))
    leaves = [(Matrix.identity(K, n), ())]
    for op in ops:
        nxt = []
        for V, lams in leaves:
            R = _restrict(K, op, V)
            d = R.nrows
            for lam in _field_roots(K, R):
                E = kernel((R - Matrix.identity(K, d).scale(lam)).T)   # column eigenvectors
                if E.rank == 0:
                    continue
                Vn = V @ Matrix(K, E.basis.rows, d, coerce=False).T
                nxt.append((Vn, lams + (lam,)))
        leaves = nxt
    out = []
    unit = tuple(K.coerce(x) for x in A.unit)
    for _, lams in leaves:
        if sum((u * l for u, l in zip(unit, lams)), K.zero) != K.one:
            continue
        if all(_char_value(A, K, lams, A.mul(A.e(i), A.e(j))) == lams[i] * lams[j]
               for i in range(n) for j in range(n)):
            out.append(tuple(lams))
    return sorted(set(out), key=lambda t: tuple(_sort_key(x) for x in t))


def _sort_key(x):
    return (x.v,) if hasattr(x, "v") else (x,)


def _char_value(A, K, chi, v):
    return sum((K.coerce(a) * c for a, c in zip(v, chi) if a), K.zero)


def grouplikes(A: StructureTensors):
    """Grouplike elements of A over K (the points of the Cartier dual)."""
    return points(cartier_dual(A))


def convolve(A: StructureTensors, chi, psi):
    """Group law on points: (chi * psi)(a) = (chi (x) psi)(Delta a)."""
    n = A.rank
    K = A.base.fraction_field()
    out = []
    for k in range(n):
        d = A.delta(A.e(k))
        s = K.zero
        for ij, c in enumerate(d):
            if c:
                i, j = divmod(ij, n)
                s = s + K.coerce(c) * chi[i] * psi[j]
        out.append(s)
    return tuple(out)


def point_group(A: StructureTensors):
    """(points, multiplication table as index pairs, identity index)."""
    pts = points(A)
    K = A.base.fraction_field()
    index = {p: i for i, p in enumerate(pts)}
    table = [[index[convolve(A, p, q)] for q in pts] for p in pts]
    ident = index[tuple(K.coerce(x) for x in A.counit)]
    return pts, table, ident


def _group_isos(tb, eb, ta, ea):
    """All bijections tau with tau(x*y) = tau(x)*tau(y) from group B to group A (tables)."""
    n = len(tb)
    if len(ta) != n:
        return
    def order(t, e, x):
        k, y = 1, x
        while y != e:
            y = t[y][x]
            k += 1
        return k
    ob = [order(tb, eb, x) for x in range(n)]
    oa = [order(ta, ea, x) for x in range(n)]
    if sorted(ob) != sorted(oa):
        return
    # greedy generating set of B
    gens, span = [], {eb}
    def close(s):
        s = set(s)
        changed = True
        while changed:
            changed = False
            for x in list(s):
                for y in list(s):
                    z = tb[x][y]
                    if z not in s:
                        s.add(z)
                        changed = True
        return s
    for x in sorted(range(n), key=lambda x: -ob[x]):
        if x not in span:
            gens.append(x)
            span = close(span | {x})
    def extend(images):
        tau = {eb: ea}
        frontier = [eb]
        while frontier:
            nf = []
            for x in frontier:
                for g, h in zip(gens, images):
                    y, z = tb[x][g], ta[tau[x]][h]
                    if y in tau:
                        if tau[y] != z:
                            return None
                    else:
                        tau[y] = z
                        nf.append(y)
            frontier = nf
        if len(set(tau.values())) != n:
            return None
        for x in range(n):
            for y in range(n):
                if tau[tb[x][y]] != ta[tau[x]][tau[y]]:
                    return None
        return tau
    def rec(k, images):
        if k == len(gens):
            tau = extend(images)
            if tau is not None:
                yield tau
            return
        for h in range(n):
            if oa[h] == ob[gens[k]]:
                yield from rec(k + 1, images + [h])
    yield from rec(0, [])


def _split_isos(A, B):
    """All K-Hopf isomorphisms A_K -> B_K when both split; None when they do not split."""
    K = A.base.fraction_field()
    n = A.rank
    pa, ta, ea = point_group(A)
    pb, tb, eb = point_group(B)
    if len(pa) != n or len(pb) != n:
        return None
    CB = Matrix(K, [tuple(p[j] for p in pb) for j in range(n)], n, coerce=False)
    CBi = inverse(CB)
    out = []
    for tau in _group_isos(tb, eb, ta, ea):
        CA = Matrix(K, [tuple(pa[tau[q]][i] for q in range(n)) for i in range(n)], n, coerce=False)
        out.append(CA @ CBi)
    return out


def invariants(A: StructureTensors):
    """Cheap K-isomorphism invariants."""
    return {
        "rank": A.rank,
        "commutative": A.is_commutative(),
        "cocommutative": A.is_cocommutative(),
        "points": len(points(A)),
        "grouplikes": len(grouplikes(A)) if A.is_cocommutative() else None,
    }


def hopf_isomorphisms(A: StructureTensors, B: StructureTensors, max_rank: int = 8):
    """Every Hopf isomorphism A -> B defined over the base ring, as matrices (row i = image of e_i).

    Raises IsoUndecided when neither splitting strategy applies.
    """
    if A.base != B.base:
        raise ValueError("algebras over different bases")
    R = A.base
    if A.rank != B.rank:
        return []
    if A.is_commutative() != B.is_commutative() or A.is_cocommutative() != B.is_cocommutative():
        return []
    if A.rank > max_rank:
        if A == B:
            return [Matrix.identity(R, A.rank)]
        raise IsoUndecided(f"rank {A.rank} exceeds the search limit {max_rank}")
    cands = None
    if A.is_commutative():
        cands = _split_isos(A, B)
    if cands is None and A.is_cocommutative():
        Ad, Bd = cartier_dual(A), cartier_dual(B)
        dual = _split_isos(Ad, Bd)
        if dual is not None:
            # an iso M of duals is the transpose of the inverse iso B -> A
            cands = [inverse(M.T) for M in dual]
    if cands is None:
        if len(points(A)) != len(points(B)):
            return []
        if A.is_cocommutative() and len(grouplikes(A)) != len(grouplikes(B)):
            return []
        if A == B:
            return [Matrix.identity(R, A.rank)]
        raise IsoUndecided("algebras do not split over the fraction field")
    out = []
    for M in cands:
        M = Matrix(R, M.rows, M.ncols, coerce=False)
        if R.is_field or is_unimodular(M):
            out.append(M)
    return out


def find_isomorphism(A: StructureTensors, B: StructureTensors, max_rank: int = 8):
    """A Hopf isomorphism A -> B over the base ring, or None if there is none.

    The result is the identity whenever A and B are literally equal.
    """
    if A == B:
        return Matrix.identity(A.base, A.rank)
    isos = hopf_isomorphisms(A, B, max_rank)
    return isos[0] if isos else None


def is_hopf_isomorphism(A: StructureTensors, B: StructureTensors, M: Matrix) -> bool:
    """Replayable check that M (row i = image of e_i of A in B) is a Hopf isomorphism A -> B."""
    if M.shape != (A.rank, B.rank) or not is_unimodular(M):
        return False
    if not isinstance(A, HopfAlgebra) or not isinstance(B, HopfAlgebra):
        return _raw_morphism_ok(A, B, M)
    return HopfMorphism(B, A, M).verify().ok


def _raw_morphism_ok(A, B, M):
    n = A.rank
    E = [A.e(i) for i in range(n)]
    img = [vecmat(e, M) for e in E]
    if vecmat(A.unit, M) != B.unit:
        return False
    for i in range(n):
        if B.eps(img[i]) != A.counit[i]:
            return False
        if B.delta(img[i]) != vecmat(A.delta(E[i]), M.kron(M)):
            return False
        for j in range(n):
            if vecmat(A.mul(E[i], E[j]), M) != B.mul(img[i], img[j]):
                return False
    return True


def isomorphic(A, B, max_rank: int = 8) -> bool:
    return find_isomorphism(A, B, max_rank) is not None

