"""Finite free commutative Hopf algebras by structure constants, and their morphisms.

A group scheme G = Spec A is stored through the algebra A.  Basis elements are
e_0..e_(n-1); an element is a length-n tuple of coordinates and an element of
A (x) A is a length n*n tuple indexed by i*n + j for e_i (x) e_j.

Morphisms are kept in the algebra direction.  ``HopfMorphism(source, target, h)``
denotes a group morphism source -> target whose comorphism h maps
O(target) -> O(source); h has shape rank(target) x rank(source).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import ImageNotHopf, NotFlat, NotHopfIdeal, RankMismatch
from .linalg import (Matrix, Submodule, elementary_divisors, image, integral, inverse,
                     kernel, quotient_basis, rank, vecmat)
from .rings import BaseRing


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    witness: tuple | None = None   # first failing basis index tuple

    def to_dict(self):
        d = {"axiom": self.name, "ok": self.ok}
        if self.witness is not None:
            d["first_failure"] = list(self.witness)
        return d


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, name, failure=None):
        self.checks.append(Check(name, failure is None, failure))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


def _first(it):
    for x in it:
        return x
    return None


# ---------------------------------------------------------------------------
# Structure tensors
# ---------------------------------------------------------------------------

def basis_vector(ring, n, i):
    z, o = ring.zero, ring.one
    return tuple(o if k == i else z for k in range(n))


def tensor(a, b):
    return tuple(x * y for x in a for y in b)


class StructureTensors:
    """Multiplication, unit, comultiplication, counit and antipode of a finite free algebra.

    mult is n^2 x n (row i*n+j is e_i e_j), comult is n x n^2 (row i is
    Delta(e_i)), antipode is n x n, unit and counit are length-n tuples.
    """

    def __init__(self, base: BaseRing, mult: Matrix, unit, comult: Matrix, counit, antipode: Matrix,
                 name: str | None = None):
        n = len(unit)
        if mult.shape != (n * n, n) or comult.shape != (n, n * n) or antipode.shape != (n, n) \
                or len(counit) != n:
            raise ValueError("inconsistent structure tensor shapes")
        self.base = base
        self.mult = mult
        self.unit = tuple(base.coerce(x) for x in unit)
        self.comult = comult
        self.counit = tuple(base.coerce(x) for x in counit)
        self.antipode = antipode
        self.name = name

    @classmethod
    def from_tables(cls, base, mult, unit, comult, counit, antipode, name=None):
        """Build from nested lists: mult[i][j] is the coordinate vector of e_i e_j."""
        n = len(unit)
        mrows = [mult[i][j] for i in range(n) for j in range(n)]
        return cls(base, Matrix(base, mrows, n), unit, Matrix(base, comult, n * n), counit,
                   Matrix(base, antipode, n), name)

    # -- basic data ---------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.unit)

    @property
    def ring(self):
        return self.base

    def e(self, i):
        return basis_vector(self.base, self.rank, i)

    @property
    def one(self):
        return self.unit

    @property
    def zero_vector(self):
        return (self.base.zero,) * self.rank

    def _key(self):
        return (self.base, self.mult, self.unit, self.comult, self.counit, self.antipode)

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        label = self.name or "algebra"
        return f"{type(self).__name__}({label}, rank {self.rank} over {self.base})"

    @cached_property
    def _mtab(self):
        n = self.rank
        nz = self.mult._nonzero()
        return [[nz[i * n + j] for j in range(n)] for i in range(n)]

    # -- arithmetic on elements -----------------------------------------
    def mul(self, a, b):
        n = self.rank
        out = [self.base.zero] * n
        tab = self._mtab
        for i, x in enumerate(a):
            if not x:
                continue
            row = tab[i]
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k, c in row[j]:
                    out[k] = out[k] + xy * c
        return tuple(out)

    def mul2(self, a, b):
        """Product in A (x) A."""
        n = self.rank
        out = [self.base.zero] * (n * n)
        tab = self._mtab
        nza = [(i, x) for i, x in enumerate(a) if x]
        nzb = [(i, x) for i, x in enumerate(b) if x]
        for ij, x in nza:
            i1, j1 = divmod(ij, n)
            for kl, y in nzb:
                i2, j2 = divmod(kl, n)
                xy = x * y
                for p, c in tab[i1][i2]:
                    cp = xy * c
                    for q, d in tab[j1][j2]:
                        out[p * n + q] = out[p * n + q] + cp * d
        return tuple(out)

    def delta(self, a):
        return vecmat(a, self.comult)

    def eps(self, a):
        z = self.base.zero
        for x, y in zip(a, self.counit):
            if x and y:
                z = z + x * y
        return z

    def S(self, a):
        return vecmat(a, self.antipode)

    def power(self, a, k):
        out = self.unit
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def apply_left(self, x, mat):
        """(f (x) id) applied to x in A (x) A, f given by an n x m matrix."""
        n = self.rank
        m = mat.ncols
        out = [self.base.zero] * (m * n)
        nz = mat._nonzero()
        for ij, c in enumerate(x):
            if not c:
                continue
            i, j = divmod(ij, n)
            for k, d in nz[i]:
                out[k * n + j] = out[k * n + j] + c * d
        return tuple(out)

    def apply_right(self, x, mat):
        """(id (x) f) applied to x in A (x) A."""
        n = self.rank
        m = mat.ncols
        out = [self.base.zero] * (n * m)
        nz = mat._nonzero()
        for ij, c in enumerate(x):
            if not c:
                continue
            i, j = divmod(ij, n)
            for k, d in nz[j]:
                out[i * m + k] = out[i * m + k] + c * d
        return tuple(out)

    def mult_pairs(self, x, left=None, right=None):
        """m((f (x) g)(x)) for x in A (x) A, with optional n x n maps f, g."""
        n = self.rank
        if left is not None:
            x = self.apply_left(x, left)
        if right is not None:
            x = self.apply_right(x, right)
        out = [self.base.zero] * n
        tab = self._mtab
        for ij, c in enumerate(x):
            if c:
                i, j = divmod(ij, n)
                for k, d in tab[i][j]:
                    out[k] = out[k] + c * d
        return tuple(out)

    def is_commutative(self) -> bool:
        n = self.rank
        return all(self.mult.rows[i * n + j] == self.mult.rows[j * n + i]
                   for i in range(n) for j in range(i + 1, n))

    def is_cocommutative(self) -> bool:
        n = self.rank
        for r in self.comult.rows:
            if any(r[i * n + j] != r[j * n + i] for i in range(n) for j in range(i + 1, n)):
                return False
        return True

    def base_change(self, ring=None):
        """Reinterpret the tensors over the fraction field (or ``ring``)."""
        K = ring or self.base.fraction_field()
        if K == self.base:
            return self
        return type(self)(K, self.mult.change_ring(K), self.unit, self.comult.change_ring(K),
                          self.counit, self.antipode.change_ring(K), self.name)

    def is_integral(self) -> bool:
        b = self.base
        return (integral(b, self.mult) and integral(b, self.comult) and integral(b, self.antipode)
                and all(b.contains(x) for x in self.unit + self.counit))

    # -- axioms ---------------------------------------------------------
    def verify(self) -> Report:
        """Check every axiom on basis elements, recording the first failing index tuple."""
        rep = Report()
        n, R = self.rank, self.base
        E = [self.e(i) for i in range(n)]
        idx = range(n)
        rep.add("integral_structure", None if self.is_integral() else ())
        rep.add("associativity", _first(
            (i, j, k) for i in idx for j in idx for k in idx
            if self.mul(self.mul(E[i], E[j]), E[k]) != self.mul(E[i], self.mul(E[j], E[k]))))
        rep.add("commutativity", _first(
            (i, j) for i in idx for j in idx if j > i
            and self.mult.rows[i * n + j] != self.mult.rows[j * n + i]))
        rep.add("unit", _first(
            (i,) for i in idx if self.mul(self.unit, E[i]) != E[i] or self.mul(E[i], self.unit) != E[i]))
        D = [self.delta(E[i]) for i in idx]
        rep.add("coassociativity", _first(
            (i,) for i in idx if self._coassoc_left(D[i]) != self._coassoc_right(D[i])))
        rep.add("counit", _first(
            (i,) for i in idx
            if self._flatten_left_counit(D[i]) != E[i] or self._flatten_right_counit(D[i]) != E[i]))
        rep.add("comult_multiplicative", _first(
            (i, j) for i in idx for j in idx if j >= i
            and self.delta(self.mul(E[i], E[j])) != self.mul2(D[i], D[j])))
        rep.add("comult_unital", None if self.delta(self.unit) == tensor(self.unit, self.unit) else ())
        rep.add("counit_multiplicative", _first(
            (i, j) for i in idx for j in idx if j >= i
            and self.eps(self.mul(E[i], E[j])) != self.counit[i] * self.counit[j]))
        rep.add("counit_unital", None if self.eps(self.unit) == R.one else ())
        S = self.antipode
        rep.add("antipode", _first(
            (i,) for i in idx
            if self.mult_pairs(D[i], left=S) != tuple(self.counit[i] * u for u in self.unit)
            or self.mult_pairs(D[i], right=S) != tuple(self.counit[i] * u for u in self.unit)))
        return rep

    def _coassoc_left(self, d):
        # (Delta (x) id) d, flattened over n^3
        n = self.rank
        out = [self.base.zero] * (n ** 3)
        nz = self.comult._nonzero()
        for ij, c in enumerate(d):
            if c:
                i, j = divmod(ij, n)
                for pq, v in nz[i]:
                    k = pq * n + j
                    out[k] = out[k] + c * v
        return tuple(out)

    def _coassoc_right(self, d):
        n = self.rank
        out = [self.base.zero] * (n ** 3)
        nz = self.comult._nonzero()
        for ij, c in enumerate(d):
            if c:
                i, j = divmod(ij, n)
                for pq, v in nz[j]:
                    k = i * n * n + pq
                    out[k] = out[k] + c * v
        return tuple(out)

    def _flatten_left_counit(self, d):
        n = self.rank
        out = [self.base.zero] * n
        for ij, c in enumerate(d):
            if c:
                i, j = divmod(ij, n)
                if self.counit[i]:
                    out[j] = out[j] + c * self.counit[i]
        return tuple(out)

    def _flatten_right_counit(self, d):
        n = self.rank
        out = [self.base.zero] * n
        for ij, c in enumerate(d):
            if c:
                i, j = divmod(ij, n)
                if self.counit[j]:
                    out[i] = out[i] + c * self.counit[j]
        return tuple(out)


class HopfAlgebra(StructureTensors):
    """Commutative Hopf algebra, free of finite rank over its base: a finite flat group scheme."""


class BialgebraOnly(StructureTensors):
    """Dual of a non-cocommutative Hopf algebra: the tensors are kept but the object
    is not a commutative algebra, hence not a group scheme here."""


def verify_hopf(A: StructureTensors) -> Report:
    return A.verify()


def base_change(A: HopfAlgebra, ring=None) -> HopfAlgebra:
    return A.base_change(ring)


def hopf_rank(A: StructureTensors) -> int:
    return A.rank


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HopfMorphism:
    """Group morphism ``source -> target`` stored as its comorphism.

    ``matrix`` has row i equal to h(e_i), where e_i runs over the basis of
    O(target) and h(e_i) is written in the basis of O(source).
    """

    source: HopfAlgebra
    target: HopfAlgebra
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise ValueError(f"morphism matrix has shape {self.matrix.shape}, expected "
                             f"{(self.target.rank, self.source.rank)}")

    @property
    def base(self):
        return self.source.base

    def __call__(self, a):
        return vecmat(a, self.matrix)

    def verify(self) -> Report:
        rep = Report()
        A, C, h = self.target, self.source, self.matrix
        n = A.rank
        E = [A.e(i) for i in range(n)]
        H = [self(E[i]) for i in range(n)]
        rep.add("same_base", None if A.base == C.base else ())
        rep.add("integral", None if integral(C.base, h) else ())
        rep.add("unital", None if self(A.unit) == C.unit else ())
        rep.add("multiplicative", _first(
            (i, j) for i in range(n) for j in range(i, n)
            if self(A.mul(E[i], E[j])) != C.mul(H[i], H[j])))
        hh = h.kron(h)
        rep.add("comultiplicative", _first(
            (i,) for i in range(n) if C.delta(H[i]) != vecmat(A.delta(E[i]), hh)))
        rep.add("counital", _first((i,) for i in range(n) if C.eps(H[i]) != A.counit[i]))
        rep.add("antipode", _first((i,) for i in range(n) if C.S(H[i]) != self(A.S(E[i]))))
        return rep

    def base_change(self, ring=None):
        K = ring or self.base.fraction_field()
        return HopfMorphism(self.source.base_change(K), self.target.base_change(K),
                            self.matrix.change_ring(K))


def identity_morphism(A: HopfAlgebra) -> HopfMorphism:
    return HopfMorphism(A, A, Matrix.identity(A.base, A.rank))


def compose(g: HopfMorphism, f: HopfMorphism) -> HopfMorphism:
    """g after f in the group direction (f: G'' -> G', g: G' -> G)."""
    if f.target.rank != g.source.rank:
        raise ValueError("morphisms are not composable")
    return HopfMorphism(f.source, g.target, g.matrix @ f.matrix)


def verify_morphism(f: HopfMorphism) -> Report:
    return f.verify()


def is_schematically_dominant(f: HopfMorphism) -> bool:
    """Comorphism injective; sources are free so this is decided over K."""
    return rank(f.matrix) == f.matrix.nrows


def is_closed_immersion(f: HopfMorphism) -> bool:
    """Comorphism surjective over the base ring."""
    s = image(f.matrix)
    return s == Submodule.full(f.base, f.source.rank)


def trivial_group(base: BaseRing) -> HopfAlgebra:
    return HopfAlgebra.from_tables(base, [[[1]]], [1], [[1]], [1], [[1]], name="trivial")


def to_trivial(A: HopfAlgebra) -> HopfMorphism:
    """The morphism G -> 1; its comorphism is the unit R -> A."""
    return HopfMorphism(A, trivial_group(A.base), Matrix(A.base, [A.unit], A.rank))


def from_trivial(A: HopfAlgebra) -> HopfMorphism:
    """The unit section 1 -> G; its comorphism is the counit."""
    return HopfMorphism(trivial_group(A.base), A, Matrix.column(A.base, A.counit))


# ---------------------------------------------------------------------------
# Subalgebras and quotients
# ---------------------------------------------------------------------------

def tensor_coords(sub: Submodule, x, n):
    """Coordinates of x in A (x) A relative to sub (x) sub, or None."""
    r = sub.rank
    # columns first: x viewed as n x n, each column is a vector in A
    cols = [tuple(x[i * n + j] for i in range(n)) for j in range(n)]
    Y = []
    for c in cols:
        y = sub.coords(c)
        if y is None:
            return None
        Y.append(y)
    out = []
    for k in range(r):
        row = tuple(Y[j][k] for j in range(n))
        z = sub.coords(row)
        if z is None:
            return None
        out.extend(z)
    return tuple(out)


def subalgebra(A: StructureTensors, sub: Submodule, name=None, error=ImageNotHopf) -> HopfAlgebra:
    """Hopf algebra structure on a submodule of A closed under all operations.

    The basis is the HNF basis of ``sub``; ``error`` is raised when a closure
    check fails.
    """
    n, R = A.rank, A.base
    W = sub.basis
    rows = W.rows
    r = len(rows)

    def coords(v, what):
        c = sub.coords(v)
        if c is None:
            raise error(f"submodule not closed under {what}")
        return c

    mult = [[coords(A.mul(a, b), "multiplication") for b in rows] for a in rows]
    unit = coords(A.unit, "unit")
    comult = []
    for a in rows:
        c = tensor_coords(sub, A.delta(a), n)
        if c is None:
            raise error("submodule not closed under comultiplication")
        comult.append(c)
    counit = [A.eps(a) for a in rows]
    anti = [coords(A.S(a), "antipode") for a in rows]
    out = HopfAlgebra.from_tables(R, mult, unit, comult, counit, anti, name=name)
    del r
    return out


def ideal_generated(A: StructureTensors, gens) -> Submodule:
    """R-submodule spanned by g * e_j for all generators g."""
    rows = []
    for g in gens:
        for j in range(A.rank):
            rows.append(A.mul(g, A.e(j)))
    return Submodule.span(A.base, A.rank, rows)


def augmentation_ideal(A: StructureTensors) -> Submodule:
    return kernel(Matrix.column(A.base, A.counit))


def hopf_ideal_failures(A: StructureTensors, ideal: Submodule):
    """Names of the Hopf-ideal conditions the submodule violates (checked over K)."""
    bad = []
    n = A.rank
    K = A.base.fraction_field()
    IK = ideal.generic()
    gens = ideal.basis.rows
    if any(not IK.contains(A.mul(g, A.e(j))) for g in gens for j in range(n)):
        bad.append("ideal")
    if any(A.eps(g) for g in gens):
        bad.append("counit")
    if any(not IK.contains(A.S(g)) for g in gens):
        bad.append("antipode")
    # Delta(I) in I (x) A + A (x) I  <=>  (pi (x) pi) Delta(I) = 0 over K
    ann = kernel(Matrix(K, IK.basis.rows, n, coerce=False).T) if IK.rank else Submodule.full(K, n)
    if IK.rank:
        C = Matrix(K, ann.basis.rows, n, coerce=False).T   # n x q, columns kill I
        CC = C.kron(C)
        if any(any(vecmat(A.delta(g), CC)) for g in gens):
            bad.append("comultiplication")
    return bad


@dataclass(frozen=True)
class SubgroupData:
    """Closed subgroup Spec(A/I) of Spec A.

    ``algebra`` is the quotient Hopf algebra and ``inclusion`` the closed
    immersion into ``ambient``; ``complement`` holds the basis rows of A whose
    images form the basis of the quotient.
    """

    ambient: HopfAlgebra
    ideal: Submodule
    algebra: HopfAlgebra
    inclusion: HopfMorphism
    complement: Matrix

    @property
    def rank(self):
        return self.algebra.rank


def quotient_algebra(A: HopfAlgebra, ideal: Submodule, name=None) -> SubgroupData:
    """Quotient of A by a Hopf ideal; NotFlat if A/I has torsion over R."""
    R, n = A.base, A.rank
    bad = hopf_ideal_failures(A, ideal)
    if bad:
        raise NotHopfIdeal("ideal fails: " + ", ".join(bad))
    if not R.is_field and not ideal.is_saturated():
        raise NotFlat("quotient has torsion", elementary_divisors(ideal))
    W, r = _quotient_basis_low(ideal)
    if r == n:
        raise NotHopfIdeal("ideal is the whole algebra")
    P = inverse(W).select_cols(range(r, n))           # n x q projection
    comp = W.select_rows(range(r, n))
    proj = lambda v: vecmat(v, P)
    crow = comp.rows
    mult = [[proj(A.mul(a, b)) for b in crow] for a in crow]
    unit = proj(A.unit)
    PP = P.kron(P)
    comult = [vecmat(A.delta(a), PP) for a in crow]
    counit = [A.eps(a) for a in crow]
    anti = [proj(A.S(a)) for a in crow]
    Q = HopfAlgebra.from_tables(R, mult, unit, comult, counit, anti, name=name)
    inc = HopfMorphism(Q, A, P)
    return SubgroupData(A, ideal, Q, inc, comp)


def _quotient_basis_low(ideal: Submodule):
    """Complement basis preferring low-index standard vectors (e.g. 1, x, ... for monomials)."""
    R, n = ideal.ring, ideal.n
    rev = list(range(n - 1, -1, -1))
    flipped = Submodule.span(R, n, [tuple(r[j] for j in rev) for r in ideal.basis.rows])
    W, r = quotient_basis(flipped)
    rows = [tuple(row[j] for j in rev) for row in W.rows]
    return Matrix(R, rows, n, coerce=False), r


def subgroup_from_ideal(A: HopfAlgebra, ideal: Submodule, name=None) -> SubgroupData:
    return quotient_algebra(A, ideal, name=name)


def kernel_ideal(f: HopfMorphism) -> Submodule:
    """Ideal of O(source) generated by h(ker eps) for the comorphism h."""
    I = augmentation_ideal(f.target)
    return ideal_generated(f.source, [f(g) for g in I.basis.rows])


def kernel_subgroup(f: HopfMorphism) -> SubgroupData:
    """ker f as a closed subgroup of f.source; NotFlat when the kernel is not flat."""
    return quotient_algebra(f.source, kernel_ideal(f), name="kernel")


def factor_morphism(f: HopfMorphism):
    """Factor f = i o s with s schematically dominant and i a closed immersion.

    Returns ``(s, i, middle)`` where middle is the image of the comorphism.
    """
    im = image(f.matrix)
    middle = subalgebra(f.source, im, name="image")
    s = HopfMorphism(f.source, middle, im.basis)
    coords = []
    for row in f.matrix.rows:
        c = im.coords(row)
        if c is None:
            raise ImageNotHopf("comorphism row outside its image")
        coords.append(c)
    i = HopfMorphism(middle, f.target, Matrix(f.base, coords, im.rank, coerce=False))
    return s, i, middle


def adjoint_coaction(A: StructureTensors, a):
    """Conjugation coaction a -> sum a(2) (x) S(a(1)) a(3) in A (x) A."""
    n = A.rank
    d1 = A.delta(a)
    out = [A.base.zero] * (n * n)
    for ij, c in enumerate(d1):
        if not c:
            continue
        i, j = divmod(ij, n)
        s_i = A.S(A.e(i))
        d2 = A.delta(A.e(j))           # a(2) (x) a(3)
        for kl, d in enumerate(d2):
            if not d:
                continue
            k, l_ = divmod(kl, n)
            prod = A.mul(s_i, A.e(l_))
            for m, v in enumerate(prod):
                if v:
                    out[k * n + m] = out[k * n + m] + c * d * v
    return tuple(out)


def is_normal(N: SubgroupData) -> bool:
    """Is the ideal of N stable under the conjugation coaction, ad(I) in I (x) A?"""
    A = N.ambient
    n = A.rank
    K = A.base.fraction_field()
    IK = N.ideal.generic()
    if IK.rank == 0:
        return True
    ann = kernel(Matrix(K, IK.basis.rows, n, coerce=False).T)
    C = Matrix(K, ann.basis.rows, n, coerce=False).T
    for g in N.ideal.basis.rows:
        ad = adjoint_coaction(A, g)
        M = Matrix(K, [ad[i * n:(i + 1) * n] for i in range(n)], n, coerce=False)
        if not (C.T @ M).is_zero():
            return False
    return True


def quotient_by_normal(A: HopfAlgebra, N: SubgroupData, name=None):
    """G/N as the invariants {a : (id (x) pi) Delta(a) = a (x) pi(1)}; returns (Q, projection)."""
    n, R = A.rank, A.base
    P = N.inclusion.matrix             # n x q, the map pi
    q = P.ncols
    pi1 = vecmat(A.unit, P)
    rows = []
    for i in range(n):
        d = A.apply_right(A.delta(A.e(i)), P)
        rows.append(tuple(x - pi1[kl % q] if kl // q == i else x for kl, x in enumerate(d)))
    inv = kernel(Matrix(R, rows, n * q, coerce=False))
    if inv.rank * q != n:
        raise RankMismatch(f"invariants have rank {inv.rank}, expected {n}/{q}")
    Q = subalgebra(A, inv, name=name, error=RankMismatch)
    return Q, HopfMorphism(A, Q, inv.basis)


def cartier_dual(A: StructureTensors) -> StructureTensors:
    """Transpose every structure tensor; HopfAlgebra if the dual is commutative."""
    cls = HopfAlgebra if A.is_cocommutative() else BialgebraOnly
    name = f"dual({A.name})" if A.name else None
    return cls(A.base, A.comult.T, A.counit, A.mult.T, A.unit, A.antipode.T, name)


def product(A: HopfAlgebra, B: HopfAlgebra, name=None) -> HopfAlgebra:
    """O(G x H) = A (x) B with basis e_i (x) f_j at index i*m + j."""
    R = A.base
    n, m = A.rank, B.rank
    N = n * m
    idx = [(i, j) for i in range(n) for j in range(m)]
    mult = []
    for i, j in idx:
        row = []
        for k, l_ in idx:
            row.append(tensor(A.mul(A.e(i), A.e(k)), B.mul(B.e(j), B.e(l_))))
        mult.append(row)
    comult = []
    for i, j in idx:
        da, db = A.delta(A.e(i)), B.delta(B.e(j))
        out = [R.zero] * (N * N)
        for pq, c in enumerate(da):
            if not c:
                continue
            p, q = divmod(pq, n)
            for rs, d in enumerate(db):
                if not d:
                    continue
                r, s = divmod(rs, m)
                out[(p * m + r) * N + (q * m + s)] += c * d
        comult.append(out)
    unit = tensor(A.unit, B.unit)
    counit = tensor(A.counit, B.counit)
    anti = [tensor(A.S(A.e(i)), B.S(B.e(j))) for i, j in idx]
    return HopfAlgebra.from_tables(R, mult, unit, comult, counit, anti,
                                   name=name or f"{A.name}x{B.name}")


def projections(A: HopfAlgebra, B: HopfAlgebra, AB: HopfAlgebra | None = None):
    """The two projections G x H -> G and G x H -> H."""
    AB = AB or product(A, B)
    p1 = Matrix(A.base, [tensor(A.e(i), B.unit) for i in range(A.rank)], AB.rank)
    p2 = Matrix(A.base, [tensor(A.unit, B.e(j)) for j in range(B.rank)], AB.rank)
    return HopfMorphism(AB, A, p1), HopfMorphism(AB, B, p2)


def pair_morphism(f: HopfMorphism, g: HopfMorphism, AB: HopfAlgebra | None = None) -> HopfMorphism:
    """(f, g): G -> H1 x H2 from f: G -> H1 and g: G -> H2."""
    AB = AB or product(f.target, g.target)
    S = f.source
    rows = []
    for i in range(f.target.rank):
        for j in range(g.target.rank):
            rows.append(S.mul(f(f.target.e(i)), g(g.target.e(j))))
    return HopfMorphism(S, AB, Matrix(S.base, rows, S.rank))
