"""Pointed torsors (triples) over a point or the split torus line, and their constructions.

A triple (Y, G, y) over X = Spec B is stored as a free B-algebra T = O(Y) of
rank n = rank(G) with basis t_0..t_(n-1), a coaction delta: T -> T (x) A and
the values y(t_i) of the marked point over the section x of X (u -> 1 on the
torus).  B is R or K on the point form and R[u, 1/u] or K[u, 1/u] on the
torus form; Laurent coefficients are :class:`~ffgs.laurent.LPoly` values.

Elements of T are tuples over B; elements of T (x) A are tuples of length
n*rank(A) indexed by i*rank(A) + a.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import sympy

from .errors import NotHopfIdeal, NotNormal, RankMismatch, StepBudgetExceeded, WitnessFailure
from .hopf import (HopfAlgebra, HopfMorphism, Report, _first, compose, identity_morphism,
                   is_normal, kernel_ideal, quotient_by_normal)
from .iso import is_hopf_isomorphism
from .laurent import LPoly, bareiss_det, berkowitz
from .linalg import Matrix, Submodule, det as scalar_det, inverse, kernel, lattice_coords, vecmat
from .models import GenericSubgroup, flat_closure_subgroup
from .rings import BaseRing

DEFAULT_STEP_BUDGET = 200_000


# ---------------------------------------------------------------------------
# Base schemes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineBase:
    """X = Spec B with B = scalar (``point``) or scalar[u, 1/u] (``torus``)."""

    scalar: BaseRing
    form: str = "point"

    def __post_init__(self):
        if self.form not in ("point", "torus"):
            raise ValueError(f"unknown base form {self.form!r}")

    @property
    def coeff_field(self) -> BaseRing:
        return self.scalar.fraction_field()

    @property
    def is_torus(self) -> bool:
        return self.form == "torus"

    @property
    def zero(self):
        if self.is_torus:
            return LPoly({}, self.coeff_field)
        return self.scalar.zero

    @property
    def one(self):
        if self.is_torus:
            return LPoly.const(1, self.coeff_field)
        return self.scalar.one

    @property
    def u(self):
        if not self.is_torus:
            raise ValueError("point base has no coordinate")
        return LPoly.monomial(1, 1, self.coeff_field)

    def coerce(self, x):
        """Accept scalars, ``"a/b"`` strings, LPoly values and {"offset", "coeffs"} dicts."""
        if not self.is_torus:
            if isinstance(x, LPoly):
                if not x.is_constant():
                    raise TypeError("Laurent polynomial on a point base")
                x = x.constant()
            return self.scalar.coerce(x)
        F = self.coeff_field
        if isinstance(x, LPoly):
            return x if x.field == F else LPoly({k: F.coerce(v) for k, v in x.c.items()}, F)
        if isinstance(x, dict):
            return LPoly.from_list(x.get("coeffs", []), F, x.get("offset", 0))
        if isinstance(x, (list, tuple)):
            return LPoly.from_list(x, F)
        return LPoly.const(F.coerce(x), F)

    def contains(self, x) -> bool:
        if self.is_torus:
            return all(self.scalar.contains(v) for v in x.c.values())
        return self.scalar.contains(x)

    def is_unit(self, x) -> bool:
        if not x:
            return False
        if self.is_torus:
            if not x.is_monomial():
                return False
            (_, v), = x.c.items()
            return self.scalar.is_unit(v)
        return self.scalar.is_unit(x)

    def section(self, x):
        """Evaluate at the section (u = 1 on the torus)."""
        if self.is_torus:
            return x(self.coeff_field.one)
        return x

    def generic(self) -> "AffineBase":
        return AffineBase(self.scalar.fraction_field(), self.form)

    def det(self, rows):
        if self.is_torus:
            return bareiss_det(rows, self.zero, self.one)
        K = self.coeff_field
        return scalar_det(Matrix(K, rows, len(rows), coerce=False)) if rows else K.one

    def to_dict(self):
        d = self.scalar.to_dict()
        d["form"] = self.form
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(BaseRing.from_dict(d), d.get("form", "point"))

    def __str__(self):
        return f"{self.scalar}[u,1/u]" if self.is_torus else str(self.scalar)


def _degree(x):
    return x.span() if isinstance(x, LPoly) else 0


# ---------------------------------------------------------------------------
# Triples
# ---------------------------------------------------------------------------

class Triple:
    """Pointed torsor (Y, G, y): T = O(Y) over B with coaction and optional point.

    ``point`` is the tuple y(t_i) of scalars, or None when the torsor has no
    marked point (for instance y^2 = 5 over Q).
    """

    def __init__(self, base: AffineBase, group: HopfAlgebra, mult: Matrix, unit, coaction: Matrix,
                 point=None, name=None):
        m = len(unit)
        n = group.rank
        if mult.shape != (m * m, m) or coaction.shape != (m, m * n):
            raise ValueError("inconsistent triple tensor shapes")
        self.base = base
        self.group = group
        self.mult = mult
        self.unit = tuple(base.coerce(x) for x in unit)
        self.coaction = coaction
        self.point = None if point is None else tuple(base.scalar.coerce(x) for x in point)
        self.name = name
        self._tab = None

    @classmethod
    def from_tables(cls, base, group, mult, unit, coaction, point=None, name=None):
        m = len(unit)
        rows = [mult[i][j] for i in range(m) for j in range(m)]
        return cls(base, group, Matrix(base, rows, m), unit, Matrix(base, coaction, m * group.rank),
                   point, name)

    @property
    def rank(self):
        return len(self.unit)

    def _key(self):
        return (self.base, self.group, self.mult, self.unit, self.coaction, self.point)

    def __eq__(self, other):
        return isinstance(other, Triple) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Triple({self.name or 'torsor'}, rank {self.rank} over {self.base}, group {self.group.name})"

    def e(self, i):
        z, o = self.base.zero, self.base.one
        return tuple(o if k == i else z for k in range(self.rank))

    def mul(self, a, b):
        m = self.rank
        if self._tab is None:
            nz = self.mult._nonzero()
            self._tab = [[nz[i * m + j] for j in range(m)] for i in range(m)]
        out = [self.base.zero] * m
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k, c in self._tab[i][j]:
                    out[k] = out[k] + xy * c
        return tuple(out)

    def coact(self, a):
        return vecmat(a, self.coaction)

    def mul_TA(self, x, y):
        """Product in T (x) A."""
        n = self.group.rank
        m = self.rank
        out = [self.base.zero] * (m * n)
        G = self.group
        for ia, c in enumerate(x):
            if not c:
                continue
            i, a = divmod(ia, n)
            for jb, d in enumerate(y):
                if not d:
                    continue
                j, b = divmod(jb, n)
                tt = self.mul(self.e(i), self.e(j))
                ab = G.mul(G.e(a), G.e(b))
                cd = c * d
                for k, x1 in enumerate(tt):
                    if x1:
                        for l_, x2 in enumerate(ab):
                            if x2:
                                out[k * n + l_] = out[k * n + l_] + cd * x1 * x2
        return tuple(out)

    def point_value(self, a):
        """y(a) for a in T (a scalar)."""
        if self.point is None:
            return None
        K = self.base.coeff_field
        s = K.zero
        for x, y in zip(a, self.point):
            if x:
                s = s + self.base.section(x) * y
        return s

    def gamma_matrix(self):
        """Canonical map T (x)_B T -> T (x) A, t_i (x) t_j -> (t_i (x) 1) delta(t_j)."""
        m, n = self.rank, self.group.rank
        one_A = self.group.unit
        rows = []
        D = [self.coact(self.e(j)) for j in range(m)]
        for i in range(m):
            ti = tuple(x * a for x in self.e(i) for a in one_A)
            for j in range(m):
                rows.append(self.mul_TA(ti, D[j]))
        return Matrix(self.base, rows, m * n, coerce=False)

    def torsor_determinant(self):
        g = self.gamma_matrix()
        if g.nrows != g.ncols:
            return self.base.zero
        return self.base.det(g.rows)

    def verify(self) -> Report:
        return verify_triple(self)

    def base_change(self):
        return generic_fiber_triple(self)


def verify_triple(t: Triple) -> Report:
    """Coaction axioms, torsor determinant and point compatibility on basis elements."""
    rep = Report()
    B, G = t.base, t.group
    m, n = t.rank, G.rank
    idx = range(m)
    E = [t.e(i) for i in idx]
    rep.add("rank", None if m == n else (m, n))
    ints = all(B.contains(x) for M in (t.mult, t.coaction) for r in M.rows for x in r) \
        and all(B.contains(x) for x in t.unit)
    if t.point is not None:
        ints = ints and all(B.scalar.contains(x) for x in t.point)
    rep.add("integral_structure", None if ints else ())
    rep.add("group_axioms", None if G.verify().ok else ())
    rep.add("associativity", _first(
        (i, j, k) for i in idx for j in idx for k in idx
        if t.mul(t.mul(E[i], E[j]), E[k]) != t.mul(E[i], t.mul(E[j], E[k]))))
    rep.add("commutativity", _first(
        (i, j) for i in idx for j in idx if j > i and t.mul(E[i], E[j]) != t.mul(E[j], E[i])))
    rep.add("unit", _first((i,) for i in idx if t.mul(t.unit, E[i]) != E[i]))
    D = [t.coact(E[i]) for i in idx]
    one_TA = tuple(x * a for x in t.unit for a in G.unit)
    rep.add("coaction_unital", None if t.coact(t.unit) == one_TA else ())
    rep.add("coaction_multiplicative", _first(
        (i, j) for i in idx for j in idx if j >= i
        and t.coact(t.mul(E[i], E[j])) != t.mul_TA(D[i], D[j])))
    rep.add("coassociativity", _first((i,) for i in idx if _coassoc_l(t, D[i]) != _coassoc_r(t, D[i])))
    rep.add("counit", _first((i,) for i in idx if _counit_apply(t, D[i]) != E[i]))
    if m == n:
        d = t.torsor_determinant()
        rep.add("torsor_unit_determinant", None if B.is_unit(d) else ())
    else:
        rep.add("torsor_unit_determinant", ())
    if t.point is not None:
        K = B.coeff_field
        rep.add("point_unital", None if t.point_value(t.unit) == K.one else ())
        rep.add("point_multiplicative", _first(
            (i, j) for i in idx for j in idx if j >= i
            and t.point_value(t.mul(E[i], E[j])) != t.point[i] * t.point[j]))
    return rep


def _coassoc_l(t, d):
    # (delta (x) id) applied to d in T (x) A, landing in T (x) A (x) A
    n = t.group.rank
    out = [t.base.zero] * (t.rank * n * n)
    for ia, c in enumerate(d):
        if not c:
            continue
        i, a = divmod(ia, n)
        for jb, v in enumerate(t.coact(t.e(i))):
            if v:
                j, b = divmod(jb, n)
                k = (j * n + b) * n + a
                out[k] = out[k] + c * v
    return tuple(out)


def _coassoc_r(t, d):
    n = t.group.rank
    G = t.group
    out = [t.base.zero] * (t.rank * n * n)
    for ia, c in enumerate(d):
        if not c:
            continue
        i, a = divmod(ia, n)
        for bc, v in enumerate(G.comult.rows[a]):
            if v:
                k = i * n * n + bc
                out[k] = out[k] + c * v
    return tuple(out)


def _counit_apply(t, d):
    n = t.group.rank
    out = [t.base.zero] * t.rank
    for ia, c in enumerate(d):
        if c:
            i, a = divmod(ia, n)
            e = t.group.counit[a]
            if e:
                out[i] = out[i] + c * e
    return tuple(out)


def trivial_triple(G: HopfAlgebra, base: AffineBase | None = None) -> Triple:
    """T = B (x) A with delta = Delta and point = counit."""
    base = base or AffineBase(G.base)
    n = G.rank
    mult = [[G.mul(G.e(i), G.e(j)) for j in range(n)] for i in range(n)]
    return Triple.from_tables(base, G, mult, G.unit, G.comult.rows, G.counit, name=f"trivial({G.name})")


def generic_fiber_triple(t: Triple) -> Triple:
    """Scalar extension of every tensor to the fraction field."""
    Kb = t.base.generic()
    if Kb == t.base:
        return t
    GK = t.group.base_change()
    return Triple(Kb, GK, t.mult.change_ring(Kb), t.unit, t.coaction.change_ring(Kb), t.point, t.name)


# ---------------------------------------------------------------------------
# Morphisms of triples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TripleMorphism:
    """(alpha, beta): source -> target, stored as alpha^sharp: O(target) -> O(source)
    (row i = image of t_i of the target) and the group morphism beta."""

    source: Triple
    target: Triple
    alpha: Matrix
    beta: HopfMorphism

    def verify(self) -> Report:
        return verify_triple_morphism(self)

    def is_isomorphism(self) -> bool:
        return self.alpha.nrows == self.alpha.ncols and \
            self.source.base.is_unit(self.source.base.det(self.alpha.rows)) and \
            self.beta.matrix.nrows == self.beta.matrix.ncols and is_hopf_isomorphism(
                self.beta.target, self.beta.source, self.beta.matrix)


def verify_triple_morphism(f: TripleMorphism) -> Report:
    rep = Report()
    S, T = f.source, f.target
    a = f.alpha
    rep.add("shape", None if a.shape == (T.rank, S.rank) else a.shape)
    rep.add("groups", None if (f.beta.source.rank == S.group.rank and f.beta.target.rank == T.group.rank)
            else ())
    rep.add("beta_morphism", None if f.beta.verify().ok else ())
    if not rep.ok:
        return rep
    img = lambda v: vecmat(v, a)
    idx = range(T.rank)
    E = [T.e(i) for i in idx]
    rep.add("alpha_unital", None if img(T.unit) == S.unit else ())
    rep.add("alpha_multiplicative", _first(
        (i, j) for i in idx for j in idx if j >= i
        and img(T.mul(E[i], E[j])) != S.mul(img(E[i]), img(E[j]))))
    ab = a.kron(f.beta.matrix.change_ring(S.base))
    rep.add("equivariant", _first(
        (i,) for i in idx if S.coact(img(E[i])) != vecmat(T.coact(E[i]), ab)))
    if S.point is not None and T.point is not None:
        rep.add("point", _first((i,) for i in idx if S.point_value(img(E[i])) != T.point[i]))
    return rep


def compose_triple(g: TripleMorphism, f: TripleMorphism) -> TripleMorphism:
    """g after f for f: Y1 -> Y2 and g: Y2 -> Y3."""
    return TripleMorphism(f.source, g.target, g.alpha @ f.alpha, compose(g.beta, f.beta))


def identity_triple_morphism(t: Triple) -> TripleMorphism:
    return TripleMorphism(t, t, Matrix.identity(t.base, t.rank), identity_morphism(t.group))


# ---------------------------------------------------------------------------
# Invariant modules over B
# ---------------------------------------------------------------------------

class FreeBasis:
    """A B-basis of a direct summand of B^N with a coordinate solver.

    On a point base coordinates are solved over K and checked to lie in R.  On
    the torus the basis is certified by a unit maximal minor: found by
    Gauss-Jordan elimination on unit pivots when possible, otherwise taken
    from ``cols`` (or searched) and inverted through the adjugate.
    """

    def __init__(self, base: AffineBase, rows, cols=None, budget: int = DEFAULT_STEP_BUDGET):
        self.base = base
        self.rows = [tuple(r) for r in rows]
        k = len(self.rows)
        self._ech = None
        if not base.is_torus:
            K = base.coeff_field
            self._mat = Matrix(K, self.rows, len(self.rows[0]), coerce=False) if k else None
            self.cols = None
            return
        if k:
            self._ech = _unit_echelon(base, self.rows)
        if self._ech is not None:
            self.cols = tuple(c for _, c in self._ech[2])
            return
        if cols is None:
            cols = _find_unit_minor(base, self.rows, budget)
            if cols is None:
                raise RankMismatch("no unit maximal minor: not a free direct summand")
        self.cols = tuple(cols)
        sq = [[r[c] for c in self.cols] for r in self.rows]
        minor = base.det(sq) if k else base.one
        if k and not base.is_unit(minor):
            raise RankMismatch("selected minor is not a unit")
        self._inv = _adjugate_inverse(base, sq, minor) if k else []

    @property
    def rank(self):
        return len(self.rows)

    def generic(self) -> "FreeBasis":
        Kb = self.base.generic()
        return FreeBasis(Kb, [tuple(Kb.coerce(x) for x in r) for r in self.rows], self.cols)

    def coords(self, v):
        """Coordinates of v over B, or None if v is not in the span."""
        k = self.rank
        if k == 0:
            return () if not any(v) else None
        if not self.base.is_torus:
            x = lattice_coords(self._mat, tuple(self.base.coeff_field.coerce(a) for a in v))
            if x is None or not all(self.base.contains(c) for c in x):
                return None
            return tuple(x)
        z = self.base.zero
        if self._ech is not None:
            _, U, piv = self._ech
            x = [z] * k
            for (i, c) in piv:
                a = v[c]
                if a:
                    for j in range(k):
                        if U[i][j]:
                            x[j] = x[j] + a * U[i][j]
        else:
            vs = [v[c] for c in self.cols]
            x = [sum((vs[j] * self._inv[j][i] for j in range(k)), z) for i in range(k)]
        for col in range(len(v)):
            s = z
            for i in range(k):
                if x[i]:
                    s = s + x[i] * self.rows[i][col]
            if s != v[col]:
                return None
        return tuple(x)


def _unit_echelon(base, rows):
    """Gauss-Jordan with unit pivots: (E, U, pivots) with E = U rows, or None when stuck.

    ``pivots`` lists (row, column) pairs; E has 1 at each pivot and 0 elsewhere
    in pivot columns, and U is invertible over B.
    """
    k, N = len(rows), len(rows[0])
    z, o = base.zero, base.one
    E = [list(r) for r in rows]
    U = [[o if i == j else z for j in range(k)] for i in range(k)]
    piv, used = [], set()
    for _ in range(k):
        found = next(((i, c) for c in range(N) if c not in {pc for _, pc in piv}
                      for i in range(k) if i not in used and base.is_unit(E[i][c])), None)
        if found is None:
            return None
        i, c = found
        inv = E[i][c] ** -1
        E[i] = [x * inv for x in E[i]]
        U[i] = [x * inv for x in U[i]]
        for j in range(k):
            f = E[j][c]
            if j != i and f:
                E[j] = [x - f * y for x, y in zip(E[j], E[i])]
                U[j] = [x - f * y for x, y in zip(U[j], U[i])]
        piv.append((i, c))
        used.add(i)
    return E, U, piv


def _adjugate_inverse(base, sq, d):
    """Inverse of a square matrix over B whose determinant d is a unit (row convention)."""
    k = len(sq)
    if base.is_torus:
        dinv = d ** -1
    else:
        dinv = base.scalar.one / d
    if k == 1:
        return [[dinv]]
    inv = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[sq[r][c] for c in range(k) if c != j] for r in range(k) if r != i]
            cof = base.det(minor)
            if (i + j) % 2:
                cof = -cof
            inv[j][i] = cof * dinv
    return inv


def _find_unit_minor(base, rows, budget):
    """Columns of a unit maximal minor of the given rows, or None."""
    k = len(rows)
    if k == 0:
        return ()
    N = len(rows[0])
    steps = 0
    for cols in combinations(range(N), k):
        steps += 1
        if steps > budget:
            raise StepBudgetExceeded("unit minor search exceeded the step budget")
        sq = [[r[c] for c in cols] for r in rows]
        if base.is_unit(base.det(sq)):
            return cols
    return None


def _generic_rank(base, rows):
    """Rank over Frac(B), by division-free elimination on the torus."""
    if not rows:
        return 0
    if not base.is_torus:
        return Submodule.span(base.coeff_field, len(rows[0]), rows).rank
    A = [list(r) for r in rows]
    r = 0
    for c in range(len(A[0])):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        for i in range(r + 1, len(A)):
            if A[i][c]:
                f = A[i][c]
                A[i] = [x * p - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def invariant_module(base: AffineBase, Phi: Matrix, expected: int, degree_bound: int | None = None,
                     step_budget: int = DEFAULT_STEP_BUDGET) -> FreeBasis:
    """B-basis of {v in B^N : v Phi = 0}, which must be free of rank ``expected``.

    On the torus, solutions are searched in growing degree windows [-d, d] up to
    ``degree_bound`` (default: max entry degree of Phi times ``expected``, at
    least 1); the result is certified by a unit maximal minor, else RankMismatch.
    """
    if not base.is_torus:
        R = base.scalar
        ker = kernel(Matrix(R, Phi.rows, Phi.ncols, coerce=False))
        if ker.rank != expected:
            raise RankMismatch(f"invariants have rank {ker.rank}, expected {expected}")
        return FreeBasis(base, list(ker.basis.rows))
    dmax = max((_degree(x) for r in Phi.rows for x in r), default=0)
    bound = degree_bound if degree_bound is not None else max(1, dmax * max(expected, 1))
    for d in range(0, bound + 1):
        cands = _window_kernel(base, Phi, d)
        chosen = []
        for c in sorted(cands, key=lambda v: (max(_degree(x) for x in v), _support(v))):
            if _generic_rank(base, chosen + [c]) > len(chosen):
                chosen.append(c)
            if len(chosen) == expected:
                break
        if len(chosen) < expected:
            continue
        try:
            return FreeBasis(base, chosen, budget=step_budget)
        except RankMismatch:
            continue
    raise RankMismatch(f"no certified invariant basis within degree bound {bound}")


def _support(v):
    return tuple(i for i, x in enumerate(v) if x)


def _window_kernel(base, Phi: Matrix, d):
    """R-basis of solutions v with entries supported in degrees [-d, d], as B-vectors."""
    R = base.scalar
    F = base.coeff_field
    N, M = Phi.nrows, Phi.ncols
    lo_phi = min((x.degrees[0] for r in Phi.rows for x in r if x), default=0)
    hi_phi = max((x.degrees[1] for r in Phi.rows for x in r if x), default=0)
    out_lo, out_hi = -d + lo_phi, d + hi_phi
    width = out_hi - out_lo + 1
    # unknown (i, e) for i < N, e in [-d, d]; equation (j, f) for j < M, f in [out_lo, out_hi]
    rows = []
    for i in range(N):
        for e in range(-d, d + 1):
            row = [F.zero] * (M * width)
            for j, x in enumerate(Phi.rows[i]):
                if x:
                    for k, c in x.c.items():
                        row[j * width + (e + k - out_lo)] = c
            rows.append(tuple(row))
    ring = R if R.kind != "prime_field" else F
    ker = kernel(Matrix(ring, rows, M * width, coerce=False))
    out = []
    span = 2 * d + 1
    for v in ker.basis.rows:
        vec = []
        for i in range(N):
            coeffs = {e: v[i * span + (e + d)] for e in range(-d, d + 1)}
            vec.append(LPoly(coeffs, F))
        out.append(tuple(vec))
    return out


# ---------------------------------------------------------------------------
# Contracted products (change of structure group)
# ---------------------------------------------------------------------------

@dataclass
class Contracted:
    """Y x^G H with its basis inside T (x) A_H."""

    triple: Triple
    basis: FreeBasis
    source: Triple
    morphism: HopfMorphism

    def canonical_morphism(self) -> TripleMorphism:
        """Y -> Y x^G H, y -> [y, e]; comorphism (id (x) eps_H)."""
        t, H = self.source, self.morphism.target
        k = H.rank
        rows = []
        for z in self.basis.rows:
            rows.append(tuple(sum((z[i * k + c] * H.counit[c] for c in range(k) if H.counit[c]),
                                  t.base.zero) for i in range(t.rank)))
        return TripleMorphism(t, self.triple, Matrix(t.base, rows, t.rank, coerce=False), self.morphism)


def contract(t: Triple, f: HopfMorphism, degree_bound: int | None = None,
             step_budget: int = DEFAULT_STEP_BUDGET) -> Contracted:
    """Invariants of T (x) A_H under g: t (x) c -> t(0) (x) c(2) (x) t(1) f#(S c(1))."""
    G, H = t.group, f.target
    if f.source != G:
        raise ValueError("morphism does not start at the structure group")
    B = t.base
    m, n, k = t.rank, G.rank, H.rank
    fS = [vecmat(H.S(H.e(c)), f.matrix) for c in range(k)]           # f#(S h_c) in A_G
    # for each c: list of (c2, vector in A_G) from Delta_H(h_c) = sum h_c1 (x) h_c2
    parts = []
    for c in range(k):
        acc = {}
        for c12, v in enumerate(H.comult.rows[c]):
            if v:
                c1, c2 = divmod(c12, k)
                vec = acc.setdefault(c2, [G.base.zero] * n)
                for g, w in enumerate(fS[c1]):
                    if w:
                        vec[g] = vec[g] + v * w
        parts.append([(c2, tuple(vec)) for c2, vec in sorted(acc.items())])
    D = [t.coact(t.e(i)) for i in range(m)]
    rows = []
    for i in range(m):
        for c in range(k):
            row = [B.zero] * (m * k * n)
            for ag, x in enumerate(D[i]):
                if not x:
                    continue
                a, g = divmod(ag, n)
                for c2, vec in parts[c]:
                    prod = G.mul(G.e(g), vec)
                    for gg, w in enumerate(prod):
                        if w:
                            idx = (a * k + c2) * n + gg
                            row[idx] = row[idx] + x * w
            for gg, w in enumerate(G.unit):
                if w:
                    idx = (i * k + c) * n + gg
                    row[idx] = row[idx] - w
            rows.append(tuple(B.coerce(x) for x in row))
    Phi = Matrix(B, rows, m * k * n, coerce=False)
    basis = invariant_module(B, Phi, k, degree_bound, step_budget)
    Z = basis.rows

    def mul_V(x, y):
        out = [B.zero] * (m * k)
        for ic, a in enumerate(x):
            if not a:
                continue
            i, c = divmod(ic, k)
            for jd, b in enumerate(y):
                if not b:
                    continue
                j, d = divmod(jd, k)
                tt = t.mul(t.e(i), t.e(j))
                hh = H.mul(H.e(c), H.e(d))
                ab = a * b
                for p, x1 in enumerate(tt):
                    if x1:
                        for q, x2 in enumerate(hh):
                            if x2:
                                out[p * k + q] = out[p * k + q] + ab * x1 * x2
        return tuple(out)

    def coords(v, what):
        c = basis.coords(v)
        if c is None:
            raise RankMismatch(f"invariant basis not closed under {what}")
        return c

    mult = [[coords(mul_V(a, b), "multiplication") for b in Z] for a in Z]
    one_V = tuple(x * h for x in t.unit for h in H.unit)
    unit = coords(tuple(B.coerce(x) for x in one_V), "unit")
    coaction = []
    for z in Z:
        # (id (x) Delta_H) z, split by the last tensor factor
        slices = [[B.zero] * (m * k) for _ in range(k)]
        for ic, a in enumerate(z):
            if not a:
                continue
            i, c = divmod(ic, k)
            for c12, v in enumerate(H.comult.rows[c]):
                if v:
                    c1, c2 = divmod(c12, k)
                    slices[c2][i * k + c1] = slices[c2][i * k + c1] + a * v
        cz = [coords(tuple(s), "coaction") for s in slices]
        coaction.append(tuple(cz[c2][b] for b in range(k) for c2 in range(k)))
    point = None
    if t.point is not None:
        point = []
        for z in Z:
            s = B.coeff_field.zero
            for ic, a in enumerate(z):
                if a:
                    i, c = divmod(ic, k)
                    if H.counit[c]:
                        s = s + B.section(a) * t.point[i] * H.counit[c]
            point.append(s)
    name = f"{t.name}x^{G.name}{H.name}" if t.name else None
    out = Triple.from_tables(B, H, mult, unit, coaction, point, name=name)
    return Contracted(out, basis, t, f)


def contracted_product(t: Triple, f: HopfMorphism, degree_bound: int | None = None,
                       step_budget: int = DEFAULT_STEP_BUDGET) -> Triple:
    return contract(t, f, degree_bound, step_budget).triple


def contraction_witness(phi: TripleMorphism, degree_bound=None) -> TripleMorphism:
    """For phi: Y1 -> Y2 over beta: G1 -> G2, the isomorphism Y1 x^G1 G2 -> Y2.

    Its comorphism sends p to sum alpha#(p(0)) (x) p(1) in O(Y1) (x) O(G2).
    """
    Y1, Y2 = phi.source, phi.target
    cp = contract(Y1, phi.beta, degree_bound)
    n2 = Y2.group.rank
    B = Y1.base
    rows = []
    for j in range(Y2.rank):
        d = Y2.coact(Y2.e(j))
        v = [B.zero] * (Y1.rank * n2)
        for pa, c in enumerate(d):
            if not c:
                continue
            p, a = divmod(pa, n2)
            for i, x in enumerate(phi.alpha.rows[p]):
                if x:
                    v[i * n2 + a] = v[i * n2 + a] + c * x
        co = cp.basis.coords(tuple(v))
        if co is None:
            raise WitnessFailure("image outside the contracted product")
        rows.append(co)
    alpha = Matrix(B, rows, cp.triple.rank, coerce=False)
    return TripleMorphism(cp.triple, Y2, alpha, identity_morphism(Y2.group))


def is_triple_isomorphism(f: TripleMorphism) -> bool:
    return f.verify().ok and f.is_isomorphism()


# ---------------------------------------------------------------------------
# Reduction of the structure group
# ---------------------------------------------------------------------------

def _roots_in_base(base: AffineBase, coeffs, budget):
    """Roots lying in B of sum coeffs[i] lam^i (coefficients in B)."""
    F = base.coeff_field
    R = base.scalar
    if not base.is_torus:
        if F.kind == "prime_field":
            out = []
            for v in range(F.p):
                lam = F.coerce(v)
                if not sum((c * lam ** i for i, c in enumerate(coeffs)), F.zero):
                    out.append(lam)
            return out
        lam = sympy.Symbol("lam")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * lam ** i for i, c in enumerate(coeffs))
        roots = sympy.Poly(expr, lam, domain="QQ").ground_roots() if expr != 0 else {}
        out = [Fraction(int(sympy.fraction(r)[0]), int(sympy.fraction(r)[1])) for r in roots]
        return sorted(x for x in out if R.contains(x))
    if F.kind == "prime_field":
        return _laurent_roots_bruteforce(base, coeffs, budget)
    u, lam = sympy.symbols("u lam")
    shift = -min((x.degrees[0] for x in coeffs if x), default=0)
    expr = 0
    for i, c in enumerate(coeffs):
        for k, v in c.c.items():
            expr += sympy.Rational(v.numerator, v.denominator) * u ** (k + shift) * lam ** i
    expr = sympy.expand(expr)
    if expr == 0:
        raise RankMismatch("zero characteristic polynomial")
    _, factors = sympy.factor_list(expr, lam, u)
    out = []
    for fac, _ in factors:
        P = sympy.Poly(fac, lam)
        if P.degree() != 1:
            continue
        a, b = P.all_coeffs()
        root = sympy.cancel(-b / a)
        num, den = sympy.fraction(root)
        dp = sympy.Poly(den, u)
        if len(dp.terms()) != 1:
            continue
        (dk,), dc = dp.terms()[0]
        np_ = sympy.Poly(num, u)
        val = {}
        for (e,), c in np_.terms():
            q = sympy.Rational(c) / sympy.Rational(dc)
            val[e - dk] = Fraction(int(q.p), int(q.q))
        r = LPoly(val, F)
        if base.contains(r):
            out.append(r)
    return sorted(out, key=lambda r: sorted(r.c.items()))


def _laurent_roots_bruteforce(base, coeffs, budget):
    F = base.coeff_field
    span = max(max((x.span() for x in coeffs if x), default=0), 1)
    steps = 0
    out = []
    for vals in product(range(F.p), repeat=2 * span + 1):
        steps += 1
        if steps > budget:
            raise StepBudgetExceeded("Laurent root search exceeded the step budget")
        r = LPoly({k - span: F.coerce(v) for k, v in enumerate(vals)}, F)
        acc = base.zero
        for c in reversed(coeffs):
            acc = acc * r + c
        if not acc:
            out.append(r)
    return out


def algebra_characters(base: AffineBase, mult_rows, unit, budget=DEFAULT_STEP_BUDGET):
    """B-algebra maps sigma: C -> B for a free B-algebra C given by its multiplication table.

    ``mult_rows[i][j]`` is the coordinate vector of c_i c_j.  Candidate values of
    sigma(c_i) are the roots in B of the characteristic polynomial of
    multiplication by c_i.
    """
    r = len(unit)
    zero, one = base.zero, base.one
    cands = []
    for i in range(r):
        # column-acting multiplication operator by c_i
        op = [[mult_rows[i][j][k] for j in range(r)] for k in range(r)]
        cp = berkowitz(op, zero, one)
        cands.append(_roots_in_base(base, cp, budget))
    steps = 0
    out = []
    for sigma in product(*cands):
        steps += 1
        if steps > budget:
            raise StepBudgetExceeded("character enumeration exceeded the step budget")
        val = lambda v: sum((x * s for x, s in zip(v, sigma) if x), zero)
        if val(unit) != one:
            continue
        if all(val(mult_rows[i][j]) == sigma[i] * sigma[j] for i in range(r) for j in range(i, r)):
            out.append(tuple(sigma))
    return out


@dataclass
class Reduction:
    """An F-triple with the morphism alpha: reduced -> original over i: F -> G."""

    triple: Triple
    morphism: TripleMorphism
    character: tuple


def reductions(t: Triple, i: HopfMorphism, step_budget: int = DEFAULT_STEP_BUDGET,
               degree_bound: int | None = None):
    """All reductions of t through the closed subgroup i: F -> G compatible with the point."""
    B = t.base
    F_, G = i.source, t.group
    m, f = t.rank, F_.rank
    if i.target.rank != G.rank:
        raise ValueError("subgroup does not sit in the structure group")
    if m % f:
        return []
    r = m // f
    imat = i.matrix.change_ring(B)
    # F-coaction on T and its invariants
    restrict = Matrix.identity(B, m).kron(imat)
    one_F = [B.coerce(x) for x in F_.unit]
    rows = []
    for j in range(m):
        d = list(vecmat(t.coact(t.e(j)), restrict))
        for b in range(f):
            d[j * f + b] = d[j * f + b] - one_F[b]
        rows.append(tuple(d))
    Phi = Matrix(B, rows, m * f, coerce=False)
    inv = invariant_module(B, Phi, r, degree_bound, step_budget)
    C = inv.rows
    cmult = []
    for a in C:
        row = []
        for b in C:
            co = inv.coords(t.mul(a, b))
            if co is None:
                raise RankMismatch("invariants are not a subalgebra")
            row.append(co)
        cmult.append(row)
    cunit = inv.coords(t.unit)
    out = []
    for sigma in algebra_characters(B, cmult, cunit, step_budget):
        if t.point is not None:
            if any(B.section(s) != t.point_value(c) for s, c in zip(sigma, C)):
                continue
        red = _reduce_along(t, i, C, sigma, step_budget)
        if red is not None:
            out.append(red)
    return out


def reduces_to(t: Triple, i: HopfMorphism, step_budget: int = DEFAULT_STEP_BUDGET,
               degree_bound: int | None = None):
    """An F-triple t' with t' x^F G isomorphic to t, or None when no reduction exists."""
    reds = reductions(t, i, step_budget, degree_bound)
    return reds[0].triple if reds else None


def _reduce_along(t, i, C, sigma, budget):
    B = t.base
    m = t.rank
    F_ = i.source
    f = F_.rank
    gens = []
    for c, s in zip(C, sigma):
        diff = tuple(x - (s * u if u else B.zero) for x, u in zip(c, t.unit))
        for j in range(m):
            g = t.mul(diff, t.e(j))
            if any(g):
                gens.append(g)
    J = _summand_complement(B, gens, m, m - f, budget)
    if J is None:
        return None
    W, comp = J
    Winv = _adjugate_inverse(B, [list(r) for r in W], B.det([list(r) for r in W]))
    P = Matrix(B, [tuple(Winv[a][m - f + s] for s in range(f)) for a in range(m)], f, coerce=False)
    proj = lambda v: vecmat(v, P)
    basis = [t.e(s) for s in comp]
    mult = [[proj(t.mul(a, b)) for b in basis] for a in basis]
    unit = proj(t.unit)
    PI = P.kron(i.matrix.change_ring(B))
    coaction = [vecmat(t.coact(a), PI) for a in basis]
    point = None if t.point is None else [t.point[s] for s in comp]
    red = Triple.from_tables(B, F_, mult, unit, coaction, point, name=f"{t.name}|{F_.name}")
    if not red.verify().ok:
        return None
    mor = TripleMorphism(red, t, P, i)
    if not mor.verify().ok:
        return None
    return Reduction(red, mor, sigma)


def _summand_complement(B, gens, m, r, budget):
    """Pick r generators and m - r standard vectors forming a basis of B^m with unit
    determinant, such that every generator lies in the span of the chosen ones.

    Returns (square basis rows, complement standard indices) or None.
    """
    if _generic_rank(B, gens) != r:
        return None
    steps = 0
    order = sorted(range(len(gens)), key=lambda g: (max(_degree(x) for x in gens[g]), g))
    for chosen in combinations(order, r):
        rows = [gens[g] for g in chosen]
        if _generic_rank(B, rows) < r:
            continue
        for comp in combinations(range(m), m - r):
            steps += 1
            if steps > budget:
                raise StepBudgetExceeded("complement search exceeded the step budget")
            W = rows + [tuple(B.one if k == s else B.zero for k in range(m)) for s in comp]
            d = B.det([list(x) for x in W])
            if not B.is_unit(d):
                continue
            fb = FreeBasis(B, rows, [c for c in range(m) if c not in comp], budget)
            if all(fb.coords(g) is not None for g in gens):
                return W, comp
    return None


# ---------------------------------------------------------------------------
# Closures and extensions
# ---------------------------------------------------------------------------

def _lattice_basis(base: AffineBase, rows, r, budget):
    """Basis of the B-span of rows (entries in B_K) chosen among the rows, with coordinates."""
    if not base.is_torus:
        R = base.scalar
        N = len(rows[0])
        s = Submodule.span(R, N, rows)
        if s.rank != r:
            raise RankMismatch(f"closure lattice has rank {s.rank}, expected {r}")
        return list(s.basis.rows), (lambda v: s.coords(v))
    Kb = base.generic()
    for chosen in combinations(range(len(rows)), r):
        sub = [rows[c] for c in chosen]
        if _generic_rank(Kb, sub) < r:
            continue
        solve = _cramer_solver(Kb, sub)
        if solve is None:
            continue
        coords_ok = True
        for v in rows:
            x = solve(v)
            if x is None or not all(base.contains(c) for c in x):
                coords_ok = False
                break
        if coords_ok:
            def coords(v, solve=solve):
                x = solve(v)
                if x is None or not all(base.contains(c) for c in x):
                    return None
                return x
            return sub, coords
    raise RankMismatch("no lattice basis among the generators")


def _cramer_solver(Kb: AffineBase, sub):
    """Solver for x @ sub = v over Kb (square after picking independent columns)."""
    r = len(sub)
    N = len(sub[0])
    for cols in combinations(range(N), r):
        sq = [[row[c] for c in cols] for row in sub]
        d = Kb.det(sq)
        if not d:
            continue

        def solve(v, cols=cols, sq=sq, d=d):
            x = []
            for i in range(r):
                mod = [list(row) for row in sq]
                mod[i] = [v[c] for c in cols]
                num = Kb.det(mod)
                q = num.exact_div(d) if isinstance(num, LPoly) else num / d
                if q is None:
                    return None
                x.append(q)
            # check the remaining columns
            for c in range(N):
                s = sum((x[i] * sub[i][c] for i in range(r)), Kb.zero)
                if s != v[c]:
                    return None
            return tuple(x)
        return solve
    return None


@dataclass
class ClosureResult:
    """Flat closure (Q, H, q) of a generic sub-triple, with its morphism into P."""

    triple: Triple
    group: object
    morphism: TripleMorphism


def flat_closure_triple(phi: TripleMorphism, P: Triple, step_budget: int = DEFAULT_STEP_BUDGET) -> ClosureResult:
    """Closure of a closed sub-triple yK -> P_K inside the flat triple P.

    ``phi`` goes from yK to generic_fiber_triple(P); alpha must be surjective
    over K and beta a closed immersion.
    """
    yK = phi.source
    PK = generic_fiber_triple(P)
    if phi.target != PK or not phi.verify().ok:
        raise WitnessFailure("embedding is not a morphism of triples into P_K")
    Gj = P.group
    closure = flat_closure_subgroup(GenericSubgroup.from_immersion(Gj, phi.beta))
    H = closure.model
    # basis of O(H)_K inside O(G_K): images of the complement rows under beta#
    WG = closure.subgroup.complement.change_ring(phi.beta.base) @ phi.beta.matrix
    B = P.base
    Kb = yK.base
    gens = [tuple(r) for r in phi.alpha.rows]
    basis, coords = _lattice_basis(B, gens, yK.rank, step_budget)
    r = len(basis)

    def need(v, what):
        c = coords(v)
        if c is None:
            raise NotHopfIdeal(f"closure not stable under {what}")
        return c

    mult = [[need(yK.mul(a, b), "multiplication") for b in basis] for a in basis]
    unit = need(yK.unit, "unit")
    # coaction: expand in basis (x) WG
    nH, nG = H.rank, yK.group.rank
    WGinv = _scalar_inverse(WG)
    coaction = []
    for a in basis:
        d = yK.coact(a)
        # d is sum over (p, g); change the A-part to the H basis: coefficient matrix r? -> use columns
        slices = [[Kb.zero] * yK.rank for _ in range(nH)]
        for pg, c in enumerate(d):
            if not c:
                continue
            p, g = divmod(pg, nG)
            for h in range(nH):
                w = WGinv[g][h]
                if w:
                    slices[h][p] = slices[h][p] + c * w
        cs = [need(tuple(s), "coaction") for s in slices]
        coaction.append(tuple(cs[h][b] for b in range(r) for h in range(nH)))
    point = None
    if yK.point is not None:
        point = [yK.point_value(a) for a in basis]
    Q = Triple.from_tables(B, H, mult, unit, coaction, point, name="closure")
    alpha = Matrix(B, [coords(g) for g in gens], r, coerce=False)
    mor = TripleMorphism(Q, P, alpha, closure.immersion)
    return ClosureResult(Q, closure, mor)


def _scalar_inverse(M: Matrix):
    return inverse(M).rows


@dataclass
class ExtensionResult:
    """Output of :func:`extend_torsor`: Y' under G' with its generic-fiber witnesses."""

    triple: Triple
    group: HopfAlgebra
    projection: HopfMorphism
    group_witness: Matrix            # O(G) -> O(G')_K, a Hopf isomorphism G'_K -> G
    torsor_witness: TripleMorphism   # Y'_K -> yK, an isomorphism of triples
    kernel_ideal: Submodule
    closure_ideal: Submodule


def extend_torsor(yK: Triple, P: Triple, gamma: HopfMorphism, phi: TripleMorphism | None = None,
                  degree_bound: int | None = None, step_budget: int = DEFAULT_STEP_BUDGET) -> ExtensionResult:
    """Extend the K-torsor yK (classified by gamma: (G_j)_K -> G through P) to a torsor over R.

    ``phi`` is the classifying morphism P_K -> yK over gamma.  When omitted,
    yK must literally equal the contracted product of P_K along gamma.
    """
    PK = generic_fiber_triple(P)
    Gj = P.group
    K = Gj.base.fraction_field()
    if phi is None:
        cp = contract(PK, gamma, degree_bound, step_budget)
        if cp.triple != yK:
            raise WitnessFailure("torsor is not the contracted product and no witness was given")
        phi = cp.canonical_morphism()
    if phi.source.rank != PK.rank or phi.target.rank != yK.rank or not phi.verify().ok:
        raise WitnessFailure("classifying morphism does not check")
    if phi.beta.matrix != gamma.matrix:
        raise WitnessFailure("classifying morphism lies over a different group morphism")
    if not is_triple_isomorphism(contraction_witness(phi, degree_bound)):
        raise WitnessFailure("yK is not the contracted product of P_K")
    N1 = kernel_ideal(gamma)
    closure = flat_closure_subgroup(GenericSubgroup.from_ideal(Gj, N1.basis.rows))
    if not is_normal(closure.subgroup):
        raise NotNormal("closure of ker(gamma) is not normal")
    Gp, proj = quotient_by_normal(Gj, closure.subgroup, name="G'")
    # gamma factors through the quotient: coordinates of gamma#(e_i) in the invariant basis
    wrows = []
    for row in gamma.matrix.rows:
        c = lattice_coords(proj.matrix, row)
        if c is None:
            raise WitnessFailure("gamma does not factor through G_j/N")
        wrows.append(c)
    w = Matrix(K, wrows, Gp.rank, coerce=False)
    GpK = Gp.base_change(K)
    if not is_hopf_isomorphism(gamma.target, GpK, w):
        raise WitnessFailure("G'_K is not isomorphic to G")
    cp = contract(P, proj, degree_bound, step_budget)
    Y = cp.triple
    YK = generic_fiber_triple(Y)
    beta = HopfMorphism(GpK, gamma.target, w)
    # isomorphism Y'_K -> yK; comorphism q -> sum phi#(q0) (x) w(q1), read in the basis of Y'
    basisK = cp.basis.generic()
    n2, ng = Gp.rank, yK.group.rank
    Bk = YK.base
    rows = []
    for j in range(yK.rank):
        v = [Bk.zero] * (PK.rank * n2)
        for pa, c in enumerate(yK.coact(yK.e(j))):
            if not c:
                continue
            p, a = divmod(pa, ng)
            for i, x in enumerate(phi.alpha.rows[p]):
                if not x:
                    continue
                for b, y in enumerate(w.rows[a]):
                    if y:
                        v[i * n2 + b] = v[i * n2 + b] + c * x * y
        co = basisK.coords(tuple(v))
        if co is None:
            raise WitnessFailure("image outside the contracted product")
        rows.append(co)
    alpha = Matrix(Bk, rows, YK.rank, coerce=False)
    wit = TripleMorphism(YK, yK, alpha, beta)
    if not is_triple_isomorphism(wit):
        raise WitnessFailure("generic fiber of Y' is not isomorphic to yK")
    return ExtensionResult(Y, Gp, proj, w, wit, N1, closure.ideal)
