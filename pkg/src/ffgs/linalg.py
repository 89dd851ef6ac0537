"""Exact linear algebra over the supported PIDs and their fraction fields.

Maps are stored in the row convention used throughout the package: a linear
map V -> W with dim V = a, dim W = b is an a x b matrix whose i-th row is the
image of the i-th basis vector, so ``v @ M`` applies the map to a row vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .rings import BaseRing, common_denominator


class Matrix:
    """Immutable dense matrix whose entries live in ``ring``.

    ``ring`` is anything exposing ``zero``, ``one`` and ``coerce``; the scalar
    rings of :mod:`ffgs.rings` and the Laurent base of :mod:`ffgs.torsors` both do.
    """

    __slots__ = ("ring", "rows", "ncols", "_nz")

    def __init__(self, ring, rows, ncols=None, *, coerce=True):
        if coerce:
            c = ring.coerce
            rows = tuple(tuple(c(x) for x in r) for r in rows)
        else:
            rows = tuple(r if isinstance(r, tuple) else tuple(r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.ring = ring
        self.rows = rows
        self.ncols = ncols
        self._nz = None

    # -- construction -------------------------------------------------
    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero, ring.one
        return cls(ring, [tuple(o if i == j else z for j in range(n)) for i in range(n)], n, coerce=False)

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero
        return cls(ring, [(z,) * ncols for _ in range(nrows)], ncols, coerce=False)

    @classmethod
    def column(cls, ring, values):
        return cls(ring, [(v,) for v in values], 1)

    # -- basic protocol -----------------------------------------------
    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return (len(self.rows), self.ncols)

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self.rows[i][j]
        return self.rows[idx]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def tolist(self):
        return [list(r) for r in self.rows]

    def _nonzero(self):
        if self._nz is None:
            self._nz = [[(j, x) for j, x in enumerate(r) if x] for r in self.rows]
        return self._nz

    # -- arithmetic ---------------------------------------------------
    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        bnz = other._nonzero()
        z = self.ring.zero
        out = []
        for r in self.rows:
            acc = {}
            for k, a in enumerate(r):
                if not a:
                    continue
                for j, b in bnz[k]:
                    acc[j] = acc[j] + a * b if j in acc else a * b
            row = [z] * other.ncols
            for j, v in acc.items():
                row[j] = v
            out.append(tuple(row))
        return Matrix(self.ring, out, other.ncols, coerce=False)

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(self.ring, [tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)],
                      self.ncols, coerce=False)

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix(self.ring, [tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)],
                      self.ncols, coerce=False)

    def __neg__(self):
        return Matrix(self.ring, [tuple(-a for a in r) for r in self.rows], self.ncols, coerce=False)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def scale(self, c):
        return Matrix(self.ring, [tuple(c * a for a in r) for r in self.rows], self.ncols, coerce=False)

    @property
    def T(self):
        if not self.rows:
            return Matrix(self.ring, [() for _ in range(self.ncols)], 0, coerce=False)
        if not self.ncols:
            return Matrix(self.ring, [], self.nrows, coerce=False)
        return Matrix(self.ring, list(zip(*self.rows)), self.nrows, coerce=False)

    def kron(self, other):
        """Kronecker product; in the row convention this is the tensor product of maps."""
        z = self.ring.zero
        out = []
        for r in self.rows:
            for s in other.rows:
                row = []
                for a in r:
                    if a:
                        row.extend(a * b if b else z for b in s)
                    else:
                        row.extend([z] * len(s))
                out.append(tuple(row))
        return Matrix(self.ring, out, self.ncols * other.ncols, coerce=False)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        return Matrix(self.ring, [r + s for r, s in zip(self.rows, other.rows)], self.ncols + other.ncols,
                      coerce=False)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("vstack needs equal column counts")
        return Matrix(self.ring, self.rows + other.rows, self.ncols, coerce=False)

    def select_rows(self, idx):
        return Matrix(self.ring, [self.rows[i] for i in idx], self.ncols, coerce=False)

    def select_cols(self, idx):
        idx = list(idx)
        return Matrix(self.ring, [tuple(r[j] for j in idx) for r in self.rows], len(idx), coerce=False)

    def is_zero(self):
        return not any(x for r in self.rows for x in r)

    def change_ring(self, ring):
        return Matrix(ring, self.rows, self.ncols)

    def map(self, f, ring=None):
        ring = ring or self.ring
        return Matrix(ring, [tuple(f(x) for x in r) for r in self.rows], self.ncols, coerce=False)


def vecmat(v, m: Matrix):
    """Row vector times matrix, as a tuple."""
    z = m.ring.zero
    nz = m._nonzero()
    acc = {}
    for k, a in enumerate(v):
        if not a:
            continue
        for j, b in nz[k]:
            acc[j] = acc[j] + a * b if j in acc else a * b
    out = [z] * m.ncols
    for j, x in acc.items():
        out[j] = x
    return tuple(out)


def integral(ring: BaseRing, m: Matrix) -> bool:
    return all(ring.contains(x) for r in m.rows for x in r)


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

def _row_combine(rows, i, j, s, t, u, v):
    ri, rj = rows[i], rows[j]
    rows[i] = [s * a + t * b for a, b in zip(ri, rj)]
    rows[j] = [u * a + v * b for a, b in zip(ri, rj)]


def _check_integral(ring, m):
    if not ring.is_field and not integral(ring, m):
        raise ValueError(f"matrix entries must lie in {ring}")


def hnf(m: Matrix):
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U @ m == H``, U invertible over R, pivots
    normalized (positive over Z, powers of p over Z_(p), 1 over a field) and
    entries above each pivot reduced.  Zero rows come last.  Over a field this
    is the reduced row echelon form.
    """
    ring = m.ring
    _check_integral(ring, m)
    n = m.nrows
    H = [list(r) for r in m.rows]
    U = [list(r) for r in Matrix.identity(ring, n).rows]
    r = 0
    for c in range(m.ncols):
        if r == n:
            break
        for i in range(r + 1, n):
            if not H[i][c]:
                continue
            if not H[r][c]:
                H[r], H[i] = H[i], H[r]
                U[r], U[i] = U[i], U[r]
                continue
            g, s, t, u, v = ring.gcdex(H[r][c], H[i][c])
            _row_combine(H, r, i, s, t, u, v)
            _row_combine(U, r, i, s, t, u, v)
        piv = H[r][c]
        if not piv:
            continue
        unit = ring.unit_part(piv)
        if unit != ring.one:
            inv = ring.one / unit
            H[r] = [inv * a for a in H[r]]
            U[r] = [inv * a for a in U[r]]
            piv = H[r][c]
        for i in range(r):
            if H[i][c]:
                q = ring.reduce_quotient(H[i][c], piv)
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return Matrix(ring, H, m.ncols, coerce=False), Matrix(ring, U, n, coerce=False)


def snf(m: Matrix):
    """Smith normal form ``(D, U, V)`` with ``U @ m @ V == D``.

    D is diagonal with normalized entries and d_i | d_(i+1); U and V are
    invertible over R.
    """
    ring = m.ring
    _check_integral(ring, m)
    nr, nc = m.shape
    A = [list(r) for r in m.rows]
    U = [list(r) for r in Matrix.identity(ring, nr).rows]
    Vt = [list(r) for r in Matrix.identity(ring, nc).rows]  # rows of V^T

    def size(x):
        if ring.kind == "integers":
            return abs(x)
        if ring.kind == "localized":
            return ring.valuation(x)
        return 0

    def col_ops(j, k, s, t, u, v):
        # columns j, k of A become s*Aj + t*Ak and u*Aj + v*Ak
        for row in A:
            a, b = row[j], row[k]
            row[j], row[k] = s * a + t * b, u * a + v * b
        _row_combine(Vt, j, k, s, t, u, v)

    for t_ in range(min(nr, nc)):
        # pick the pivot once; afterwards every gcd step strictly shrinks it
        best = None
        for i in range(t_, nr):
            for j in range(t_, nc):
                if A[i][j] and (best is None or size(A[i][j]) < size(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t_:
            A[t_], A[i] = A[i], A[t_]
            U[t_], U[i] = U[i], U[t_]
        if j != t_:
            for row in A:
                row[t_], row[j] = row[j], row[t_]
            Vt[t_], Vt[j] = Vt[j], Vt[t_]
        while True:
            dirty = False
            for i in range(t_ + 1, nr):
                if A[i][t_]:
                    g, s, t, u, v = ring.gcdex(A[t_][t_], A[i][t_])
                    _row_combine(A, t_, i, s, t, u, v)
                    _row_combine(U, t_, i, s, t, u, v)
            for j in range(t_ + 1, nc):
                if A[t_][j]:
                    g, s, t, u, v = ring.gcdex(A[t_][t_], A[t_][j])
                    col_ops(t_, j, s, t, u, v)
                    dirty = True
            if dirty and any(A[i][t_] for i in range(t_ + 1, nr)):
                continue
            piv = A[t_][t_]
            bad = None
            for i in range(t_ + 1, nr):
                for j in range(t_ + 1, nc):
                    if not ring.divides(piv, A[i][j]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[t_] = [a + b for a, b in zip(A[t_], A[bad])]
            U[t_] = [a + b for a, b in zip(U[t_], U[bad])]
        if t_ < nr and t_ < nc and A[t_][t_]:
            unit = ring.unit_part(A[t_][t_])
            if unit != ring.one:
                inv = ring.one / unit
                A[t_] = [inv * a for a in A[t_]]
                U[t_] = [inv * a for a in U[t_]]
    D = Matrix(ring, A, nc, coerce=False)
    return D, Matrix(ring, U, nr, coerce=False), Matrix(ring, Vt, nc, coerce=False).T


# ---------------------------------------------------------------------------
# Field-level helpers
# ---------------------------------------------------------------------------

def rank(m: Matrix) -> int:
    """Rank over the fraction field."""
    K = m.ring.fraction_field()
    H, _ = hnf(m.change_ring(K))
    return sum(1 for r in H.rows if any(r))


def det(m: Matrix):
    """Exact determinant by Gaussian elimination over the fraction field."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    K = m.ring.fraction_field()
    A = [list(r) for r in m.rows]
    n = len(A)
    d = K.one
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return K.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        p = A[c][c]
        d = d * p
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / p
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return d


def inverse(m: Matrix) -> Matrix:
    """Inverse over the fraction field (raises if singular)."""
    n = m.nrows
    K = m.ring.fraction_field()
    aug = m.change_ring(K).hstack(Matrix.identity(K, n))
    H, _ = hnf(aug)
    left = H.select_cols(range(n))
    if left != Matrix.identity(K, n):
        raise ZeroDivisionError("singular matrix")
    return Matrix(m.ring, H.select_cols(range(n, 2 * n)).rows, n, coerce=False)


def is_unimodular(m: Matrix) -> bool:
    """Square, integral and with unit determinant over R."""
    ring = m.ring
    return m.nrows == m.ncols and integral(ring, m) and ring.is_unit(det(m))


def clear_denominators(ring: BaseRing, rows):
    """Scale each row into R^n (does not change spans over K)."""
    out = []
    for r in rows:
        d = common_denominator(ring, r)
        out.append(tuple(d * x for x in r))
    return out


# ---------------------------------------------------------------------------
# Submodules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Submodule:
    """Finitely generated R-submodule of K^n, stored by its canonical HNF basis.

    Two submodules are equal exactly when their ``basis`` matrices are equal.
    """

    ring: BaseRing
    n: int
    basis: Matrix

    @classmethod
    def span(cls, ring: BaseRing, n: int, rows) -> "Submodule":
        rows = [tuple(ring.coerce(x) for x in r) for r in rows]
        rows = [r for r in rows if any(r)]
        if not rows:
            return cls(ring, n, Matrix(ring, [], n, coerce=False))
        d = common_denominator(ring, [x for r in rows for x in r])
        H, _ = hnf(Matrix(ring, [tuple(d * x for x in r) for r in rows], n, coerce=False))
        inv = ring.one / d
        basis = [tuple(inv * x for x in r) for r in H.rows if any(r)]
        return cls(ring, n, Matrix(ring, basis, n, coerce=False))

    @classmethod
    def full(cls, ring, n):
        return cls(ring, n, Matrix.identity(ring, n))

    @classmethod
    def zero(cls, ring, n):
        return cls(ring, n, Matrix(ring, [], n, coerce=False))

    @property
    def rank(self) -> int:
        return self.basis.nrows

    @property
    def rows(self):
        return self.basis.rows

    @cached_property
    def _pivots(self):
        return [next(j for j, x in enumerate(r) if x) for r in self.basis.rows]

    def is_integral(self) -> bool:
        return integral(self.ring, self.basis)

    def coords(self, v):
        """Coordinates of ``v`` over R in the HNF basis, or ``None`` if v is not in the module."""
        ring = self.ring
        v = [ring.coerce(x) for x in v]
        out = []
        for row, j in zip(self.basis.rows, self._pivots):
            c = v[j] / row[j] if v[j] else ring.zero
            if c and not ring.contains(c):
                return None
            out.append(c)
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        if any(v):
            return None
        return tuple(out)

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def issubset(self, other: "Submodule") -> bool:
        return all(other.contains(r) for r in self.basis.rows)

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule.span(self.ring, self.n, self.basis.rows + other.basis.rows)

    def saturate(self) -> "Submodule":
        return saturate(self)

    def is_saturated(self) -> bool:
        return self.ring.is_field or saturate(self) == self

    def generic(self) -> "Submodule":
        """The K-span, as a submodule over the fraction field."""
        K = self.ring.fraction_field()
        return Submodule.span(K, self.n, self.basis.rows)

    def change_ring(self, ring) -> "Submodule":
        return Submodule.span(ring, self.n, self.basis.rows)


def kernel(m: Matrix) -> Submodule:
    """Left kernel {v : v @ m = 0} over R; automatically saturated in R^n."""
    ring = m.ring
    # scaling a column does not change the left kernel
    if m.nrows and m.ncols:
        m = Matrix(ring, clear_denominators(ring, m.T.rows), m.nrows, coerce=False).T
    H, U = hnf(m)
    r = sum(1 for row in H.rows if any(row))
    return Submodule.span(ring, m.nrows, U.rows[r:])


def image(m: Matrix) -> Submodule:
    """Row span of ``m`` over R (not saturated)."""
    return Submodule.span(m.ring, m.ncols, m.rows)


def saturate(s: Submodule) -> Submodule:
    """Smallest saturated submodule containing ``s``: (s tensor K) intersected with R^n."""
    ring = s.ring
    if ring.is_field:
        return s
    n = s.n
    if s.rank == 0:
        return Submodule.zero(ring, n)
    K = ring.fraction_field()
    B = Matrix(K, s.basis.rows, n, coerce=False)
    # columns annihilating the K-span of s
    ann = kernel(B.T)
    if ann.rank == 0:
        return Submodule.full(ring, n)
    C = Matrix(ring, clear_denominators(ring, ann.basis.rows), n, coerce=False).T
    return kernel(C)


def solve_membership(v, s: Submodule):
    """Coordinates of v in s over R, or None when v is not in s."""
    return s.coords(v)


def quotient_basis(s: Submodule):
    """Complete a basis of a saturated submodule to a basis of R^n.

    Returns ``(W, r)`` where W is n x n invertible over R, its first r rows
    span ``s`` and the remaining rows project to a basis of R^n / s.
    """
    ring = s.ring
    n, r = s.n, s.rank
    if not s.is_integral():
        raise ValueError("quotient of a non-integral lattice")
    piv = s._pivots
    if all(ring.is_unit(row[j]) for row, j in zip(s.basis.rows, piv)):
        rest = [j for j in range(n) if j not in piv]
        comp = [tuple(ring.one if k == j else ring.zero for k in range(n)) for j in rest]
        W = Matrix(ring, s.basis.rows + tuple(comp), n, coerce=False)
        return W, r
    if r == 0:
        return Matrix.identity(ring, n), 0
    D, U, V = snf(s.basis)
    if any(not ring.is_unit(D[i, i]) for i in range(r)):
        raise ValueError("submodule is not saturated; quotient has torsion")
    W = inverse(V)
    W = Matrix(ring, (s.basis.rows + W.rows[r:]), n, coerce=False)
    return W, r


def elementary_divisors(s: Submodule):
    """Nonzero invariant factors of R^n / s (torsion diagnosis)."""
    if s.rank == 0:
        return []
    D, _, _ = snf(Matrix(s.ring, clear_denominators(s.ring, s.basis.rows), s.n, coerce=False))
    return [D[i, i] for i in range(min(D.shape)) if D[i, i]]


def lattice_coords(basis: Matrix, v):
    """Solve x @ basis = v over the fraction field for a full-row-rank basis (None if no solution)."""
    K = basis.ring.fraction_field()
    s = Submodule.span(K, basis.ncols, basis.rows)
    if s.rank != basis.nrows:
        raise ValueError("basis rows are dependent")
    aug = Matrix(K, basis.rows, basis.ncols, coerce=False).T.hstack(Matrix.column(K, v))
    H, _ = hnf(aug)
    nb = basis.nrows
    sol = [K.zero] * nb
    for row in H.rows:
        lead = next((j for j, x in enumerate(row) if x), None)
        if lead is None:
            continue
        if lead == nb:
            return None
        sol[lead] = row[nb]
    return tuple(sol)


def all_tuples(values, k):
    return product(values, repeat=k)
