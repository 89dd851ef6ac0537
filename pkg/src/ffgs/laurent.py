"""Laurent polynomials in one variable u over Q or F_p, and small matrix routines over them.

Used as the coordinate ring of the split torus line Spec R[u, 1/u].  Values
are immutable; a polynomial stores its nonzero coefficients by exponent.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import BaseRing, Mod


class LPoly:
    __slots__ = ("c", "field", "_h")

    def __init__(self, coeffs: dict, field: BaseRing):
        self.c = {k: v for k, v in coeffs.items() if v}
        self.field = field
        self._h = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, x, field):
        return cls({0: field.coerce(x)}, field)

    @classmethod
    def monomial(cls, coeff, k, field):
        return cls({k: field.coerce(coeff)}, field)

    @classmethod
    def from_list(cls, coeffs, field, offset=0):
        return cls({offset + i: field.coerce(x) for i, x in enumerate(coeffs)}, field)

    def _lift(self, other):
        if isinstance(other, LPoly):
            return other
        if isinstance(other, (int, Fraction, Mod)):
            return LPoly({0: self.field.coerce(other)}, self.field)
        return None

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        c = dict(self.c)
        for k, v in o.c.items():
            c[k] = c[k] + v if k in c else v
        return LPoly(c, self.field)

    __radd__ = __add__

    def __neg__(self):
        return LPoly({k: -v for k, v in self.c.items()}, self.field)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        c = {}
        for i, a in self.c.items():
            for j, b in o.c.items():
                k = i + j
                c[k] = c[k] + a * b if k in c else a * b
        return LPoly(c, self.field)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ZeroDivisionError("only monomials are invertible")
            (e, v), = self.c.items()
            return LPoly({-e * (-k): (self.field.one / v) ** (-k)}, self.field)
        out = LPoly.const(1, self.field)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        q = self.exact_div(o)
        if q is None:
            raise ArithmeticError(f"{self} is not divisible by {o}")
        return q

    def exact_div(self, other: "LPoly"):
        """Quotient in K[u, 1/u], or None when it does not exist."""
        if not other.c:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self.c:
            return self
        if other.is_monomial():
            (e, v), = other.c.items()
            inv = self.field.one / v
            return LPoly({k - e: x * inv for k, x in self.c.items()}, self.field)
        # shift both to ordinary polynomials with nonzero constant term for the divisor
        a_lo, b_lo = min(self.c), min(other.c)
        A = {k - a_lo: v for k, v in self.c.items()}
        Bp = {k - b_lo: v for k, v in other.c.items()}
        db = max(Bp)
        lead = Bp[db]
        Q = {}
        while A:
            da = max(A)
            if da < db:
                return None
            f = A[da] / lead
            Q[da - db] = f
            for k, v in Bp.items():
                kk = k + da - db
                nv = A.get(kk, self.field.zero) - f * v
                if nv:
                    A[kk] = nv
                else:
                    A.pop(kk, None)
        return LPoly({k + a_lo - b_lo: v for k, v in Q.items()}, self.field)

    # -- predicates and accessors -------------------------------------
    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, LPoly) else other
        if o is None:
            return False
        return self.c == o.c

    def __hash__(self):
        if self._h is None:
            self._h = hash(tuple(sorted((k, hash(v)) for k, v in self.c.items())))
        return self._h

    def is_monomial(self) -> bool:
        return len(self.c) == 1

    def is_constant(self) -> bool:
        return not self.c or set(self.c) == {0}

    def constant(self):
        return self.c.get(0, self.field.zero)

    @property
    def degrees(self):
        if not self.c:
            return (0, 0)
        return (min(self.c), max(self.c))

    def span(self) -> int:
        lo, hi = self.degrees
        return max(abs(lo), abs(hi))

    def __call__(self, value):
        z = self.field.zero
        for k, v in self.c.items():
            z = z + v * (value ** k if k >= 0 else (self.field.one / value) ** (-k))
        return z

    def coefficients(self):
        """(offset, list of coefficients) covering the support."""
        if not self.c:
            return 0, []
        lo, hi = self.degrees
        return lo, [self.c.get(k, self.field.zero) for k in range(lo, hi + 1)]

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for k in sorted(self.c):
            v = self.c[k]
            s = self.field.to_str(v)
            if k == 0:
                terms.append(s)
            else:
                mon = "u" if k == 1 else f"u^{k}"
                terms.append(mon if s == "1" else f"{s}*{mon}")
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# Matrices of Laurent polynomials (lists of lists)
# ---------------------------------------------------------------------------

def bareiss_det(rows, zero, one):
    """Fraction-free determinant; entries need +, -, * and exact ``/``."""
    A = [list(r) for r in rows]
    n = len(A)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not A[k][k]:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return zero
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
            A[i][k] = zero
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return d if sign == 1 else -d


def berkowitz(rows, zero, one):
    """Characteristic polynomial coefficients [c_0, ..., c_n] of det(lam*I - M), division free."""
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        return [one]
    # vector of coefficients, highest degree first
    C = [one, -M[0][0]]
    for r in range(1, n):
        # partition: a = M[r][r], R = M[r][:r], S = column M[:r][r], A = M[:r][:r]
        A = [row[:r] for row in M[:r]]
        R = M[r][:r]
        S = [M[i][r] for i in range(r)]
        a = M[r][r]
        # Toeplitz column: 1, -a, -R S, -R A S, -R A^2 S, ...
        col = [one, -a]
        v = S
        for _ in range(r):
            col.append(-sum((x * y for x, y in zip(R, v)), zero))
            v = [sum((A[i][j] * v[j] for j in range(r)), zero) for i in range(r)]
        # multiply lower-triangular Toeplitz (r+2 x r+1) by C
        newC = []
        for i in range(r + 2):
            s = zero
            for j in range(min(i, r) + 1):
                if i - j < len(col) and j < len(C):
                    s = s + col[i - j] * C[j]
            newC.append(s)
        C = newC
    return list(reversed(C))
