"""Exact scalar rings: Z, Z localized at a prime, Q and F_p.

Elements of Z, Z_(p) and Q are ``fractions.Fraction`` values; membership in
the smaller rings is a predicate on the denominator.  Elements of F_p are
``Mod`` instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Mod:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError("mixing residues of different primes")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} is not defined mod {self.p}")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) / self

    def __pow__(self, k: int):
        if k < 0:
            return Mod(1, self.p) / Mod(pow(self.v, -k, self.p), self.p)
        return Mod(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


KINDS = ("integers", "localized", "rationals", "prime_field")


@dataclass(frozen=True)
class BaseRing:
    """A principal ideal domain R together with its fraction field.

    ``kind`` is one of ``integers`` (Z), ``localized`` (Z_(p)),
    ``rationals`` (Q) or ``prime_field`` (F_p).
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown base kind {self.kind!r}")
        if self.kind in ("localized", "prime_field"):
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"{self.kind} needs a prime p, got {self.p!r}")
        elif self.p is not None:
            raise ValueError(f"{self.kind} takes no prime")

    # -- constructors -------------------------------------------------
    @classmethod
    def ZZ(cls):
        return cls("integers")

    @classmethod
    def QQ(cls):
        return cls("rationals")

    @classmethod
    def localized(cls, p):
        return cls("localized", p)

    @classmethod
    def GF(cls, p):
        return cls("prime_field", p)

    # -- structure ----------------------------------------------------
    @property
    def is_field(self) -> bool:
        return self.kind in ("rationals", "prime_field")

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "prime_field" else 0

    def fraction_field(self) -> "BaseRing":
        if self.is_field:
            return self
        return BaseRing.QQ()

    @property
    def zero(self):
        return Mod(0, self.p) if self.kind == "prime_field" else Fraction(0)

    @property
    def one(self):
        return Mod(1, self.p) if self.kind == "prime_field" else Fraction(1)

    def coerce(self, x):
        """Convert ``x`` (int, Fraction, Mod, or ``"a/b"`` string) into this ring's field."""
        if self.kind == "prime_field":
            if isinstance(x, Mod):
                if x.p != self.p:
                    raise ValueError(f"residue mod {x.p} in F_{self.p}")
                return x
            if isinstance(x, str):
                x = Fraction(x)
            if isinstance(x, (int, Fraction)):
                return Mod(0, self.p) + x
            raise TypeError(f"cannot coerce {x!r} into F_{self.p}")
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, str)):
            return Fraction(x)
        if isinstance(x, Mod):
            raise TypeError("residue class in a characteristic-zero ring")
        raise TypeError(f"cannot coerce {x!r}")

    def contains(self, x) -> bool:
        """Membership of a field element in R."""
        if self.kind == "integers":
            return x.denominator == 1
        if self.kind == "localized":
            return x.denominator % self.p != 0
        return True

    def valuation(self, x) -> int:
        """p-adic valuation (localized kind only); zero maps to a large sentinel."""
        if not x:
            return 1 << 30
        v = 0
        n, d = x.numerator, x.denominator
        while n % self.p == 0:
            n //= self.p
            v += 1
        while d % self.p == 0:
            d //= self.p
            v -= 1
        return v

    def is_unit(self, x) -> bool:
        if not x:
            return False
        if self.kind == "integers":
            return x in (1, -1)
        if self.kind == "localized":
            return x.numerator % self.p != 0 and x.denominator % self.p != 0
        return True

    def unit_part(self, x):
        """Unit u such that x/u is the canonical associate of x (1 for zero)."""
        if not x:
            return self.one
        if self.kind == "integers":
            return Fraction(1) if x > 0 else Fraction(-1)
        if self.kind == "localized":
            return x / Fraction(self.p) ** self.valuation(x)
        return x

    def gcdex(self, a, b):
        """Return ``(g, s, t, u, v)`` with s*a + t*b = g, u*a + v*b = 0 and
        [[s, t], [u, v]] invertible over R.  Requires ``a`` nonzero or ``b`` nonzero."""
        if self.kind == "integers":
            x, y = int(a), int(b)
            if x and y % x == 0:
                # keep a in place when it already divides b, so elimination makes progress
                sg = 1 if x > 0 else -1
                return Fraction(abs(x)), Fraction(sg), Fraction(0), Fraction(-y // x), Fraction(1)
            g, s, t = _xgcd(x, y)
            return Fraction(g), Fraction(s), Fraction(t), Fraction(-y // g), Fraction(x // g)
        if self.kind == "localized":
            if a and (not b or self.valuation(a) <= self.valuation(b)):
                return a, self.one, self.zero, -b / a, self.one
            return b, self.zero, self.one, self.one, -a / b
        if a:
            return a, self.one, self.zero, -b / a, self.one
        return b, self.zero, self.one, self.one, -a / b

    def divides(self, a, b) -> bool:
        """Does a divide b in R?"""
        if not a:
            return not b
        return self.contains(b / a)

    def reduce_quotient(self, a, pivot):
        """Quotient q such that a - q*pivot is the canonical remainder mod ``pivot``.

        ``pivot`` must already be normalized (positive, a power of p, or 1).
        """
        if self.kind == "integers":
            return Fraction(int(a) // int(pivot))
        if self.kind == "localized":
            k = self.valuation(pivot)
            m = self.p ** k
            r = a.numerator * pow(a.denominator, -1, m) % m if m > 1 else 0
            return (a - r) / pivot
        return a / pivot

    def to_str(self, x) -> str:
        if isinstance(x, Mod):
            return str(x.v)
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def to_dict(self) -> dict:
        d = {"ring": self.kind}
        if self.p is not None:
            d["p"] = self.p
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BaseRing":
        return cls(d["ring"], d.get("p"))

    def __str__(self):
        return {
            "integers": "Z",
            "rationals": "Q",
            "localized": f"Z_({self.p})",
            "prime_field": f"F_{self.p}",
        }[self.kind]


def _xgcd(a: int, b: int):
    """Extended gcd with nonnegative g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def common_denominator(ring: BaseRing, values) -> Fraction:
    """Scalar d such that d*x lies in R for every x in ``values``.

    For Z_(p) only the p-part of the denominators matters, so d is a power of p;
    this keeps lattice normal forms canonical under rescaling.
    """
    if ring.is_field:
        return ring.one
    if ring.kind == "integers":
        d = 1
        for x in values:
            den = x.denominator
            d = d * den // gcd(d, den)
        return Fraction(d)
    k = 0
    for x in values:
        if x:
            k = max(k, -ring.valuation(x))
    return Fraction(ring.p) ** k
