"""Canonical group schemes, morphisms and torsors used by tests, docs and the CLI.

Every constructor returns a verified object; :func:`catalog` lists the whole
set together with the properties the test-suite asserts about each entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .hopf import HopfAlgebra, HopfMorphism, compose, identity_morphism, product
from .linalg import Matrix
from .rings import BaseRing
from .torsors import AffineBase, Triple, trivial_triple


def _vec(n, entries):
    out = [0] * n
    for i, c in entries:
        out[i] += c
    return out


# ---------------------------------------------------------------------------
# Group schemes
# ---------------------------------------------------------------------------

def mu_n(base: BaseRing, n: int) -> HopfAlgebra:
    """O(mu_n) = base[x]/(x^n - 1) in the monomial basis 1, x, ..., x^(n-1)."""
    if n < 1:
        raise ValueError("n must be positive")
    mult = [[_vec(n, [((i + j) % n, 1)]) for j in range(n)] for i in range(n)]
    comult = [_vec(n * n, [(i * n + i, 1)]) for i in range(n)]
    anti = [_vec(n, [((-i) % n, 1)]) for i in range(n)]
    return HopfAlgebra.from_tables(base, mult, _vec(n, [(0, 1)]), comult, [1] * n, anti,
                                   name=f"mu_{n}")


def constant_cyclic(base: BaseRing, n: int) -> HopfAlgebra:
    """Functions on Z/n in the idempotent basis e_0, ..., e_(n-1)."""
    if n < 1:
        raise ValueError("n must be positive")
    mult = [[_vec(n, [(i, 1)] if i == j else []) for j in range(n)] for i in range(n)]
    comult = [_vec(n * n, [(i * n + (k - i) % n, 1) for i in range(n)]) for k in range(n)]
    anti = [_vec(n, [((-k) % n, 1)]) for k in range(n)]
    return HopfAlgebra.from_tables(base, mult, [1] * n, comult, _vec(n, [(0, 1)]), anti,
                                   name=f"Z/{n}")


def alpha_p(base: BaseRing, p: int | None = None) -> HopfAlgebra:
    """O(alpha_p) = F_p[x]/(x^p) with x primitive."""
    p = p or base.p
    if base.kind != "prime_field" or base.p != p:
        raise ValueError("alpha_p lives over F_p")
    mult = [[_vec(p, [(i + j, 1)] if i + j < p else []) for j in range(p)] for i in range(p)]
    comult = [_vec(p * p, [(i * p + (k - i), comb(k, i)) for i in range(k + 1)]) for k in range(p)]
    anti = [_vec(p, [(k, (-1) ** k)]) for k in range(p)]
    return HopfAlgebra.from_tables(base, mult, _vec(p, [(0, 1)]), comult, _vec(p, [(0, 1)]), anti,
                                   name=f"alpha_{p}")


def tate_oort_p2(b: int, base: BaseRing | None = None) -> HopfAlgebra:
    """R[x]/(x^2 - b x) with Delta(x) = x(x)1 + 1(x)x - (2/b) x(x)x, over Z_(2) by default.

    b = 1 is the constant group Z/2 and b = 2 is mu_2.
    """
    if b not in (1, 2):
        raise ValueError("only b in {1, 2} ships")
    base = base or BaseRing.localized(2)
    mult = [[[1, 0], [0, 1]], [[0, 1], [0, b]]]
    c = Fraction(-2, b)
    comult = [[1, 0, 0, 0], [0, 1, 1, c]]
    return HopfAlgebra.from_tables(base, mult, [1, 0], comult, [1, 0], [[1, 0], [0, 1]],
                                   name=f"TO_{b}")


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

def mu_power(base: BaseRing, n: int, m: int, k: int) -> HopfMorphism:
    """mu_n -> mu_m, z -> z^k, with comorphism x -> x^k (well defined when n divides m*k)."""
    if (m * k) % n:
        raise ValueError("z -> z^k does not land in mu_m")
    src, tgt = mu_n(base, n), mu_n(base, m)
    rows = [_vec(n, [((i * k) % n, 1)]) for i in range(m)]
    return HopfMorphism(src, tgt, Matrix(base, rows, n))


def mu_inclusion(base: BaseRing, d: int, n: int) -> HopfMorphism:
    """mu_d inside mu_n (d | n): comorphism x -> x."""
    return mu_power(base, d, n, 1)


def cyclic_map(base: BaseRing, n: int, m: int, k: int) -> HopfMorphism:
    """Z/n -> Z/m, a -> k a; comorphism e_j -> sum of e_a with k a = j mod m."""
    if (n * k) % m:
        raise ValueError("a -> k a is not well defined")
    src, tgt = constant_cyclic(base, n), constant_cyclic(base, m)
    rows = [_vec(n, [(a, 1) for a in range(n) if (k * a) % m == j]) for j in range(m)]
    return HopfMorphism(src, tgt, Matrix(base, rows, n))


def mu2_z2(base: BaseRing | None = None):
    """O(mu_2 x Z/2) together with its two projections."""
    from .hopf import projections
    base = base or BaseRing.localized(2)
    A, B = mu_n(base, 2), constant_cyclic(base, 2)
    AB = product(A, B, name="mu_2xZ/2")
    p1, p2 = projections(A, B, AB)
    return AB, p1, p2


def twisted_character(base: BaseRing | None = None) -> HopfMorphism:
    """mu_2 x Z/2 -> mu_2, (z, a) -> z * (-1)^a, defined over Z_(2)."""
    base = base or BaseRing.localized(2)
    AB, p1, _ = mu2_z2(base)
    # comorphism 1 -> 1 (x) (e0 + e1), x -> x (x) (e0 - e1)
    return HopfMorphism(AB, p1.target, Matrix(base, [[1, 1, 0, 0], [0, 0, 1, -1]], 4))


def morphism_catalog(base: BaseRing | None = None):
    """At least ten morphisms among the mu_n and Z/n used for factorization tests."""
    base = base or BaseRing.QQ()
    out = {
        "id_mu4": identity_morphism(mu_n(base, 4)),
        "square_mu4": mu_power(base, 4, 4, 2),
        "mu4_to_mu2": mu_power(base, 4, 2, 2),
        "mu2_in_mu4": mu_inclusion(base, 2, 4),
        "cube_mu6": mu_power(base, 6, 6, 3),
        "mu6_to_mu3": mu_power(base, 6, 3, 2),
        "mu3_in_mu6": mu_inclusion(base, 3, 6),
        "inverse_mu5": mu_power(base, 5, 5, 4),
        "double_z4": cyclic_map(base, 4, 4, 2),
        "z6_to_z2": cyclic_map(base, 6, 2, 1),
        "z2_in_z6": cyclic_map(base, 2, 6, 3),
        "z12_to_z4": cyclic_map(base, 12, 4, 1),
        "z3_trivial": cyclic_map(base, 3, 1, 0),
        "triple_mu12": mu_power(base, 12, 12, 3),
    }
    out["mu2_in_mu4_then_square"] = compose(mu_power(base, 4, 4, 2), mu_inclusion(base, 2, 4))
    return out


# ---------------------------------------------------------------------------
# Torsors
# ---------------------------------------------------------------------------

def kummer_triple(base: AffineBase, n: int, b, point=None, group: HopfAlgebra | None = None) -> Triple:
    """y^n = b under mu_n, delta(y^i) = y^i (x) x^i, basis 1, y, ..., y^(n-1).

    ``point`` is the value y(1) at the section; by default 1 when b evaluates to 1
    there and no point otherwise.
    """
    b = base.coerce(b)
    G = group or mu_n(base.scalar, n)
    z, o = base.zero, base.one

    def mono(k):
        v = [z] * n
        v[k % n] = b if k >= n else o
        return v

    mult = [[mono(i + j) for j in range(n)] for i in range(n)]
    unit = [o] + [z] * (n - 1)
    coaction = []
    for i in range(n):
        row = [z] * (n * n)
        row[i * n + i] = o
        coaction.append(row)
    if point is None and base.section(b) == base.coeff_field.one:
        point = 1
    pt = None if point is None else [base.coeff_field.coerce(point) ** i for i in range(n)]
    return Triple.from_tables(base, G, mult, unit, coaction, pt, name=f"kummer({n},{b})")


def artin_schreier_triple(base: AffineBase, b, point=None) -> Triple:
    """y^p - y = b under Z/p over a base of characteristic p; delta(y) = sum (y + k) (x) e_k."""
    p = base.scalar.characteristic
    if not p:
        raise ValueError("Artin-Schreier torsors need characteristic p")
    b = base.coerce(b)
    G = constant_cyclic(base.scalar, p)
    z, o = base.zero, base.one
    F = base.coeff_field

    def reduce(poly):
        # poly: list of coefficients in y of degree < 2p - 1; y^p = y + b
        poly = list(poly) + [z] * max(0, 2 * p - 1 - len(poly))
        for d in range(len(poly) - 1, p - 1, -1):
            c = poly[d]
            if c:
                poly[d] = z
                poly[d - p + 1] = poly[d - p + 1] + c
                poly[d - p] = poly[d - p] + c * b
        return poly[:p]

    mult = [[reduce([o if k == i + j else z for k in range(i + j + 1)]) for j in range(p)]
            for i in range(p)]
    unit = [o] + [z] * (p - 1)
    coaction = []
    for i in range(p):
        row = [z] * (p * p)
        for k in range(p):
            # (y + k)^i expanded
            for d in range(i + 1):
                c = comb(i, d) * k ** (i - d)
                if c % p:
                    row[d * p + k] = row[d * p + k] + o * c
        coaction.append(row)
    if point is None:
        sb = base.section(b)
        point = next((c for c in range(p) if F.coerce(c) ** p - F.coerce(c) == sb), None)
    pt = None if point is None else [F.coerce(point) ** i for i in range(p)]
    return Triple.from_tables(base, G, mult, unit, coaction, pt, name=f"artin_schreier({b})")


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

@dataclass
class FixtureDescriptor:
    name: str
    kind: str                       # "hopf" or "triple"
    parameters: dict
    expected_rank: int
    expected: dict = field(default_factory=dict)
    build: object = None

    def make(self):
        return self.build()


def subgroup_catalog(G: HopfAlgebra):
    """Proper closed subgroups used for dominance tests: mu_d in mu_n and dZ/n in Z/n, d | n, d < n."""
    name = G.name or ""
    n = G.rank
    out = []
    for d in range(1, n):
        if n % d:
            continue
        if name.startswith("mu_"):
            out.append(mu_inclusion(G.base, d, n))
        elif name.startswith("Z/"):
            out.append(cyclic_map(G.base, d, n, n // d))
    if not out and n > 1:
        raise ValueError(f"no subgroup catalog for {name or 'this group'}")
    return out


def is_dominated(t: Triple, step_budget: int | None = None) -> bool:
    """No reduction of t through any proper subgroup of the catalog."""
    from .torsors import DEFAULT_STEP_BUDGET, reduces_to
    budget = step_budget or DEFAULT_STEP_BUDGET
    return all(reduces_to(t, i, budget) is None for i in subgroup_catalog(t.group))


def hopf_catalog():
    out = []
    Q, Z, Z2 = BaseRing.QQ(), BaseRing.ZZ(), BaseRing.localized(2)
    for n in range(1, 13):
        out.append(FixtureDescriptor(f"mu_{n}", "hopf", {"base": "Z", "n": n}, n,
                                     {"flat": True, "cocommutative": True},
                                     (lambda n=n: mu_n(Z, n))))
    for n in range(1, 13):
        out.append(FixtureDescriptor(f"Z{n}", "hopf", {"base": "Z", "n": n}, n,
                                     {"flat": True, "cocommutative": True},
                                     (lambda n=n: constant_cyclic(Z, n))))
    for p in (2, 3, 5):
        out.append(FixtureDescriptor(f"alpha_{p}", "hopf", {"base": f"F_{p}", "p": p}, p,
                                     {"flat": True, "cocommutative": True},
                                     (lambda p=p: alpha_p(BaseRing.GF(p), p))))
    for b in (1, 2):
        out.append(FixtureDescriptor(f"tate_oort_{b}", "hopf", {"base": "Z_(2)", "b": b}, 2,
                                     {"flat": True, "generic_fiber": "mu_2"},
                                     (lambda b=b: tate_oort_p2(b, Z2))))
    out.append(FixtureDescriptor("mu_4_Q", "hopf", {"base": "Q", "n": 4}, 4, {"flat": True},
                                 lambda: mu_n(Q, 4)))
    out.append(FixtureDescriptor("mu_2xZ2", "hopf", {"base": "Z_(2)"}, 4, {"flat": True},
                                 lambda: mu2_z2()[0]))
    return out


def morphism_descriptors():
    out = []
    for name, f in morphism_catalog().items():
        out.append(FixtureDescriptor(name, "morphism", {"base": "Q"}, f.source.rank,
                                     {"source_rank": f.source.rank, "target_rank": f.target.rank},
                                     (lambda name=name: morphism_catalog()[name])))
    return out


def triple_catalog():
    Q, Z, Z2, Z3 = BaseRing.QQ(), BaseRing.ZZ(), BaseRing.localized(2), BaseRing.localized(3)
    ZT = AffineBase(Z, "torus")
    F2T = AffineBase(BaseRing.GF(2), "torus")
    out = [
        FixtureDescriptor("kummer_2_1_Q", "triple", {"base": "Q", "n": 2, "b": "1"}, 2,
                          {"pointed": True, "trivial": True},
                          lambda: kummer_triple(AffineBase(Q), 2, 1)),
        FixtureDescriptor("kummer_2_5_Q", "triple", {"base": "Q", "n": 2, "b": "5"}, 2,
                          {"pointed": False, "torsor_determinant": "-5"},
                          lambda: kummer_triple(AffineBase(Q), 2, 5)),
    ]
    for n in (2, 3, 4):
        out.append(FixtureDescriptor(f"kummer_{n}_u_Z", "triple", {"base": "Z[u,1/u]", "n": n, "b": "u"}, n,
                                     {"pointed": True, "dominated": True},
                                     (lambda n=n: kummer_triple(ZT, n, ZT.u))))
    out += [
        FixtureDescriptor("trivial_mu4_u_Z", "triple", {"base": "Z[u,1/u]", "group": "mu_4"}, 4,
                          {"pointed": True, "dominated": False},
                          lambda: trivial_triple(mu_n(Z, 4), ZT)),
        FixtureDescriptor("trivial_mu2xZ2_Z3", "triple", {"base": "Z_(3)"}, 4, {"pointed": True},
                          lambda: trivial_triple(mu2_z2(Z3)[0])),
        FixtureDescriptor("trivial_mu2xZ2_Z2", "triple", {"base": "Z_(2)"}, 4, {"pointed": True},
                          lambda: trivial_triple(mu2_z2(Z2)[0])),
        FixtureDescriptor("trivial_tate_oort_1", "triple", {"base": "Z_(2)", "b": 1}, 2, {"pointed": True},
                          lambda: trivial_triple(tate_oort_p2(1, Z2))),
        FixtureDescriptor("artin_schreier_0_F3", "triple", {"base": "F_3", "b": "0"}, 3,
                          {"pointed": True, "trivial": True},
                          lambda: artin_schreier_triple(AffineBase(BaseRing.GF(3)), 0)),
        FixtureDescriptor("artin_schreier_u1_F2", "triple", {"base": "F_2[u,1/u]", "b": "u+1"}, 2,
                          {"pointed": True},
                          lambda: artin_schreier_triple(F2T, F2T.u + 1)),
    ]
    return out


def catalog():
    """Every shipped fixture: group schemes, morphisms and triples."""
    return hopf_catalog() + morphism_descriptors() + triple_catalog()
