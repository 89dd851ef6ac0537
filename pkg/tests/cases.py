"""Shared example data for the torsor, model and acceptance tests."""

from fractions import Fraction

from ffgs import fixtures as fx
from ffgs.hopf import HopfMorphism, identity_morphism, to_trivial
from ffgs.linalg import Matrix
from ffgs.rings import BaseRing
from ffgs.torsors import AffineBase, contracted_product, generic_fiber_triple, trivial_triple

Q, Z = BaseRing.QQ(), BaseRing.ZZ()
Z2, Z3 = BaseRing.localized(2), BaseRing.localized(3)


def chain(G):
    """Two composable morphisms out of G, chosen so that both contractions are non-trivial."""
    R, n, name = G.base, G.rank, G.name or ""
    if name == "mu_2xZ/2":
        _, p1, _ = fx.mu2_z2(R)
        return p1, fx.mu_inclusion(R, 2, 4)
    if name.startswith("mu_"):
        return fx.mu_inclusion(R, n, 2 * n), fx.mu_power(R, 2 * n, n, 2)
    if name.startswith("Z/"):
        return fx.cyclic_map(R, n, 2 * n, 2), fx.cyclic_map(R, 2 * n, n, 1)
    return identity_morphism(G), to_trivial(G)


def graph_mu2():
    """mu_2 = Z/2 over Q embedded as a graph in (mu_2 x Z/2)_Q."""
    AB, _, _ = fx.mu2_z2(Z2)
    h = Matrix(Q, [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(-1, 2)],
                   [Fraction(1, 2), Fraction(1, 2)], [Fraction(-1, 2), Fraction(1, 2)]], 2)
    return AB, HopfMorphism(fx.mu_n(Q, 2), AB.base_change(Q), h)


def extend_examples():
    """(name, yK, P, gamma) for the three extension examples."""
    ZT = AffineBase(Z, "torus")
    P1 = fx.kummer_triple(ZT, 2, ZT.u)
    g1 = identity_morphism(P1.group).base_change(Q)
    AB3, p1, _ = fx.mu2_z2(Z3)
    P2 = trivial_triple(AB3)
    g2 = p1.base_change(Q)
    AB2, _, _ = fx.mu2_z2(Z2)
    P3 = trivial_triple(AB2)
    g3 = fx.twisted_character(Z2).base_change(Q)
    out = []
    for name, P, g in (("kummer_u_identity", P1, g1), ("trivial_projection_Z3", P2, g2),
                       ("twisted_character_Z2", P3, g3)):
        out.append((name, contracted_product(generic_fiber_triple(P), g), P, g))
    return out


def prolong_examples():
    """(name, G, u, L): u is a closed immersion G_K -> (L)_K and L the chosen model."""
    z2 = fx.constant_cyclic(Z2, 2)
    sign = HopfMorphism(z2.base_change(Q), fx.mu_n(Q, 4), Matrix(Q, [[1, 1], [1, -1], [1, 1], [1, -1]], 2))
    return [
        ("mu2_in_mu4_Z", fx.mu_n(Z, 2), fx.mu_inclusion(Q, 2, 4), fx.mu_n(Z, 4)),
        ("z2_in_mu4_Z2", z2, sign, fx.mu_n(Z2, 4)),
        ("z2_in_z4_Z2", z2, fx.cyclic_map(Q, 2, 4, 2), fx.constant_cyclic(Z2, 4)),
        ("mu3_in_mu6_Z3", fx.mu_n(Z3, 3), fx.mu_inclusion(Q, 3, 6), fx.mu_n(Z3, 6)),
    ]


def closure_ambients():
    """(G, [generic ideal rows]) pairs: every generic subgroup here is a Hopf ideal of G_K."""
    from ffgs.hopf import augmentation_ideal
    from ffgs.linalg import kernel
    out = []
    groups = [fx.mu_n(Z, n) for n in (2, 3, 4, 6, 8)] + [fx.constant_cyclic(Z, n) for n in (2, 4, 6)]
    groups += [fx.mu_n(Z2, 4), fx.tate_oort_p2(1), fx.tate_oort_p2(2)]
    for G in groups:
        GK = G.base_change(G.base.fraction_field())
        ideals = [[], list(augmentation_ideal(GK).basis.rows)]
        if (G.name or "").startswith(("mu_", "Z/")):
            for i in fx.subgroup_catalog(GK):
                ideals.append(list(kernel(i.matrix).basis.rows))
        out.append((G, ideals))
    AB, h = graph_mu2()
    ABK = AB.base_change(Q)
    out.append((AB, [[], list(augmentation_ideal(ABK).basis.rows), list(kernel(h.matrix).basis.rows)]))
    return out
