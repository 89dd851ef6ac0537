import pytest

from ffgs import fixtures as fx
from ffgs.hopf import verify_hopf
from ffgs.rings import BaseRing
from ffgs.torsors import verify_triple

CATALOG = fx.catalog()


def test_catalog_names_are_unique_and_sizes():
    names = [d.name for d in CATALOG]
    assert len(names) == len(set(names))
    kinds = {k: sum(d.kind == k for d in CATALOG) for k in ("hopf", "morphism", "triple")}
    assert kinds["morphism"] >= 10 and kinds["triple"] >= 10 and kinds["hopf"] >= 29


@pytest.mark.parametrize("d", CATALOG, ids=lambda d: d.name)
def test_every_fixture_verifies_with_declared_rank(d):
    obj = d.make()
    if d.kind == "hopf":
        assert obj.rank == d.expected_rank and verify_hopf(obj).ok
    elif d.kind == "morphism":
        assert obj.verify().ok
        assert obj.source.rank == d.expected["source_rank"] and obj.target.rank == d.expected["target_rank"]
    else:
        assert obj.rank == d.expected_rank and verify_triple(obj).ok


def test_dominance_flags_match():
    for d in fx.triple_catalog():
        if "dominated" in d.expected:
            assert fx.is_dominated(d.make()) == d.expected["dominated"], d.name


def test_subgroup_catalog():
    Z = BaseRing.ZZ()
    subs = fx.subgroup_catalog(fx.mu_n(Z, 12))
    assert sorted(i.source.rank for i in subs) == [1, 2, 3, 4, 6]
    assert all(i.verify().ok for i in subs)
    zsubs = fx.subgroup_catalog(fx.constant_cyclic(Z, 6))
    assert sorted(i.source.rank for i in zsubs) == [1, 2, 3] and all(i.verify().ok for i in zsubs)
    with pytest.raises(ValueError):
        fx.subgroup_catalog(fx.tate_oort_p2(1))


def test_constructor_argument_checks():
    with pytest.raises(ValueError):
        fx.mu_n(BaseRing.ZZ(), 0)
    with pytest.raises(ValueError):
        fx.alpha_p(BaseRing.QQ(), 2)
    with pytest.raises(ValueError):
        fx.tate_oort_p2(3)
