import json

import numpy as np
import pytest

from oracles import conjugacy_classes, elementary_abelians, inverses, table
from zoo import small_groups

from cochainseq.families import mainline_group
from cochainseq.groups import cyclic_group, direct_product, generalized_quaternion
from cochainseq.quillen import NotDecided, build_category, categories_isomorphic, refine_colours

GROUPS = small_groups()


def conj_maps(G, basis, E, F):
    """Images of the basis of E under every conjugation taking E into F."""
    T = table(G)
    _, inv = inverses(T)
    out = set()
    for g in range(G.order):
        img = tuple(T[T[g][int(b)]][inv[g]] for b in basis)
        if {T[T[g][x]][inv[g]] for x in E} <= F:
            out.add(img)
    return out


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_objects_are_conjugacy_classes(name):
    G = GROUPS[name]
    cat = build_category(G)
    classes = conjugacy_classes(G, elementary_abelians(G, include_trivial=True))
    assert len(cat) == len(classes)
    objs = {frozenset(o.elements.tolist()) for o in cat.objects}
    assert all(len(objs & c) == 1 for c in classes)


@pytest.mark.parametrize("name", sorted(set(GROUPS) - {"C3^4"}))
def test_hom_sets_match_oracle(name):
    G = GROUPS[name]
    cat = build_category(G)
    for E in cat.objects:
        for F in cat.objects:
            want = conj_maps(G, E.basis.tolist(), E.elements.tolist(), set(F.elements.tolist()))
            got = {tuple(x) for x in cat.hom_images(E.index, F.index)}
            assert got == want, (E.index, F.index)
            assert cat.homcount(E.index, F.index) == len(want)


def test_abelian_homs_are_inclusions():
    cat = build_category(GROUPS["C3^4"])
    sets = [set(o.elements.tolist()) for o in cat.objects]
    for (E, F), n in cat.homcounts().items():
        assert n == 1 and sets[E] <= sets[F]
    assert len(cat.homcounts()) == sum(1 for a in sets for b in sets if a <= b)


@pytest.mark.parametrize("name", ["C3", "Q8", "C3xC3", "mainline(3,2)", "C2xQ8"])
def test_verify(name):
    cat = build_category(GROUPS[name])
    assert cat.verify()


def test_small_categories():
    assert len(build_category(cyclic_group(3, p=3))) == 2
    Q8 = build_category(generalized_quaternion(3))
    assert Q8.ranks == [0, 1]
    C3sq = build_category(direct_product(cyclic_group(3, p=3), cyclic_group(3, p=3)))
    # trivial, four lines, the whole group
    assert sorted(C3sq.ranks) == [0, 1, 1, 1, 1, 2]
    top = [o for o in C3sq.objects if o.rank == 2][0]
    assert top.aut_order == 1
    assert C3sq.maximal_objects() == [top.index]
    assert len(build_category(cyclic_group(3, p=3), include_trivial=False)) == 1


def test_isomorphism_decisions():
    C3, C9 = build_category(cyclic_group(3, p=3)), build_category(cyclic_group(9, p=3))
    res = categories_isomorphic(C3, C9)
    assert res and res.witness.check_exhaustive(C3, C9)
    Q8 = build_category(generalized_quaternion(3))
    C4 = build_category(cyclic_group(4, p=2))
    assert categories_isomorphic(Q8, C4)
    C3sq = build_category(direct_product(cyclic_group(3, p=3), cyclic_group(3, p=3)))
    res = categories_isomorphic(C3, C3sq)
    assert not res and res.witness is None
    # C3 x C3 against the extraspecial group: same ranks, different automorphisms
    X = build_category(mainline_group(3, 2))
    assert not categories_isomorphic(C3sq, X)


def test_witness_rejects_wrong_map():
    a = build_category(GROUPS["mainline(3,3)"])
    res = categories_isomorphic(a, a)
    assert res and res.witness.check_exhaustive(a, a)
    w = res.witness
    bad = type(w)(list(reversed(w.phi)), list(reversed(w.psi)), w.p)
    assert not bad.check_exhaustive(a, a)


def test_refine_colours_deterministic():
    a = build_category(GROUPS["mainline(3,3)"])
    b = build_category(GROUPS["mainline(3,3)"])
    ca, cb = refine_colours([a, b])
    assert ca == cb


def test_exports():
    cat = build_category(mainline_group(3, 2))
    d = json.loads(cat.to_json())
    assert len(d["objects"]) == len(cat)
    assert sum(h["count"] for h in d["homs"]) == cat.morphism_count()
    assert "composition" in d
    dot = cat.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == sum(
        n for (E, F), n in cat.homcounts().items() if cat.objects[F].rank == cat.objects[E].rank + 1)
    assert cat.to_dot(show_auts=True).count("->") >= dot.count("->")
