import numpy as np
import pytest

from oracles import conjugacy_classes, elementary_abelians, is_group_table, orders, table
from zoo import carry_extension, small_groups, trivial_module

from cochainseq.cochains import Cochain, NotACocycle, subgroup_as_group
from cochainseq.extensions import ExtensionData, ExtensionGroup, lift_subgroup
from cochainseq.groups import (Subgroup, centralizer, conjugacy_classes_naive,
                               conjugacy_classes_of_subgroups, cyclic_group, direct_product,
                               elementary_abelians_naive, enumerate_elementary_abelians,
                               fp_inverse, fp_left_inverse, fp_rank, fp_subspaces, generalized_quaternion,
                               is_elementary_abelian, maximal_elementary_abelians, normalizer,
                               subgroup_generate)

GROUPS = small_groups()


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_tables_are_groups(name):
    G = GROUPS[name]
    if G.order <= 32:
        assert is_group_table(table(G))
    assert list(G.element_orders) == orders(table(G))


def test_carry_extension_is_cyclic():
    G = carry_extension()
    assert G.order == 9 and 9 in set(G.element_orders.tolist())


def test_split_extension_is_elementary():
    P = cyclic_group(3, p=3)
    M = trivial_module(P)
    G = ExtensionGroup(ExtensionData(P, M, Cochain(P, M, 2)))
    assert G.is_abelian() and set(G.element_orders.tolist()) == {1, 3}


def test_non_cocycle_rejected():
    P = cyclic_group(3, p=3)
    M = trivial_module(P)
    with pytest.raises(NotACocycle):
        ExtensionGroup(ExtensionData(P, M, Cochain(P, M, 2, [[1], [0], [0], [0]])))


def test_lift_subgroup():
    P = cyclic_group(3, p=3)
    M = trivial_module(P)
    G = ExtensionGroup(ExtensionData(P, M, Cochain(P, M, 2)))
    Q = Subgroup(P, [0, 1, 2])
    Hg = subgroup_as_group(Q)
    for a in range(3):
        f = Cochain(Hg, M, 1, [[a], [2 * a]])
        L = lift_subgroup(G, Q, f)
        assert L.order == 3 and L.is_closed()
        assert sorted(G.projection(L.elements).tolist()) == [0, 1, 2]
    with pytest.raises(NotACocycle):
        lift_subgroup(G, Q, Cochain(Hg, M, 1, [[1], [0]]))
    C9 = carry_extension()
    with pytest.raises(NotACocycle):
        lift_subgroup(C9, Subgroup(C9.base, [0, 1, 2]), Cochain(subgroup_as_group(Subgroup(C9.base, [0, 1, 2])), C9.module, 1, [[1], [2]]))


def test_quaternion_structure():
    for n in (3, 4, 5):
        Q = generalized_quaternion(n)
        assert Q.order == 2 ** n
        inv = np.flatnonzero(Q.element_orders == 2)
        assert inv.size == 1 and Q.is_central(int(inv[0]))
        assert not Q.is_abelian()
    with pytest.raises(ValueError):
        generalized_quaternion(2)


def test_centralizer_normalizer():
    G = GROUPS["mainline(3,2)"]
    T = table(G)
    for x in range(0, G.order, 5):
        C = centralizer(G, [x])
        assert set(C.elements.tolist()) == {g for g in range(G.order) if T[g][x] == T[x][g]}
    S = subgroup_generate(G, [1])
    N = normalizer(G, S)
    _, inv = __import__("oracles").inverses(T)
    exp = {g for g in range(G.order) if {T[T[g][s]][inv[g]] for s in S.elements.tolist()} == set(S.elements.tolist())}
    assert set(N.elements.tolist()) == exp


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_elementary_abelians_match_oracle(name):
    G = GROUPS[name]
    want = elementary_abelians(G)
    got = enumerate_elementary_abelians(G)
    assert {frozenset(S.elements.tolist()) for S in got} == want
    assert len(got) == len(want)
    naive = elementary_abelians_naive(G)
    assert {frozenset(S.elements.tolist()) for S in naive} == want
    assert all(is_elementary_abelian(S) for S in got)


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_conjugacy_matches_oracle(name):
    G = GROUPS[name]
    subs = enumerate_elementary_abelians(G)
    want = {frozenset(c) for c in conjugacy_classes(G, {frozenset(S.elements.tolist()) for S in subs})}
    for fn in (conjugacy_classes_of_subgroups, conjugacy_classes_naive):
        got = {frozenset(frozenset(S.elements.tolist()) for S in c) for c in fn(G, subs)}
        assert got == want


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_maximal_elementary_abelians(name):
    G = GROUPS[name]
    allsets = elementary_abelians(G)
    want = {S for S in allsets if not any(S < T for T in allsets)}
    got = maximal_elementary_abelians(G)
    assert {frozenset(S.tolist()) for S, _ in got} == want
    reps = maximal_elementary_abelians(G, reps_only=True)
    classes = conjugacy_classes(G, want)
    hit = {i for i, c in enumerate(classes) for S, _ in reps if frozenset(S.tolist()) in c}
    assert hit == set(range(len(classes)))


def test_fp_linear_algebra():
    rng = np.random.default_rng(0)
    p = 3
    for _ in range(30):
        A = rng.integers(0, p, (4, 4))
        r = fp_rank(A, p)
        # rank via brute-force image size
        img = {tuple((A @ np.array(v)) % p) for v in np.ndindex(*(3,) * 4)}
        assert len(img) == p ** r
        if r == 4:
            assert np.array_equal((fp_inverse(A, p) @ A) % p, np.eye(4, dtype=int))
    B = np.array([[1, 0], [0, 1], [1, 1]])
    L = fp_left_inverse(B, p)
    assert np.array_equal((L @ B) % p, np.eye(2, dtype=int))


def test_fp_subspaces_counts():
    # Gaussian binomials for F_3^3: 1, 13, 13, 1
    counts = [W.shape[0] for W, _ in fp_subspaces(3, 3)]
    assert counts == [1, 13, 13, 1]
    counts = [W.shape[0] for W, _ in fp_subspaces(2, 4)]
    assert counts == [1, 15, 35, 15, 1]


def test_direct_product_orders():
    G = direct_product(cyclic_group(3, p=3), cyclic_group(9, p=3))
    assert G.order == 27 and max(G.element_orders) == 9 and G.is_abelian()
