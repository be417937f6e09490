import numpy as np
import pytest

from oracles import coboundary_dict, cohomology_order, full_cochain
from zoo import trivial_module

from cochainseq.cochains import (Cochain, NotACocycle, coboundary, cocycle_basis, cohomology,
                                 find_cocycle_failure, free_cohomology, is_coboundary, is_cocycle,
                                 restrict, subgroup_as_group, tuple_index, tuple_list)
from cochainseq.families import theta_lattice
from cochainseq.groups import Subgroup, cyclic_group, direct_product
from cochainseq.modules import Lattice, TruncModule

C3 = cyclic_group(3, p=3)
C9 = cyclic_group(9, p=3)


def unipotent(P):
    # generator 1 acts by [[1, 1], [0, 1]] on (Z/3)^2
    acts = [np.array([[1, k], [0, 1]]) for k in range(P.order)]
    return TruncModule(3, (1, 1), acts, group=P)


def z9_theta():
    # Z/9 with the generator of C3 acting by 4
    return TruncModule(3, (2,), [np.array([[pow(4, k, 9)]]) for k in range(3)], group=C3)


CASES = [
    ("C3, Z/3", C3, trivial_module(C3), (1, 2, 3)),
    ("C3, Z/9", C3, trivial_module(C3, (2,)), (1, 2)),
    ("C3, (Z/3)^2 unipotent", C3, unipotent(C3), (1, 2)),
    ("C3, Z/9 twisted", C3, z9_theta(), (1, 2)),
    ("C3xC3, Z/3", direct_product(C3, C3), trivial_module(direct_product(C3, C3)), (1,)),
]


@pytest.mark.parametrize("name, G, M, degrees", CASES, ids=[c[0] for c in CASES])
def test_cohomology_orders_against_brute_force(name, G, M, degrees):
    for n in degrees:
        assert cohomology(G, M, n).order == cohomology_order(G, M, n), n


def test_known_small_values():
    assert cohomology(C3, trivial_module(C3), 1).orders == (3,)
    assert cohomology(C3, trivial_module(C3), 2).orders == (3,)
    C3sq = direct_product(C3, C3)
    assert cohomology(C3sq, trivial_module(C3sq), 1).orders == (3, 3)
    Z = Lattice.trivial(3, 1, C3)
    assert free_cohomology(C3, Z, 1).orders == []
    assert free_cohomology(C3, Z, 2).orders == [3]
    assert free_cohomology(C9, Lattice.trivial(3, 1, C9), 2).orders == [9]
    T = theta_lattice(3, C3)
    assert free_cohomology(C3, T, 1).orders == [3]
    assert free_cohomology(C3, T, 2).orders == []
    assert free_cohomology(C3, T, 3).orders == [3]


def _random(G, M, n, rng):
    k = len(tuple_list(G, n)) if n else 1
    return Cochain(G, M, n, rng.integers(0, 27, (k, M.rank)))


@pytest.mark.parametrize("name, G, M, degrees", CASES, ids=[c[0] for c in CASES])
def test_coboundary_matches_formula(name, G, M, degrees):
    rng = np.random.default_rng(1)
    for n in (0, 1, 2):
        if G.order > 3 and n == 2:
            continue
        f = _random(G, M, n, rng)
        d = coboundary(f)
        ref = coboundary_dict(G, M, full_cochain(G, n, f.values.tolist(), M.rank) if n else {(): tuple(f.values[0])}, n)
        for t in tuple_list(G, n + 1):
            assert tuple(int(x) for x in d(*t)) == ref[tuple(t)]


@pytest.mark.parametrize("name, G, M, degrees", CASES, ids=[c[0] for c in CASES])
def test_delta_squared_zero(name, G, M, degrees):
    rng = np.random.default_rng(2)
    for n in (0, 1, 2):
        f = _random(G, M, n, rng)
        assert coboundary(coboundary(f)).is_zero()


def test_delta_squared_zero_lattice():
    rng = np.random.default_rng(3)
    T = theta_lattice(3, C9)
    for n in (0, 1, 2):
        f = _random(C9, T, n, rng)
        assert coboundary(coboundary(f)).is_zero()


def test_restriction_commutes_with_delta():
    rng = np.random.default_rng(4)
    G = direct_product(C3, C3)
    M = trivial_module(G, (2,))
    H = Subgroup(G, [0, 1, 2])
    for n in (1, 2):
        f = _random(G, M, n, rng)
        lhs = restrict(coboundary(f), H)
        rhs = coboundary(restrict(f, H, module=lhs.module))
        assert np.array_equal(lhs.values, rhs.values)
    # the same for C3 < C9 with a lattice
    T = Lattice.trivial(3, 1, C9)
    H = Subgroup(C9, [0, 3, 6])
    f = _random(C9, T, 1, rng)
    lhs = restrict(coboundary(f), H)
    assert lhs.values.tolist() == coboundary(restrict(f, H, module=lhs.module)).values.tolist()


def test_cocycle_checks_and_coboundary_solver():
    M = trivial_module(C3)
    z = Cochain(C3, M, 2, [[0], [1], [1], [1]])  # carry cocycle
    assert is_cocycle(z) and find_cocycle_failure(z) is None
    assert is_coboundary(z) is None
    bad = Cochain(C3, M, 2, [[1], [0], [0], [0]])
    assert find_cocycle_failure(bad) is not None
    with pytest.raises(NotACocycle):
        is_coboundary(bad)
    f = Cochain(C3, M, 1, [[1], [0]])
    b = coboundary(f)
    g = is_coboundary(b)
    assert g is not None and coboundary(g) == b


def test_cocycle_basis_spans_cocycles():
    M = unipotent(C3)
    Z = cocycle_basis(C3, M, 1)
    assert all(is_cocycle(z) for z in Z)


def test_tuple_index_roundtrip():
    G = C9
    for n in (1, 2, 3):
        for k, t in enumerate(tuple_list(G, n)):
            assert tuple_index(G, t) == k
    # degree-2 row of (a, b) is (a - 1)(|G| - 1) + (b - 1)
    assert tuple_index(C3, (2, 1)) == 2


def test_free_cohomology_coordinates():
    T = theta_lattice(3, C9)
    h = free_cohomology(C9, T, 2)
    for c in h.classes():
        assert h.coords(h.from_coords(c)) == tuple(c)
