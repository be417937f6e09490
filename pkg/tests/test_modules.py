import numpy as np
import pytest

from zoo import theta_c9

from cochainseq.groups import cyclic_group
from cochainseq.modules import Lattice, TruncModule


def test_trunc_module_encoding():
    C3 = cyclic_group(3, p=3)
    M = TruncModule(3, (2, 1), [np.eye(2, dtype=int)] * 3, group=C3)
    assert M.size == 27
    els = M.elements()
    assert els.shape == (27, 2)
    assert np.array_equal(M.decode(M.encode(els)), els)
    assert sorted(M.encode(els).tolist()) == list(range(27))


def test_trunc_module_validation():
    C3 = cyclic_group(3, p=3)
    with pytest.raises(ValueError):
        # Z/9 -> Z/3 component is fine, but Z/3 -> Z/9 with a unit entry is not well defined
        TruncModule(3, (2, 1), [np.eye(2, dtype=int), [[1, 1], [0, 1]], [[1, 2], [0, 1]]], group=C3)
    with pytest.raises(ValueError):
        TruncModule(3, (1,), [[[1]], [[2]], [[1]]], group=C3)  # not a homomorphism


def test_sublattice_coords_and_divide():
    L = theta_c9()
    # the ideal (theta - 1): columns theta - 1 and 3 in the basis 1, theta
    N = L.sub([[-1, 3], [1, 0]])
    x = np.array([2, 1], dtype=object)  # 2 + theta = 3 + (theta - 1)
    y = N.coords(x)
    assert list(N.embed(y)) == [2, 1]
    assert not N.contains(np.array([0, 1]))
    assert N.index == 3
    assert list(L.scaled(3).divide(np.array([9, 18]), 1)) == [1, 2]
    with pytest.raises(ValueError):
        L.scaled(3).divide(np.array([9, 4]), 1)


def test_quotient_project_lift():
    L = theta_c9()
    for N, r, size in ((L.whole(), 2, 81), (L.scaled(3), 1, 81), (L.scaled(3), 2, 3 ** 6)):
        Q = L.quotient(N, r)
        assert Q.module.size == size
        rng = np.random.default_rng(r)
        y = rng.integers(0, 9, (5, Q.module.rank)) % Q.module.orders
        assert np.array_equal(Q.project(Q.lift(y)), y)
        # project is G-equivariant
        x = rng.integers(-20, 20, (4, 2)).astype(object)
        for g in range(9):
            lhs = Q.project(x.dot(L.action[g].T))
            rhs = (Q.project(x) @ Q.module.action[g].T) % Q.module.orders
            assert np.array_equal(lhs, rhs)


def test_trivial_lattice():
    C3 = cyclic_group(3, p=3)
    L = Lattice.trivial(3, 2, C3)
    assert L.rank == 2 and list(L.act(1, [1, 2])) == [1, 2]
