"""Normalized cochains, the coboundary, cohomology and the splitting maps.

An n-cochain stores one value vector per n-tuple of non-identity elements,
in lexicographic order of element ids (ids 1..|G|-1, identity id 0).  Values
over a TruncModule are int64 residues; values over a Lattice are exact
Python integers in an object array.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .groups import FiniteGroup, Subgroup, TableGroup
from .modules import Lattice, LatticeQuotient, SubLattice, TruncModule
from .residue import (AbelianInvariants, quotient_invariants, smith_normal_form,
                      solve_mixed)

MAX_MATRIX_ENTRIES = 6 * 10 ** 6
MAX_MODULUS = 2 ** 31


class SolverBoundError(ValueError):
    pass


class NotACocycle(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class GroupLogOrder:
    m: int


def log_order(G: FiniteGroup) -> GroupLogOrder:
    m, n = 0, G.order
    while n > 1:
        if n % G.p:
            raise ValueError("group order is not a power of p")
        n //= G.p
        m += 1
    return GroupLogOrder(m)


def _is_lattice(M) -> bool:
    return isinstance(M, Lattice)


def _n_tuples(G: FiniteGroup, n: int) -> int:
    return (G.order - 1) ** n


class Cochain:
    """Normalized n-cochain on G with values in M."""

    def __init__(self, group: FiniteGroup, module, degree: int, values=None):
        self.group = group
        self.module = module
        self.degree = degree
        shape = (_n_tuples(group, degree), module.rank)
        if values is None:
            values = np.zeros(shape, dtype=object if _is_lattice(module) else np.int64)
        if _is_lattice(module):
            v = np.empty(shape, dtype=object)
            v[...] = np.asarray(values, dtype=object).reshape(shape)
            v = np.vectorize(int, otypes=[object])(v) if v.size else v
        else:
            v = np.asarray(values, dtype=np.int64).reshape(shape) % module.orders
        self.values = v

    # -- construction helpers --------------------------------------------
    @classmethod
    def zero(cls, group, module, degree):
        return cls(group, module, degree)

    @classmethod
    def from_function(cls, group, module, degree, fn):
        out = cls(group, module, degree)
        for k, t in enumerate(tuple_list(group, degree)):
            out.values[k] = fn(*t)
        return Cochain(group, module, degree, out.values)

    def like(self, values):
        return Cochain(self.group, self.module, self.degree, values)

    def __call__(self, *args):
        if len(args) != self.degree:
            raise ValueError("wrong number of arguments")
        if any(a == self.group.identity for a in args):
            return np.zeros(self.module.rank, dtype=self.values.dtype)
        return self.values[tuple_index(self.group, args)]

    def dense(self) -> np.ndarray:
        """Values on all tuples including identity ones, shape (|G|,)*n + (d,)."""
        n = self.group.order
        out = np.zeros((n,) * self.degree + (self.module.rank,), dtype=self.values.dtype)
        if self.degree == 0:
            out[...] = self.values[0]
            return out
        sl = (slice(1, None),) * self.degree
        out[sl] = self.values.reshape((n - 1,) * self.degree + (self.module.rank,))
        return out

    def _coerce(self, other):
        if not isinstance(other, Cochain) or other.degree != self.degree or other.group is not self.group:
            raise ValueError("cochain mismatch")
        return other

    def __add__(self, other):
        return self.like(self.values + self._coerce(other).values)

    def __sub__(self, other):
        return self.like(self.values - self._coerce(other).values)

    def __neg__(self):
        return self.like(-self.values)

    def __mul__(self, k):
        return self.like(self.values * int(k))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not np.any(self.values != 0)

    def __eq__(self, other):
        return (isinstance(other, Cochain) and other.degree == self.degree and other.group is self.group
                and other.values.shape == self.values.shape and bool(np.all(other.values == self.values)))

    def __hash__(self):
        return hash((self.degree, self.values.tobytes() if self.values.dtype != object else
                     tuple(self.values.reshape(-1).tolist())))

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def __repr__(self):
        return f"Cochain(degree={self.degree}, |G|={self.group.order}, rank={self.module.rank})"


@lru_cache(maxsize=64)
def _tuples_cached(gid, order, n):
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    ids = np.arange(1, order, dtype=np.int64)
    grids = np.meshgrid(*([ids] * n), indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


def tuple_array(G: FiniteGroup, n: int) -> np.ndarray:
    return _tuples_cached(id(G), G.order, n)


def tuple_list(G, n):
    return [tuple(int(x) for x in row) for row in tuple_array(G, n)]


def tuple_index(G, args) -> int:
    k = 0
    for a in args:
        k = k * (G.order - 1) + (int(a) - 1)
    return k


def _index_of(G, arr):
    """Row index of tuples given as (..., n) arrays; -1 where any entry is the identity."""
    arr = np.asarray(arr, dtype=np.int64)
    k = np.zeros(arr.shape[:-1], dtype=np.int64)
    bad = np.zeros(arr.shape[:-1], dtype=bool)
    for i in range(arr.shape[-1]):
        k = k * (G.order - 1) + (arr[..., i] - 1)
        bad |= arr[..., i] == G.identity
    k[bad] = -1
    return k


def _mul_rows(G, a, b):
    if G.order <= 6561:
        return G.table()[a, b]
    return G.mul(a, b)


def _act_rows(M, g, vals):
    """Apply the action of g (array of ids) to value rows."""
    if _is_lattice(M):
        out = np.empty(vals.shape, dtype=object)
        for h in np.unique(g).tolist():
            sel = g == h
            out[sel] = vals[sel].dot(M.action[h].T)
        return out
    A = M.action[g]
    return np.einsum("nij,nj->ni", A, vals) % M.orders


def _gather(vals, idx):
    out = vals[np.where(idx < 0, 0, idx)]
    if out.dtype == object:
        out = out.copy()
        out[idx < 0] = 0
    else:
        out = np.where((idx < 0)[:, None], 0, out)
    return out


@lru_cache(maxsize=64)
def _contractions(gid, order, n, G_ref_holder):
    G = G_ref_holder[0]
    T = tuple_array(G, n)
    out = []
    for j in range(n - 1):
        prod = _mul_rows(G, T[:, j], T[:, j + 1])
        contr = np.concatenate([T[:, :j], prod[:, None], T[:, j + 2:]], axis=1)
        out.append(_index_of(G, contr))
    return out


class _Holder(tuple):
    def __hash__(self):
        return id(self[0])

    def __eq__(self, other):
        return isinstance(other, _Holder) and self[0] is other[0]


def _coboundary_block(f: Cochain, g1: int, contr):
    """Rows of Delta f whose first argument is g1."""
    G, M, n = f.group, f.module, f.degree
    q = G.order - 1
    vals = f.values
    N_n = q ** n
    N_m1 = q ** (n - 1)
    T = tuple_array(G, n)
    out = _act_rows(M, np.full(N_n, g1, dtype=np.int64), vals)
    # term 1: f(g1 t1, t2, ..., tn)
    prod = _mul_rows(G, np.full(N_n, g1), T[:, 0])
    idx = np.where(prod == G.identity, -1, (prod - 1) * N_m1 + np.arange(N_n) % N_m1)
    out = out - _gather(vals, idx)
    for j, c in enumerate(contr):  # terms 2..n
        sign = -1 if (j + 2) % 2 else 1
        idx = np.where(c < 0, -1, (g1 - 1) * N_m1 + c)
        out = out + sign * _gather(vals, idx)
    sign = -1 if (n + 1) % 2 else 1
    idx = (g1 - 1) * N_m1 + np.arange(N_n) // q
    out = out + sign * vals[idx]
    if not _is_lattice(M):
        out = out % M.orders
    return out


def coboundary(f: Cochain) -> Cochain:
    G, M, n = f.group, f.module, f.degree
    if n == 0:
        v = f.values[0]
        ids = np.arange(1, G.order, dtype=np.int64)
        vals = _act_rows(M, ids, np.repeat(v[None, :], G.order - 1, axis=0)) - v[None, :]
        return Cochain(G, M, 1, vals)
    if G.order == 1:
        return Cochain(G, M, n + 1)
    contr = _contractions(id(G), G.order, n, _Holder((G,)))
    blocks = [_coboundary_block(f, g1, contr) for g1 in range(1, G.order)]
    return Cochain(G, M, n + 1, np.concatenate(blocks, axis=0))


def find_cocycle_failure(f: Cochain):
    """Stream Delta f block by block; return the first tuple where it is nonzero."""
    G, n = f.group, f.degree
    if n == 0:
        d = coboundary(f)
        bad = np.flatnonzero(np.any(d.values != 0, axis=1))
        return None if not bad.size else (int(bad[0]) + 1,)
    contr = _contractions(id(G), G.order, n, _Holder((G,)))
    T = tuple_array(G, n)
    for g1 in range(1, G.order):
        blk = _coboundary_block(f, g1, contr)
        bad = np.flatnonzero(np.any(blk != 0, axis=1))
        if bad.size:
            return (g1,) + tuple(int(x) for x in T[bad[0]])
    return None


def is_cocycle(f: Cochain) -> bool:
    return find_cocycle_failure(f) is None


def coboundary_matrix(G: FiniteGroup, M, n: int) -> np.ndarray:
    """Matrix of Delta: C^n -> C^{n+1} on flattened value vectors."""
    d = M.rank
    cols = _n_tuples(G, n) * d
    rows = _n_tuples(G, n + 1) * d
    if rows * cols > MAX_MATRIX_ENTRIES:
        raise SolverBoundError(f"coboundary matrix {rows} x {cols} exceeds the solver bound")
    dtype = object if _is_lattice(M) else np.int64
    D = np.zeros((rows, cols), dtype=dtype)
    for k in range(cols):
        e = np.zeros(cols, dtype=dtype)
        e[k] = 1
        D[:, k] = coboundary(Cochain(G, M, n, e)).flat()
    return D


# ---------------------------------------------------------------------------
# cohomology


def _col_exps(M, n, G):
    return list(M.exps) * _n_tuples(G, n)


@dataclass
class CohomologyClass:
    representative: Cochain
    coords: tuple

    @property
    def degree(self):
        return self.representative.degree

    @property
    def module(self):
        return self.representative.module


class FreeCohomology:
    """H^n(G, L) for a lattice L, via the integer Smith form of Delta_{n-1}.

    H^n is the torsion of coker(Delta_{n-1}); class coordinates of a cocycle z
    are the torsion entries of U z.
    """

    def __init__(self, G, L: Lattice, n: int):
        if n < 1:
            raise ValueError("only n >= 1 is supported for free coefficients")
        self.G, self.L, self.n = G, L, n
        D = coboundary_matrix(G, L, n - 1)
        sf = smith_normal_form(D)
        self.sf = sf
        self.U = np.array(sf.U, dtype=object)
        self.Uinv = np.array(sf.Uinv, dtype=object)
        self.torsion = [i for i, d in enumerate(sf.invariants) if abs(d) > 1]
        self.orders = [abs(sf.invariants[i]) for i in self.torsion]
        self.rank_image = len(sf.invariants)
        self.invariants = AbelianInvariants(tuple(self.orders))

    def generators(self) -> list[Cochain]:
        return [Cochain(self.G, self.L, self.n, self.Uinv[:, i]) for i in self.torsion]

    def coords(self, z: Cochain) -> tuple:
        y = self.U.dot(z.flat())
        if any(int(x) for x in y[self.rank_image:]):
            raise NotACocycle("cochain has a free component; not a cocycle")
        return tuple(int(y[i]) % o for i, o in zip(self.torsion, self.orders))

    def from_coords(self, c) -> Cochain:
        v = np.zeros(self.U.shape[0], dtype=object)
        for i, x in zip(self.torsion, c):
            v[i] = int(x)
        return Cochain(self.G, self.L, self.n, self.Uinv.dot(v))

    def classes(self):
        """All elements of H^n as coordinate tuples."""
        import itertools
        return list(itertools.product(*[range(o) for o in self.orders]))


class IntegerSolver:
    """Exact solutions of Delta x = b for x in C^n(G, L), L a lattice."""

    def __init__(self, G, L: Lattice, n: int):
        self.G, self.L, self.n = G, L, n
        D = coboundary_matrix(G, L, n)
        self.sf = smith_normal_form(D)
        self.U = np.array(self.sf.U, dtype=object)
        self.V = np.array(self.sf.V, dtype=object)
        self.cols = D.shape[1]

    def solve(self, b: Cochain) -> Cochain | None:
        c = self.U.dot(b.flat())
        inv = self.sf.invariants
        r = len(inv)
        y = np.zeros(self.cols, dtype=object)
        for i, d in enumerate(inv):
            if int(c[i]) % d:
                return None
            y[i] = int(c[i]) // d
        if any(int(x) for x in c[r:]):
            return None
        return Cochain(self.G, self.L, self.n, self.V.dot(y))


_SOLVERS: dict = {}


def _cached(kind, G, M, n):
    key = (kind, id(G), id(M), n)
    if key not in _SOLVERS:
        if kind == "free":
            _SOLVERS[key] = (G, M, FreeCohomology(G, M, n))
        else:
            _SOLVERS[key] = (G, M, IntegerSolver(G, M, n))
    return _SOLVERS[key][2]


def free_cohomology(G, L, n) -> FreeCohomology:
    return _cached("free", G, L, n)


def integer_solver(G, L, n) -> IntegerSolver:
    return _cached("solve", G, L, n)


def solve_coboundary_equation(b: Cochain) -> Cochain | None:
    """Some x with Delta x = b (None if there is none)."""
    G, M, n = b.group, b.module, b.degree - 1
    if n < 0:
        return None
    if _is_lattice(M):
        return integer_solver(G, M, n).solve(b)
    D = coboundary_matrix(G, M, n)
    sol = solve_mixed(D, b.flat(), M.p, _col_exps(M, n, G), _col_exps(M, n + 1, G))
    if not sol.solvable:
        return None
    return Cochain(G, M, n, sol.particular)


def cocycle_basis(G, M: TruncModule, n: int) -> list[Cochain]:
    """Generators of Z^n(G, M) for a truncated module."""
    D = coboundary_matrix(G, M, n)
    sol = solve_mixed(D, np.zeros(D.shape[0], dtype=np.int64), M.p,
                      _col_exps(M, n, G), _col_exps(M, n + 1, G))
    return [Cochain(G, M, n, k) for k in sol.kernel_basis]


def coboundary_generators(G, M: TruncModule, n: int) -> list[Cochain]:
    if n == 0:
        return []
    D = coboundary_matrix(G, M, n - 1)
    return [Cochain(G, M, n, D[:, k]) for k in range(D.shape[1])]


def cohomology(G: FiniteGroup, M, n: int) -> AbelianInvariants:
    """Invariants of H^n(G, M); for lattices the finite group H^n(G, Z_p (x) M), n >= 1."""
    if _is_lattice(M):
        return free_cohomology(G, M, n).invariants
    Z = cocycle_basis(G, M, n)
    B = coboundary_generators(G, M, n)
    return quotient_invariants([z.flat() for z in Z], [b.flat() for b in B],
                               _col_exps(M, n, G), M.p)


def is_coboundary(z: Cochain) -> Cochain | None:
    bad = find_cocycle_failure(z)
    if bad is not None:
        raise NotACocycle(f"not a cocycle at {bad}", bad)
    if z.degree == 0:
        return None if not z.is_zero() else Cochain(z.group, z.module, 0)
    return solve_coboundary_equation(z)


def restrict_module(M, H: Subgroup):
    idx = H.elements
    if _is_lattice(M):
        return Lattice(M.p, M.action[idx])
    return TruncModule(M.p, M.exps, M.action[idx], check=False)


_SUBGROUP_TABLES: dict = {}


def subgroup_as_group(H: Subgroup) -> TableGroup:
    """H as a TableGroup with element k = H.elements[k]."""
    key = (id(H.group), H.key)
    if key not in _SUBGROUP_TABLES:
        G = H.group
        e = H.elements
        pos = {int(x): i for i, x in enumerate(e.tolist())}
        prods = G.mul(np.repeat(e, e.size), np.tile(e, e.size))
        T = np.array([pos[int(x)] for x in prods.tolist()], dtype=np.int64).reshape(e.size, e.size)
        _SUBGROUP_TABLES[key] = (H, TableGroup(T, p=G.p, check=False))
    return _SUBGROUP_TABLES[key][1]


def restrict(f: Cochain, H: Subgroup, module=None) -> Cochain:
    if H.group is not f.group:
        raise ValueError("H is not a subgroup of the cochain's group")
    if not H.is_closed():
        raise ValueError("not a subgroup")
    Hg = subgroup_as_group(H)
    M = module if module is not None else restrict_module(f.module, H)
    n = f.degree
    if n == 0:
        return Cochain(Hg, M, 0, f.values)
    T = tuple_array(Hg, n)
    idx = _index_of(f.group, H.elements[T])
    return Cochain(Hg, M, n, f.values[idx])


# ---------------------------------------------------------------------------
# the splitting M/p^r N  ~  H^n(M) + H^{n+1}(N)


class Splitting:
    """Cochain-level maps around 0 -> N -> M -> M/p^r N -> 0 (M a lattice, N a sublattice)."""

    def __init__(self, G: FiniteGroup, M: Lattice, N: SubLattice, r: int):
        self.G, self.M, self.N, self.r = G, M, N, r
        self.m = log_order(G).m
        self.Q: LatticeQuotient = M.quotient(N, r)
        self.module = self.Q.module  # TruncModule M/p^r N
        if self.module.rank and int(self.module.orders.max()) >= MAX_MODULUS:
            raise ValueError(f"M/p^{r}N exceeds the residue precision (orders must stay below 2^31)")

    def pro(self, f: Cochain) -> Cochain:
        """Lattice cochain over M to M/p^r N."""
        return Cochain(self.G, self.module, f.degree, self.Q.project(f.values))

    def lift(self, z: Cochain) -> Cochain:
        return Cochain(self.G, self.M, z.degree, self.Q.lift(z.values))

    def embed_N(self, s: Cochain) -> Cochain:
        """N-valued cochain (N-coordinates) as an M-valued cochain."""
        return Cochain(self.G, self.M, s.degree, self.N.embed(s.values))

    def divide_N(self, f: Cochain, k: int) -> Cochain:
        """f / p^k in N-coordinates (f must take values in p^k N)."""
        return Cochain(self.G, self.N.lattice, f.degree, self.N.divide(f.values, k))

    def connecting(self, z: Cochain) -> Cochain:
        """A cocycle over N representing con_r of the cocycle z."""
        zt = self.lift(z)
        try:
            return self.divide_N(coboundary(zt), self.r)
        except ValueError as exc:
            raise NotACocycle("Delta of the lift is not divisible by p^r") from exc

    def decompose(self, z: Cochain) -> tuple[Cochain, Cochain]:
        """Cocycle representatives (over M, over N) of the two components of [z]."""
        if self.r < 2 * self.m:
            raise ValueError(f"splitting needs r >= 2m = {2 * self.m}")
        n = z.degree
        zt = self.lift(z)
        theta = self.connecting(z)  # Delta(zt) = p^r theta
        # p^m theta is a coboundary over N; correct zt by p^{r-m} nu with Delta nu = -p^m theta
        nu = solve_coboundary_equation(-(theta * self.p ** self.m))
        if nu is None:
            raise RuntimeError("p^m * con(z) is not a coboundary; inconsistent input")
        rho = zt + self.embed_N(nu) * self.p ** (self.r - self.m)
        if not coboundary(rho).is_zero():
            raise RuntimeError("first component is not a cocycle")
        return rho, theta

    @property
    def p(self):
        return self.M.p

    def classes(self, z: Cochain):
        rho, eta = self.decompose(z)
        hM = free_cohomology(self.G, self.M, z.degree)
        hN = free_cohomology(self.G, self.N.lattice, z.degree + 1)
        return hM.coords(rho), hN.coords(eta)


def connecting_hom(z: Cochain, split: Splitting) -> CohomologyClass:
    eta = split.connecting(z)
    h = free_cohomology(split.G, split.N.lattice, z.degree + 1)
    return CohomologyClass(eta, h.coords(eta))


def split_decompose(z: Cochain, split: Splitting) -> tuple[CohomologyClass, CohomologyClass]:
    bad = find_cocycle_failure(z)
    if bad is not None:
        raise NotACocycle(f"not a cocycle at {bad}", bad)
    rho, eta = split.decompose(z)
    hM = free_cohomology(split.G, split.M, z.degree)
    hN = free_cohomology(split.G, split.N.lattice, z.degree + 1)
    return CohomologyClass(rho, hM.coords(rho)), CohomologyClass(eta, hN.coords(eta))
