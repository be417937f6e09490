"""Coefficient modules: truncated p-groups with an action, and free lattices.

A TruncModule is (+)_i Z/p^{e_i} with one integer matrix per group element.
A Lattice is a free Z-module (standing in for a free Z_p-module) with integer
action matrices; its values stay exact.  Quotients M/p^r N of lattices by
sublattices are produced through an integer Smith form so that the result
is again a TruncModule with known projection and lifting maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .residue import smith_normal_form


def _as_int_mats(action):
    return np.array([[[int(x) for x in row] for row in mat] for mat in action], dtype=np.int64)


def _vp(x, p):
    x = abs(int(x))
    if x == 0:
        return 10 ** 9
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class TruncModule:
    """(+) Z/p^{e_i} with a left action given by action[g] for every group element."""

    def __init__(self, p: int, exps, action, group=None, check: bool = True):
        self.p = p
        self.exps = tuple(int(e) for e in exps)
        self.rank = len(self.exps)
        self.orders = np.array([p ** e for e in self.exps], dtype=np.int64)
        A = _as_int_mats(action).reshape(-1, self.rank, self.rank)
        self.action = A % self.orders[None, :, None] if self.rank else A
        self.group = group
        if check:
            self._validate()

    @property
    def size(self) -> int:
        return int(np.prod([int(o) for o in self.orders])) if self.rank else 1

    def _validate(self):
        d = self.rank
        for g, mat in enumerate(self.action):
            for i in range(d):
                for j in range(d):
                    if mat[i, j] and _vp(mat[i, j], self.p) < self.exps[i] - self.exps[j]:
                        raise ValueError(f"action of element {g} does not respect generator orders")
        if self.group is not None and d:
            G = self.group
            n = G.order
            if n <= 243:
                ids = np.arange(n)
                for g in range(n):
                    prod = G.mul(np.full(n, g), ids)
                    lhs = self.action[prod]
                    rhs = np.einsum("ij,njk->nik", self.action[g], self.action) % self.orders[None, :, None]
                    if not np.array_equal(lhs % self.orders[None, :, None], rhs):
                        raise ValueError("action is not a homomorphism")
            if not np.array_equal(self.action[G.identity], np.eye(d, dtype=np.int64) % self.orders[:, None]):
                raise ValueError("identity must act trivially")

    def reduce(self, v):
        return np.asarray(v, dtype=np.int64) % self.orders

    def act(self, g, v):
        return (self.action[g] @ np.asarray(v, dtype=np.int64)) % self.orders

    def elements(self):
        """All elements as an array of shape (size, rank), mixed radix with last coordinate fastest."""
        grids = np.meshgrid(*[np.arange(o) for o in self.orders], indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1) if self.rank else np.zeros((1, 0), np.int64)

    def encode(self, v):
        v = np.asarray(v, dtype=np.int64) % self.orders
        code = np.zeros(v.shape[:-1], dtype=np.int64)
        for i in range(self.rank):
            code = code * self.orders[i] + v[..., i]
        return code

    def decode(self, code):
        code = np.asarray(code, dtype=np.int64)
        out = np.zeros(code.shape + (self.rank,), dtype=np.int64)
        for i in reversed(range(self.rank)):
            out[..., i] = code % self.orders[i]
            code = code // self.orders[i]
        return out

    def __repr__(self):
        return f"TruncModule(p={self.p}, exps={self.exps})"


class Lattice:
    """Free Z-module of rank d with integer action matrices for every element of a group."""

    def __init__(self, p: int, action, group=None):
        self.p = p
        A = np.array([[[int(x) for x in row] for row in mat] for mat in action], dtype=object)
        self.action = A
        self.rank = A.shape[1]
        self.group = group

    @classmethod
    def trivial(cls, p, rank, group):
        eye = np.eye(rank, dtype=np.int64)
        return cls(p, [eye] * group.order, group)

    def act(self, g, v):
        return self.action[g].dot(np.asarray(v, dtype=object))

    def sub(self, basis) -> "SubLattice":
        return SubLattice(self, basis)

    def whole(self) -> "SubLattice":
        return SubLattice(self, np.eye(self.rank, dtype=np.int64))

    def scaled(self, k: int) -> "SubLattice":
        return SubLattice(self, k * np.eye(self.rank, dtype=np.int64))

    def quotient(self, N: "SubLattice", r: int) -> "LatticeQuotient":
        return LatticeQuotient(self, N, r)

    def __repr__(self):
        return f"Lattice(p={self.p}, rank={self.rank})"


class SubLattice:
    """A G-stable sublattice of full rank, given by basis columns in ambient coordinates.

    Values of cochains over N are stored in N-coordinates; `embed` maps them
    into the ambient lattice and `divide` recovers N-coordinates of ambient
    vectors that lie in p^k N.
    """

    def __init__(self, ambient: Lattice, basis):
        self.ambient = ambient
        self.p = ambient.p
        B = np.array([[int(x) for x in row] for row in np.asarray(basis).tolist()], dtype=object)
        if B.shape != (ambient.rank, ambient.rank):
            raise ValueError("sublattices are required to have full rank")
        self.basis = B
        self.rank = ambient.rank
        sf = smith_normal_form(B)
        if len(sf.invariants) != self.rank:
            raise ValueError("basis is singular")
        self._sf = sf
        off = B - np.diag(np.diag(B))
        self._diag = np.diag(B).copy() if not np.any(off) else None
        # action in N-coordinates: B^{-1} A B, which must be integral
        acts = []
        for mat in ambient.action:
            img = mat.dot(B)
            cols = [self.coords(img[:, k]) for k in range(self.rank)]
            acts.append(np.stack(cols, axis=1))
        self.action = np.array(acts, dtype=object)
        self.lattice = Lattice(self.p, self.action, ambient.group)
        self.index = 1
        for d in sf.invariants:
            self.index *= abs(d)

    def embed(self, v):
        v = np.asarray(v, dtype=object)
        return v.dot(self.basis.T)

    def coords(self, x):
        """Solve B y = x over Z; ValueError if x is not in N."""
        x = np.asarray(x, dtype=object)
        if self._diag is not None:
            if x.size and np.any(x % self._diag):
                raise ValueError("vector does not lie in the sublattice")
            return x // self._diag
        flat = x.reshape(-1, self.rank)
        U = np.array(self._sf.U, dtype=object)
        V = np.array(self._sf.V, dtype=object)
        inv = np.array(self._sf.invariants, dtype=object)
        c = flat.dot(U.T)
        if c.size and np.any(c % inv):
            raise ValueError("vector does not lie in the sublattice")
        return (c // inv).dot(V.T).reshape(x.shape)

    def contains(self, x) -> bool:
        try:
            self.coords(x)
            return True
        except ValueError:
            return False

    def divide(self, x, k: int):
        """N-coordinates of x / p^k for ambient x in p^k N; ValueError otherwise."""
        x = np.asarray(x, dtype=object)
        q = self.p ** k
        if x.size and np.any(x % q):
            raise ValueError(f"vector not divisible by p^{k}")
        return self.coords(x // q)

    def __repr__(self):
        return f"SubLattice(index={self.index})"


@dataclass
class LatticeQuotient:
    """M / p^r N as a TruncModule together with projection and lifting matrices."""

    ambient: Lattice
    N: SubLattice
    r: int
    module: TruncModule = field(init=False)

    def __post_init__(self):
        p = self.ambient.p
        d = self.ambient.rank
        Q = np.array(self.N.basis, dtype=object) * (p ** self.r)
        sf = smith_normal_form(Q)
        diag = [sf.D[i][i] if i < len(sf.D[0]) else 0 for i in range(d)]
        keep = []
        exps = []
        for i, dv in enumerate(diag):
            dv = abs(dv)
            if dv == 0:
                raise ValueError("p^r N must have full rank")
            e = _vp(dv, p)
            if p ** e != dv:
                raise ValueError("index of p^r N is not a power of p")
            if e > 0:
                keep.append(i)
                exps.append(e)
        U = np.array(sf.U, dtype=object)
        Uinv = np.array(sf.Uinv, dtype=object)
        self.proj = U[keep, :]  # quotient coordinates of an ambient vector
        self.lift_matrix = Uinv[:, keep]  # ambient representative of quotient coordinates
        orders = [p ** e for e in exps]
        acts = []
        for mat in self.ambient.action:
            m = self.proj.dot(mat).dot(self.lift_matrix)
            acts.append([[int(m[i, j]) % orders[i] for j in range(len(keep))] for i in range(len(keep))])
        self.module = TruncModule(p, exps, acts if keep else np.zeros((len(self.ambient.action), 0, 0)),
                                  group=None, check=False)
        self._orders = np.array(orders, dtype=object)

    def project(self, x):
        """Ambient integer vectors (..., d) to quotient residues (..., d_q)."""
        x = np.asarray(x, dtype=object)
        y = x.dot(self.proj.T)
        return np.array(np.mod(y, self._orders), dtype=np.int64) if y.size else np.zeros(y.shape, np.int64)

    def lift(self, y):
        y = np.asarray(y, dtype=object)
        return y.dot(self.lift_matrix.T)
