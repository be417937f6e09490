"""Group extensions M.P built from a normalized 2-cocycle.

Element (t, g) with t in the module and g in P has id code(t) * |P| + g;
the product is (t1 + g1.t2 + tau(g1, g2), g1 g2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cochains import Cochain, NotACocycle, coboundary, find_cocycle_failure, subgroup_as_group
from .groups import FiniteGroup, Subgroup
from .modules import TruncModule


@dataclass
class ExtensionData:
    base: FiniteGroup
    module: TruncModule
    cocycle: Cochain

    def __post_init__(self):
        if self.cocycle.degree != 2 or self.cocycle.group is not self.base:
            raise ValueError("cocycle must be a 2-cochain on the base group")
        if self.cocycle.module.rank != self.module.rank:
            raise ValueError("cocycle takes values in a different module")


class ExtensionGroup(FiniteGroup):
    def __init__(self, data: ExtensionData, check: bool = True, name: str = ""):
        M, P = data.module, data.base
        if check:
            bad = find_cocycle_failure(data.cocycle)
            if bad is not None:
                raise NotACocycle(f"extension cocycle fails at {bad}", bad)
        self.data = data
        self.module = M
        self.base = P
        self.nP = P.order
        super().__init__(M.size * P.order, p=P.p, name=name or f"ext({M.size}.{P.order})")
        self._tau = data.cocycle.dense().astype(np.int64)  # (|P|, |P|, d)
        self._orders = M.orders

    def split(self, x):
        x = np.asarray(x, dtype=np.int64)
        return self.module.decode(x // self.nP), x % self.nP

    def join(self, t, g):
        return self.module.encode(t) * self.nP + np.asarray(g, dtype=np.int64)

    def mul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        t1, g1 = self.split(a)
        t2, g2 = self.split(b)
        A = self.module.action[g1]
        t = t1 + np.einsum("...ij,...j->...i", A, t2) + self._tau[g1, g2]
        return self.join(t % self._orders, self.base.mul(g1, g2))

    def inv(self, a):
        t, g = self.split(a)
        gi = self.base.inv(g)
        A = self.module.action[gi]
        s = -np.einsum("...ij,...j->...i", A, t) - self._tau[gi, g]
        return self.join(s % self._orders, gi)

    def module_elements(self) -> np.ndarray:
        return np.arange(self.module.size, dtype=np.int64) * self.nP

    def projection(self, x):
        return np.asarray(x, dtype=np.int64) % self.nP


def extension_group(data: ExtensionData, check: bool = True) -> ExtensionGroup:
    return ExtensionGroup(data, check=check)


def lift_subgroup(G: ExtensionGroup, Q: Subgroup, f: Cochain) -> Subgroup:
    """G(f) = {(-f(q), q)} for a 1-cochain f on Q with Delta f = tau|_Q."""
    Hg = subgroup_as_group(Q)
    if f.degree != 1 or f.group is not Hg:
        raise ValueError("f must be a 1-cochain on the subgroup (as returned by subgroup_as_group)")
    from .cochains import restrict
    tau_Q = restrict(G.data.cocycle, Q, module=f.module)
    diff = coboundary(f) - tau_Q
    bad = np.flatnonzero(np.any(diff.values != 0, axis=1))
    if bad.size:
        q = Hg.order - 1
        i, j = divmod(int(bad[0]), q)
        pair = (int(Q.elements[i + 1]), int(Q.elements[j + 1]))
        raise NotACocycle(f"Delta f differs from tau on {pair}", pair)
    vals = np.zeros((Q.order, G.module.rank), dtype=np.int64)
    vals[1:] = f.values
    return Subgroup(G, G.join(-vals % G.module.orders, Q.elements))
