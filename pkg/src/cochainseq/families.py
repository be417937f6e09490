"""Concrete group families: main-line quotients, skeleton groups and coclass-family members."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import ceil

import numpy as np

from .cochains import Cochain
from .cyclotomic import CycInt, CycRing, valuation
from .extensions import ExtensionData, ExtensionGroup, extension_group
from .groups import FiniteGroup, cyclic_group
from .modules import Lattice, TruncModule
from .sequences import CochainSeq, SeqContext, split_lift


# ---------------------------------------------------------------------------
# main line (O / alpha^s O) x| C_p


@dataclass(frozen=True)
class MainLineSpec:
    p: int = 3
    s: int = 4

    def __post_init__(self):
        if self.p % 2 == 0 or self.p < 3:
            raise ValueError("main-line groups need an odd prime")
        if self.s < 1:
            raise ValueError("s must be positive")


def _alpha_quotient(ring: CycRing, lo: int, hi: int):
    """Digit exponents of p^lo / p^hi in the alpha basis, and the embedding exponents of p^lo."""
    e = ring.ideal_exponents(lo)
    f = ring.ideal_exponents(hi)
    return e, [b - a for a, b in zip(e, f)]


class MainLineGroup(ExtensionGroup):
    """(O/alpha^s O) x| <tau>, tau acting by theta.  Module digits are alpha-coordinates."""

    def __init__(self, spec: MainLineSpec):
        p, s = spec.p, spec.s
        self.spec = spec
        ring = CycRing(p, 1, ceil(s / (p - 1)) + 1)
        self.ring = ring
        _, exps = _alpha_quotient(ring, 0, s)
        M_th = ring.mult_matrix_alpha(ring.theta)
        acts = [np.eye(ring.phi, dtype=object)]
        for _ in range(1, p):
            acts.append(M_th.dot(acts[-1]) % ring.mod)
        C = cyclic_group(p)
        keep = [k for k, e in enumerate(exps) if e > 0]
        acts = [np.array(a, dtype=np.int64)[np.ix_(keep, keep)] for a in acts]
        self.digit_index = keep
        M = TruncModule(p, [exps[k] for k in keep], acts, group=C)
        tau = Cochain(C, M, 2)
        super().__init__(ExtensionData(C, M, tau), check=False, name=f"mainline({p},{s})")

    def element(self, v=0, c: int = 0) -> int:
        """Element v tau^c; v an int, CycInt or alpha-coordinate list."""
        if isinstance(v, CycInt):
            coords = v.alpha_coords()
        elif isinstance(v, int):
            coords = [v] + [0] * (self.ring.phi - 1)
        else:
            coords = list(v) + [0] * (self.ring.phi - len(v))
        t = np.array([coords[k] for k in self.digit_index], dtype=np.int64)
        return int(self.join(t % self.module.orders, c % self.spec.p))

    def alpha_power(self, k: int) -> int:
        return self.element(self.ring.alpha ** k)

    def label(self, x: int) -> str:
        """'a^k' for a module element of valuation k, 'c t' (c = v mod alpha) for v tau^c'."""
        t, g = self.split(int(x))
        coords = [0] * self.ring.phi
        for k, d in zip(self.digit_index, t.tolist()):
            coords[k] = int(d)
        if int(g) == 0:
            if not any(coords):
                return "1"
            return f"α^{valuation(self.ring.from_alpha(coords))}"
        c = coords[0] % self.spec.p
        return f"{c}τ" if int(g) == 1 else f"{c}τ^{int(g)}"

    def subgroup_label(self, elements) -> str:
        """Figure-style label: one tau-type generator (if any) and the module valuations."""
        labs = [self.label(x) for x in elements if int(x) != self.identity]
        if not labs:
            return "1"
        taus = sorted(l for l in labs if l.endswith("τ"))
        mods = sorted({l for l in labs if l.startswith("α")})
        return "<" + ", ".join(([taus[0]] if taus else []) + mods) + ">"


def mainline_group(spec: MainLineSpec | int = 3, s: int | None = None) -> MainLineGroup:
    if not isinstance(spec, MainLineSpec):
        spec = MainLineSpec(spec, 4 if s is None else s)
    return MainLineGroup(spec)


# ---------------------------------------------------------------------------
# skeleton groups R_{j-3, c gamma_0, m}


def skeleton_k(j: int) -> int:
    return 2 * j if j % 3 == 0 else 2 * j - 1


@dataclass(frozen=True)
class SkeletonSpec:
    j: int = 7
    c: tuple = (1,)  # theta-coefficients of the unit c
    m: int = 7

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        if self.j < 7:
            raise ValueError("j must be at least 7")
        if not self.j <= self.m <= skeleton_k(self.j):
            raise ValueError(f"m must lie in [{self.j}, {skeleton_k(self.j)}]")
        if sum(self.c) % 3 == 0:  # c = c(1) mod (theta - 1)
            raise ValueError("c is not a unit")


class SkeletonGroup(FiniteGroup):
    """R = (T/T_m, *) x| C_9 with T = p^{j-3}.

    Element (x, a) has id code(x) * 9 + a, where code packs the alpha-digits
    d_k of x = sum d_k 3^{e_k} alpha^k (e_k the exponents of T).
    """

    p_ = 3

    def __init__(self, spec: SkeletonSpec):
        self.spec = spec
        j, m = spec.j, spec.m
        lo, hi = j - 3, j - 3 + m
        K = ceil(hi / 6) + 2
        R = CycRing(3, 2, K)
        self.ring = R
        self.K, self.mod = K, R.mod
        self.e, self.radix = _alpha_quotient(R, lo, hi)
        self.scale = np.array([3 ** x for x in self.e], dtype=np.int64)
        self.orders = np.array([3 ** x for x in self.radix], dtype=np.int64)
        size = int(np.prod(self.orders))
        super().__init__(size * 9, p=3, name=f"R({j - 3},{list(spec.c)},{m})")
        self.tsize = size
        c = R(list(spec.c))
        if valuation(c) != 0:
            raise ValueError("c is not a unit")
        self.c = c
        th = np.array(R.mult_matrix_alpha(R.theta), dtype=object)
        pw = [np.eye(6, dtype=object)]
        for _ in range(8):
            pw.append(th.dot(pw[-1]) % R.mod)
        self.theta_pow = np.array(pw, dtype=np.int64)  # (9, 6, 6)
        G0 = R.gamma0_tensor_alpha()
        Cm = np.array(R.mult_matrix_alpha(c), dtype=object)
        half = pow(2, -1, R.mod)
        # Gam[i, j, :] = 1/2 c gamma0(alpha^i, alpha^j)
        Gam = np.einsum("kl,ijl->ijk", Cm, G0) * half % R.mod
        self.gamma = np.array(Gam, dtype=np.int64)

    # -- encoding ------------------------------------------------------------
    def digits_to_alpha(self, d):
        return (np.asarray(d, dtype=np.int64) * self.scale) % self.mod

    def alpha_to_digits(self, x):
        x = np.asarray(x, dtype=np.int64) % self.mod
        if np.any(x % self.scale):
            raise ValueError("element does not lie in T")
        return (x // self.scale) % self.orders

    def encode_t(self, d):
        d = np.asarray(d, dtype=np.int64)
        code = np.zeros(d.shape[:-1], dtype=np.int64)
        for i in range(6):
            code = code * self.orders[i] + d[..., i]
        return code

    def decode_t(self, code):
        code = np.asarray(code, dtype=np.int64)
        out = np.zeros(code.shape + (6,), dtype=np.int64)
        for i in reversed(range(6)):
            out[..., i] = code % self.orders[i]
            code = code // self.orders[i]
        return out

    def split(self, x):
        x = np.asarray(x, dtype=np.int64)
        return self.digits_to_alpha(self.decode_t(x // 9)), x % 9

    def join(self, xa, a):
        return self.encode_t(self.alpha_to_digits(xa)) * 9 + np.asarray(a, dtype=np.int64) % 9

    def _star(self, x, y):
        g = np.einsum("...i,ijk->...jk", x, self.gamma) % self.mod
        g = np.einsum("...jk,...j->...k", g, y) % self.mod
        return (x + y + g) % self.mod

    def _rot(self, a, y):
        return np.einsum("...ij,...j->...i", self.theta_pow[a], y) % self.mod

    def _tables(self):
        # alpha coordinates of every code, theta^a on codes, and the flattened form
        if getattr(self, "_alpha_tab", None) is None:
            codes = np.arange(self.tsize, dtype=np.int64)
            self._alpha_tab = self.digits_to_alpha(self.decode_t(codes))
            rot = np.empty((9, self.tsize), dtype=np.int64)
            for a in range(9):
                rot[a] = self.encode_t(self.alpha_to_digits(self._rot(a, self._alpha_tab)))
            self._rot_tab = rot
            self._gam_flat = self.gamma.reshape(36, 6).astype(np.float64)
            w = np.ones(6, dtype=np.int64)
            for i in reversed(range(5)):
                w[i] = w[i + 1] * self.orders[i + 1]
            self._weights = w
        return self._alpha_tab

    def mul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        tab = self._tables()
        shape = a.shape
        a, b = a.ravel(), b.ravel()
        i, k = a % 9, b % 9
        x = tab[a // 9]
        y = tab[self._rot_tab[i, b // 9]]
        # products stay far below 2^53, so the float matmul is exact
        outer = (x[:, :, None] * y[:, None, :]).reshape(-1, 36).astype(np.float64)
        g = (outer @ self._gam_flat).astype(np.int64)
        z = (x + y + g) % self.mod
        code = ((z // self.scale) % self.orders) @ self._weights
        return (code * 9 + (i + k) % 9).reshape(shape)

    def inv(self, a):
        x, i = self.split(a)
        ii = (-i) % 9
        # (x, i)^{-1} = (theta^{-i} (-x), -i), since x * (-x) = x - x
        return self.join(self._rot(ii, (-x) % self.mod), ii)

    # -- convenience ---------------------------------------------------------
    def element(self, v=None, a: int = 0) -> int:
        """(v + T_m) tau^a for v a CycInt in T (or alpha-coordinates)."""
        if v is None:
            x = np.zeros(6, dtype=np.int64)
        elif isinstance(v, CycInt):
            x = np.array(v.alpha_coords(), dtype=np.int64)
        else:
            x = np.array(list(v) + [0] * (6 - len(v)), dtype=np.int64)
        return int(self.join(x, a))

    def t_layer(self, l: int) -> np.ndarray:
        """Sorted ids of T_l / T_m (l between 0 and m)."""
        j, m = self.spec.j, self.spec.m
        if not 0 <= l <= m:
            raise ValueError("layer out of range")
        e_l = self.ring.ideal_exponents(j - 3 + l)
        step = [3 ** (a - b) for a, b in zip(e_l, self.e)]
        grids = np.meshgrid(*[np.arange(0, o, s) for o, s in zip(self.orders, step)], indexing="ij")
        d = np.stack([g.reshape(-1) for g in grids], axis=1)
        return np.sort(self.encode_t(d) * 9)

    def generator_candidates(self):
        basis = [self.element([3 ** self.e[k] if i == k else 0 for i in range(6)]) for k in range(6)]
        return [self.element(None, 1)] + basis


def skeleton_group(spec: SkeletonSpec | None = None, **kw) -> SkeletonGroup:
    return SkeletonGroup(spec or SkeletonSpec(**kw))


def _t_mod_t3(j: int):
    R = CycRing(3, 2, max(2, ceil(j / 6) + 1))
    e, radix = _alpha_quotient(R, j - 3, j)
    th = np.array(R.mult_matrix_alpha(R.theta), dtype=object)
    grids = np.meshgrid(*[np.arange(3 ** r) for r in radix], indexing="ij")
    digits = np.stack([g.reshape(-1) for g in grids], axis=1)
    scale = np.array([3 ** x for x in e], dtype=object)
    orders = np.array([3 ** r for r in radix], dtype=object)
    return R, th, digits, scale, orders


def _orbits_T_mod_T3(j: int):
    R, th, digits, scale, orders = _t_mod_t3(j)
    key = {tuple(d): i for i, d in enumerate(digits.tolist())}
    seen = [-1] * len(digits)
    orbits = []
    for i, d in enumerate(digits.tolist()):
        if seen[i] >= 0:
            continue
        orb = []
        cur = d
        while key[tuple(cur)] not in orb:
            orb.append(key[tuple(cur)])
            x = np.array(cur, dtype=object) * scale
            y = th.dot(x) % R.mod
            cur = [int(v) for v in (y // scale) % orders]
        for k in orb:
            seen[k] = len(orbits)
        orbits.append(sorted(orb))
    return R, digits, scale, orbits


def count_orbits_T_mod_T3(j: int) -> int:
    """Orbits of multiplication by theta on T/T_3 = p^{j-3}/p^j."""
    return len(_orbits_T_mod_T3(j)[3])


def orbit_sizes_T_mod_T3(j: int) -> list[int]:
    return sorted(len(o) for o in _orbits_T_mod_T3(j)[3])


def orbit_representatives_v(j: int) -> list[CycInt]:
    """One v in T per orbit on T/T_3: the lexicographically least digit vector."""
    R, digits, scale, orbits = _orbits_T_mod_T3(j)
    reps = []
    for orb in orbits:
        d = min(tuple(digits[k].tolist()) for k in orb)
        reps.append(R.from_alpha([int(a) * int(s) for a, s in zip(d, scale)]))
    return reps


# ---------------------------------------------------------------------------
# coclass families G_j = (T / p^j T) . S


def theta_lattice(p: int, group: FiniteGroup, generator: int = 1) -> Lattice:
    """Z_p[theta] (theta a primitive p-th root) with group element g^k acting by theta^k.

    The group must be cyclic of order p generated by `generator`; the basis is 1, theta, ...
    """
    d = p - 1
    A = np.zeros((d, d), dtype=np.int64)
    for i in range(d - 1):
        A[i + 1, i] = 1
    A[:, d - 1] = -1  # theta^{p-1} = -(1 + ... + theta^{p-2})
    acts = [None] * group.order
    x, P = group.identity, np.eye(d, dtype=np.int64)
    for _ in range(group.order):
        acts[x] = P
        x = int(group.mul(x, generator))
        P = A @ P
    return Lattice(p, acts, group)


@dataclass
class FamilySpec:
    """base S, lattice T (uniserial action), cocycles rho in Z^2 and eta in Z^3, member index j."""

    base: FiniteGroup
    module: Lattice
    rho: Cochain
    eta: Cochain
    j: int
    ctx: SeqContext = field(init=False, repr=False)

    def __post_init__(self):
        a = SeqContext(self.base, self.module, self.module.whole())
        self.ctx = a
        if self.j < 3 * a.m + 1:
            raise ValueError(f"need j >= 3m + 1 = {3 * a.m + 1}")
        if self.rho.degree != 2 or self.eta.degree != 3:
            raise ValueError("rho must have degree 2 and eta degree 3")

    @cached_property
    def tau_seq(self) -> CochainSeq:
        eta = Cochain(self.base, self.ctx.N.lattice, 3, self.eta.values)
        return split_lift(self.ctx, self.rho, eta, 2 * self.ctx.m)


def family_member(spec: FamilySpec) -> ExtensionGroup:
    """The extension of S by T/p^j T with cocycle tau_j."""
    tau = spec.tau_seq.eval(spec.j)
    M = spec.ctx.module(spec.j)
    return extension_group(ExtensionData(spec.base, M, tau), check=M.size * spec.base.order <= 3 ** 8)


def default_family(j: int = 4, p: int = 3) -> FamilySpec:
    """S = C_p, T = Z_p[theta] rank p-1, rho = 0 and eta a generator of H^3(C_p, T)."""
    from .cochains import free_cohomology
    S = cyclic_group(p)
    T = theta_lattice(p, S)
    h = free_cohomology(S, T, 3)
    if not h.orders:
        raise RuntimeError("H^3(C_p, T) vanished unexpectedly")
    eta = h.generators()[0]
    return FamilySpec(S, T, Cochain(S, T, 2), eta, j)
