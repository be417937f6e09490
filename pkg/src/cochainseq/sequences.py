"""Cochain sequences alpha_r = pro_r(rho + p^{r - omega} sigma), r >= r0.

rho is an integer cochain over the lattice M, sigma one over the sublattice N
(stored in N-coordinates).  Everything is exact, so evaluation is limited
only by the residue precision of M/p^r N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cochains import (Cochain, NotACocycle, Splitting, coboundary, find_cocycle_failure,
                       free_cohomology, log_order, solve_coboundary_equation)
from .groups import FiniteGroup
from .modules import Lattice, SubLattice


class SeqContext:
    """The data (G, M, N) shared by all sequences over M/p^. N."""

    def __init__(self, G: FiniteGroup, M: Lattice, N: SubLattice):
        if N.ambient is not M:
            raise ValueError("N must be a sublattice of M")
        self.G, self.M, self.N = G, M, N
        self.p = M.p
        self.m = log_order(G).m
        self._splits: dict[int, Splitting] = {}

    def split(self, r: int) -> Splitting:
        if r not in self._splits:
            self._splits[r] = Splitting(self.G, self.M, self.N, r)
        return self._splits[r]

    def module(self, r: int):
        return self.split(r).module

    def zero_rho(self, n):
        return Cochain(self.G, self.M, n)

    def zero_sigma(self, n):
        return Cochain(self.G, self.N.lattice, n)


def _vp_cochain(f: Cochain, p: int):
    """Largest e with f in p^e C (None for f = 0)."""
    vals = [abs(int(x)) for x in f.flat() if int(x)]
    if not vals:
        return None
    e = 0
    while all(v % p ** (e + 1) == 0 for v in vals):
        e += 1
    return e


def _div(f: Cochain, k: int) -> Cochain:
    q = f.module.p ** k
    if any(int(x) % q for x in f.flat()):
        raise ValueError(f"cochain not divisible by p^{k}")
    return f.like(f.values // q)


class CochainSeq:
    def __init__(self, ctx: SeqContext, rho: Cochain, sigma: Cochain, r0: int, omega: int):
        if not 0 <= omega <= r0:
            raise ValueError("need 0 <= omega <= r0")
        if rho.module is not ctx.M or sigma.module is not ctx.N.lattice:
            raise ValueError("rho must live over M and sigma over N")
        if rho.degree != sigma.degree:
            raise ValueError("degree mismatch")
        self.ctx, self.rho, self.sigma, self.r0, self.omega = ctx, rho, sigma, r0, omega

    @property
    def degree(self):
        return self.rho.degree

    @property
    def p(self):
        return self.ctx.p

    def __repr__(self):
        return f"CochainSeq(n={self.degree}, r0={self.r0}, omega={self.omega})"

    def lattice_value(self, r: int) -> Cochain:
        """rho + p^{r-omega} sigma as an M-valued integer cochain."""
        return self.rho + self.ctx.split(r).embed_N(self.sigma) * self.p ** (r - self.omega)

    def eval(self, r: int) -> Cochain:
        if r < self.r0:
            raise ValueError(f"r = {r} is below r0 = {self.r0}")
        return self.ctx.split(r).pro(self.lattice_value(r))

    def _match(self, other):
        if not isinstance(other, CochainSeq) or other.ctx is not self.ctx:
            raise ValueError("sequences live over different modules")
        if other.degree != self.degree or other.r0 != self.r0:
            raise ValueError("degree or r0 mismatch")

    def __add__(self, other: "CochainSeq") -> "CochainSeq":
        self._match(other)
        l = max(self.omega, other.omega)
        p = self.p
        sig = self.sigma * p ** (l - self.omega) + other.sigma * p ** (l - other.omega)
        return CochainSeq(self.ctx, self.rho + other.rho, sig, self.r0, l)

    def scale(self, x: int) -> "CochainSeq":
        return CochainSeq(self.ctx, self.rho * x, self.sigma * x, self.r0, self.omega)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        if not self.rho.is_zero():
            return False
        e = _vp_cochain(self.sigma, self.p)
        return e is None or e >= self.omega

    def equals(self, other) -> bool:
        return (self - other).is_zero()

    def level(self) -> int:
        # rho is determined by the sequence, and sigma up to p^omega C(N);
        # so the level is omega minus the p-divisibility of sigma (capped at omega).
        e = _vp_cochain(self.sigma, self.p)
        if e is None or e >= self.omega:
            return 0
        return self.omega - e

    def normalized(self) -> "CochainSeq":
        """The same sequence written at its level."""
        lev = self.level()
        k = self.omega - lev
        if lev == 0:
            # sigma in p^omega C(N): p^{r-omega} sigma lies in p^r N and drops out
            return CochainSeq(self.ctx, self.rho, self.ctx.zero_sigma(self.degree), self.r0, 0)
        return CochainSeq(self.ctx, self.rho, _div(self.sigma, k), self.r0, lev)

    def delta(self) -> "CochainSeq":
        return CochainSeq(self.ctx, coboundary(self.rho), coboundary(self.sigma), self.r0, self.omega)

    def is_cocycle(self) -> bool:
        return self.delta().is_zero()

    # -- Lemma-level constructions ---------------------------------------
    def is_coboundary_seq(self, r1: int | None = None):
        """A preimage beta with delta(beta) = self and level <= level + m, or None."""
        if self.degree < 1:
            raise ValueError("degree must be positive")
        if not self.is_cocycle():
            raise NotACocycle("sequence is not in the kernel of delta")
        s = self.normalized()
        m, w, p = self.ctx.m, s.omega, self.p
        if w > s.r0 - m:
            raise ValueError(f"level {w} exceeds r0 - m = {s.r0 - m}; refusing")
        r1 = s.r0 if r1 is None else r1
        if r1 < s.r0:
            raise ValueError("r1 below r0")
        sp = s.ctx.split(r1)
        lam = solve_coboundary_equation(s.eval(r1))
        if lam is None:
            return None
        phi = sp.lift(lam)
        psi = sp.divide_N(s.lattice_value(r1) - coboundary(phi), r1)
        sigma_new = s.sigma - psi * p ** w
        chi = solve_coboundary_equation(sigma_new * p ** m)
        if chi is None:
            raise RuntimeError("p^m sigma' is not a coboundary over N")
        kappa = phi - sp.embed_N(chi) * p ** (r1 - w - m)
        beta = CochainSeq(s.ctx, kappa, chi, s.r0, w + m)
        if not beta.delta().equals(self):
            raise RuntimeError("coboundary preimage failed verification")
        return beta


def split_lift(ctx: SeqContext, rho: Cochain, eta: Cochain, r0: int) -> CochainSeq:
    """The sequence pro_r(rho + p^{r-m} sigma) with Delta sigma = p^m eta."""
    m = ctx.m
    if r0 < 2 * m:
        raise ValueError(f"r0 must be at least 2m = {2 * m}")
    for f in (rho, eta):
        bad = find_cocycle_failure(f)
        if bad is not None:
            raise NotACocycle(f"input is not a cocycle at {bad}", bad)
    if eta.degree != rho.degree + 1:
        raise ValueError("eta must have degree n + 1")
    sigma = solve_coboundary_equation(eta * ctx.p ** m)
    if sigma is None:
        raise RuntimeError("p^m eta is not a coboundary; |G| should annihilate cohomology")
    return CochainSeq(ctx, rho, sigma, r0, m)


def seq_through(ctx: SeqContext, z: Cochain, r0: int, r1: int) -> CochainSeq:
    """A sequence of level <= m through the cocycle z over M/p^{r1} N."""
    if r0 < 2 * ctx.m or r1 < r0:
        raise ValueError("need 2m <= r0 <= r1")
    sp = ctx.split(r1)
    if z.module is not sp.module:
        raise ValueError("z must take values in M/p^{r1} N")
    bad = find_cocycle_failure(z)
    if bad is not None:
        raise NotACocycle(f"z is not a cocycle at {bad}", bad)
    rho, eta = sp.decompose(z)
    beta = split_lift(ctx, rho, eta, r0)
    if z.degree == 0:
        return beta
    lam = solve_coboundary_equation(z - beta.eval(r1))
    if lam is None:
        raise RuntimeError("z and its reconstruction differ by a non-coboundary")
    out = CochainSeq(ctx, rho + coboundary(sp.lift(lam)), beta.sigma, r0, beta.omega)
    if out.eval(r1) != z:
        raise RuntimeError("sequence does not pass through z")
    return out


def split_decompose_seq(s: CochainSeq, r: int):
    """Class coordinates (in H^n(G,M), H^{n+1}(G,N)) of eval(s, r)."""
    return s.ctx.split(r).classes(s.eval(r))


@dataclass
class ModuleChange:
    c: Cochain  # cocycle over L/N
    c_bar: Cochain  # integer lift over L (L-coordinates)
    kappa: Cochain  # over M
    lam: Cochain  # over L (L-coordinates)
    omega: int

    def check(self, s: CochainSeq, L: SubLattice, rs) -> bool:
        ctx = s.ctx
        p = ctx.p
        for r in rs:
            sp = ctx.split(r)
            val = (Cochain(ctx.G, ctx.M, s.degree, L.embed(self.c_bar.values)) * p ** r
                   + coboundary(self.kappa)
                   + Cochain(ctx.G, ctx.M, s.degree, L.embed(coboundary(self.lam).values))
                   * p ** (r - self.omega - ctx.m))
            if sp.pro(val) != s.eval(r):
                return False
        return True


def change_module_decompose(s: CochainSeq, L: SubLattice):
    """alpha = i(c) + Delta pro(kappa + p^{. - (omega+m)} lambda) for pL <= N <= L, or None."""
    ctx = s.ctx
    p, n = ctx.p, s.degree
    if L.ambient is not ctx.M:
        raise ValueError("L must be a sublattice of M")
    N_in_L = np.stack([L.coords(ctx.N.basis[:, k]) for k in range(ctx.N.rank)], axis=1)
    for k in range(L.rank):
        if not ctx.N.contains(L.basis[:, k] * p):
            raise ValueError("need pL inside N")
    s = s.normalized()
    w = s.omega
    ctxL = SeqContext(ctx.G, ctx.M, L)
    sigma_L = Cochain(ctx.G, L.lattice, n, L.coords(ctx.N.embed(s.sigma.values)))
    t = CochainSeq(ctxL, s.rho, sigma_L, s.r0, w)
    beta = t.is_coboundary_seq()
    if beta is None:
        return None
    # bring beta to level w + m exactly
    lam = beta.sigma * p ** (w + ctx.m - beta.omega)
    kappa = beta.rho
    rest = sigma_L * p ** ctx.m - coboundary(lam)
    c_bar = _div(rest, w + ctx.m)
    NL = L.lattice.sub(N_in_L)
    Q = L.lattice.quotient(NL, 0)
    c = Cochain(ctx.G, Q.module, n, Q.project(c_bar.values))
    out = ModuleChange(c, c_bar, kappa, lam, w)
    if find_cocycle_failure(c) is not None or not out.check(s, L, (s.r0, s.r0 + 1)):
        raise RuntimeError("module-change decomposition failed verification")
    return out


def i_seq(ctx: SeqContext, L: SubLattice, c_bar: Cochain, r0: int) -> CochainSeq:
    """i_n(c): the sequence pro_r(p^r c_bar), written as (0, p c_bar in N; r0, 1)."""
    sig = ctx.N.coords(L.embed(c_bar.values) * ctx.p)
    return CochainSeq(ctx, ctx.zero_rho(c_bar.degree), Cochain(ctx.G, ctx.N.lattice, c_bar.degree, sig), r0, 1)
