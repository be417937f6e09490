"""Elementary abelian subgroups of family members as triples (U, f, W).

For the member G_r = (T/p^r T) . S with cocycle tau_r, a triple consists of
an elementary abelian U <= S, a degree-1 cochain sequence f over U with
Delta f = tau|_U, and an F_p-subspace W of the U-fixed vectors of T/pT.  It
gives the subgroup

    E_r(U, f, W) = { (p^{r-1} w - f_r(u), u) : w in W, u in U }.

(Module index r here is the exponent of T/p^r T, one more than the index
of the socle layer p^{r-1} T / p^r T.)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cochains import Cochain, restrict, restrict_module, subgroup_as_group
from .extensions import ExtensionData, ExtensionGroup, extension_group
from .families import FamilySpec
from .groups import (ElabData, Subgroup, _elab_element_sets, fp_subspaces, greedy_basis,
                     subgroup_generate)
from .sequences import CochainSeq, SeqContext, seq_through

__all__ = ["ElabTriple", "TriplesReport", "restricted_context", "restricted_tau", "member_group",
           "elab_from_triple", "triple_of", "triples_cover", "chi_seq", "lifts_exist"]


# ---------------------------------------------------------------------------
# restriction of the family data to a subgroup U of S


class _Restriction:
    def __init__(self, spec: FamilySpec, U: Subgroup):
        self.spec, self.U = spec, U
        self.group = subgroup_as_group(U)
        T = restrict_module(spec.module, U)
        self.ctx = SeqContext(self.group, T, T.whole())
        self.pos = {int(x): i for i, x in enumerate(U.elements.tolist())}

    def group_index(self, gs):
        """Positions of elements of U in subgroup_as_group(U)."""
        return np.array([self.pos[int(g)] for g in np.asarray(gs).tolist()], dtype=np.int64)

    def restrict_seq(self, s: CochainSeq) -> CochainSeq:
        c = self.ctx
        return CochainSeq(c, restrict(s.rho, self.U, module=c.M),
                          restrict(s.sigma, self.U, module=c.N.lattice), s.r0, s.omega)


_RESTRICTIONS: dict = {}


def _restriction(spec: FamilySpec, U: Subgroup) -> _Restriction:
    key = (id(spec), U.key)
    if key not in _RESTRICTIONS:
        _RESTRICTIONS[key] = (spec, _Restriction(spec, U))
    return _RESTRICTIONS[key][1]


def restricted_context(spec: FamilySpec, U: Subgroup) -> SeqContext:
    """Sequence context (U, T|_U, T|_U); U is indexed as in subgroup_as_group."""
    return _restriction(spec, U).ctx


def restricted_tau(spec: FamilySpec, U: Subgroup) -> CochainSeq:
    return _restriction(spec, U).restrict_seq(spec.tau_seq)


def member_group(spec: FamilySpec, r: int) -> ExtensionGroup:
    """G_r = (T/p^r T) . S with cocycle tau_r; r >= r0 of the extension sequence."""
    tau = spec.tau_seq.eval(r)
    M = spec.ctx.module(r)
    return extension_group(ExtensionData(spec.base, M, tau), check=M.size * spec.base.order <= 3 ** 8)


def _to_member_coords(spec, ctxU, r, vals):
    """Values in (T|_U)/p^r coordinates to the coordinates of G_r's module."""
    lat = ctxU.split(r).Q.lift(vals)
    return spec.ctx.split(r).Q.project(lat)


def _from_member_coords(spec, ctxU, r, vals):
    lat = spec.ctx.split(r).Q.lift(vals)
    return ctxU.split(r).Q.project(lat)


# ---------------------------------------------------------------------------
# triples


def _fixed_space_ok(spec: FamilySpec, U: Subgroup, W) -> bool:
    p = spec.module.p
    for u in U.elements.tolist():
        A = np.array(spec.module.action[u], dtype=np.int64) % p
        if np.any((W @ A.T - W) % p):
            return False
    return True


@dataclass
class ElabTriple:
    U: Subgroup  # elementary abelian subgroup of the base
    f: CochainSeq  # degree 1 over restricted_context(spec, U), Delta f = tau|_U
    W: np.ndarray  # basis rows (mod p) of a subspace of (T/pT)^U, in T-coordinates
    spec: FamilySpec = field(repr=False)

    def __post_init__(self):
        p = self.spec.module.p
        self.W = np.array(self.W, dtype=np.int64).reshape(-1, self.spec.module.rank) % p
        if self.f.degree != 1 or self.f.ctx is not restricted_context(self.spec, self.U):
            raise ValueError("f must be a 1-sequence over the restricted context of U")
        if not _fixed_space_ok(self.spec, self.U, self.W):
            raise ValueError("W is not fixed by U")

    def check_cocycle_condition(self) -> bool:
        return self.f.delta().equals(restricted_tau(self.spec, self.U))


def elab_from_triple(t: ElabTriple, r: int, G: ExtensionGroup | None = None) -> Subgroup:
    spec = t.spec
    p = spec.module.p
    if not t.check_cocycle_condition():
        raise ValueError("Delta f differs from tau restricted to U")
    G = G if G is not None else member_group(spec, r)
    ctxU = t.f.ctx
    fr = t.f.eval(r)
    vals = np.zeros((t.U.order, spec.module.rank), dtype=np.int64)
    if t.U.order > 1:
        vals[1:] = _to_member_coords(spec, ctxU, r, fr.values)
    # all w in W (T-coordinates mod p), scaled into the socle p^{r-1} T / p^r T
    k = t.W.shape[0]
    coeffs = np.array(np.meshgrid(*[np.arange(p)] * k, indexing="ij")).reshape(k, -1).T if k else np.zeros((1, 0), np.int64)
    ws = (coeffs @ t.W) % p if k else np.zeros((1, spec.module.rank), np.int64)
    soc = spec.ctx.split(r).Q.project(np.array(ws, dtype=object) * p ** (r - 1))
    mod = G.module.orders
    t_all = (soc[:, None, :] - vals[None, :, :]) % mod
    ids = G.join(t_all.reshape(-1, t_all.shape[-1]), np.tile(t.U.elements, ws.shape[0]))
    E = Subgroup(G, np.unique(ids))
    if E.order != ws.shape[0] * t.U.order or not E.is_closed():
        raise RuntimeError("triple does not give a subgroup of the expected order")
    return E


def lifts_exist(G: ExtensionGroup, U: Subgroup) -> bool:
    """Brute force: is there an elementary abelian complement over U inside G?"""
    if U.order == 1:
        return True
    basis = greedy_basis(U.group, U.elements)
    nM = G.module.size
    choices = []
    for g in basis:
        cand = G.join(G.module.decode(np.arange(nM)), np.full(nM, g))
        choices.append(cand[G.element_orders[cand] == G.p])
    # complements are determined by the lifts of a basis; search over them
    def rec(i, chosen):
        if i == len(basis):
            S = subgroup_generate(G, chosen)
            return S.order == U.order
        for x in choices[i].tolist():
            if rec(i + 1, chosen + [x]):
                return True
        return False
    return rec(0, [])


def triple_of(spec: FamilySpec, E: Subgroup, r: int) -> ElabTriple:
    """A triple with elab_from_triple(t, r) = E for an elementary abelian E <= G_r."""
    G = E.group
    p = spec.module.p
    S = spec.base
    t_parts, g_parts = G.split(E.elements)
    U = Subgroup(S, np.unique(g_parts))
    in_mod = g_parts == S.identity
    W_vals = t_parts[in_mod]
    lat = spec.ctx.split(r).Q.lift(W_vals)
    if np.any(np.asarray(lat % p ** (r - 1), dtype=np.int64)):
        raise RuntimeError("module part of an elementary abelian is outside the socle")
    W_all = np.array(lat // p ** (r - 1), dtype=np.int64) % p
    # basis of W
    W = []
    for w in W_all.tolist():
        if not any(w):
            continue
        cand = np.array(W + [w], dtype=np.int64)
        if _rank_mod(cand, p) == len(W) + 1:
            W.append(w)
    R = _restriction(spec, U)
    ctxU = R.ctx
    tauU = R.restrict_seq(spec.tau_seq)
    if U.order == 1:
        f = CochainSeq(ctxU, ctxU.zero_rho(1), ctxU.zero_sigma(1), tauU.r0, 0)
        return ElabTriple(U, f, np.array(W, dtype=np.int64).reshape(-1, spec.module.rank), spec)
    # a complement of E over U: lift a basis of U into E
    basis = greedy_basis(S, U.elements)
    lifts = []
    for g in basis:
        lifts.append(int(E.elements[np.flatnonzero(g_parts == g)[0]]))
    C = subgroup_generate(G, lifts)
    if C.order != U.order:
        raise RuntimeError("basis lifts do not span a complement")
    tc, gc = G.split(C.elements)
    vals = np.zeros((U.order, G.module.rank), dtype=np.int64)
    vals[R.group_index(gc)] = (-tc) % G.module.orders
    fr_vals = _from_member_coords(spec, ctxU, r, vals[1:])
    fr = Cochain(R.group, ctxU.module(r), 1, fr_vals)
    f0 = tauU.is_coboundary_seq()
    if f0 is None:
        raise RuntimeError("U lifts at r but tau|_U is not a coboundary sequence")
    f0 = _at_r0(f0, tauU.r0)
    z = fr - f0.eval(r)
    zs = seq_through(ctxU, z, tauU.r0, r)
    f = f0 + zs
    return ElabTriple(U, f, np.array(W, dtype=np.int64).reshape(-1, spec.module.rank), spec)


def _at_r0(s: CochainSeq, r0: int) -> CochainSeq:
    return s if s.r0 == r0 else CochainSeq(s.ctx, s.rho, s.sigma, r0, s.omega)


def _rank_mod(A, p):
    from .groups import fp_rank
    return fp_rank(A, p)


@dataclass
class TriplesReport:
    r: int
    total: int
    covered: int
    exceptions: list
    max_level: int

    @property
    def ok(self) -> bool:
        return not self.exceptions and self.covered == self.total

    def to_dict(self) -> dict:
        return {"r": self.r, "total": self.total, "covered": self.covered,
                "exceptions": self.exceptions, "max_level": self.max_level, "ok": self.ok}


def triples_cover(spec: FamilySpec, r: int, include_trivial: bool = True) -> TriplesReport:
    """Check that every elementary abelian of G_r comes from a triple."""
    G = member_group(spec, r)
    sets = _elab_element_sets(G, include_trivial)
    exceptions, covered, lev = [], 0, 0
    for els in sets:
        E = Subgroup(G, els)
        try:
            t = triple_of(spec, E, r)
            F = elab_from_triple(t, r, G)
            if F.key != E.key:
                raise RuntimeError("reconstruction differs")
            lev = max(lev, t.f.level())
            covered += 1
        except (RuntimeError, ValueError) as exc:
            exceptions.append({"elements": els[:8].tolist(), "order": int(els.size), "error": str(exc)})
    return TriplesReport(r, len(sets), covered, exceptions, lev)


# ---------------------------------------------------------------------------
# the comparison sequence for conjugate subgroups


def chi_seq(spec: FamilySpec, g: int, U: Subgroup, f: CochainSeq, f2: CochainSeq) -> CochainSeq:
    """chi(v) = g.f(v^g) - tau(g, v^g) + tau(v, g) - f2(v) for v in gU = g U g^{-1}.

    f is over U, f2 over gU (restricted contexts); the result lives over gU.
    """
    S = spec.base
    gi = int(S.inv(g))
    gU = Subgroup(S, np.unique(S.conj(np.full(U.order, g), U.elements)))
    R, R2 = _restriction(spec, U), _restriction(spec, gU)
    if f.ctx is not R.ctx or f2.ctx is not R2.ctx or f.degree != 1 or f2.degree != 1:
        raise ValueError("f must live over U and f2 over gU (degree 1)")
    tau = spec.tau_seq
    for s, Rx in ((f, R), (f2, R2)):
        if not s.delta().equals(Rx.restrict_seq(tau)):
            raise ValueError("Delta f differs from tau restricted to its subgroup")
    if f.r0 != f2.r0 or f.r0 != tau.r0:
        raise ValueError("sequences must share r0")
    p = spec.module.p
    w = max(f.omega, f2.omega, tau.omega)
    A = spec.module.action[g]
    ctx = R2.ctx
    vs = gU.elements[1:]
    vg = S.mul(S.mul(np.full(vs.size, gi), vs), np.full(vs.size, g))  # v^g = g^{-1} v g
    iu = R.group_index(vg) - 1
    rows_gv = _pair_rows(S, np.full(vs.size, g), vg)
    rows_vg = _pair_rows(S, vs, np.full(vs.size, g))

    def part(x_f, x_f2, x_tau, scale_f, scale_f2, scale_tau):
        out = np.zeros((vs.size, spec.module.rank), dtype=object)
        out += np.asarray(x_f[iu], dtype=object).dot(np.asarray(A, dtype=object).T) * scale_f
        out -= _rows(x_tau, rows_gv) * scale_tau
        out += _rows(x_tau, rows_vg) * scale_tau
        out -= np.asarray(x_f2, dtype=object) * scale_f2
        return out

    rho = part(f.rho.values, f2.rho.values, tau.rho.values, 1, 1, 1)
    # sigma parts live in T-coordinates (N = T), brought to the common omega
    sig = part(f.sigma.values, f2.sigma.values, tau.sigma.values,
               p ** (w - f.omega), p ** (w - f2.omega), p ** (w - tau.omega))
    return CochainSeq(ctx, Cochain(R2.group, ctx.M, 1, rho),
                      Cochain(R2.group, ctx.N.lattice, 1, sig), f.r0, w)


def _pair_rows(S, a, b):
    """Rows of normalized 2-cochains at (a, b); -1 where an argument is the identity."""
    q = S.order - 1
    a, b = np.asarray(a), np.asarray(b)
    out = (a - 1) * q + (b - 1)
    out[(a == 0) | (b == 0)] = -1
    return out


def _rows(vals, rows):
    vals = np.asarray(vals, dtype=object)
    out = np.zeros((rows.size, vals.shape[1]), dtype=object)
    ok = rows >= 0
    out[ok] = vals[rows[ok]]
    return out
