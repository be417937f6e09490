"""Exact linear algebra over Z/p^K and over the integers.

Everything here works with a prime power modulus p^K (kept below 2^31 so
that products fit in int64) or, for the Smith normal form, with exact Python
integers.  Over Z/p^K the elimination always pivots on an entry of minimal
p-adic valuation; the resulting diagonal form gives generation-complete
kernels, which plain field-style echelon forms would miss.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    pass


class ContainmentError(ValueError):
    """Raised when a generator of B is not in span(Z); carries the vector."""

    def __init__(self, msg, witness):
        super().__init__(msg)
        self.witness = witness


def vp(x: int, p: int) -> int | float:
    """p-adic valuation of an integer (inf for 0)."""
    x = int(x)
    if x == 0:
        return float("inf")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# residue matrices


@dataclass(frozen=True)
class ResidueMatrix:
    """Dense matrix over Z/p^K (K = 0 means exact integers)."""

    p: int
    K: int
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2:
            raise DimensionError("entries must be two dimensional")
        if self.K:
            a = np.mod(a.astype(np.int64), self.p ** self.K)
        object.__setattr__(self, "entries", a)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def modulus(self) -> int:
        return self.p ** self.K if self.K else 0

    @classmethod
    def from_triplets(cls, p, K, shape, triplets: Iterable[tuple[int, int, int]]):
        a = np.zeros(shape, dtype=np.int64 if K else object)
        if not K:
            a[:] = 0
        for i, j, v in triplets:
            a[i, j] += v
        return cls(p, K, a)

    def __matmul__(self, x):
        y = self.entries @ np.asarray(x)
        return np.mod(y, self.modulus) if self.K else y


@dataclass
class SolutionSet:
    particular: np.ndarray | None
    kernel_basis: list[np.ndarray] = field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return self.particular is not None


@dataclass(frozen=True)
class AbelianInvariants:
    """Isomorphism type of a finite abelian p-group, orders sorted descending."""

    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "orders", tuple(sorted((int(o) for o in self.orders if o != 1), reverse=True))
        )

    @property
    def order(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def __str__(self):
        return " x ".join(f"C{o}" for o in self.orders) or "trivial"


# ---------------------------------------------------------------------------
# diagonalisation over Z/p^K


def _check_modulus(p, K):
    if K < 1:
        raise ValueError("K must be positive")
    if p ** K >= 2 ** 31:
        raise ValueError(f"modulus {p}^{K} too large for int64 elimination")


def valuations(a: np.ndarray, p: int, K: int) -> np.ndarray:
    """Entrywise p-adic valuation of residues mod p^K, capped at K (zero -> K)."""
    t = np.mod(np.asarray(a, dtype=np.int64), p ** K)
    v = np.zeros(t.shape, dtype=np.int64)
    live = t != 0
    v[~live] = K
    for _ in range(K):
        d = live & (t % p == 0)
        if not d.any():
            break
        v += d
        t = np.where(d, t // p, t)
        live = d
    return v


@dataclass
class LocalSmith:
    """U A V = diag(p^{v_0}, ..., p^{v_{r-1}}, 0, ...) over Z/p^K."""

    p: int
    K: int
    vals: list[int]
    V: np.ndarray
    UB: np.ndarray | None
    Uinv: np.ndarray | None

    @property
    def rank(self) -> int:
        return len(self.vals)


def local_smith(A, p: int, K: int, B=None, track_uinv: bool = False) -> LocalSmith:
    """Diagonalise A over Z/p^K, applying the same row operations to B."""
    _check_modulus(p, K)
    mod = p ** K
    A = np.mod(np.array(A, dtype=np.int64), mod)
    if A.ndim != 2:
        raise DimensionError("A must be a matrix")
    rows, cols = A.shape
    if B is not None:
        B = np.array(B, dtype=np.int64)
        if B.ndim == 1:
            B = B.reshape(rows, 1)
        B = np.mod(B, mod)
    V = np.eye(cols, dtype=np.int64)
    Uinv = np.eye(rows, dtype=np.int64) if track_uinv else None
    vals: list[int] = []
    t = 0
    while t < min(rows, cols):
        sub = A[t:, t:]
        v = valuations(sub, p, K)
        k = int(np.argmin(v))
        i, j = divmod(k, sub.shape[1])
        vmin = int(v[i, j])
        if vmin >= K:
            break
        i += t
        j += t
        if i != t:
            A[[t, i]] = A[[i, t]]
            if B is not None:
                B[[t, i]] = B[[i, t]]
            if Uinv is not None:
                Uinv[:, [t, i]] = Uinv[:, [i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        piv = int(A[t, t])
        unit = piv // p ** vmin
        uinv = pow(unit, -1, mod)
        A[t] = (A[t] * uinv) % mod
        if B is not None:
            B[t] = (B[t] * uinv) % mod
        if Uinv is not None:
            Uinv[:, t] = (Uinv[:, t] * unit) % mod
        pv = p ** vmin
        f = A[t + 1:, t] // pv
        if f.any():
            A[t + 1:] = (A[t + 1:] - np.outer(f, A[t])) % mod
            if B is not None:
                B[t + 1:] = (B[t + 1:] - np.outer(f, B[t])) % mod
            if Uinv is not None:
                Uinv[:, t] = (Uinv[:, t] + Uinv[:, t + 1:] @ f) % mod
        g = A[t, t + 1:] // pv
        if g.any():
            V[:, t + 1:] = (V[:, t + 1:] - np.outer(V[:, t], g)) % mod
            A[t, t + 1:] = 0
        vals.append(vmin)
        t += 1
    return LocalSmith(p, K, vals, V, B, Uinv)


def howell_solve(A: ResidueMatrix | np.ndarray, b, p: int | None = None, K: int | None = None) -> SolutionSet:
    """Solve A x = b over Z/p^K; the kernel basis generates the whole kernel."""
    if isinstance(A, ResidueMatrix):
        p, K, A = A.p, A.K, A.entries
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if b.shape[0] != A.shape[0]:
        raise DimensionError(f"b has length {b.shape[0]}, A has {A.shape[0]} rows")
    mod = p ** K
    ls = local_smith(A, p, K, B=b)
    c = ls.UB[:, 0]
    cols = A.shape[1]
    y = np.zeros(cols, dtype=np.int64)
    ok = True
    for i, v in enumerate(ls.vals):
        ci = int(c[i])
        if ci % p ** v:
            ok = False
            break
        y[i] = (ci // p ** v) % p ** (K - v)
    if ok and np.any(c[ls.rank:] % mod):
        ok = False
    kernel = []
    for i, v in enumerate(ls.vals):
        if v > 0:
            kernel.append((ls.V[:, i] * p ** (K - v)) % mod)
    for i in range(ls.rank, cols):
        kernel.append(ls.V[:, i].copy())
    particular = (ls.V @ y) % mod if ok else None
    return SolutionSet(particular, kernel)


def howell_form(A, p: int, K: int) -> np.ndarray:
    """Row Howell form of A over Z/p^K (canonical generators of the row span).

    Rows are in echelon shape with leading entries powers of p, entries above
    a leading entry reduced below it, and the set is closed under the
    annihilator multiplications p^{K-v} * row.
    """
    mod = p ** K
    H = [list(map(int, r)) for r in np.mod(np.asarray(A, dtype=np.int64), mod)]
    cols = len(H[0]) if H else np.asarray(A).shape[1]
    out: list[list[int]] = []
    pending = [r for r in H if any(r)]
    for col in range(cols):
        # rows whose first nonzero is at col
        cand = [r for r in pending if _lead(r) == col]
        rest = [r for r in pending if _lead(r) != col]
        if not cand:
            pending = rest
            continue
        cand.sort(key=lambda r: vp(r[col], p))
        piv = cand[0]
        v = int(vp(piv[col], p))
        unit = piv[col] // p ** v
        uinv = pow(unit, -1, mod)
        piv = [(x * uinv) % mod for x in piv]
        for r in cand[1:]:
            f = r[col] // p ** v
            r2 = [(x - f * y) % mod for x, y in zip(r, piv)]
            if any(r2):
                rest.append(r2)
        sat = [(x * p ** (K - v)) % mod for x in piv]
        if any(sat):
            rest.append(sat)
        out.append(piv)
        pending = rest
    # reduce entries above pivots
    for i, r in enumerate(out):
        c = _lead(r)
        pv = r[c]
        for k in range(i):
            q = out[k][c] // pv
            if q:
                out[k] = [(x - q * y) % mod for x, y in zip(out[k], r)]
    return np.array(out, dtype=np.int64).reshape(len(out), cols)


def _lead(row):
    for i, x in enumerate(row):
        if x:
            return i
    return -1


# ---------------------------------------------------------------------------
# mixed moduli: homomorphisms between modules  (+) Z/p^{e_i}


def _embed_rows(A, row_exps, K, p):
    scale = np.array([p ** (K - f) for f in row_exps], dtype=np.int64)
    return (np.asarray(A, dtype=np.int64) * scale[:, None]) % p ** K


def solve_mixed(A, b, p: int, col_exps: Sequence[int], row_exps: Sequence[int]) -> SolutionSet:
    """Solve A x = b for a homomorphism (+)Z/p^{col_exps} -> (+)Z/p^{row_exps}."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape != (len(row_exps), len(col_exps)):
        raise DimensionError("matrix shape does not match module ranks")
    K = max(list(col_exps) + list(row_exps) + [1])
    At = _embed_rows(A, row_exps, K, p)
    bt = _embed_rows(np.asarray(b, dtype=np.int64).reshape(-1, 1), row_exps, K, p)[:, 0]
    sol = howell_solve(At, bt, p, K)
    cm = np.array([p ** e for e in col_exps], dtype=np.int64)
    part = None if sol.particular is None else sol.particular % cm
    kern = [k % cm for k in sol.kernel_basis]
    return SolutionSet(part, [k for k in kern if k.any()])


@dataclass
class Quotient:
    invariants: AbelianInvariants
    generators: list[np.ndarray]  # ambient vectors, one per invariant order


def quotient_invariants(Z_gens, B_gens, exps: Sequence[int], p: int, with_generators=False):
    """Invariants of span(Z)/span(B) inside (+) Z/p^{exps}.

    Returns AbelianInvariants, or a Quotient (invariants plus ambient
    representatives of a basis of the quotient) when with_generators is set.
    """
    n = len(exps)
    K = max(list(exps) + [1])
    mod = p ** K
    emb = np.array([p ** (K - e) for e in exps], dtype=np.int64)
    Z = [np.asarray(z, dtype=np.int64).reshape(-1) for z in Z_gens]
    B = [np.asarray(b, dtype=np.int64).reshape(-1) for b in B_gens]
    for v in Z + B:
        if v.shape[0] != n:
            raise DimensionError("generator length does not match ambient rank")
    if not Z:
        for b in B:
            if np.any(b % np.array([p ** e for e in exps])):
                raise ContainmentError("B not contained in Z", b)
        out = AbelianInvariants(())
        return Quotient(out, []) if with_generators else out
    Zm = (np.stack(Z, axis=1) * emb[:, None]) % mod
    Bm = (np.stack(B, axis=1) * emb[:, None]) % mod if B else np.zeros((n, 0), dtype=np.int64)
    ls = local_smith(Zm, p, K, B=Bm, track_uinv=with_generators)
    r = ls.rank
    C = ls.UB
    for l in range(C.shape[1]):
        col = C[:, l]
        bad = np.any(col[r:] % mod) or any(int(col[i]) % p ** v for i, v in enumerate(ls.vals))
        if bad:
            raise ContainmentError("B not contained in Z", B[l])
    span_exps = [K - v for v in ls.vals]
    if r == 0:
        out = AbelianInvariants(())
        return Quotient(out, []) if with_generators else out
    # coordinates of B in span(Z) = (+) Z/p^{K-v_i}; quotient = cokernel of [Y | diag]
    Y = np.zeros((r, C.shape[1]), dtype=np.int64)
    for i, v in enumerate(ls.vals):
        Y[i] = (C[i] // p ** v) % p ** (K - v)
    rel = np.concatenate([Y, np.diag([p ** e for e in span_exps]).astype(np.int64)], axis=1)
    ls2 = local_smith(rel, p, K, track_uinv=with_generators)
    # rows beyond the rank of rel are free modulo p^K, i.e. cyclic of order p^K
    w_all = list(ls2.vals) + [K] * (r - ls2.rank)
    orders = [p ** w for w in w_all if w > 0]
    inv = AbelianInvariants(tuple(orders))
    if not with_generators:
        return inv
    gens = []
    # generator i of the cokernel is column i of Uinv2 in y-coordinates
    for i, w in enumerate(w_all):
        if w == 0:
            continue
        y = ls2.Uinv[:, i] % mod
        emb_vec = np.array([(int(y[k]) * p ** ls.vals[k]) % mod for k in range(r)], dtype=np.int64)
        full = np.zeros(n, dtype=np.int64)
        full[:r] = emb_vec
        amb = (ls.Uinv @ full) % mod
        gens.append(np.array([int(amb[k]) // p ** (K - e) for k, e in enumerate(exps)], dtype=np.int64)
                    % np.array([p ** e for e in exps], dtype=np.int64))
    # keep order aligned with descending invariant orders
    pairs = sorted(zip(orders, gens), key=lambda t: -t[0])
    return Quotient(inv, [g for _, g in pairs])


# ---------------------------------------------------------------------------
# integer Smith normal form


@dataclass
class SmithForm:
    invariants: list[int]  # nonzero diagonal entries d_1 | d_2 | ...
    U: list[list[int]]
    V: list[list[int]]
    Uinv: list[list[int]]
    D: list[list[int]]


def _ident(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A) -> SmithForm:
    """Integer Smith normal form U A V = D with unimodular U, V (exact ints)."""
    M = [[int(x) for x in row] for row in (A.tolist() if isinstance(A, np.ndarray) else A)]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    U, Uinv, V = _ident(rows), _ident(rows), _ident(cols)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        if not f:
            return
        M[dst] = [a + f * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]
        for r in Uinv:
            r[src] -= f * r[dst]

    def add_col(dst, src, f):  # col_dst += f * col_src
        if not f:
            return
        for r in M:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    def neg_row(i):
        M[i] = [-a for a in M[i]]
        U[i] = [-a for a in U[i]]
        for r in Uinv:
            r[i] = -r[i]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            row = M[i]
            for j in range(t, cols):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = M[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // piv))
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // piv))
                    if M[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, rows):
                    if M[i][t] and (best is None or abs(M[i][t]) < best[0]):
                        best = (abs(M[i][t]), i, "r")
                for j in range(t, cols):
                    if M[t][j] and (best is None or abs(M[t][j]) < best[0]):
                        best = (abs(M[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # divisibility of the remaining block
            piv = M[t][t]
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if M[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            neg_row(t)
        t += 1
    inv = [M[i][i] for i in range(min(rows, cols)) if M[i][i]]
    return SmithForm(inv, U, V, Uinv, M)


def integer_solve(A, b) -> tuple[list[int] | None, list[list[int]]]:
    """Exact integer solution of A x = b plus a basis of the integer kernel."""
    A = [[int(x) for x in row] for row in (A.tolist() if isinstance(A, np.ndarray) else A)]
    b = [int(x) for x in (b.tolist() if isinstance(b, np.ndarray) else b)]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if len(b) != rows:
        raise DimensionError("right hand side length mismatch")
    sf = smith_normal_form(A)
    c = [sum(u * x for u, x in zip(urow, b)) for urow in sf.U]
    r = len(sf.invariants)
    y = [0] * cols
    for i in range(r):
        d = sf.invariants[i]
        if c[i] % d:
            return None, _int_kernel(sf, cols, r)
        y[i] = c[i] // d
    if any(c[r:]):
        return None, _int_kernel(sf, cols, r)
    x = [sum(sf.V[i][k] * y[k] for k in range(cols)) for i in range(cols)]
    return x, _int_kernel(sf, cols, r)


def _int_kernel(sf, cols, r):
    return [[sf.V[i][k] for i in range(cols)] for k in range(r, cols)]
