"""Enumerable finite p-groups and their elementary abelian subgroups.

A group is anything that can multiply arrays of element ids (0 is the
identity).  All algorithms below are written against that vectorized
interface, so table-backed small groups and law-backed groups of order
3^10 share one code path.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

DEFAULT_BOUND = 3 ** 10


def _prime_base(n: int) -> int | None:
    if n == 1:
        return None
    for q in range(2, n + 1):
        if n % q == 0:
            while n % q == 0:
                n //= q
            return q if n == 1 else -1
    return None


class FiniteGroup:
    """Base class; subclasses implement mul and inv on integer arrays."""

    identity = 0

    def __init__(self, order: int, p: int | None = None, name: str = ""):
        self.order = int(order)
        q = _prime_base(self.order)
        if p is None:
            if q == -1:
                raise ValueError("group order is not a prime power")
            p = q if q else 2
        elif q not in (None, p):
            raise ValueError(f"order {order} is not a power of {p}")
        self.p = p
        self.name = name

    # -- to be provided -------------------------------------------------
    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    # -- scalar conveniences -----------------------------------------------
    def m(self, *xs) -> int:
        out = np.int64(self.identity)
        for x in xs:
            out = self.mul(np.array([out]), np.array([x]))[0]
        return int(out)

    def i(self, x) -> int:
        return int(self.inv(np.array([x]))[0])

    def conj(self, g, x):
        """g x g^{-1}, vectorized in both arguments."""
        g = np.asarray(g, dtype=np.int64)
        x = np.asarray(x, dtype=np.int64)
        g, x = np.broadcast_arrays(g, x)
        return self.mul(self.mul(g, x), self.inv(g))

    def power(self, x, k: int):
        x = np.asarray(x, dtype=np.int64)
        if k < 0:
            x = self.inv(x)
            k = -k
        out = np.zeros_like(x)
        base = x.copy()
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    @cached_property
    def all_ids(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @cached_property
    def inverses(self) -> np.ndarray:
        return self.inv(self.all_ids)

    def left_perm(self, g) -> np.ndarray:
        return self.mul(np.full(self.order, g, dtype=np.int64), self.all_ids)

    def conj_perm(self, g) -> np.ndarray:
        return self.conj(np.full(self.order, g, dtype=np.int64), self.all_ids)

    @cached_property
    def element_orders(self) -> np.ndarray:
        y = self.all_ids.copy()
        out = np.ones(self.order, dtype=np.int64)
        e = 1
        while np.any(y != self.identity):
            y = self.power(y, self.p)
            e *= self.p
            out[(y == self.identity) & (out == 1) & (self.all_ids != self.identity)] = e
        return out

    @cached_property
    def order_p_elements(self) -> np.ndarray:
        return np.flatnonzero(self.element_orders == self.p)

    def table(self) -> np.ndarray:
        if "_table" not in self.__dict__:
            ids = self.all_ids
            self._table = self.mul(np.repeat(ids, self.order), np.tile(ids, self.order)).reshape(
                self.order, self.order)
        return self._table

    def check_associativity(self, exhaustive_limit: int = 243, samples: int = 10 ** 5, seed: int = 0):
        """None if associative on the tested triples, else a failing triple."""
        n = self.order
        if n <= exhaustive_limit:
            ids = self.all_ids
            for a in range(n):
                A = np.full(n * n, a, dtype=np.int64)
                B = np.repeat(ids, n)
                C = np.tile(ids, n)
                lhs = self.mul(self.mul(A, B), C)
                rhs = self.mul(A, self.mul(B, C))
                bad = np.flatnonzero(lhs != rhs)
                if bad.size:
                    k = bad[0]
                    return (a, int(B[k]), int(C[k]))
            return None
        rng = np.random.default_rng(seed)
        A, B, C = (rng.integers(0, n, samples) for _ in range(3))
        lhs = self.mul(self.mul(A, B), C)
        rhs = self.mul(A, self.mul(B, C))
        bad = np.flatnonzero(lhs != rhs)
        return None if not bad.size else (int(A[bad[0]]), int(B[bad[0]]), int(C[bad[0]]))

    def is_central(self, x: int) -> bool:
        ids = self.all_ids
        return bool(np.array_equal(self.mul(np.full(ids.size, x), ids), self.mul(ids, np.full(ids.size, x))))

    def is_abelian(self) -> bool:
        g = self.generators
        for a, b in itertools.combinations(g, 2):
            if self.m(a, b) != self.m(b, a):
                return False
        return True

    # -- generators --------------------------------------------------------
    def generator_candidates(self):
        return list(range(1, self.order))

    @cached_property
    def generators(self) -> list[int]:
        """A small generating set, greedily selected and then pruned."""
        gens: list[int] = []
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        size = 1
        for c in self.generator_candidates():
            if size == self.order:
                break
            if mask[c]:
                continue
            gens.append(int(c))
            mask = _closure_mask(self, gens)
            size = int(mask.sum())
        for g in list(gens):
            rest = [h for h in gens if h != g]
            if rest and _closure_mask(self, rest).sum() == self.order:
                gens = rest
        return gens

    def __repr__(self):
        return self.name or f"{type(self).__name__}(order={self.order})"


class TableGroup(FiniteGroup):
    """Group given by a dense multiplication table with identity 0."""

    def __init__(self, table, p: int | None = None, name: str = "", check: bool = True):
        T = np.asarray(table, dtype=np.int64)
        n = T.shape[0]
        if T.shape != (n, n):
            raise ValueError("table must be square")
        super().__init__(n, p, name)
        if check:
            if not np.array_equal(T[0], np.arange(n)) or not np.array_equal(T[:, 0], np.arange(n)):
                raise ValueError("element 0 must be the identity")
            if any(sorted(row) != list(range(n)) for row in T.tolist()):
                raise ValueError("table rows are not permutations")
        self._table = T
        inv = np.argmax(T == 0, axis=1)
        self._inv = inv.astype(np.int64)
        if check:
            bad = self.check_associativity()
            if bad is not None:
                raise ValueError(f"table is not associative at {bad}")

    def mul(self, a, b):
        return self._table[np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)]

    def inv(self, a):
        return self._inv[np.asarray(a, dtype=np.int64)]

    def table(self):
        return self._table


def cyclic_group(n: int, p: int | None = None) -> TableGroup:
    a = np.arange(n)
    return TableGroup((a[:, None] + a[None, :]) % n, p=p, name=f"C{n}", check=False)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> TableGroup:
    """Table of G x H with id(g, h) = g * |H| + h."""
    TG, TH = G.table(), H.table()
    nG, nH = G.order, H.order
    g = np.repeat(np.arange(nG), nH)
    h = np.tile(np.arange(nH), nG)
    T = TG[g[:, None], g[None, :]] * nH + TH[h[:, None], h[None, :]]
    return TableGroup(T, p=G.p, name=f"{G}x{H}", check=False)


def generalized_quaternion(n: int) -> TableGroup:
    """Q_{2^n} = <a, b | a^{2^{n-1}}, b^2 = a^{2^{n-2}}, b a b^{-1} = a^{-1}>.

    Element a^i b^e has id e * 2^{n-1} + i.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    h = 2 ** (n - 1)
    z = h // 2
    N = 2 * h
    T = np.zeros((N, N), dtype=np.int64)
    for x in range(N):
        e1, i1 = divmod(x, h)
        for y in range(N):
            e2, i2 = divmod(y, h)
            if e1 == 0:
                T[x, y] = e2 * h + (i1 + i2) % h
            elif e2 == 0:  # a^i b a^j = a^{i-j} b
                T[x, y] = h + (i1 - i2) % h
            else:  # a^i b a^j b = a^{i-j} b^2 = a^{i-j+z}
                T[x, y] = (i1 - i2 + z) % h
    return TableGroup(T, p=2, name=f"Q{N}", check=N <= 64)


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True, eq=False)
class Subgroup:
    group: FiniteGroup
    elements: np.ndarray  # sorted ids

    def __post_init__(self):
        e = np.unique(np.asarray(self.elements, dtype=np.int64))
        object.__setattr__(self, "elements", e)
        e.setflags(write=False)

    @property
    def order(self) -> int:
        return int(self.elements.size)

    @cached_property
    def key(self) -> bytes:
        return self.elements.astype(np.int32).tobytes()

    def __contains__(self, x) -> bool:
        k = np.searchsorted(self.elements, x)
        return bool(k < self.elements.size and self.elements[k] == x)

    def contains_all(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        k = np.clip(np.searchsorted(self.elements, xs), 0, self.elements.size - 1)
        return self.elements[k] == xs

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.group is self.group and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return self.order

    @property
    def rank(self) -> int:
        """log_p of the order (the rank when elementary abelian)."""
        r, n = 0, self.order
        while n > 1:
            n //= self.group.p
            r += 1
        return r

    def is_closed(self) -> bool:
        G = self.group
        e = self.elements
        if e.size == 0 or e[0] != G.identity:
            return False
        prods = G.mul(np.repeat(e, e.size), np.tile(e, e.size))
        return bool(self.contains_all(prods).all() and self.contains_all(G.inv(e)).all())

    def __repr__(self):
        s = ",".join(map(str, self.elements[:8].tolist()))
        return f"Subgroup(order={self.order}, [{s}{',...' if self.order > 8 else ''}])"


def _check_ids(G, xs):
    xs = np.asarray(list(xs) if not isinstance(xs, np.ndarray) else xs, dtype=np.int64)
    if xs.size and (xs.min() < 0 or xs.max() >= G.order):
        raise ValueError("element id out of range")
    return xs


def _closure_mask(G: FiniteGroup, gens) -> np.ndarray:
    gens = [int(g) for g in gens]
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    while frontier.size and gens:
        new = np.unique(np.concatenate([G.mul(frontier, np.full(frontier.size, g)) for g in gens]))
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return mask


def _closure(G: FiniteGroup, gens, start=None) -> np.ndarray:
    """Sorted ids of the subgroup generated by gens (and the subgroup `start`)."""
    if G.order <= 4 * 10 ** 6 and start is None:
        return np.flatnonzero(_closure_mask(G, gens))
    elems = np.array([G.identity] if start is None else start, dtype=np.int64)
    seen = set(elems.tolist())
    frontier = elems
    while frontier.size:
        new = np.unique(np.concatenate([G.mul(frontier, np.full(frontier.size, g)) for g in gens]))
        new = np.array([x for x in new.tolist() if x not in seen], dtype=np.int64)
        seen.update(new.tolist())
        frontier = new
    return np.array(sorted(seen), dtype=np.int64)


def subgroup_generate(G: FiniteGroup, gens) -> Subgroup:
    gens = _check_ids(G, gens)
    return Subgroup(G, _closure(G, gens.tolist()))


def _commutes_with(G, xs, ys):
    """Boolean array over xs: x commutes with every y in ys."""
    xs = np.asarray(xs, dtype=np.int64)
    ok = np.ones(xs.size, dtype=bool)
    for y in np.asarray(ys, dtype=np.int64).tolist():
        Y = np.full(xs.size, y, dtype=np.int64)
        ok &= G.mul(xs, Y) == G.mul(Y, xs)
    return ok


def _subgroup_gens(S: Subgroup) -> list[int]:
    """A generating set of S (greedy)."""
    G = S.group
    gens: list[int] = []
    have = np.array([G.identity])
    for x in S.elements.tolist():
        if x == G.identity or np.isin(x, have):
            continue
        gens.append(x)
        have = _closure(G, gens)
        if have.size == S.order:
            break
    return gens


def centralizer(G: FiniteGroup, S) -> Subgroup:
    elems = S.elements if isinstance(S, Subgroup) else _check_ids(G, S)
    gens = _subgroup_gens(S) if isinstance(S, Subgroup) else elems
    return Subgroup(G, np.flatnonzero(_commutes_with(G, G.all_ids, gens)))


def normalizer(G: FiniteGroup, S: Subgroup) -> Subgroup:
    gens = _subgroup_gens(S)
    ok = np.ones(G.order, dtype=bool)
    for s in gens:
        ok &= S.contains_all(G.conj(G.all_ids, np.full(G.order, s)))
    return Subgroup(G, np.flatnonzero(ok))


def element_order(G: FiniteGroup, x: int) -> int:
    (x,) = _check_ids(G, [x])
    return int(G.element_orders[x])


def is_elementary_abelian(S: Subgroup) -> bool:
    G = S.group
    e = S.elements
    if not np.all(G.power(e, G.p) == G.identity):
        return False
    gens = _subgroup_gens(S)
    return bool(_commutes_with(G, np.array(gens, dtype=np.int64), gens).all())


# ---------------------------------------------------------------------------
# linear algebra over F_p used for elementary abelian groups


def fp_subspaces(p: int, k: int):
    """All subspaces of F_p^k grouped by dimension.

    Returns a list indexed by d of (W, flat) where W has shape (N, d, k) and
    holds reduced row echelon bases, and flat (N, p^d) holds the sorted
    base-p indices of all vectors of each subspace.
    """
    key = (p, k)
    if key in _SUBSPACE_CACHE:
        return _SUBSPACE_CACHE[key]
    weights = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    out = []
    for d in range(k + 1):
        blocks = []
        for piv in itertools.combinations(range(k), d):
            free = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, k) if c not in piv]
            vals = np.array(list(itertools.product(range(p), repeat=len(free))), dtype=np.int64)
            vals = vals.reshape(p ** len(free), len(free))
            W = np.zeros((vals.shape[0], d, k), dtype=np.int64)
            for i, pc in enumerate(piv):
                W[:, i, pc] = 1
            for t, (i, c) in enumerate(free):
                W[:, i, c] = vals[:, t]
            blocks.append(W)
        W = np.concatenate(blocks, axis=0) if blocks else np.zeros((1, 0, k), dtype=np.int64)
        coeffs = np.array(list(itertools.product(range(p), repeat=d)), dtype=np.int64).reshape(p ** d, d)
        vecs = np.einsum("cd,ndk->nck", coeffs, W) % p
        flat = np.sort(vecs @ weights, axis=1)
        out.append((W, flat))
    _SUBSPACE_CACHE[key] = out
    return out


_SUBSPACE_CACHE: dict = {}


def _fp_rref(rows, p: int, ncols: int):
    """Row reduce a list of int lists over F_p on the first ncols columns, in place.

    Returns the pivot columns.  Matrices here are tiny, so plain lists beat numpy.
    """
    pivots = []
    r = 0
    n = len(rows)
    for c in range(ncols):
        piv = next((i for i in range(r, n) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = pow(rows[r][c], -1, p)
        rows[r] = [(x * s) % p for x in rows[r]]
        R = rows[r]
        for i in range(n):
            f = rows[i][c] % p
            if i != r and f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], R)]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return pivots


def fp_rank(M, p: int) -> int:
    A = (np.asarray(M, dtype=np.int64) % p).tolist()
    if not A or not A[0]:
        return 0
    return len(_fp_rref(A, p, len(A[0])))


def fp_inverse(M, p: int) -> np.ndarray:
    A = (np.asarray(M, dtype=np.int64) % p).tolist()
    n = len(A)
    aug = [row + [int(i == k) for k in range(n)] for i, row in enumerate(A)]
    if len(_fp_rref(aug, p, n)) < n:
        raise ValueError("matrix is singular mod p")
    return np.array([row[n:] for row in aug], dtype=np.int64).reshape(n, n)


def fp_left_inverse(M, p: int) -> np.ndarray:
    """L with L M = I for M (k x d) of full column rank d."""
    M = np.asarray(M, dtype=np.int64) % p
    k, d = M.shape
    if d == 0:
        return np.zeros((0, k), dtype=np.int64)
    # reduce [M | I]; the row operations taking M to [I; 0] give L in the first d rows
    aug = [row + [int(i == c) for c in range(k)] for i, row in enumerate(M.tolist())]
    if len(_fp_rref(aug, p, d)) < d:
        raise ValueError("matrix does not have full column rank")
    return np.array([row[d:] for row in aug[:d]], dtype=np.int64)


def matrix_group_closure(gens, p: int, limit: int = 10 ** 6) -> list[np.ndarray]:
    """All elements of the matrix group over F_p generated by gens (square, same size)."""
    gens = [np.array(g, dtype=np.int64) % p for g in gens]
    if not gens:
        return []
    n = gens[0].shape[0]
    eye = np.eye(n, dtype=np.int64)
    seen = {eye.tobytes(): eye}
    queue = deque([eye])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = (g @ a) % p
            k = b.tobytes()
            if k not in seen:
                seen[k] = b
                queue.append(b)
                if len(seen) > limit:
                    raise ValueError("matrix group larger than limit")
    return list(seen.values())


class ElabData:
    """An elementary abelian subgroup with a basis and coordinate lookups."""

    def __init__(self, G: FiniteGroup, basis):
        self.G = G
        self.p = G.p
        self.basis = np.array(basis, dtype=np.int64)
        self.rank = len(self.basis)
        k = self.rank
        # table[c] = prod_i b_i^{c_i}, c read in base p with b_0 most significant
        table = np.array([G.identity], dtype=np.int64)
        for b in self.basis.tolist():
            cur = [G.identity]
            for _ in range(self.p - 1):
                cur.append(G.m(cur[-1], b))
            pw = np.array(cur, dtype=np.int64)
            table = G.mul(np.repeat(table, self.p), np.tile(pw, table.size))
        self.table = table
        order = np.argsort(table)
        self.sorted_ids = table[order]
        self.sorted_flat = order.astype(np.int64)
        if np.unique(table).size != table.size:
            raise ValueError("basis elements are not independent")
        self.weights = self.p ** np.arange(k - 1, -1, -1, dtype=np.int64)

    def flat_of(self, ids) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64)
        pos = np.searchsorted(self.sorted_ids, ids)
        pos = np.clip(pos, 0, self.sorted_ids.size - 1)
        if not np.all(self.sorted_ids[pos] == ids):
            raise ValueError("element not in this elementary abelian group")
        return self.sorted_flat[pos]

    def coords_of(self, ids) -> np.ndarray:
        flat = self.flat_of(ids)
        return (flat[..., None] // self.weights) % self.p

    def ids_of_flat(self, flat) -> np.ndarray:
        return self.table[np.asarray(flat, dtype=np.int64)]

    @property
    def elements(self):
        return self.sorted_ids


def greedy_basis(G: FiniteGroup, elements) -> list[int]:
    """b_1 = least non-identity element, b_{i+1} = least element outside <b_1..b_i>."""
    elements = np.asarray(elements, dtype=np.int64)
    span = np.array([G.identity], dtype=np.int64)
    basis = []
    for x in elements.tolist():
        if x == G.identity:
            continue
        k = np.searchsorted(span, x)
        if k < span.size and span[k] == x:
            continue
        basis.append(x)
        pw = [G.identity]
        for _ in range(G.p - 1):
            pw.append(G.m(pw[-1], x))
        span = np.unique(G.mul(np.repeat(span, G.p), np.tile(np.array(pw), span.size)))
        if span.size == elements.size:
            break
    return basis


# ---------------------------------------------------------------------------
# elementary abelian enumeration


class BoundExceeded(ValueError):
    pass


def _line_min(G, xs):
    """Least non-identity element of <x> for each x of order p."""
    best = xs.copy()
    y = xs.copy()
    for _ in range(G.p - 2):
        y = G.mul(y, xs)
        best = np.minimum(best, y)
    return best


def _components(n, edges_src, edges_dst):
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    A = coo_matrix((np.ones(len(edges_src), dtype=np.int8), (edges_src, edges_dst)), shape=(n, n))
    return connected_components(A, directed=True, connection="weak")[1]


def _try_abelian_span(G, E, basis, cand):
    """If <E, cand> is elementary abelian return (elements, basis); else None.

    cand already commutes with E.  Elements are added one at a time; each new
    basis element must commute with the previous additions.
    """
    S = E
    basis = list(basis)
    extra: list[int] = []
    rest = cand
    while True:
        rest = rest[~np.isin(rest, S, assume_unique=False)]
        if rest.size == 0:
            return S, basis
        y = int(rest[0])
        if extra and not _commutes_with(G, np.array([y]), extra)[0]:
            return None
        extra.append(y)
        basis.append(y)
        pw = [G.identity]
        for _ in range(G.p - 1):
            pw.append(G.m(pw[-1], y))
        S = np.unique(G.mul(np.repeat(S, G.p), np.tile(np.array(pw, dtype=np.int64), S.size)))


def _extend(G, E, y):
    pw = _cyclic(G, y)
    return np.unique(G.mul(np.repeat(E, pw.size), np.tile(pw, E.size)))


def _pivot(G, cand, rounds=8, tries=4):
    """A candidate commuting with as many others as possible, and its mask.

    Candidates commuting with a few random others are likely central in
    <cand>; those are tried first, then a plain sample.
    """
    rng = np.random.default_rng(cand.size)
    pool = cand
    for w in rng.choice(cand, size=min(rounds, cand.size), replace=False).tolist():
        pool = pool[_commutes_with(G, pool, [w])]
        if pool.size == 0:
            break
    probes = pool[:tries].tolist() + rng.choice(cand, size=min(tries, cand.size), replace=False).tolist()
    best = None
    for u in probes:
        comm = _commutes_with(G, cand, [u])
        if best is None or comm.sum() > best[1].sum():
            best = (int(u), comm)
            if comm.all():
                break
    return best


def _coset_reps(G, E, ys):
    """One y per subgroup <E, y>, picked as the least element of its coset union."""
    if ys.size == 0:
        return ys
    Ps = [ys]
    for _ in range(G.p - 2):
        Ps.append(G.mul(Ps[-1], ys))
    mins = np.full(ys.size, np.iinfo(np.int64).max)
    for P in Ps:
        prod = G.mul(np.repeat(P, E.size), np.tile(E, P.size)).reshape(ys.size, E.size)
        mins = np.minimum(mins, prod.min(axis=1))
    return np.unique(mins)


def maximal_elementary_abelians(G: FiniteGroup, reps_only: bool = False):
    """Maximal elementary abelian subgroups as (elements, basis) pairs.

    Search: below each representative line (up to conjugacy), grow E by a
    pivot-and-branch step until the candidates commuting with E span an
    elementary abelian group together with E; then the maximal subgroup is
    forced.  With reps_only the result contains at least one subgroup from
    each conjugacy class; otherwise it is closed under conjugation.
    """
    ops = G.order_p_elements
    if ops.size == 0:
        return []
    found: dict[bytes, tuple] = {}
    root = _try_abelian_span(G, np.array([G.identity]), [], ops)
    if root is not None:
        return [(root[0], root[1])]
    lines = np.unique(_line_min(G, ops))
    # representative lines up to conjugacy
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[lines] = np.arange(lines.size)
    src, dst = [], []
    for g in G.generators:
        img = _line_min(G, G.conj(np.full(lines.size, g), lines))
        src.append(np.arange(lines.size))
        dst.append(pos[img])
    comp = _components(lines.size, np.concatenate(src), np.concatenate(dst))
    _, first = np.unique(comp, return_index=True)
    rep_lines = lines[np.sort(first)]
    visited: set[bytes] = set()
    for x in rep_lines.tolist():
        E = _cyclic(G, x)
        cand = ops[_commutes_with(G, ops, [x])]
        stack = [(E, [x], cand[~np.isin(cand, E)])]
        while stack:
            E, basis, cand = stack.pop()
            key = E.astype(np.int32).tobytes()
            if key in visited:
                continue
            visited.add(key)
            span = _try_abelian_span(G, E, basis, cand)
            if span is not None:
                found.setdefault(span[0].astype(np.int32).tobytes(), span)
                continue
            # Pivot: a maximal A >= E either contains u or some candidate not
            # commuting with u (else <A, u> would be larger).
            u, comm = _pivot(G, cand)
            branch = [u] + _coset_reps(G, E, cand[~comm]).tolist()
            for y in branch:
                E2 = _extend(G, E, y)
                c2 = cand[_commutes_with(G, cand, [y])]
                stack.append((E2, basis + [y], c2[~np.isin(c2, E2)]))
    maxes = list(found.values())
    if reps_only:
        return maxes
    # close under conjugation
    out: dict[bytes, tuple] = {}
    queue = deque(maxes)
    for S, b in maxes:
        out[S.astype(np.int32).tobytes()] = (S, b)
    perms = [G.conj_perm(g) for g in G.generators]
    while queue:
        S, b = queue.popleft()
        for c in perms:
            T = np.sort(c[S])
            k = T.astype(np.int32).tobytes()
            if k not in out:
                out[k] = (T, [int(c[x]) for x in b])
                queue.append(out[k])
    return list(out.values())


def _cyclic(G, x):
    cur = [G.identity]
    for _ in range(G.p - 1):
        cur.append(G.m(cur[-1], x))
    return np.array(sorted(cur), dtype=np.int64)


def enumerate_elementary_abelians(G: FiniteGroup, include_trivial: bool = False,
                                  bound: int = DEFAULT_BOUND) -> list[Subgroup]:
    """All elementary abelian subgroups, each exactly once, sorted by (order, elements)."""
    return [Subgroup(G, s) for s in _elab_element_sets(G, include_trivial, bound)]


def _elab_element_sets(G, include_trivial=False, bound=DEFAULT_BOUND):
    if G.order > bound:
        raise BoundExceeded(f"|G| = {G.order} exceeds the enumeration bound {bound}")
    seen: dict[bytes, np.ndarray] = {}
    for S, basis in maximal_elementary_abelians(G):
        A = ElabData(G, basis)
        for d, (W, flat) in enumerate(fp_subspaces(G.p, A.rank)):
            if d == 0 and not include_trivial:
                continue
            ids = np.sort(A.ids_of_flat(flat), axis=1)
            for row in ids:
                k = row.astype(np.int32).tobytes()
                if k not in seen:
                    seen[k] = row
    if include_trivial and not seen:
        seen[np.array([G.identity], dtype=np.int32).tobytes()] = np.array([G.identity])
    return sorted(seen.values(), key=lambda r: (r.size, r.tolist()))


def elementary_abelians_naive(G: FiniteGroup, include_trivial: bool = False) -> list[Subgroup]:
    """Reference enumeration for small groups: close subsets one element at a time."""
    T = G.table()
    ops = [int(x) for x in range(G.order) if G.element_orders[x] == G.p]

    def close(gens):
        S = {0}
        frontier = [0]
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    b = int(T[a, g])
                    if b not in S:
                        S.add(b)
                        new.append(b)
            frontier = new
        return frozenset(S)

    def elab(S):
        return all(T[a, b] == T[b, a] for a in S for b in S) and all(
            int(G.element_orders[a]) in (1, G.p) for a in S)

    level = {frozenset([0])}
    allsets = set(level)
    while level:
        nxt = set()
        for S in level:
            for x in ops:
                if x in S:
                    continue
                S2 = close(list(S) + [x])
                if S2 not in allsets and elab(S2):
                    nxt.add(S2)
        allsets |= nxt
        level = nxt
    if not include_trivial:
        allsets.discard(frozenset([0]))
    return [Subgroup(G, sorted(S)) for S in sorted(allsets, key=lambda s: (len(s), sorted(s)))]


# ---------------------------------------------------------------------------
# conjugacy classes of subgroups


class SubgroupClasses:
    """Orbits of a conjugation-stable family of subgroups under the generators.

    For every subgroup X: cls[X] is its class, transporter[X] an element t
    with X = t R t^{-1} for the class representative R (lexicographically
    least element list).
    """

    def __init__(self, G: FiniteGroup, element_sets):
        self.G = G
        self.sets = [np.asarray(s, dtype=np.int64) for s in element_sets]
        n = len(self.sets)
        self.index = {s.astype(np.int32).tobytes(): i for i, s in enumerate(self.sets)}
        gens = G.generators
        self.gens = gens
        perms = [G.conj_perm(g) for g in gens]
        img = np.zeros((len(gens), n), dtype=np.int64)
        by_size: dict[int, list[int]] = {}
        for i, s in enumerate(self.sets):
            by_size.setdefault(s.size, []).append(i)
        for gi, c in enumerate(perms):
            for size, idx in by_size.items():
                arr = np.stack([self.sets[i] for i in idx])
                imgs = np.sort(c[arr], axis=1).astype(np.int32)
                for i, row in zip(idx, imgs):
                    j = self.index.get(row.tobytes())
                    if j is None:
                        raise ValueError("family of subgroups is not closed under conjugation")
                    img[gi, i] = j
        self.img = img
        comp = _components(n, np.tile(np.arange(n), len(gens)), img.reshape(-1))
        # representatives: lexicographically least element list
        members: dict[int, list[int]] = {}
        for i, c in enumerate(comp.tolist()):
            members.setdefault(c, []).append(i)
        order = sorted(members.values(),
                       key=lambda ms: min((self.sets[i].size, self.sets[i].tolist()) for i in ms))
        self.classes = []
        self.reps = []
        self.cls = np.zeros(n, dtype=np.int64)
        for ci, ms in enumerate(order):
            rep = min(ms, key=lambda i: self.sets[i].tolist())
            self.reps.append(rep)
            self.classes.append(sorted(ms, key=lambda i: self.sets[i].tolist()))
            self.cls[ms] = ci
        # transporters by BFS from the representatives
        pre = [dict() for _ in gens]
        for gi in range(len(gens)):
            pre_arr = np.empty(n, dtype=np.int64)
            pre_arr[img[gi]] = np.arange(n)
            pre[gi] = pre_arr
        lefts = [G.left_perm(g) for g in gens]
        ginv = [G.i(g) for g in gens]
        lefts_inv = [G.left_perm(g) for g in ginv]
        t = np.full(n, -1, dtype=np.int64)
        for rep in self.reps:
            t[rep] = G.identity
            queue = deque([rep])
            while queue:
                x = queue.popleft()
                tx = t[x]
                for gi in range(len(gens)):
                    y = img[gi, x]
                    if t[y] < 0:
                        t[y] = lefts[gi][tx]
                        queue.append(y)
                    z = pre[gi][x]
                    if t[z] < 0:
                        t[z] = lefts_inv[gi][tx]
                        queue.append(z)
        self.transporter = t

    def class_of_key(self, key: bytes):
        i = self.index[key]
        return int(self.cls[i]), int(self.transporter[i])

    def schreier_generators(self, c: int) -> np.ndarray:
        """Elements normalizing the representative of class c, generating its normalizer."""
        G = self.G
        ms = np.array(self.classes[c], dtype=np.int64)
        out = []
        for gi, g in enumerate(self.gens):
            y = self.img[gi, ms]
            tx = self.transporter[ms]
            ty = self.transporter[y]
            s = G.mul(G.mul(G.inv(ty), np.full(ms.size, g)), tx)
            out.append(s)
        return np.unique(np.concatenate(out))


def conjugacy_classes_of_subgroups(G: FiniteGroup, subgroups) -> list[list[Subgroup]]:
    sc = SubgroupClasses(G, [S.elements for S in subgroups])
    return [[Subgroup(G, sc.sets[i]) for i in ms] for ms in sc.classes]


def conjugacy_classes_naive(G: FiniteGroup, subgroups) -> list[list[Subgroup]]:
    """Reference: conjugate by every element of G."""
    T = G.table()
    inv = G.inverses
    keyset = {S.key: S for S in subgroups}
    done = set()
    out = []
    for S in sorted(subgroups, key=lambda s: (s.order, s.elements.tolist())):
        if S.key in done:
            continue
        orbit = {}
        for g in range(G.order):
            img = np.sort(T[T[g, S.elements], inv[g]])
            k = img.astype(np.int32).tobytes()
            orbit[k] = keyset[k]
        done.update(orbit)
        out.append(sorted(orbit.values(), key=lambda s: s.elements.tolist()))
    return out
