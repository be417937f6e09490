"""Independent brute-force references, written without the package's search code."""

from __future__ import annotations

import itertools


def table(G):
    return [list(map(int, row)) for row in G.table()]


def inverses(T):
    n = len(T)
    e = next(i for i in range(n) if all(T[i][j] == j for j in range(n)))
    return e, [next(j for j in range(n) if T[i][j] == e) for i in range(n)]


def orders(T):
    e, _ = inverses(T)
    out = []
    for x in range(len(T)):
        k, y = 1, x
        while y != e:
            y = T[y][x]
            k += 1
        out.append(k)
    return out


def elementary_abelians(G, include_trivial=False):
    """Every elementary abelian subgroup as a frozenset, grown one generator at a time."""
    T = table(G)
    e, _ = inverses(T)
    p = G.p
    o = orders(T)
    ops = [x for x in range(len(T)) if o[x] == p]
    found = {frozenset([e])}
    level = {frozenset([e])}
    while level:
        nxt = set()
        for S in level:
            for x in ops:
                if x in S or any(T[x][s] != T[s][x] for s in S):
                    continue
                pw, new = [e], set(S)
                for _ in range(p - 1):
                    pw.append(T[pw[-1]][x])
                for s in S:
                    for q in pw:
                        new.add(T[s][q])
                new = frozenset(new)
                if new not in found:
                    found.add(new)
                    nxt.add(new)
        level = nxt
    if not include_trivial:
        found.discard(frozenset([e]))
    return found


def conjugacy_classes(G, family):
    T = table(G)
    _, inv = inverses(T)
    left = set(family)
    out = []
    while left:
        S = min(left, key=lambda s: (len(s), sorted(s)))
        orb = {frozenset(T[T[g][s]][inv[g]] for s in S) for g in range(len(T))}
        out.append(orb)
        left -= orb
    return out


def conj_hom_count(G, E, F):
    """Distinct maps E -> F of the form x -> g x g^-1."""
    T = table(G)
    _, inv = inverses(T)
    Es = sorted(E)
    maps = set()
    for g in range(len(T)):
        img = tuple(T[T[g][x]][inv[g]] for x in Es)
        if set(img) <= set(F):
            maps.add(img)
    return len(maps)


def is_group_table(T):
    n = len(T)
    if any(sorted(row) != list(range(n)) for row in T):
        return False
    return all(T[T[a][b]][c] == T[a][T[b][c]] for a, b, c in itertools.product(range(n), repeat=3))


def _module_elements(orders_):
    return list(itertools.product(*[range(o) for o in orders_]))


def full_cochain(G, n, values, rank):
    """Dict on all n-tuples from a list of values on non-identity tuples (lexicographic)."""
    e = G.identity
    nonid = [g for g in range(G.order) if g != e]
    out = {}
    it = iter(values)
    for t in itertools.product(nonid, repeat=n):
        out[t] = tuple(next(it))
    zero = (0,) * rank
    for t in itertools.product(range(G.order), repeat=n):
        if e in t:
            out[t] = zero
    return out


def coboundary_dict(G, M, f, n):
    """Standard inhomogeneous coboundary of a dict cochain of degree n."""
    T = table(G)
    mods = M.orders.tolist()
    acts = [[list(map(int, row)) for row in a] for a in M.action]
    d = M.rank
    out = {}
    for t in itertools.product(range(G.order), repeat=n + 1):
        A, v = acts[t[0]], f[t[1:]]
        acc = [sum(A[i][k] * v[k] for k in range(d)) for i in range(d)]
        for i in range(n):
            u = t[:i] + (T[t[i]][t[i + 1]],) + t[i + 2:]
            sign = (-1) ** (i + 1)
            acc = [a + sign * b for a, b in zip(acc, f[u])]
        sign = (-1) ** (n + 1)
        acc = [a + sign * b for a, b in zip(acc, f[t[:n]])]
        out[t] = tuple(a % m for a, m in zip(acc, mods))
    return out


def cohomology_order(G, M, n):
    """|H^n(G, M)| for a finite module by listing all normalized cochains."""
    elems = _module_elements(M.orders.tolist())
    q = G.order - 1
    zero = (0,) * M.rank

    def cochains(k):
        if k == 0:
            for v in elems:
                yield {(): v}
            return
        for vals in itertools.product(elems, repeat=q ** k):
            yield full_cochain(G, k, vals, M.rank)

    Z = sum(1 for f in cochains(n) if all(v == zero for v in coboundary_dict(G, M, f, n).values()))
    if n == 0:
        return Z
    B = {tuple(sorted(coboundary_dict(G, M, f, n - 1).items())) for f in cochains(n - 1)}
    return Z // len(B)
