"""Quillen categories A_p(G) of elementary abelian p-subgroups.

Objects are conjugacy class representatives E (with a fixed F_p-basis), and
Hom(E, F) is the set of maps x -> g x g^{-1} landing in F, as F_p-matrices.
Every such map factors as (conjugation onto a subgroup S <= F) o Aut_G(E),
so per object F we store, for every subspace S <= F, its class and the
matrix M_S of the transporter map.  Then |Hom(E, F)| = #{S : S ~ E} |Aut(E)|
and hom sets are produced on demand as {M_S a}.
"""

from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .groups import (DEFAULT_BOUND, ElabData, FiniteGroup, Subgroup, SubgroupClasses, _elab_element_sets,
                     fp_inverse, fp_left_inverse, fp_rank, fp_subspaces, greedy_basis,
                     matrix_group_closure)

log = logging.getLogger(__name__)


def _key(row) -> bytes:
    return np.asarray(row, dtype=np.int32).tobytes()


def _mkey(M) -> bytes:
    return np.ascontiguousarray(M, dtype=np.int8).tobytes()


@dataclass
class ObjectData:
    index: int
    elements: np.ndarray
    basis: np.ndarray
    elab: ElabData
    aut: np.ndarray  # (n, k, k)
    aut_keys: set
    flats: list = field(default_factory=list)  # per dim: (N, p^d) sorted flat indices of subspaces
    cls: list = field(default_factory=list)  # per dim: (N,) class of each subspace
    mats: list = field(default_factory=list)  # per dim: (N, k, d) transporter matrices
    lookup: dict = field(default_factory=dict)  # subspace key -> (d, idx)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return int(self.elements.size)

    @property
    def aut_order(self) -> int:
        return int(self.aut.shape[0])

    def subspace_class(self, flat_row):
        d, i = self.lookup[_key(np.sort(flat_row))]
        return int(self.cls[d][i]), self.mats[d][i]


class QuillenCategory:
    def __init__(self, G: FiniteGroup, include_trivial: bool = True, bound: int = DEFAULT_BOUND):
        self.G = G
        self.p = G.p
        self.include_trivial = include_trivial
        sets = _elab_element_sets(G, include_trivial, bound)
        sc = SubgroupClasses(G, sets)
        self._sc = sc
        self.objects: list[ObjectData] = []
        for c, rep in enumerate(sc.reps):
            elements = sc.sets[rep]
            basis = np.array(greedy_basis(G, elements), dtype=np.int64)
            A = ElabData(G, basis)
            aut = self._aut(A, sc.schreier_generators(c))
            self.objects.append(ObjectData(c, elements, basis, A, aut, {_mkey(a) for a in aut}))
        for F in self.objects:
            self._fill_entries(F)
        self._homcount = None
        log.info("Quillen category of %s: %d objects", G, len(self.objects))

    # -- construction -----------------------------------------------------
    def _aut(self, A: ElabData, normalizer_gens) -> np.ndarray:
        k, p, G = A.rank, self.p, self.G
        if k == 0:
            return np.zeros((1, 0, 0), dtype=np.int64)
        s = np.asarray(normalizer_gens, dtype=np.int64)
        imgs = G.conj(s[:, None], A.basis[None, :])  # (n, k)
        mats = np.transpose(A.coords_of(imgs), (0, 2, 1))  # columns = images of basis vectors
        uniq = {_mkey(m): m for m in mats}
        group = matrix_group_closure(list(uniq.values()), p)
        return np.array(group, dtype=np.int64).reshape(-1, k, k)

    def _fill_entries(self, F: ObjectData):
        sc, G, p = self._sc, self.G, self.p
        k = F.rank
        for d, (W, flat) in enumerate(fp_subspaces(p, k)):
            if d == 0 and not self.include_trivial:
                F.flats.append(np.zeros((0, 1), dtype=np.int64))
                F.cls.append(np.zeros(0, dtype=np.int64))
                F.mats.append(np.zeros((0, k, 0), dtype=np.int64))
                continue
            ids = np.sort(F.elab.ids_of_flat(flat), axis=1)
            idx = np.array([sc.index[_key(r)] for r in ids], dtype=np.int64)
            cls = sc.cls[idx]
            t = sc.transporter[idx]
            if d:
                B = np.stack([self.objects[c].basis for c in cls.tolist()])  # (N, d)
                imgs = G.conj(t[:, None], B)
                M = np.transpose(F.elab.coords_of(imgs), (0, 2, 1))
            else:
                M = np.zeros((len(cls), k, 0), dtype=np.int64)
            F.flats.append(flat)
            F.cls.append(cls)
            F.mats.append(M)
            for i, row in enumerate(flat):
                F.lookup[_key(row)] = (d, i)

    # -- queries ------------------------------------------------------------
    def __len__(self):
        return len(self.objects)

    @property
    def ranks(self) -> list[int]:
        return [o.rank for o in self.objects]

    def homcounts(self) -> dict:
        """(E, F) -> |Hom(E, F)| for nonempty hom sets."""
        if self._homcount is None:
            hc = {}
            for F in self.objects:
                for cls in F.cls:
                    for c, n in Counter(cls.tolist()).items():
                        hc[(c, F.index)] = n * self.objects[c].aut_order
            self._homcount = hc
        return self._homcount

    def homcount(self, E: int, F: int) -> int:
        return self.homcounts().get((E, F), 0)

    def hom(self, E: int, F: int) -> list[np.ndarray]:
        """All morphisms E -> F as (rank F x rank E) matrices over F_p."""
        Fo, Eo = self.objects[F], self.objects[E]
        d = Eo.rank
        out = []
        if d >= len(Fo.cls):
            return out
        for i in np.flatnonzero(Fo.cls[d] == E).tolist():
            M = Fo.mats[d][i]
            out.extend((M @ a) % self.p for a in Eo.aut)
        return out

    def hom_images(self, E: int, F: int) -> list[list[int]]:
        """Morphisms as images (element ids of F) of the basis of E."""
        Fo = self.objects[F]
        w = Fo.elab.weights
        return [Fo.elab.ids_of_flat(M.T @ w).tolist() for M in self.hom(E, F)]

    def aut(self, E: int) -> np.ndarray:
        return self.objects[E].aut

    def identity(self, E: int) -> np.ndarray:
        return np.eye(self.objects[E].rank, dtype=np.int64)

    def compose(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        """g o f."""
        return (np.asarray(g) @ np.asarray(f)) % self.p

    def is_morphism(self, E: int, F: int, M) -> bool:
        Fo, Eo = self.objects[F], self.objects[E]
        M = np.asarray(M, dtype=np.int64) % self.p
        if M.shape != (Fo.rank, Eo.rank) or fp_rank(M, self.p) != Eo.rank:
            return False
        w = Fo.elab.weights
        vecs = _all_vectors(self.p, Eo.rank) @ M.T % self.p
        key = _key(np.sort(vecs @ w))
        if key not in Fo.lookup:
            return False
        c, MS = Fo.subspace_class(np.sort(vecs @ w))
        if c != E:
            return False
        a = (fp_left_inverse(MS, self.p) @ M) % self.p
        return _mkey(a) in Eo.aut_keys

    def object_of(self, S: Subgroup) -> int:
        return int(self._sc.class_of_key(S.key)[0])

    def maximal_objects(self) -> list[int]:
        hc = self.homcounts()
        inner = {E for (E, F) in hc if E != F}
        return [o.index for o in self.objects if o.index not in inner]

    def morphism_count(self) -> int:
        return sum(self.homcounts().values())

    def verify(self, limit: int = 20000) -> bool:
        """Exhaustive checks: injectivity, identities, closure under composition.

        Only for categories with at most `limit` morphisms; larger ones raise ValueError.
        """
        if self.morphism_count() > limit:
            raise ValueError("category too large for exhaustive verification")
        n = len(self.objects)
        homs = {(E, F): self.hom(E, F) for (E, F) in self.homcounts()}
        keys = {ef: {_mkey(M) for M in Ms} for ef, Ms in homs.items()}
        for (E, F), Ms in homs.items():
            if len(keys[(E, F)]) != len(Ms):
                return False
            if any(fp_rank(M, self.p) != self.objects[E].rank for M in Ms):
                return False
        for E in range(n):
            if _mkey(self.identity(E) % self.p) not in keys.get((E, E), set()):
                return False
        for (E, F), f_list in homs.items():
            for H in range(n):
                if (F, H) not in homs:
                    continue
                target = keys.get((E, H), set())
                for g in homs[(F, H)]:
                    for f in f_list:
                        if _mkey(self.compose(f, g)) not in target:
                            return False
        return True

    # -- export -------------------------------------------------------------
    def object_label(self, E: int) -> str:
        o = self.objects[E]
        return "1" if o.rank == 0 else "<" + ",".join(str(int(b)) for b in o.basis) + ">"

    def to_dict(self, with_morphisms: bool = True, composition_limit: int = 5000) -> dict:
        objs = [{"index": o.index, "rank": o.rank, "order": o.order,
                 "generators": [int(b) for b in o.basis], "aut_order": o.aut_order}
                for o in self.objects]
        homs = []
        for (E, F), n in sorted(self.homcounts().items()):
            entry = {"source": E, "target": F, "count": n}
            if with_morphisms:
                entry["images"] = self.hom_images(E, F)
            homs.append(entry)
        out = {"group": str(self.G), "order": self.G.order, "p": self.p,
               "include_trivial": self.include_trivial, "objects": objs, "homs": homs}
        if with_morphisms and self.morphism_count() <= composition_limit:
            out["composition"] = self._composition_table()
        return out

    def _composition_table(self):
        homs = {ef: self.hom(*ef) for ef in self.homcounts()}
        index = {ef: {_mkey(M): i for i, M in enumerate(Ms)} for ef, Ms in homs.items()}
        rows = []
        for (E, F), fs in sorted(homs.items()):
            for H in range(len(self.objects)):
                if (F, H) not in homs:
                    continue
                for j, g in enumerate(homs[(F, H)]):
                    for i, f in enumerate(fs):
                        k = index[(E, H)][_mkey(self.compose(f, g))]
                        rows.append([E, F, H, i, j, k])
        return rows

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), indent=1)

    def to_dot(self, show_auts: bool = False, labels=None, all_morphisms: bool = False) -> str:
        """One edge per morphism between objects whose ranks differ by one.

        Those are exactly the morphisms that do not factor through a third
        object; with all_morphisms every non-identity morphism is drawn.
        """
        lab = labels or {}
        lines = ["digraph quillen {", "  rankdir=BT;"]
        for o in self.objects:
            lines.append(f'  n{o.index} [label="{lab.get(o.index, self.object_label(o.index))}"];')
        for (E, F), n in sorted(self.homcounts().items()):
            if E == F:
                if show_auts:
                    lines.extend([f"  n{E} -> n{F};"] * (n - 1))
                continue
            if not all_morphisms and self.objects[F].rank != self.objects[E].rank + 1:
                continue
            lines.extend([f"  n{E} -> n{F};"] * n)
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"QuillenCategory({self.G}, objects={len(self.objects)})"


def _all_vectors(p: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    g = np.meshgrid(*[np.arange(p)] * k, indexing="ij")
    return np.stack([x.reshape(-1) for x in g], axis=1)


def build_category(G: FiniteGroup, include_trivial: bool = True, bound: int = DEFAULT_BOUND) -> QuillenCategory:
    return QuillenCategory(G, include_trivial=include_trivial, bound=bound)


def skeleton(cat: QuillenCategory) -> QuillenCategory:
    """Objects are already one per conjugacy class, i.e. one per isomorphism class."""
    return cat


# ---------------------------------------------------------------------------
# isomorphism of categories


@dataclass
class FunctorWitness:
    """Object bijection phi and linear isomorphisms psi[E]: E -> phi(E).

    The functor sends f: E -> F to psi[F] f psi[E]^{-1}; it is automatically
    compatible with composition and identities, and the search verified that
    it maps every hom set bijectively onto the corresponding one.
    """

    phi: list[int]
    psi: list[np.ndarray]
    p: int

    def __post_init__(self):
        self._inv = [fp_inverse(m, self.p) if m.size else m for m in self.psi]

    def map_morphism(self, E: int, F: int, f) -> np.ndarray:
        return (self.psi[F] @ np.asarray(f) @ self._inv[E]) % self.p

    def hom_bijection(self, a: QuillenCategory, b: QuillenCategory, E: int, F: int) -> list[int]:
        """Index in b.hom(phi E, phi F) of the image of each morphism of a.hom(E, F)."""
        target = {_mkey(M): i for i, M in enumerate(b.hom(self.phi[E], self.phi[F]))}
        return [target[_mkey(self.map_morphism(E, F, f))] for f in a.hom(E, F)]

    def check_exhaustive(self, a: QuillenCategory, b: QuillenCategory) -> bool:
        if sorted(self.phi) != list(range(len(b))):
            return False
        for (E, F), n in a.homcounts().items():
            if b.homcount(self.phi[E], self.phi[F]) != n:
                return False
            if sorted(self.hom_bijection(a, b, E, F)) != list(range(n)):
                return False
        return len(a.homcounts()) == len(b.homcounts())

    def to_dict(self) -> dict:
        return {"phi": list(map(int, self.phi)), "psi": [m.tolist() for m in self.psi]}


class NotDecided(RuntimeError):
    pass


def _mix(x):
    """splitmix64 finaliser on uint64 arrays."""
    x = x.astype(np.uint64)
    with np.errstate(over="ignore"):
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return x ^ (x >> np.uint64(31))


def refine_colours(cats, rounds: int = 50, with_rank: bool = False):
    """Colour refinement on hom-count profiles with a palette shared by all categories.

    A vertex signature is its colour plus the multisets of (colour, count)
    over outgoing and incoming hom sets, hashed as sums of mixed keys.  The
    same deterministic function is applied to every category, so the
    colours stay isomorphism invariants.
    """
    base = [np.array([(o.aut_order, o.rank if with_rank else 0) for o in c.objects], dtype=np.int64)
            for c in cats]
    _, flat = np.unique(np.concatenate(base), axis=0, return_inverse=True)
    sizes = [len(c) for c in cats]
    cols = np.split(flat.ravel(), np.cumsum(sizes)[:-1])
    edges = []
    for c in cats:
        hc = c.homcounts()
        E = np.fromiter((k[0] for k in hc), dtype=np.int64, count=len(hc))
        F = np.fromiter((k[1] for k in hc), dtype=np.int64, count=len(hc))
        n = np.fromiter(hc.values(), dtype=np.int64, count=len(hc))
        edges.append((E, F, n))
    n_col = int(flat.max()) + 1 if flat.size else 0
    for _ in range(rounds):
        sigs = []
        for (E, F, n), col, size in zip(edges, cols, sizes):
            out = np.zeros(size, dtype=np.uint64)
            inn = np.zeros(size, dtype=np.uint64)
            with np.errstate(over="ignore"):
                np.add.at(out, E, _mix(col[F] * 1000003 + n))
                np.add.at(inn, F, _mix(col[E] * 1000003 + n + 7919))
            sigs.append(np.stack([col.astype(np.uint64), out, inn], axis=1))
        _, flat = np.unique(np.concatenate(sigs), axis=0, return_inverse=True)
        flat = flat.ravel()
        new = np.split(flat, np.cumsum(sizes)[:-1])
        k = int(flat.max()) + 1 if flat.size else 0
        cols = new
        if k == n_col:
            break
        n_col = k
    return [c.tolist() for c in cols]


def isomorphism_invariants(cat: QuillenCategory) -> dict:
    return {"objects": len(cat), "morphisms": cat.morphism_count(),
            "aut_orders": sorted(Counter(o.aut_order for o in cat.objects).items()),
            "hom_profile": sorted(Counter(cat.homcounts().values()).items())}


class _Side:
    """Per-category lookup tables used by the search."""

    def __init__(self, cat: QuillenCategory, col):
        self.cat = cat
        self.col = np.array(col, dtype=np.int64)
        self.p = cat.p
        self._vec_col = {}
        self._linv = {}

    def vec_col(self, F: int) -> np.ndarray:
        """Colour of the class of <v> for every vector v of F (index = flat), -1 for v = 0."""
        if F not in self._vec_col:
            o = self.cat.objects[F]
            p, k = self.p, o.rank
            out = np.full(p ** k, -1, dtype=np.int64)
            if k:
                flat = o.flats[1]
                cl = self.col[o.cls[1]]
                for row, c in zip(flat, cl):
                    out[row[1:]] = c
            self._vec_col[F] = out
        return self._vec_col[F]

    def linv(self, F: int, d: int, i: int):
        key = (F, d, i)
        if key not in self._linv:
            self._linv[key] = fp_left_inverse(self.cat.objects[F].mats[d][i], self.p)
        return self._linv[key]


def _apply_flat(psi, vecs, weights, p):
    return ((vecs @ psi.T) % p) @ weights


def _krylov(a, v, p):
    cols = [v]
    for _ in range(len(v) - 1):
        cols.append((a @ cols[-1]) % p)
    return np.stack(cols, axis=1)


def _psi_candidates(A: _Side, B: _Side, P: int, Q: int, limit: int = 200000):
    """Linear isomorphisms P -> Q conjugating Aut(P) onto Aut(Q) and preserving line colours.

    Yields candidates modulo left multiplication by Aut(Q) (duplicates possible).
    """
    p = A.p
    oP, oQ = A.cat.objects[P], B.cat.objects[Q]
    k = oP.rank
    if k == 0:
        yield np.zeros((0, 0), dtype=np.int64)
        return
    vecs = _all_vectors(p, k)
    wP, wQ = oP.elab.weights, oQ.elab.weights
    colP, colQ = A.vec_col(P), B.vec_col(Q)
    # cyclic strategy: a in Aut(P) with a cyclic vector v
    for a in oP.aut:
        for v in vecs[1:]:
            K = _krylov(a, v, p)
            if fp_rank(K, p) == k:
                break
        else:
            continue
        Kinv = fp_inverse(K, p)
        reps = _conj_class_reps(oQ.aut, p)
        a_key = None
        for b in reps:
            for w in vecs[1:]:
                K2 = _krylov(b, w, p)
                psi = (K2 @ Kinv) % p
                if fp_rank(psi, p) != k:
                    continue
                if not np.array_equal((psi @ a) % p, (b @ psi) % p):
                    continue
                if np.array_equal(colQ[_apply_flat(psi, vecs, wQ, p)], colP):
                    yield psi
        return
    # fallback: backtracking on basis images with line-colour pruning
    yield from _psi_backtrack(A, B, P, Q, vecs)


def _conj_class_reps(aut, p):
    keys = {}
    inv = [fp_inverse(a, p) for a in aut]
    seen = set()
    reps = []
    for a in aut:
        ka = _mkey(a)
        if ka in seen:
            continue
        reps.append(a)
        for g, gi in zip(aut, inv):
            seen.add(_mkey((g @ a @ gi) % p))
    return reps


def _psi_backtrack(A: _Side, B: _Side, P: int, Q: int, vecs):
    p = A.p
    oP, oQ = A.cat.objects[P], B.cat.objects[Q]
    k = oP.rank
    wQ = oQ.elab.weights
    colP, colQ = A.vec_col(P), B.vec_col(Q)
    n = p ** k
    basis_flat = [p ** (k - 1 - i) for i in range(k)]
    # orbit representatives of Aut(Q) on vectors, for the first image
    orbit_min = np.arange(n)
    for b in oQ.aut:
        orbit_min = np.minimum(orbit_min, _apply_flat(b, vecs, wQ, p))
    first = [x for x in range(1, n) if orbit_min[x] == x]

    def rec(cols):
        i = len(cols)
        if i == k:
            psi = np.stack([vecs[c] for c in cols], axis=1)
            if fp_rank(psi, p) == k and np.array_equal(colQ[_apply_flat(psi, vecs, wQ, p)], colP):
                yield psi
            return
        pool = first if i == 0 else range(1, n)
        want = colP[basis_flat[i]]
        sub = vecs[:p ** (i + 1)]  # coordinates of span(e_0..e_i) (last i+1 coordinates)
        for c in pool:
            if colQ[c] != want:
                continue
            trial = cols + [c]
            M = np.stack([vecs[x] for x in trial], axis=1)  # (k, i+1)
            if fp_rank(M, p) != i + 1:
                continue
            # colours of all lines in the partial span must match
            src = sub[:, k - (i + 1):] if k else sub
            src_flat = np.zeros(len(sub), dtype=np.int64)
            for t in range(i + 1):
                src_flat += src[:, t] * basis_flat[t]
            img = ((src @ M.T) % p) @ wQ
            if np.array_equal(colQ[img], colP[src_flat]):
                yield from rec(trial)

    yield from rec([])


class _Search:
    """Backtracking over maximal objects; subobjects inherit phi and psi from a parent.

    For a maximal P with image Q and psi_P, each subspace S <= P of class E
    must map to a subspace of Q whose class has the same colour; the first
    such S fixes phi(E) and psi_E = L'_{S'} psi_P M_S, later ones must agree up
    to Aut(phi E).  Together with psi_E Aut(E) psi_E^{-1} = Aut(phi E) for all E
    this makes f -> psi_F f psi_E^{-1} an isomorphism of categories.
    """

    def __init__(self, a: QuillenCategory, b: QuillenCategory, cols_a, cols_b):
        self.a, self.b = a, b
        self.A, self.B = _Side(a, cols_a), _Side(b, cols_b)
        self.p = a.p
        self.n = len(a)
        self.nodes = 0

    def run(self):
        maxA = sorted(self.a.maximal_objects(), key=lambda P: (-self.a.objects[P].rank, P))
        maxB = sorted(self.b.maximal_objects())
        return self._rec(maxA, 0, maxB, {}, {}, {})

    def _aut_ok(self, E, psiE, E2) -> bool:
        oE = self.a.objects[E]
        if oE.rank == 0:
            return True
        pi = fp_inverse(psiE, self.p)
        keys = self.b.objects[E2].aut_keys
        return all(_mkey((psiE @ x @ pi) % self.p) in keys for x in oE.aut)

    def _assign_from(self, P, psiP, phi, inv, psi) -> bool:
        a, b, p = self.a, self.b, self.p
        oP = a.objects[P]
        Q = phi[P]
        oQ = b.objects[Q]
        for d in range(len(oP.cls)):
            flat = oP.flats[d]
            if flat.shape[0] == 0:
                continue
            coords = (flat[..., None] // oP.elab.weights) % p
            img = np.sort(((coords @ psiP.T) % p) @ oQ.elab.weights, axis=1)
            X_all = np.einsum("ij,njd->nid", psiP, oP.mats[d]) % p
            for i in range(flat.shape[0]):
                E = int(oP.cls[d][i])
                dq, iq = oQ.lookup[_key(img[i])]
                E2 = int(oQ.cls[dq][iq])
                if self.A.col[E] != self.B.col[E2]:
                    return False
                Y = (self.B.linv(Q, dq, iq) @ X_all[i]) % p
                if E not in phi:
                    if E2 in inv or a.objects[E].rank != b.objects[E2].rank:
                        return False
                    if not self._aut_ok(E, Y, E2):
                        return False
                    phi[E], inv[E2], psi[E] = E2, E, Y
                elif phi[E] != E2:
                    return False
                elif d:
                    Z = (Y @ fp_inverse(psi[E], p)) % p
                    if _mkey(Z) not in b.objects[E2].aut_keys:
                        return False
        return True

    def _rec(self, maxA, t, maxB, phi, inv, psi):
        if t == len(maxA):
            if len(phi) == self.n == len(self.b) and len(inv) == self.n:
                return phi, psi
            return None
        P = maxA[t]
        oP = self.a.objects[P]
        for Q in maxB:
            if self.A.col[P] != self.B.col[Q] or oP.rank != self.b.objects[Q].rank:
                continue
            if Q in inv:
                continue
            for psiP in _psi_candidates(self.A, self.B, P, Q):
                self.nodes += 1
                if not self._aut_ok(P, psiP, Q):
                    continue
                phi2, inv2, psi2 = dict(phi), dict(inv), dict(psi)
                phi2[P], inv2[Q], psi2[P] = Q, P, psiP
                if not self._assign_from(P, psiP, phi2, inv2, psi2):
                    continue
                res = self._rec(maxA, t + 1, maxB, phi2, inv2, psi2)
                if res is not None:
                    return res
        return None


@dataclass
class IsomorphismResult:
    isomorphic: bool
    witness: FunctorWitness | None
    reason: str
    invariants: tuple

    def __bool__(self):
        return self.isomorphic


def categories_isomorphic(a: QuillenCategory, b: QuillenCategory) -> IsomorphismResult:
    """Decide isomorphism of two skeletal Quillen categories.

    Non-isomorphism is certified by categorical invariants (colour refinement
    on Aut orders and hom-set sizes); isomorphism by an explicit witness.
    """
    inv = (isomorphism_invariants(a), isomorphism_invariants(b))
    if a.p != b.p:
        return IsomorphismResult(False, None, "different primes", inv)
    if inv[0] != inv[1]:
        return IsomorphismResult(False, None, "basic invariants differ", inv)
    ca, cb = refine_colours([a, b])
    if Counter(ca) != Counter(cb):
        return IsomorphismResult(False, None, "refined colour histograms differ", inv)
    ra, rb = refine_colours([a, b], with_rank=True)
    if Counter(ra) != Counter(rb):
        raise NotDecided("colours agree but ranks cannot be matched; no concrete witness possible")
    res = _Search(a, b, ra, rb).run()
    if res is None:
        raise NotDecided("invariants agree but the concrete search found no witness")
    phi, psi = res
    w = FunctorWitness([phi[E] for E in range(len(a))], [psi[E] for E in range(len(a))], a.p)
    return IsomorphismResult(True, w, "explicit witness", inv)
