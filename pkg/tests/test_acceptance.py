"""The ten acceptance criteria, each under its own time limit.

Every test records a verdict line (printed in the terminal summary).  A
criterion only counts as passed if all of its checks hold and it finished
inside the limit.
"""

import functools
import itertools
import time

import numpy as np
import pytest

from conftest import record
from oracles import conjugacy_classes, elementary_abelians
from zoo import small_groups, splitting_instances

from cochainseq.cochains import Cochain, cocycle_basis, cohomology, free_cohomology, is_coboundary
from cochainseq.families import (MainLineSpec, SkeletonSpec, count_orbits_T_mod_T3, mainline_group,
                                 orbit_representatives_v, skeleton_group)
from cochainseq.groups import (centralizer, conjugacy_classes_of_subgroups, enumerate_elementary_abelians,
                               generalized_quaternion, maximal_elementary_abelians)
from cochainseq.quillen import build_category, categories_isomorphic
from cochainseq.sequences import CochainSeq, SeqContext, seq_through, split_decompose_seq, split_lift

INSTANCES = splitting_instances()


class Criterion:
    """Context manager: times the block, records the verdict, fails on overtime."""

    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.note = ""

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        ok = exc_type is None and dt < self.limit
        note = self.note or (f"{exc_type.__name__}: {exc}" if exc_type else "")
        record(self.number, self.title, ok, dt, self.limit, note)
        if exc_type is None:
            assert dt < self.limit, f"criterion {self.number} took {dt:.1f}s (limit {self.limit}s)"
        return False


def test_01_splitting_order_identity():
    with Criterion(1, "splitting order identity", 30):
        for _, G, M, N in INSTANCES:
            ctx = SeqContext(G, M, N)
            m = ctx.m
            right = free_cohomology(G, M, 1).invariants.order * free_cohomology(G, N.lattice, 2).invariants.order
            for r in (2 * m, 2 * m + 1, 2 * m + 2):
                left = cohomology(G, ctx.module(r), 1).order
                assert left == right, (G, r, left, right)


def test_02_round_trip():
    with Criterion(2, "split_lift / split_decompose round trip", 60):
        for _, G, M, N in INSTANCES:
            ctx = SeqContext(G, M, N)
            m = ctx.m
            hM, hN = free_cohomology(G, M, 1), free_cohomology(G, N.lattice, 2)
            pairs = [(a, b) for a in hM.classes() for b in hN.classes()]
            assert len(pairs) == hM.invariants.order * hN.invariants.order
            for a, b in pairs:
                s = split_lift(ctx, hM.from_coords(a), hN.from_coords(b), 2 * m)
                for r in (2 * m, 2 * m + 1):
                    assert split_decompose_seq(s, r) == (a, b)


def _rand_seq(ctx, n, r0, w, rng):
    k = (ctx.G.order - 1) ** n
    return CochainSeq(ctx, Cochain(ctx.G, ctx.M, n, rng.integers(-5, 6, (k, ctx.M.rank))),
                      Cochain(ctx.G, ctx.N.lattice, n, rng.integers(-5, 6, (k, ctx.M.rank))), r0, w)


def test_03_sequence_lemmas():
    with Criterion(3, "cochain-sequence lemma suite", 60):
        rng = np.random.default_rng(2024)
        for _, G, M, N in INSTANCES:
            ctx = SeqContext(G, M, N)
            m, p = ctx.m, ctx.p
            r0 = 3 * m + 2
            # zero test against pointwise evaluation at five values of r
            for w in (0, 1, 2):
                s = _rand_seq(ctx, 1, r0, w, rng)
                for t in (s, CochainSeq(ctx, ctx.zero_rho(1), s.sigma * p ** w, r0, w),
                          CochainSeq(ctx, -(ctx.split(r0).embed_N(s.sigma)) * p ** (r0 - w), s.sigma, r0, w)):
                    assert t.is_zero() == all(t.eval(r).is_zero() for r in range(r0, r0 + 5))
            # level drop: p^k sigma at level omega is the same sequence at level omega - k
            s = _rand_seq(ctx, 1, r0, 3, rng)
            for k in (1, 2, 3):
                t = CochainSeq(ctx, s.rho, s.sigma * p ** k, r0, 3)
                u = t.normalized()
                assert u.omega == t.level() <= 3 - k
                assert all(u.eval(r) == t.eval(r) for r in range(r0, r0 + 3))
            # one-r versus two-r coboundary test, preimage level <= omega + m
            hM, hN = free_cohomology(G, M, 1), free_cohomology(G, N.lattice, 2)
            seqs = [_rand_seq(ctx, 0, r0, w, rng).delta() for w in (0, 1, 2)]
            seqs += [split_lift(ctx, hM.from_coords(a), hN.from_coords(b), r0) + seqs[0]
                     for a in hM.classes() for b in hN.classes()]
            for d in seqs:
                one = is_coboundary(d.eval(r0)) is not None
                beta = d.is_coboundary_seq()
                assert one == (beta is not None)
                if beta is not None:
                    assert beta.delta().equals(d) and beta.omega <= d.level() + m
            # exact hit through 20 random cocycles
            r1 = 2 * m + 1
            Z = cocycle_basis(G, ctx.module(r1), 1)
            for _ in range(20):
                z = Cochain.zero(G, ctx.module(r1), 1)
                for b in Z:
                    z = z + b * int(rng.integers(0, 100))
                s = seq_through(ctx, z, 2 * m, r1)
                assert s.eval(r1) == z and s.level() <= m


def test_04_orbit_count():
    with Criterion(4, "d = 11 orbits on T/T_3", 1):
        for j in (7, 8, 9):
            assert count_orbits_T_mod_T3(j) == 11


def test_05_figure():
    with Criterion(5, "figure for the main line at s = 4", 10):
        G = mainline_group(MainLineSpec(3, 4))
        cat = build_category(G)
        ranks = [o.rank for o in cat.objects]
        assert len(cat) == 10
        assert (ranks.count(0), ranks.count(1), ranks.count(2)) == (1, 5, 4)
        assert all(o.aut_order == 3 for o in cat.objects if o.rank == 2)
        tau_type = [o for o in cat.objects if o.rank == 1 and np.any(G.projection(o.elements) != 0)]
        assert tau_type
        for E in tau_type:
            partners = [F for F in cat.objects if F.rank == 2 and cat.homcount(E.index, F.index)]
            assert len(partners) == 1 and cat.homcount(E.index, partners[0].index) == 3


@functools.lru_cache(maxsize=None)
def _mainline_cats():
    return {s: build_category(mainline_group(MainLineSpec(3, s))) for s in (2, 4, 5, 6)}


def test_06_mainline_equivalence():
    c = Criterion(6, "main-line skeletons: s = 4, 5, 6 equivalent; s = 2 not equivalent to s = 4", 60)
    with c:
        mainline_cats = _mainline_cats()
        for s, t in itertools.combinations((4, 5, 6), 2):
            res = categories_isomorphic(mainline_cats[s], mainline_cats[t])
            assert res and res.witness.check_exhaustive(mainline_cats[s], mainline_cats[t])
        res = categories_isomorphic(mainline_cats[2], mainline_cats[4])
        contrast = not res
        if not contrast:
            assert res.witness.check_exhaustive(mainline_cats[2], mainline_cats[4])
            c.note = "s = 4, 5, 6 pass; s = 2 fails: an exhaustively checked isomorphism to s = 4 exists"
    # the equivalences hold; the contrast half is reported as failed (and xfailed below)
    if not contrast:
        from conftest import ACCEPTANCE
        title, _, sec, limit, note = ACCEPTANCE[6]
        record(6, title, False, sec, limit, note)


@pytest.mark.xfail(strict=True, reason="the s = 2 skeleton is isomorphic to the s = 4 skeleton "
                                       "(explicit witness); see the decisions ledger")
def test_06b_extraspecial_contrast():
    cats = _mainline_cats()
    assert not categories_isomorphic(cats[2], cats[4])


def _class_census(R, maxes):
    classes = conjugacy_classes_of_subgroups(R, maxes)
    out: dict[int, int] = {}
    for c in classes:
        out[c[0].rank] = out.get(c[0].rank, 0) + 1
    return out


def test_07_skeleton_group():
    with Criterion(7, "skeleton group R(7, 1, 7)", 300):
        from cochainseq.groups import Subgroup
        R = skeleton_group(SkeletonSpec(7, (1,), 7))
        m = R.spec.m
        assert R.order == 3 ** 9
        x = R.all_ids
        o3 = x[(R.mul(R.mul(x, x), x) == R.identity) & (x != R.identity)]
        assert o3.size == 2 * 3 ** m + 3 ** 6 - 1
        assert np.count_nonzero(o3 % 9 == 3) == np.count_nonzero(o3 % 9 == 6) == 3 ** m
        assert np.array_equal(np.sort(o3[o3 % 9 == 0]), R.t_layer(m - 6)[1:])
        tpart, want = R.t_layer(0), R.t_layer(m - 3)
        for v in orbit_representatives_v(7):
            C = centralizer(R, [R.element(v, 3)]).elements
            assert np.array_equal(np.intersect1d(C, tpart), want)
        maxes = [Subgroup(R, S) for S, _ in maximal_elementary_abelians(R)]
        assert _class_census(R, maxes) == {4: 11, 6: 1}


def test_08_skeleton_grid():
    with Criterion(8, "skeleton categories over the (j, c, m) grid", 1200):
        specs = [SkeletonSpec(7, c, m) for c in ((1,), (0, 1)) for m in (7, 8)] + [SkeletonSpec(8, (1,), 8)]
        cats = [build_category(skeleton_group(sp)) for sp in specs]
        for a, b in itertools.combinations(range(len(cats)), 2):
            res = categories_isomorphic(cats[a], cats[b])
            assert res and res.witness is not None, (specs[a], specs[b], res.reason)


def test_09_quaternion():
    with Criterion(9, "generalized quaternion groups", 5):
        cats = []
        for n in (3, 4, 5):
            Q = generalized_quaternion(n)
            inv = np.flatnonzero(Q.element_orders == 2)
            assert inv.size == 1 and Q.is_central(int(inv[0]))
            cats.append(build_category(Q))
        for a, b in itertools.combinations(cats, 2):
            res = categories_isomorphic(a, b)
            assert res and res.witness.check_exhaustive(a, b)


def test_10_oracles():
    with Criterion(10, "elementary abelians and conjugacy against naive oracles", 60):
        for name, G in small_groups().items():
            assert G.order <= 81
            want = elementary_abelians(G)
            got = enumerate_elementary_abelians(G)
            assert len(got) == len(want) and {frozenset(S.elements.tolist()) for S in got} == want, name
            cls = {frozenset(C) for C in conjugacy_classes(G, want)}
            mine = {frozenset(frozenset(S.elements.tolist()) for S in c)
                    for c in conjugacy_classes_of_subgroups(G, got)}
            assert mine == cls, name
